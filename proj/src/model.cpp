#include "spdelab/model.hpp"

#include "spdelab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace spdelab {

GeneralSigma GeneralSigma::clamp(double slope, double cap) {
    if (!(slope != 0.0) || !(cap > 0.0)) throw ConfigError("clamp sigma needs slope != 0 and cap > 0");
    GeneralSigma g;
    g.sigma0 = 0.0;
    g.lip = std::abs(slope);
    g.q_inf = 0.0;
    g.q_asymp = 0.0;
    g.bound_sup = cap;
    g.eval = [slope, cap](double u) { return std::clamp(slope * u, -cap, cap); };
    g.shape = "clamp";
    return g;
}

GeneralSigma GeneralSigma::sine_shift(double offset, double amplitude) {
    if (!(amplitude != 0.0)) throw ConfigError("sine_shift sigma needs amplitude != 0");
    GeneralSigma g;
    g.sigma0 = offset;
    g.lip = std::abs(amplitude);
    g.q_inf = 0.0;
    g.q_asymp = 0.0;
    g.bound_sup = std::abs(offset) + std::abs(amplitude);
    g.eval = [offset, amplitude](double u) { return offset + amplitude * std::sin(u); };
    g.shape = "sine_shift";
    return g;
}

double Sigma::operator()(double u) const {
    if (const auto* l = std::get_if<LinearSigma>(&v_)) return l->lambda * u;
    return std::get<GeneralSigma>(v_).eval(u);
}

double Sigma::lambda() const {
    if (const auto* l = std::get_if<LinearSigma>(&v_)) return l->lambda;
    throw DomainError("sigma is not linear");
}

double Sigma::sigma0() const noexcept {
    if (is_linear()) return 0.0;
    return std::get<GeneralSigma>(v_).sigma0;
}

double Sigma::lip() const noexcept {
    if (const auto* l = std::get_if<LinearSigma>(&v_)) return std::abs(l->lambda);
    return std::get<GeneralSigma>(v_).lip;
}

double Sigma::q_inf() const noexcept {
    if (const auto* l = std::get_if<LinearSigma>(&v_)) return std::abs(l->lambda);
    return std::get<GeneralSigma>(v_).q_inf;
}

double Sigma::q_asymp() const noexcept {
    if (const auto* l = std::get_if<LinearSigma>(&v_)) return std::abs(l->lambda);
    return std::get<GeneralSigma>(v_).q_asymp;
}

std::optional<double> Sigma::bound_sup() const noexcept {
    if (is_linear()) return std::nullopt;
    return std::get<GeneralSigma>(v_).bound_sup;
}

std::string Sigma::describe() const {
    std::ostringstream os;
    if (const auto* l = std::get_if<LinearSigma>(&v_)) {
        os << "linear(lambda=" << l->lambda << ")";
    } else {
        const auto& g = std::get<GeneralSigma>(v_);
        os << g.shape << "(sigma0=" << g.sigma0 << ", lip=" << g.lip << ", q_inf=" << g.q_inf
           << ", q_asymp=" << g.q_asymp << ")";
    }
    return os.str();
}

double InitialData::at(double x, double L) const {
    if (profile == "cosine") {
        const double mid = 0.5 * (lower + upper);
        const double amp = 0.5 * (upper - lower);
        return mid + amp * std::cos(2.0 * std::numbers::pi * x / L);
    }
    return lower;
}

void ModelSpec::validate() const {
    if (const auto* g = std::get_if<GeneralSigma>(&sigma.variant())) {
        if (!(g->lip > 0.0) || !std::isfinite(g->lip)) throw ConfigError("sigma.lip must be finite and > 0");
        if (g->q_inf < 0.0 || g->q_inf > g->lip) throw ConfigError("sigma.q_inf must lie in [0, lip]");
        if (g->q_asymp < 0.0 || g->q_asymp > g->lip) throw ConfigError("sigma.q_asymp must lie in [0, lip]");
        if (g->q_inf > g->q_asymp) throw ConfigError("sigma.q_inf cannot exceed sigma.q_asymp");
        if (g->bound_sup && *g->bound_sup < 0.0) throw ConfigError("sigma.bound_sup must be >= 0");
    } else if (!std::isfinite(sigma.lambda())) {
        throw ConfigError("sigma.lambda must be finite");
    }
    if (!(u0.lower >= 0.0)) throw ConfigError("u0 lower bound eta must be >= 0");
    if (u0.upper < u0.lower) throw ConfigError("u0 upper bound must be >= eta");
    if (u0.profile != "constant" && u0.profile != "cosine")
        throw ConfigError("u0.profile must be 'constant' or 'cosine', got '" + u0.profile + "'");
}

}  // namespace spdelab
