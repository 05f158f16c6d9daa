#include "spdelab/levy_symbol.hpp"

#include "spdelab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace spdelab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_term(double kappa, double alpha) {
    if (!(kappa > 0.0) || !std::isfinite(kappa))
        throw ConfigError("symbol scale kappa must be finite and > 0, got " + std::to_string(kappa));
    if (!(alpha > 0.0 && alpha <= 2.0))
        throw ConfigError("stable index alpha must lie in (0, 2], got " + std::to_string(alpha));
}

// Log-log slope of Re Psi between two points; used only for custom symbols
// without declared exponents.
std::optional<double> estimate_power(const LevySymbol& sym, double a, double b, double c) {
    const double fa = sym.re_psi(a);
    const double fb = sym.re_psi(b);
    const double fc = sym.re_psi(c);
    if (!(fa > 0.0 && fb > 0.0 && fc > 0.0)) return std::nullopt;
    const double s1 = std::log(fb / fa) / std::log(b / a);
    const double s2 = std::log(fc / fb) / std::log(c / b);
    if (std::abs(s1 - s2) > 0.02) return std::nullopt;
    return 0.5 * (s1 + s2);
}

}  // namespace

LevySymbol LevySymbol::brownian(double kappa) {
    check_term(kappa, 2.0);
    return LevySymbol(BrownianScaled{kappa});
}

LevySymbol LevySymbol::stable(double kappa, double alpha) {
    check_term(kappa, alpha);
    return LevySymbol(StableSym{kappa, alpha});
}

LevySymbol LevySymbol::sum_stable(std::vector<StableTerm> terms) {
    if (terms.empty() || terms.size() > 4)
        throw ConfigError("sum of stable terms needs 1 to 4 terms, got " + std::to_string(terms.size()));
    for (const auto& t : terms) check_term(t.kappa, t.alpha);
    return LevySymbol(SumStable{std::move(terms)});
}

LevySymbol LevySymbol::custom(CustomSymbol custom) {
    if (!custom.re_psi) throw ConfigError("custom symbol needs an evaluator");
    if (custom.small_exponent && !(*custom.small_exponent > 0.0))
        throw ConfigError("declared small-xi exponent must be > 0");
    if (custom.large_exponent && !(*custom.large_exponent > 0.0))
        throw ConfigError("declared large-xi exponent must be > 0");
    return LevySymbol(std::move(custom));
}

double LevySymbol::re_psi(double xi) const {
    const double a = std::abs(xi);
    return std::visit(
        overloaded{
            [a](const BrownianScaled& b) { return b.kappa * a * a; },
            [a](const StableSym& s) {
                if (a == 0.0) return 0.0;
                return s.alpha == 2.0 ? s.kappa * a * a : s.kappa * std::pow(a, s.alpha);
            },
            [a](const SumStable& s) {
                if (a == 0.0) return 0.0;
                double acc = 0.0;
                for (const auto& t : s.terms) acc += t.kappa * std::pow(a, t.alpha);
                return acc;
            },
            [xi](const CustomSymbol& c) {
                const double v = c.re_psi(xi);
                if (std::isnan(v) || v < 0.0) {
                    std::ostringstream os;
                    os << "custom symbol '" << c.name << "' returned " << v << " at xi=" << xi;
                    throw DomainError(os.str());
                }
                return v;
            },
        },
        v_);
}

bool LevySymbol::is_closed_form() const noexcept {
    return !std::holds_alternative<CustomSymbol>(v_);
}

std::optional<StableTerm> LevySymbol::as_single_power() const noexcept {
    if (const auto* b = std::get_if<BrownianScaled>(&v_)) return StableTerm{b->kappa, 2.0};
    if (const auto* s = std::get_if<StableSym>(&v_)) return StableTerm{s->kappa, s->alpha};
    if (const auto* s = std::get_if<SumStable>(&v_)) {
        if (s->terms.size() == 1) return s->terms.front();
        // Equal exponents collapse into one power.
        const double a0 = s->terms.front().alpha;
        double kappa = 0.0;
        for (const auto& t : s->terms) {
            if (t.alpha != a0) return std::nullopt;
            kappa += t.kappa;
        }
        return StableTerm{kappa, a0};
    }
    return std::nullopt;
}

std::optional<double> LevySymbol::small_exponent() const {
    return std::visit(
        overloaded{
            [](const BrownianScaled&) -> std::optional<double> { return 2.0; },
            [](const StableSym& s) -> std::optional<double> { return s.alpha; },
            [](const SumStable& s) -> std::optional<double> {
                double m = s.terms.front().alpha;
                for (const auto& t : s.terms) m = std::min(m, t.alpha);
                return m;
            },
            [this](const CustomSymbol& c) -> std::optional<double> {
                if (c.small_exponent) return c.small_exponent;
                return estimate_power(*this, 1e-8, 1e-6, 1e-4);
            },
        },
        v_);
}

std::optional<double> LevySymbol::large_exponent() const {
    return std::visit(
        overloaded{
            [](const BrownianScaled&) -> std::optional<double> { return 2.0; },
            [](const StableSym& s) -> std::optional<double> { return s.alpha; },
            [](const SumStable& s) -> std::optional<double> {
                double m = s.terms.front().alpha;
                for (const auto& t : s.terms) m = std::max(m, t.alpha);
                return m;
            },
            [this](const CustomSymbol& c) -> std::optional<double> {
                if (c.large_exponent) return c.large_exponent;
                return estimate_power(*this, 1e4, 1e6, 1e8);
            },
        },
        v_);
}

StableTerm LevySymbol::tail_power(double at) const {
    return std::visit(
        overloaded{
            [](const BrownianScaled& b) { return StableTerm{b.kappa, 2.0}; },
            [](const StableSym& s) { return StableTerm{s.kappa, s.alpha}; },
            [](const SumStable& s) {
                StableTerm best = s.terms.front();
                for (const auto& t : s.terms) {
                    if (t.alpha > best.alpha) best = t;
                }
                double kappa = 0.0;
                for (const auto& t : s.terms) {
                    if (t.alpha == best.alpha) kappa += t.kappa;
                }
                return StableTerm{kappa, best.alpha};
            },
            [this, at](const CustomSymbol&) {
                const auto e = large_exponent();
                if (!e) throw DomainError("custom symbol has no determinable large-xi exponent");
                return StableTerm{re_psi(at) / std::pow(at, *e), *e};
            },
        },
        v_);
}

std::string LevySymbol::describe() const {
    std::ostringstream os;
    std::visit(overloaded{
                   [&](const BrownianScaled& b) { os << "brownian(kappa=" << b.kappa << ")"; },
                   [&](const StableSym& s) {
                       os << "stable(kappa=" << s.kappa << ", alpha=" << s.alpha << ")";
                   },
                   [&](const SumStable& s) {
                       os << "sum_stable(";
                       for (std::size_t i = 0; i < s.terms.size(); ++i) {
                           if (i) os << ", ";
                           os << "[" << s.terms[i].kappa << ", " << s.terms[i].alpha << "]";
                       }
                       os << ")";
                   },
                   [&](const CustomSymbol& c) { os << "custom(" << c.name << ")"; },
               },
               v_);
    return os.str();
}

const char* to_string(Recurrence r) noexcept {
    return r == Recurrence::Recurrent ? "recurrent" : "transient";
}

double re_psi(const LevySymbol& sym, double xi) { return sym.re_psi(xi); }

Recurrence classify_recurrence(const LevySymbol& sym) {
    const auto e = sym.small_exponent();
    if (!e)
        throw DomainError("recurrence indeterminate for " + sym.describe() +
                          ": no declared small-xi exponent and the numerical estimate did not settle");
    if (!sym.is_closed_form() && !std::get<CustomSymbol>(sym.variant()).small_exponent &&
        std::abs(*e - 1.0) < 0.05)
        throw DomainError("recurrence indeterminate for " + sym.describe() +
                          ": estimated small-xi exponent " + std::to_string(*e) + " is too close to 1");
    return *e >= 1.0 ? Recurrence::Recurrent : Recurrence::Transient;
}

bool has_local_times(const LevySymbol& sym) {
    const auto e = sym.large_exponent();
    if (!e)
        throw DomainError("local-time criterion indeterminate for " + sym.describe() +
                          ": no declared large-xi exponent and the numerical estimate did not settle");
    if (!sym.is_closed_form() && !std::get<CustomSymbol>(sym.variant()).large_exponent &&
        std::abs(*e - 1.0) < 0.05)
        throw DomainError("local-time criterion indeterminate for " + sym.describe() +
                          ": estimated large-xi exponent " + std::to_string(*e) + " is too close to 1");
    return *e > 1.0;
}

}  // namespace spdelab
