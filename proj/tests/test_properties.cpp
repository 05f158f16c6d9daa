// Randomised invariants over many parameter draws.

#include "spdelab/bounds.hpp"
#include "spdelab/hermite.hpp"
#include "spdelab/kernel.hpp"
#include "spdelab/renewal.hpp"
#include "spdelab/upsilon.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace spdelab;

namespace {

std::mt19937_64& rng() {
    static std::mt19937_64 g(20261016);
    return g;
}

double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng()); }

LevySymbol random_symbol() {
    if (uniform(0, 1) < 0.5) return LevySymbol::stable(uniform(0.2, 3.0), uniform(1.05, 2.0));
    const int n = 1 + static_cast<int>(uniform(0, 3.99));
    std::vector<StableTerm> terms;
    for (int i = 0; i < n; ++i) terms.push_back({uniform(0.2, 3.0), uniform(0.3, 2.0)});
    terms.push_back({uniform(0.2, 3.0), uniform(1.1, 2.0)});
    if (terms.size() > 4) terms.erase(terms.begin());
    return LevySymbol::sum_stable(terms);
}

}  // namespace

TEST_CASE("symbol symmetry and sign") {
    for (int i = 0; i < 200; ++i) {
        const auto s = random_symbol();
        const double xi = std::exp(uniform(-8, 8));
        CHECK(re_psi(s, xi) >= 0.0);
        CHECK(re_psi(s, -xi) == re_psi(s, xi));
    }
}

TEST_CASE("Upsilon is monotone and its inverse round trips") {
    for (int i = 0; i < 40; ++i) {
        const auto s = random_symbol();
        const UpsilonEvaluator ev(s);
        const double b1 = std::exp(uniform(-6, 4));
        const double b2 = b1 * std::exp(uniform(0.01, 3));
        CHECK(ev(b1) >= ev(b2));
        const double t = ev(std::exp(uniform(-4, 3)));
        const double b = ev.inverse(t);
        REQUIRE(b > 0.0);
        CHECK(ev(b) == doctest::Approx(t).epsilon(1e-8));
    }
}

TEST_CASE("dissipation never exceeds Upsilon") {
    for (int i = 0; i < 30; ++i) {
        const auto s = random_symbol();
        const KernelEvaluator k(s);
        const UpsilonEvaluator u(s);
        const double t = std::exp(uniform(-3, 5));
        const double beta = std::exp(uniform(-4, 3));
        CHECK(std::exp(-beta * t) * dissipation_integral(k, t) <= u(beta) * (1 + 1e-6));
    }
}

TEST_CASE("upper bound dominates lower bound and scales as the exponent") {
    for (int i = 0; i < 40; ++i) {
        const double lambda = uniform(0.2, 2.5);
        const auto s = random_symbol();
        const ModelSpec m{s, LinearSigma{lambda}, InitialData::constant(uniform(0.1, 3))};
        const auto lb = gamma2_lower_bound(m);
        const double up2 = gamma_p_upper_bound(m, 2);
        CHECK(up2 == doctest::Approx(lb.value).epsilon(1e-6).scale(1e-12));
        double prev = 0.0;
        for (int p = 2; p <= 12; p += 2) {
            const double v = gamma_p_upper_bound(m, p) / p;
            CHECK(v >= prev * (1 - 1e-9));
            prev = v;
        }
    }
}

TEST_CASE("Hermite zeros interlace and bracket a sign change") {
    double prev = 0.0;
    for (int p = 2; p <= 400; p += 2) {
        const double z = largest_hermite_zero(p);
        CHECK(z > prev);
        CHECK(z < 2.0 * std::sqrt(static_cast<double>(p)));
        prev = z;
    }
}

TEST_CASE("divergence flip tracks the inverse") {
    for (int i = 0; i < 10; ++i) {
        const auto sym = LevySymbol::stable(uniform(0.3, 3), uniform(1.2, 2.0));
        const double lambda = uniform(0.3, 2.5);
        const VolterraProblem prob{sym, lambda, 1.0, 10.0, 0.05};
        const double target = upsilon_inverse(UpsilonEvaluator(sym), 1.0 / (lambda * lambda));
        CHECK(std::abs(locate_divergence_flip(prob) - target) < 1e-6 * std::max(1.0, target));
    }
}
