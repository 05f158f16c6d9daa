#include "oracles.hpp"

#include "spdelab/upsilon.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace spdelab;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("stable closed form against independent quadrature") {
    for (double alpha : {1.2, 1.25, 1.5, 1.75, 1.8, 2.0}) {
        for (double kappa : {0.5, 1.0, 3.0}) {
            const auto sym = LevySymbol::stable(kappa, alpha);
            const UpsilonEvaluator ev(sym);
            for (double beta : {0.1, 1.0, 10.0}) {
                const double ref = oracle::upsilon([&](double xi) { return kappa * std::pow(xi, alpha); }, beta);
                INFO("alpha=" << alpha << " kappa=" << kappa << " beta=" << beta);
                CHECK(rel(upsilon_of(ev, beta), ref) < 1e-6);
                CHECK(rel(ev.by_quadrature(beta), ref) < 1e-6);
                CHECK(rel(oracle::stable_upsilon(kappa, alpha, beta), ref) < 1e-8);
            }
        }
    }
}

TEST_CASE("nu uses the cosecant") {
    CHECK(stable_nu(2.0) == doctest::Approx(1.0 / (2.0 * std::numbers::sqrt2)).epsilon(1e-15));
    const double alpha = 1.5;
    const double sec_version = 1.0 / std::cos(std::numbers::pi / alpha) / (std::pow(2.0, 1.0 / alpha) * alpha);
    const double ref = oracle::upsilon([&](double xi) { return std::pow(xi, alpha); }, 1.0);
    CHECK(rel(stable_nu(alpha), ref) < 1e-8);
    CHECK(rel(sec_version, ref) > 0.5);
}

TEST_CASE("documented values") {
    const UpsilonEvaluator pam(LevySymbol::stable(1.0, 2.0));
    CHECK(upsilon_of(pam, 1.0) == doctest::Approx(std::pow(2.0, -1.5)).epsilon(1e-12));
    CHECK(upsilon_of(pam, 4.0) == doctest::Approx(0.5 * upsilon_of(pam, 1.0)).epsilon(1e-14));
    CHECK(upsilon_inverse(pam, 1.0) == doctest::Approx(0.125).epsilon(1e-10));

    const UpsilonEvaluator k2(LevySymbol::stable(2.0, 2.0));
    CHECK(upsilon_inverse(k2, 1.0) == doctest::Approx(1.0 / 16).epsilon(1e-10));

    const UpsilonEvaluator cauchy(LevySymbol::stable(1.0, 1.0));
    CHECK(std::isinf(upsilon_of(cauchy, 1.0)));
    CHECK(std::isinf(upsilon_of(cauchy, 100.0)));
}

TEST_CASE("inverse by bisection on the oracle") {
    // Independent inverse: bisect the oracle in log beta.
    const double kappa = 2.0;
    auto f = [&](double beta) { return oracle::upsilon([&](double xi) { return kappa * xi * xi; }, beta); };
    double lo = 1e-6, hi = 1e3;
    for (int i = 0; i < 200; ++i) {
        const double mid = std::sqrt(lo * hi);
        (f(mid) > 1.0 ? lo : hi) = mid;
    }
    const UpsilonEvaluator ev(LevySymbol::stable(kappa, 2.0));
    CHECK(rel(upsilon_inverse(ev, 1.0), std::sqrt(lo * hi)) < 1e-8);
}

TEST_CASE("transient sum of stables") {
    const auto sym = LevySymbol::sum_stable({{1.0, 0.5}, {1.0, 1.5}});
    const UpsilonEvaluator ev(sym);
    auto f = [](double xi) { return std::sqrt(xi) + std::pow(xi, 1.5); };
    for (double beta : {0.01, 0.1, 1.0, 10.0})
        CHECK(rel(upsilon_of(ev, beta), oracle::upsilon(f, beta)) < 1e-6);

    // beta -> 0 limit: (1/pi) int dxi / (2 Re Psi) = (1/2pi) int dxi / (sqrt(xi) (1 + xi)) = 1/2.
    const double sup = upsilon_sup(ev);
    CHECK(sup == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(upsilon_of(ev, 1e-8) < sup);
    CHECK(upsilon_of(ev, 1e-8) == doctest::Approx(sup).epsilon(1e-3));
    CHECK(upsilon_inverse(ev, 0.6) == 0.0);
}

TEST_CASE("recurrent symbols have an infinite supremum") {
    CHECK(std::isinf(upsilon_sup(UpsilonEvaluator(LevySymbol::stable(1.0, 1.5)))));
    CHECK(std::isinf(upsilon_sup(UpsilonEvaluator(LevySymbol::brownian(1.0)))));
}

TEST_CASE("monotone in beta and the inverse round trips") {
    const LevySymbol syms[] = {
        LevySymbol::stable(1.0, 1.5),
        LevySymbol::sum_stable({{1.0, 0.5}, {1.0, 1.5}}),
        LevySymbol::sum_stable({{0.5, 1.2}, {2.0, 2.0}}),
    };
    for (const auto& s : syms) {
        const UpsilonEvaluator ev(s);
        double prev = kInfinity;
        for (int k = -6; k <= 4; ++k) {
            const double beta = std::pow(10.0, 0.5 * k);
            const double v = upsilon_of(ev, beta);
            CHECK(v <= prev);
            prev = v;
        }
        for (double t : {0.05, 0.2, 0.45}) {
            const double b = upsilon_inverse(ev, t);
            if (b > 0.0) CHECK(rel(upsilon_of(ev, b), t) < 1e-8);
        }
    }
}

TEST_CASE("forced quadrature route agrees with the closed form") {
    const auto sym = LevySymbol::stable(0.5, 1.5);
    const UpsilonEvaluator closed(sym);
    const UpsilonEvaluator numeric(sym, 1e-10, 0.0, UpsilonEvaluator::Method::Quadrature);
    for (double beta : {0.01, 1.0, 100.0}) CHECK(rel(numeric(beta), closed(beta)) < 1e-7);
}
