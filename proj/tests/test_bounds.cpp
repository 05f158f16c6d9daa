#include "oracles.hpp"

#include "spdelab/bounds.hpp"
#include "spdelab/errors.hpp"
#include "spdelab/hermite.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace spdelab;

namespace {

ModelSpec pam(double lambda, double kappa, double alpha = 2.0, double eta = 1.0) {
    return {LevySymbol::stable(kappa, alpha), LinearSigma{lambda}, InitialData::constant(eta)};
}

const LevySymbol kTransient = LevySymbol::sum_stable({{1.0, 0.5}, {1.0, 1.5}});

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

/// Independent upper bound: bisection in log beta on the quadrature oracle of
/// Upsilon(2 beta / p) against (z_p lambda)^-2.
double upper_by_bisection(double kappa, double alpha, double lambda, int p) {
    const double z = oracle::hermite_largest_zero(p);
    const double level = 1.0 / (z * z * lambda * lambda);
    auto ups = [&](double b) { return oracle::upsilon([&](double xi) { return kappa * std::pow(xi, alpha); }, b); };
    double lo = 1e-8, hi = 1e8;
    for (int i = 0; i < 120; ++i) {
        const double mid = std::sqrt(lo * hi);
        (ups(2.0 * mid / p) > level ? lo : hi) = mid;
    }
    return std::sqrt(lo * hi);
}

}  // namespace

TEST_CASE("documented upper bounds") {
    CHECK(gamma_p_upper_bound(pam(1, 1), 2) == doctest::Approx(0.125).epsilon(1e-10));
    CHECK(gamma_p_upper_bound(pam(2, 1), 2) == doctest::Approx(2.0).epsilon(1e-10));
    const double z4 = std::sqrt(3.0 + std::sqrt(6.0));
    CHECK(gamma_p_upper_bound(pam(1, 1), 4) == doctest::Approx(std::pow(3.0 + std::sqrt(6.0), 2) / 4).epsilon(1e-10));
    CHECK(gamma_p_upper_bound(pam(1, 1), 4) == doctest::Approx(2.0 * stable_nu(2.0) * stable_nu(2.0) * std::pow(z4, 4)));
    CHECK(rel(gamma_p_upper_bound(pam(1, 1), 4), upper_by_bisection(1, 2, 1, 4)) < 1e-7);
    CHECK(rel(gamma_p_upper_bound(pam(0.8, 0.5, 1.5), 6), upper_by_bisection(0.5, 1.5, 0.8, 6)) < 1e-7);
}

TEST_CASE("lower bounds") {
    const auto lb = gamma2_lower_bound(pam(1, 1));
    CHECK(lb.applicable);
    CHECK(lb.value == doctest::Approx(0.125).epsilon(1e-10));

    const ModelSpec clamp{LevySymbol::brownian(1.0), GeneralSigma::clamp(1.0, 1.0), InitialData::constant(1.0)};
    const auto na = gamma2_lower_bound(clamp);
    CHECK_FALSE(na.applicable);
    CHECK(na.value == 0.0);

    // sup Upsilon = 1/2 for this symbol, so lambda = 1 saturates.
    const ModelSpec tr{kTransient, LinearSigma{1.0}, InitialData::constant(1.0)};
    const auto sat = gamma2_lower_bound(tr);
    CHECK(sat.applicable);
    CHECK(sat.value == 0.0);
    CHECK(gamma_p_upper_bound(tr, 2) == 0.0);
}

TEST_CASE("pinch at p = 2 for recurrent stable symbols") {
    for (double alpha : {1.25, 1.5, 2.0})
        for (double lambda : {0.5, 1.0, 2.0})
            for (double kappa : {0.5, 1.0}) {
                const auto m = pam(lambda, kappa, alpha);
                INFO("alpha=" << alpha << " lambda=" << lambda << " kappa=" << kappa);
                CHECK(rel(gamma_p_upper_bound(m, 2), gamma2_lower_bound(m).value) < 1e-6);
                if (alpha == 2.0)
                    CHECK(rel(gamma_p_upper_bound(m, 2), std::pow(lambda, 4) / (8 * kappa)) < 1e-8);
            }
}

TEST_CASE("closed form of the stable upper bound") {
    for (double alpha : {1.25, 1.5, 2.0})
        for (double lambda : {0.5, 1.0, 2.0})
            for (double kappa : {0.5, 1.0})
                for (int p : {2, 4, 6}) {
                    // Closed form evaluated with the oracle's constant, not the library's.
                    const double nu = oracle::stable_upsilon(1.0, alpha, 1.0);
                    const double z = oracle::hermite_largest_zero(p);
                    const double ref =
                        0.5 * p * std::pow(std::pow(nu, alpha) * std::pow(z * lambda, 2 * alpha) / kappa, 1.0 / (alpha - 1.0));
                    INFO("alpha=" << alpha << " lambda=" << lambda << " kappa=" << kappa << " p=" << p);
                    CHECK(rel(gamma_p_upper_bound(pam(lambda, kappa, alpha), p), ref) < 1e-6);
                }
}

TEST_CASE("upper bound per unit p is nondecreasing") {
    for (const auto& m : {pam(1, 1), pam(0.7, 2, 1.5)}) {
        double prev = 0.0;
        for (int p = 2; p <= 40; p += 2) {
            const double v = gamma_p_upper_bound(m, p) / p;
            CHECK(v >= prev);
            prev = v;
        }
    }
}

TEST_CASE("scaling in lambda and kappa at alpha = 2") {
    const double base = gamma_p_upper_bound(pam(1, 1), 2);
    CHECK(gamma_p_upper_bound(pam(2, 1), 2) == doctest::Approx(16 * base).epsilon(1e-10));
    CHECK(gamma_p_upper_bound(pam(1, 2), 2) == doctest::Approx(0.5 * base).epsilon(1e-10));
    const double b4 = gamma_p_upper_bound(pam(1, 1), 4);
    CHECK(gamma_p_upper_bound(pam(2, 1), 4) == doctest::Approx(16 * b4).epsilon(1e-10));
}

TEST_CASE("Anderson verdicts") {
    const auto yes = anderson_verdict(pam(1, 1, 1.5));
    CHECK(yes.verdict == Verdict::Yes);
    const auto bm = anderson_verdict({LevySymbol::brownian(1.0), LinearSigma{1.0}, InitialData::constant(1.0)});
    CHECK(bm.verdict == Verdict::Yes);
    REQUIRE(bm.gamma2);
    CHECK(*bm.gamma2 == doctest::Approx(0.125).epsilon(1e-10));
    const auto no = anderson_verdict({kTransient, LinearSigma{0.5}, InitialData::constant(1.0)});
    CHECK(no.verdict == Verdict::No);
    // lambda^2 sup Upsilon = 4 * 0.5 >= 1.
    CHECK(anderson_verdict({kTransient, LinearSigma{2.0}, InitialData::constant(1.0)}).verdict == Verdict::Yes);
}

TEST_CASE("exact exponent and ratio check") {
    CHECK(exact_anderson_gamma(2, 1, 1) == doctest::Approx(0.125));
    CHECK(exact_anderson_gamma(4, 1, 1) == doctest::Approx(1.25));
    CHECK(exact_anderson_gamma(3, 2, 1) == doctest::Approx(8.0));

    const auto r2 = ratio_check(2, 1, 1);
    CHECK(r2.theta == doctest::Approx(8.0));
    CHECK(r2.ratio == doctest::Approx(64.0));
    CHECK(ratio_check(4, 1, 1).ratio == doctest::Approx(51.2));
    CHECK(ratio_check(10, 1, 1).ratio == doctest::Approx(1000.0 / (10.0 * 99.0 / 48.0)));
    for (int p = 2; p <= 100; p += 2) {
        const auto r = ratio_check(p, 1.3, 0.7);
        CHECK(r.ratio >= 1.0);
        CHECK(r.ratio <= 48.0 * (1.0 + 1.0 / (p * p - 1.0)) * (1 + 1e-12));
    }
}

TEST_CASE("transient smallness threshold") {
    const double sup = 0.5;
    CHECK(transient_smallness_threshold(kTransient, 2) == doctest::Approx(1.0 / std::sqrt(sup)).epsilon(1e-6));
    CHECK(transient_smallness_threshold(kTransient, 4) ==
          doctest::Approx(1.0 / std::sqrt(sup) / std::sqrt(3.0 + std::sqrt(6.0))).epsilon(1e-6));
    CHECK_THROWS_AS(transient_smallness_threshold(LevySymbol::stable(1.0, 1.5), 2), DomainError);

    // Below the threshold the p-th upper bound vanishes.
    const double d4 = transient_smallness_threshold(kTransient, 4);
    const ModelSpec small{kTransient, LinearSigma{0.99 * d4}, InitialData::constant(1.0)};
    CHECK(gamma_p_upper_bound(small, 4) == 0.0);
    const ModelSpec large{kTransient, LinearSigma{1.01 * d4}, InitialData::constant(1.0)};
    CHECK(gamma_p_upper_bound(large, 4) > 0.0);
}

TEST_CASE("sublinear eta_0") {
    GeneralSigma g;
    g.sigma0 = 0.0;
    g.lip = 3.0;
    g.q_inf = 0.0;
    g.q_asymp = 2.0;
    g.eval = [](double u) { return 2.0 * u; };
    const ModelSpec m{LevySymbol::brownian(1.0), g, InitialData::constant(1.0)};
    // Upsilon(beta) = 2^-1.5 beta^-1/2 = 4 at beta = 1/128.
    CHECK(sublinear_sufficient_eta(m, 2.0, 1.0, 1.0 / 128) == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(sublinear_sufficient_eta(m, 0.0, 1.0, 1.0 / 128) == 0.0);
    // Upsilon(beta) = 1 at beta = 1/8: q0^2 Upsilon = 1 is not enough.
    CHECK_THROWS_AS(sublinear_sufficient_eta(m, 1.0, 1.0, 0.125), DomainError);
}

TEST_CASE("spatial modulus") {
    const auto m = pam(1, 1);
    CHECK(spatial_modulus_bound(m, 2, 1.0, 0.0, 1.0) == 0.0);
    for (double delta : {0.025, 0.1, 0.5, 2.0}) {
        const double ref = std::sqrt(2.0 / std::numbers::pi) * std::sqrt(2.0 * oracle::brownian_cosine_integral(1, 1, delta));
        CHECK(spatial_modulus_bound(m, 2, 1.0, delta, 1.0) == doctest::Approx(ref).epsilon(1e-7));
    }
    const double v1 = spatial_modulus_bound(m, 2, 1.0, 0.1, 1.0);
    for (double delta : {0.05, 0.025}) {
        const double ratio = spatial_modulus_bound(m, 2, 1.0, delta, 1.0) / std::sqrt(delta);
        CHECK(std::abs(ratio / (v1 / std::sqrt(0.1)) - 1.0) < 0.25);
    }
    double prev = 0.0;
    for (double delta = 0.01; delta < 1.0; delta *= 1.5) {
        const double v = spatial_modulus_bound(pam(1, 1, 1.5), 4, 0.5, delta, 2.0);
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("temporal modulus") {
    const auto m = pam(1, 1);
    CHECK(temporal_modulus_bound(m, 2, 1.0, 3.0, 3.0, 1.0) == 0.0);
    const double beta = 1.0, t = 1.0, norm = 1.5;
    const int p = 2;
    for (double h : {0.1, 0.05, 0.025}) {
        const auto parts = temporal_modulus_parts(m, p, beta, t, t + h, norm);
        const double d2 = std::sqrt(8.0 * p) * std::exp(beta * (t + h) / p) * norm * std::pow(2.0, -0.75) * std::pow(h, 0.25);
        CHECK(parts.d2 == doctest::Approx(d2).epsilon(1e-10));
        const double I = oracle::integrate_half_line([&](double xi) {
            const double r = xi * xi;
            const double d = -std::expm1(-h * r);
            return d * d / (beta / p + r);
        });
        const double d1 = std::exp(beta * t / p) * std::sqrt(p / std::numbers::pi) * norm * std::sqrt(2.0 * I);
        CHECK(parts.d1 == doctest::Approx(d1).epsilon(1e-7));
    }
    const double base = temporal_modulus_bound(m, p, beta, t, t + 0.1, norm) / std::pow(0.1, 0.25);
    for (double h : {0.05, 0.025})
        CHECK(std::abs(temporal_modulus_bound(m, p, beta, t, t + h, norm) / std::pow(h, 0.25) / base - 1.0) < 0.25);
}

TEST_CASE("full report") {
    const auto rep = full_report(pam(1, 1), {2, 4});
    CHECK(rep.weakly_intermittent.verdict == Verdict::Yes);
    CHECK(rep.gamma2_lower.value == doctest::Approx(0.125).epsilon(1e-10));
    CHECK(rep.gamma_p_upper.at(2) == doctest::Approx(0.125).epsilon(1e-10));
    REQUIRE(rep.exact_anderson);
    CHECK(rep.exact_anderson->at(4) == doctest::Approx(1.25));
    REQUIRE(rep.holder_exponents);
    CHECK(rep.holder_exponents->spatial == 0.5);
    CHECK(rep.holder_exponents->temporal == 0.25);
    CHECK(rep.field_errors.empty());

    const ModelSpec bounded{LevySymbol::brownian(1.0), GeneralSigma::clamp(1.0, 1.0), InitialData::constant(1.0)};
    const auto b = full_report(bounded, {2});
    CHECK(b.weakly_intermittent.verdict == Verdict::Unknown);
    CHECK(b.weakly_intermittent.reason.find("no lower-bound hypothesis") != std::string::npos);
    CHECK(b.subdiffusive);

    const auto tr = full_report({kTransient, LinearSigma{0.5}, InitialData::constant(1.0)}, {2, 4});
    CHECK(tr.weakly_intermittent.verdict == Verdict::No);
    CHECK(tr.delta_p.size() == 2);
}

TEST_CASE("errors") {
    CHECK_THROWS_AS(gamma_p_upper_bound(pam(1, 1), 3), DomainError);
    CHECK_THROWS_AS(gamma_p_upper_bound(pam(1, 1, 1.0), 2), DomainError);
    CHECK_THROWS_AS(ratio_check(5, 1, 1), DomainError);
}
