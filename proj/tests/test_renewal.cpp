#include "spdelab/errors.hpp"
#include "spdelab/kernel.hpp"
#include "spdelab/renewal.hpp"
#include "spdelab/upsilon.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace spdelab;

namespace {

VolterraProblem pam(double lambda = 1.0, double alpha = 2.0, double t_max = 100.0, double step = 0.02) {
    return {LevySymbol::stable(1.0, alpha), lambda, 1.0, t_max, step};
}

}  // namespace

TEST_CASE("lambda = 0 keeps the second moment constant") {
    auto prob = pam(0.0);
    prob.eta = 1.7;
    const auto c = solve_second_moment(prob);
    for (double f : c.moments) CHECK(f == doctest::Approx(1.7 * 1.7).epsilon(1e-14));
    CHECK(laplace_fixed_point(prob, 0.5) == doctest::Approx(1.7 * 1.7 / 0.5));
}

TEST_CASE("late-time growth rate at alpha = 2") {
    const auto c = solve_second_moment(pam());
    const auto fit = fit_gamma(c, 50.0, 100.0);
    CHECK(std::abs(fit.slope / 0.125 - 1.0) < 0.01);
    REQUIRE(c.fitted_gamma);
    CHECK(std::abs(c.fitted_gamma->slope / 0.125 - 1.0) < 0.01);
    CHECK(c.n_paths == 0);
    for (double e : c.std_error) CHECK(e == 0.0);
}

TEST_CASE("late-time growth rate at alpha = 1.5") {
    const double nu = stable_nu(1.5);
    const auto c = solve_second_moment(pam(1.0, 1.5, 150.0));
    CHECK(std::abs(c.fitted_gamma->slope / std::pow(nu, 3) - 1.0) < 0.01);
}

TEST_CASE("first Picard iterate is a lower bound") {
    for (double alpha : {1.5, 2.0}) {
        const auto prob = pam(1.0, alpha, 20.0);
        const auto c = solve_second_moment(prob);
        const KernelEvaluator k(prob.sym);
        for (std::size_t i = 1; i < c.times.size(); i += 50)
            CHECK(c.moments[i] >= 1.0 + dissipation_integral(k, c.times[i]) * (1 - 1e-9));
    }
}

TEST_CASE("mesh refinement barely moves the slope") {
    const auto coarse = solve_second_moment(pam(1.0, 2.0, 120.0, 0.02));
    const auto fine = solve_second_moment(pam(1.0, 2.0, 120.0, 0.01));
    const double a = fit_gamma(coarse, 80.0, 120.0).slope;
    const double b = fit_gamma(fine, 80.0, 120.0).slope;
    CHECK(std::abs(a / b - 1.0) < 0.0025);
}

TEST_CASE("mesh Laplace transform matches the fixed point") {
    const auto prob = pam(1.0, 2.0, 200.0);
    const auto c = solve_second_moment(prob);
    const double flip = locate_divergence_flip(prob);
    for (double beta : {0.5, 2.0 * flip, 4.0 * flip, 8.0 * flip}) {
        const double closed = laplace_fixed_point(prob, beta);
        REQUIRE(std::isfinite(closed));
        CHECK(std::abs(mesh_laplace_transform(c, beta) / closed - 1.0) < 0.005);
    }
}

TEST_CASE("divergence flip sits at the inverse of Upsilon") {
    for (double alpha : {1.25, 1.5, 2.0})
        for (double lambda : {0.5, 1.0, 2.0}) {
            auto prob = pam(lambda, alpha);
            const double target = upsilon_inverse(UpsilonEvaluator(prob.sym), 1.0 / (lambda * lambda));
            const double flip = locate_divergence_flip(prob);
            INFO("alpha=" << alpha << " lambda=" << lambda);
            CHECK(std::abs(flip - target) < 1e-6);
            CHECK(std::isinf(laplace_fixed_point(prob, 0.99 * target)));
            CHECK(std::isfinite(laplace_fixed_point(prob, 1.01 * target)));
        }
}

TEST_CASE("divergence scan") {
    const auto bm = LevySymbol::brownian(1.0);
    // Upsilon(1/128) = 4.
    const double beta = 1.0 / 128;
    // The threshold A q0 sqrt(Upsilon) = 4 is bracketed tightly on both sides.
    const std::vector<double> etas = {3.0, 4.0 * (1 - 1e-12), 4.0 * (1 + 1e-12), 5.0};
    const auto scan = divergence_scan(bm, beta, 1.0, 2.0, etas);
    CHECK(scan[0].state == SeriesState::Finite);
    CHECK(scan[1].state == SeriesState::Finite);
    CHECK(scan[2].state == SeriesState::Divergent);
    CHECK(scan[3].state == SeriesState::Divergent);

    const std::vector<double> any = {1e-3, 1.0};
    for (const auto& e : divergence_scan(bm, beta, 1.0, 0.0, any)) CHECK(e.state == SeriesState::Divergent);
    CHECK_THROWS_AS(divergence_scan(bm, 0.125, 1.0, 1.0, any), DomainError);
}

TEST_CASE("kernel without local times is rejected") {
    CHECK_THROWS_AS(solve_second_moment(pam(1.0, 1.0)), DomainError);
}
