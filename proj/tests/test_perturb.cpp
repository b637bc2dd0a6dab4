#include <doctest.h>

#include "core/perturb.hpp"

#include <cmath>
#include <memory>
#include <vector>

using namespace blochsum;

namespace {

std::shared_ptr<const PlaneWaveBasis> make_basis(int dim, int m_cut) {
    return std::make_shared<const PlaneWaveBasis>(build_basis(dim, m_cut));
}

FourierPotential mathieu() {
    return build_potential(PotentialSpec::trig(1, {2.0}, 3.0));
}

}  // namespace

TEST_CASE("fixed point is immediate when the expansion point is kept") {
    auto basis = make_basis(1, 16);
    FeshbachResult res = feshbach_ground_energy(mathieu(), basis, KVec{0.2, 0.0, 0.0},
                                                KVec{0.2, 0.0, 0.0});
    double direct = solve_fiber(mathieu(), basis, KVec{0.2, 0.0, 0.0}, 1).eigenvalues(0);
    CHECK(res.converged);
    CHECK(res.iterations <= 2);
    CHECK(res.lambda == doctest::Approx(direct).epsilon(1e-13));
}

TEST_CASE("free dispersion is recovered exactly") {
    FourierPotential v = build_potential(PotentialSpec::zero(1, 1.0));
    auto basis = make_basis(1, 16);
    FeshbachResult res = feshbach_ground_energy(v, basis, KVec{0.1, 0.0, 0.0},
                                                KVec{0.15, 0.0, 0.0});
    CHECK(res.converged);
    CHECK(res.lambda == doctest::Approx(0.15 * 0.15 + 1.0).epsilon(1e-12));
}

TEST_CASE("fixed point matches the direct eigensolve") {
    auto basis = make_basis(1, 64);
    FeshbachResult res = feshbach_ground_energy(mathieu(), basis, KVec{0.0, 0.0, 0.0},
                                                KVec{0.05, 0.0, 0.0});
    double direct = solve_fiber(mathieu(), basis, KVec{0.05, 0.0, 0.0}, 1).eigenvalues(0);
    CHECK(res.converged);
    CHECK(res.iterations <= 50);
    CHECK(std::abs(res.lambda - direct) <= 1e-10);
}

TEST_CASE("iteration cap reports non-convergence with the last iterate") {
    auto basis = make_basis(1, 16);
    FeshbachResult res = feshbach_ground_energy(mathieu(), basis, KVec{0.0, 0.0, 0.0},
                                                KVec{0.05, 0.0, 0.0}, 1e-15, 1);
    CHECK_FALSE(res.converged);
    CHECK(res.iterations == 1);
    CHECK(std::isfinite(res.lambda));
    CHECK(res.last_step > 0.0);
}

TEST_CASE("free band curvature is exactly two") {
    FourierPotential v = build_potential(PotentialSpec::zero(1, 1.0));
    FiberSpectrum spec = solve_fiber(v, make_basis(1, 16), KVec{0.0, 0.0, 0.0}, 16);
    MomentumMatrix pi = momentum_matrix(spec, 0);
    CHECK(kp_second_derivative(spec, pi, 1) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("series curvature matches central second differences") {
    auto basis = make_basis(1, 64);
    auto fd_curvature = [&](double k, double h) {
        double lp = solve_fiber(mathieu(), basis, KVec{k + h, 0.0, 0.0}, 1).eigenvalues(0);
        double l0 = solve_fiber(mathieu(), basis, KVec{k, 0.0, 0.0}, 1).eigenvalues(0);
        double lm = solve_fiber(mathieu(), basis, KVec{k - h, 0.0, 0.0}, 1).eigenvalues(0);
        return (lp - 2.0 * l0 + lm) / (h * h);
    };

    FiberSpectrum mid = solve_fiber(mathieu(), basis, KVec{0.3, 0.0, 0.0}, 64);
    double series = kp_second_derivative(mid, momentum_matrix(mid, 0), 1);
    CHECK(series == doctest::Approx(fd_curvature(0.3, 1e-3)).epsilon(1e-4));

    double k_edge = kPi - 0.01;
    FiberSpectrum edge = solve_fiber(mathieu(), basis, KVec{k_edge, 0.0, 0.0}, 64);
    double series_edge = kp_second_derivative(edge, momentum_matrix(edge, 0), 1);
    CHECK(series_edge < 0.0);  // band flattens toward the zone boundary
    CHECK(series_edge == doctest::Approx(fd_curvature(k_edge, 1e-3)).epsilon(1e-3));
}

TEST_CASE("curvature refuses degenerate bands") {
    FourierPotential v = build_potential(PotentialSpec::zero(1, 1.0));
    FiberSpectrum spec = solve_fiber(v, make_basis(1, 8), KVec{kPi - 1e-10, 0.0, 0.0}, 8);
    MomentumMatrix pi = momentum_matrix(spec, 0);
    CHECK_THROWS_AS((void)kp_second_derivative(spec, pi, 1), DegeneracyError);
}

TEST_CASE("free nested sum vanishes in both orders") {
    FourierPotential v = build_potential(PotentialSpec::zero(1, 1.0));
    FiberSpectrum spec = solve_fiber(v, make_basis(1, 16), KVec{0.3, 0.0, 0.0}, 16);
    MomentumMatrix pi = momentum_matrix(spec, 0);
    std::vector<int> cutoffs{8, 16};
    NestedSumReport rep = nested_sum(spec, pi, cutoffs);
    CHECK(std::abs(rep.value) < 1e-20);
    CHECK(std::abs(rep.value_reversed) < 1e-20);
    for (double a : rep.abs_sums) CHECK(a < 1e-20);
    CHECK(rep.converged);
}

TEST_CASE("smooth potential nested sum converges absolutely and order free") {
    FourierPotential v = build_potential(PotentialSpec::gaussian(1, 2.0, 4.0, 32, 1.0));
    FiberSpectrum spec = solve_fiber(v, make_basis(1, 128), KVec{0.3, 0.0, 0.0}, 128);
    MomentumMatrix pi = momentum_matrix(spec, 0);
    std::vector<int> cutoffs{32, 64, 96};
    NestedSumReport rep = nested_sum(spec, pi, cutoffs);
    CHECK(rep.converged);
    CHECK(std::abs(rep.values[2] - rep.values[1]) <= 1e-8);
    CHECK(std::abs(rep.value - rep.value_reversed) <= 1e-8);
    CHECK(std::abs(rep.value.imag()) < 1e-10);
    for (size_t i = 1; i < rep.abs_sums.size(); ++i)
        CHECK(rep.abs_sums[i] >= rep.abs_sums[i - 1] - 1e-15);
}

TEST_CASE("comb potential nested sum keeps growing") {
    FourierPotential v = build_potential(PotentialSpec::truncated_delta(1, 1.0, 64, 0.0));
    FiberSpectrum spec = solve_fiber(v, make_basis(1, 128), KVec{0.0, 0.0, 0.0}, 128);
    MomentumMatrix pi = momentum_matrix(spec, 0);
    std::vector<int> cutoffs{32, 64, 96, 128};
    NestedSumReport rep = nested_sum(spec, pi, cutoffs);
    CHECK_FALSE(rep.converged);
    CHECK(rep.last_rel_increment > 1e-8);
}
