#include <doctest.h>

#include "core/fit.hpp"
#include "core/sumrule.hpp"

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

TEST_CASE("constant potential has a vanishing curvature average") {
    FourierPotential v = build_potential(PotentialSpec::zero(1, 1.0));
    FiberSpectrum spec = solve_fiber(v, make_basis(1, 16), KVec{0.3, 0.0, 0.0}, 8);
    CHECK(std::abs(sumrule_lhs(v, spec, 1, 0)) < 1e-14);

    MomentumMatrix pi = momentum_matrix(spec, 0);
    std::vector<int> cutoffs{2, 4, 8};
    SumRulePartial rep = sumrule_rhs_partial(spec, pi, 1, cutoffs);
    for (double r : rep.partial_sums) CHECK(std::abs(r) < 1e-20);
}

TEST_CASE("curvature average matches the matrix commutator oracle") {
    FiberSpectrum spec = solve_fiber(mathieu(), make_basis(1, 64), KVec{0.25, 0.0, 0.0}, 32);
    for (int band : {1, 2, 3}) {
        double direct = sumrule_lhs(mathieu(), spec, band, 0);
        double oracle = sumrule_lhs_commutator(mathieu(), spec, band, 0);
        CHECK(direct == doctest::Approx(oracle).epsilon(1e-8));
    }
}

TEST_CASE("curvature average matches a real-space quadrature") {
    FiberSpectrum spec = solve_fiber(mathieu(), make_basis(1, 32), KVec{0.25, 0.0, 0.0}, 4);
    // d^2V/dx^2 = -8 pi^2 cos(2 pi x) for V = 2 cos(2 pi x) + 3
    int n_grid = 4096;
    cxd acc = 0.0;
    for (int i = 0; i < n_grid; ++i) {
        double x = static_cast<double>(i) / n_grid;
        cxd u = 0.0;
        for (int m = 0; m < spec.coeffs.cols(); ++m) {
            double freq = kTwoPi * spec.basis->frequency(m)[0];
            u += spec.coeffs(0, m) * std::exp(cxd(0.0, freq * x));
        }
        acc += std::norm(u) * (-8.0 * kPi * kPi * std::cos(kTwoPi * x));
    }
    double quad = acc.real() / n_grid;
    CHECK(sumrule_lhs(mathieu(), spec, 1, 0) == doctest::Approx(quad).epsilon(1e-8));
}

TEST_CASE("ground-band partial sums increase toward the curvature average") {
    FiberSpectrum spec = solve_fiber(mathieu(), make_basis(1, 256), KVec{0.25, 0.0, 0.0}, 256);
    MomentumMatrix pi = momentum_matrix(spec, 0);
    double lhs = sumrule_lhs(mathieu(), spec, 1, 0);
    std::vector<int> cutoffs{25, 50, 100, 200};
    SumRulePartial rep = sumrule_rhs_partial(spec, pi, 1, cutoffs, lhs);
    REQUIRE(rep.partial_sums.size() == 4);
    for (size_t i = 1; i < rep.partial_sums.size(); ++i)
        CHECK(rep.partial_sums[i] >= rep.partial_sums[i - 1] - 1e-15);
    double gap = std::abs(rep.partial_sums.back() - lhs) / std::abs(lhs);
    CHECK(gap <= 1e-3);
}

TEST_CASE("comb potential partial sums drift linearly") {
    FourierPotential v = build_potential(PotentialSpec::truncated_delta(1, 1.0, 64, 0.0));
    FiberSpectrum spec = solve_fiber(v, make_basis(1, 256), KVec{0.0, 0.0, 0.0}, 256);
    MomentumMatrix pi = momentum_matrix(spec, 0);
    std::vector<int> cutoffs{100, 120, 140, 160, 180, 200};
    SumRulePartial rep = sumrule_rhs_partial(spec, pi, 1, cutoffs);
    for (size_t i = 1; i < rep.partial_sums.size(); ++i)
        CHECK(rep.partial_sums[i] > rep.partial_sums[i - 1]);
    CHECK(rep.slope > 0.0);
}

TEST_CASE("oscillation series is odd in time and zero at the origin") {
    FiberSpectrum spec = solve_fiber(mathieu(), make_basis(1, 64), KVec{0.25, 0.0, 0.0}, 64);
    MomentumMatrix pi = momentum_matrix(spec, 0);
    std::vector<double> times{-0.2, -0.1, 0.0, 0.1, 0.2};
    OscillationSeries s = oscillation_series(spec, pi, 1, times, 48);
    REQUIRE(s.values.size() == 5);
    CHECK(s.values[2] == 0.0);
    CHECK(s.values[0] == -s.values[4]);
    CHECK(s.values[1] == -s.values[3]);
}

TEST_CASE("free oscillation series vanishes identically") {
    FourierPotential v = build_potential(PotentialSpec::zero(1, 1.0));
    FiberSpectrum spec = solve_fiber(v, make_basis(1, 16), KVec{0.3, 0.0, 0.0}, 16);
    MomentumMatrix pi = momentum_matrix(spec, 0);
    std::vector<double> times{0.1, 0.5, 2.0};
    OscillationSeries s = oscillation_series(spec, pi, 1, times, 12);
    for (double val : s.values) CHECK(std::abs(val) < 1e-25);
}

TEST_CASE("comb oscillation increments scale like a square root near zero") {
    FourierPotential v = build_potential(PotentialSpec::truncated_delta(1, 1.0, 64, 0.0));
    FiberSpectrum spec = solve_fiber(v, make_basis(1, 256), KVec{0.0, 0.0, 0.0}, 256);
    MomentumMatrix pi = momentum_matrix(spec, 0);
    std::vector<double> times;
    for (int i = 0; i < 16; ++i)
        times.push_back(1e-5 * std::pow(1e2, i / 15.0));  // [1e-5, 1e-3] log spaced
    OscillationSeries s = oscillation_series(spec, pi, 1, times, 200);
    std::vector<double> mags;
    for (double val : s.values) mags.push_back(std::abs(val));
    LineFit fit = fit_loglog(times, mags);
    CHECK(fit.slope > 0.4);
    CHECK(fit.slope < 0.6);
}
