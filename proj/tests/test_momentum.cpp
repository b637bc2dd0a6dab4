#include <doctest.h>

#include "core/momentum.hpp"

#include <cmath>
#include <memory>

using namespace blochsum;

namespace {

std::shared_ptr<const PlaneWaveBasis> make_basis(int dim, int m_cut) {
    return std::make_shared<const PlaneWaveBasis>(build_basis(dim, m_cut));
}

FourierPotential mathieu() {
    return build_potential(PotentialSpec::trig(1, {2.0}, 3.0));
}

// Independent real-space evaluation of the velocity inner product
// integral u_s(x) * conj((-i d/dx + k) u_t(x)) on a uniform x-grid.
cxd quadrature_entry(const FiberSpectrum& spec, int s, int t, int n_grid) {
    cxd acc = 0.0;
    double k = spec.k[0];
    for (int i = 0; i < n_grid; ++i) {
        double x = static_cast<double>(i) / n_grid;
        cxd us = 0.0, dut = 0.0;
        for (int m = 0; m < spec.coeffs.cols(); ++m) {
            double freq = kTwoPi * spec.basis->frequency(m)[0];
            cxd wave = std::exp(cxd(0.0, freq * x));
            us += spec.coeffs(s, m) * wave;
            dut += spec.coeffs(t, m) * (freq + k) * wave;
        }
        acc += us * std::conj(dut);
    }
    return acc / static_cast<double>(n_grid);
}

}  // namespace

TEST_CASE("free velocity matrix is diagonal with exact entries") {
    FourierPotential v = build_potential(PotentialSpec::zero(1, 1.0));
    FiberSpectrum spec = solve_fiber(v, make_basis(1, 4), KVec{0.3, 0.0, 0.0}, 7);
    MomentumMatrix pi = momentum_matrix(spec, 0);
    for (int s = 0; s < 7; ++s)
        for (int t = 0; t < 7; ++t)
            if (s != t) CHECK(std::abs(pi.pi(s, t)) < 1e-14);
    // diagonal entries are 2 pi m + k for the frequency owning each band
    for (int j = 0; j < 7; ++j) {
        double diag = pi.pi(j, j).real();
        double lambda = spec.eigenvalues(j);
        CHECK(diag * diag + 1.0 == doctest::Approx(lambda).epsilon(1e-12));
    }
    CHECK(pi.pi(0, 0).real() == doctest::Approx(0.3).epsilon(1e-13));
}

TEST_CASE("velocity matrix is Hermitian with matching magnitudes") {
    FiberSpectrum spec = solve_fiber(mathieu(), make_basis(1, 32), KVec{0.25, 0.0, 0.0}, 32);
    MomentumMatrix pi = momentum_matrix(spec, 0);
    CHECK(hermiticity_defect(pi) < 1e-12);
    for (int s = 0; s < 10; ++s) {
        CHECK(std::abs(pi.pi(s, s).imag()) < 1e-13);
        for (int t = 0; t < 10; ++t)
            CHECK(std::abs(std::abs(pi.pi(s, t)) - std::abs(pi.pi(t, s))) < 1e-12);
    }
}

TEST_CASE("entries match a real-space quadrature oracle") {
    FiberSpectrum spec = solve_fiber(mathieu(), make_basis(1, 16), KVec{0.25, 0.0, 0.0}, 6);
    MomentumMatrix pi = momentum_matrix(spec, 0);
    for (auto [s, t] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 3}, std::pair{2, 2}}) {
        cxd oracle = quadrature_entry(spec, s, t, 4096);
        CHECK(std::abs(pi.pi(s, t) - oracle) < 1e-8);
    }
}

TEST_CASE("magnitudes are invariant under eigenvector rephasing") {
    FiberSpectrum spec = solve_fiber(mathieu(), make_basis(1, 16), KVec{0.25, 0.0, 0.0}, 8);
    MomentumMatrix before = momentum_matrix(spec, 0);
    FiberSpectrum rotated = spec;
    for (int j = 0; j < rotated.n_bands(); ++j)
        rotated.coeffs.row(j) *= std::exp(cxd(0.0, 0.37 * (j + 1)));
    MomentumMatrix after = momentum_matrix(rotated, 0);
    CHECK((before.pi.cwiseAbs() - after.pi.cwiseAbs()).maxCoeff() < 1e-12);
}

TEST_CASE("velocity matrix ignores a constant potential shift") {
    auto basis = make_basis(1, 16);
    FiberSpectrum a = solve_fiber(build_potential(PotentialSpec::trig(1, {2.0}, 3.0)),
                                  basis, KVec{0.25, 0.0, 0.0}, 8);
    FiberSpectrum b = solve_fiber(build_potential(PotentialSpec::trig(1, {2.0}, 7.0)),
                                  basis, KVec{0.25, 0.0, 0.0}, 8);
    MomentumMatrix pa = momentum_matrix(a, 0);
    MomentumMatrix pb = momentum_matrix(b, 0);
    CHECK((pa.pi - pb.pi).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("entries stay below the square-root crude bound") {
    FiberSpectrum spec = solve_fiber(mathieu(), make_basis(1, 64), KVec{0.25, 0.0, 0.0}, 64);
    MomentumMatrix pi = momentum_matrix(spec, 0);
    auto fitted_constant = [&](int range) {
        double c = 0.0;
        for (int s = 0; s < range; ++s)
            for (int t = 0; t < range; ++t) {
                double lo = std::min(spec.eigenvalues(s), spec.eigenvalues(t));
                c = std::max(c, std::abs(pi.pi(s, t)) / std::sqrt(lo));
            }
        return c;
    };
    double half = fitted_constant(32);
    double full = fitted_constant(64);
    CHECK(full <= half * 1.05 + 1e-12);  // constant stabilizes over the range
}

TEST_CASE("diagonal entries differentiate the band") {
    FourierPotential free_v = build_potential(PotentialSpec::zero(1, 1.0));
    double r_free = feynman_hellmann_check(free_v, make_basis(1, 8),
                                           KVec{0.3, 0.0, 0.0}, 0, 0, 1e-4, 1e-6);
    CHECK(r_free < 1e-10);

    double r = feynman_hellmann_check(mathieu(), make_basis(1, 32),
                                      KVec{0.5, 0.0, 0.0}, 0, 0, 1e-4, 1e-6);
    CHECK(r < 1e-6);
}

TEST_CASE("degenerate bands raise a gap signal") {
    FourierPotential free_v = build_potential(PotentialSpec::zero(1, 1.0));
    CHECK_THROWS_AS((void)feynman_hellmann_check(free_v, make_basis(1, 8),
                                                 KVec{kPi - 1e-9, 0.0, 0.0}, 0, 0, 1e-4,
                                                 1e-6),
                    DegeneracyError);
}

TEST_CASE("free eigenfunction sup-norm bounds are unity") {
    FourierPotential v = build_potential(PotentialSpec::zero(1, 1.0));
    FiberSpectrum spec = solve_fiber(v, make_basis(1, 32), KVec{0.3, 0.0, 0.0}, 20);
    SupNormGrowth g = supnorm_growth(spec);
    REQUIRE(g.bounds.size() == 20);
    for (double b : g.bounds) {
        CHECK(b == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(b >= 1.0 - 1e-9);
    }
}

TEST_CASE("cosine potential sup-norm growth exponent stays below one") {
    FiberSpectrum spec = solve_fiber(mathieu(), make_basis(1, 100), KVec{0.3, 0.0, 0.0}, 100);
    SupNormGrowth g = supnorm_growth(spec);
    CHECK(g.fit.slope < 1.0);
    for (double b : g.bounds) CHECK(b >= 1.0 - 1e-9);
}

TEST_CASE("comb potential sup-norm report stays finite") {
    FourierPotential v = build_potential(PotentialSpec::truncated_delta(1, 1.0, 64, 0.0));
    FiberSpectrum spec = solve_fiber(v, make_basis(1, 64), KVec{0.0, 0.0, 0.0}, 64);
    SupNormGrowth g = supnorm_growth(spec);
    CHECK(std::isfinite(g.fit.slope));
    for (double b : g.bounds) CHECK(std::isfinite(b));
}
