#include <doctest.h>

#include "core/trace.hpp"

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

ContourSpec default_contour(double beta, double mu, double x_max) {
    ContourSpec c;
    c.beta = beta;
    c.mu = mu;
    c.delta = 0.5 * kPi / (2.0 * beta);
    c.x_max = x_max;
    c.n_quad = 512;
    return c;
}

}  // namespace

TEST_CASE("single velocity factor averages to zero on a symmetric grid") {
    ContourSpec contour = default_contour(2.0, 10.0, 60.0);
    KGrid grid = sample_brillouin(1, 64);
    std::vector<int> alphas{0};
    TraceResult res = trace_band_sum(mathieu(), make_basis(1, 16), contour, alphas, 12,
                                     grid, 1);
    // integrand is odd in k: the grid-symmetric sum collapses
    CHECK(std::abs(res.value) / kTwoPi < 1e-8);
}

TEST_CASE("empty band gives a vanishing trace") {
    FourierPotential v = build_potential(PotentialSpec::zero(1, 1.0));
    double beta = 2.0;
    ContourSpec contour = default_contour(beta, 1.0 - 40.0 / beta, 60.0);
    KGrid grid = sample_brillouin(1, 8);
    std::vector<int> alphas{0, 0};
    TraceResult band = trace_band_sum(v, make_basis(1, 8), contour, alphas, 6, grid, 1);
    CHECK(std::abs(band.value) < 1e-12);
    TraceResult direct = trace_direct(v, make_basis(1, 8), contour, alphas, grid, 1);
    CHECK(std::abs(direct.value) < 1e-12);
}

TEST_CASE("band sum and direct quadrature agree") {
    ContourSpec contour = default_contour(2.0, 10.0, 60.0);
    KGrid grid = sample_brillouin(1, 4);
    auto basis = make_basis(1, 16);
    std::vector<int> alphas{0, 0};
    TraceResult band = trace_band_sum(mathieu(), basis, contour, alphas, 12, grid, 1);
    TraceResult direct = trace_direct(mathieu(), basis, contour, alphas, grid, 1);
    CHECK(std::abs(band.value - direct.value) / std::abs(direct.value) < 1e-6);
    // both carry 2 pi i times a real number
    CHECK(std::abs((band.value / cxd(0.0, kTwoPi)).imag()) /
              std::abs(band.value / cxd(0.0, kTwoPi)) <
          1e-8);
    REQUIRE(band.per_k.size() == static_cast<size_t>(grid.size()));
    cxd acc = 0.0;
    for (int i = 0; i < grid.size(); ++i)
        acc += grid.weights[static_cast<size_t>(i)] * band.per_k[static_cast<size_t>(i)];
    acc /= kTwoPi;
    CHECK(std::abs(acc - band.value) < 1e-12 * std::abs(band.value));
}

TEST_CASE("direction indices rotate cyclically") {
    ContourSpec contour = default_contour(1.0, 30.0, 120.0);
    KGrid grid = sample_brillouin(2, 2);
    auto basis = make_basis(2, 4);
    FourierPotential v = build_potential(PotentialSpec::trig(2, {1.0}, 3.0));
    std::vector<int> ab{0, 1};
    std::vector<int> ba{1, 0};
    TraceResult r_ab = trace_band_sum(v, basis, contour, ab, 6, grid, 1);
    TraceResult r_ba = trace_band_sum(v, basis, contour, ba, 6, grid, 1);
    CHECK(std::abs(r_ab.value - r_ba.value) <= 1e-10 * std::max(1.0, std::abs(r_ab.value)));
}

TEST_CASE("direct trace is insensitive to the contour truncation") {
    double beta = 2.0, mu = 10.0;
    KGrid grid = sample_brillouin(1, 4);
    auto basis = make_basis(1, 8);
    std::vector<int> alphas{0, 0};
    TraceResult a = trace_direct(mathieu(), basis, default_contour(beta, mu, mu + 20.0 / beta),
                                 alphas, grid, 1);
    TraceResult b = trace_direct(mathieu(), basis, default_contour(beta, mu, mu + 30.0 / beta),
                                 alphas, grid, 1);
    CHECK(std::abs(a.value - b.value) < 1e-10 * std::abs(b.value));
}

TEST_CASE("four velocity factors run and stay near the two-factor scale") {
    ContourSpec contour = default_contour(2.0, 10.0, 60.0);
    KGrid grid = sample_brillouin(1, 2);
    auto basis = make_basis(1, 8);
    std::vector<int> alphas{0, 0, 0, 0};
    TraceResult res = trace_band_sum(mathieu(), basis, contour, alphas, 8, grid, 1);
    CHECK(std::isfinite(std::abs(res.value)));
    TraceResult direct = trace_direct(mathieu(), basis, contour, alphas, grid, 1);
    CHECK(std::abs(res.value - direct.value) / std::abs(direct.value) < 1e-6);
}

TEST_CASE("parallel workers reproduce the serial trace bitwise") {
    ContourSpec contour = default_contour(2.0, 10.0, 60.0);
    KGrid grid = sample_brillouin(1, 4);
    auto basis = make_basis(1, 8);
    std::vector<int> alphas{0, 0};
    TraceResult serial = trace_band_sum(mathieu(), basis, contour, alphas, 8, grid, 1);
    TraceResult parallel = trace_band_sum(mathieu(), basis, contour, alphas, 8, grid, 4);
    CHECK(serial.value == parallel.value);
}

TEST_CASE("factor count and band cutoff are validated") {
    ContourSpec contour = default_contour(2.0, 10.0, 60.0);
    KGrid grid = sample_brillouin(1, 2);
    auto basis = make_basis(1, 8);
    std::vector<int> none;
    CHECK_THROWS_AS((void)trace_band_sum(mathieu(), basis, contour, none, 4, grid, 1),
                    std::invalid_argument);
    std::vector<int> five{0, 0, 0, 0, 0};
    CHECK_THROWS_AS((void)trace_band_sum(mathieu(), basis, contour, five, 4, grid, 1),
                    std::invalid_argument);
    std::vector<int> bad_alpha{2};
    CHECK_THROWS_AS((void)trace_band_sum(mathieu(), basis, contour, bad_alpha, 4, grid, 1),
                    std::invalid_argument);
    std::vector<int> ok{0};
    CHECK_THROWS_AS((void)trace_band_sum(mathieu(), basis, contour, ok, 40, grid, 1),
                    std::invalid_argument);  // cutoff beyond the trusted range
}

TEST_CASE("quadrature node budget is enforced") {
    ContourSpec contour = default_contour(2.0, 10.0, 60.0);
    contour.n_quad = 100000;  // ~4x nodes per contour, 8 k-points
    KGrid grid = sample_brillouin(1, 8);
    auto basis = make_basis(1, 4);
    std::vector<int> alphas{0};
    CHECK_THROWS_AS((void)trace_direct(mathieu(), basis, contour, alphas, grid, 1),
                    std::invalid_argument);
}
