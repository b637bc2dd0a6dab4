#include <doctest.h>

#include "core/fiber.hpp"
#include "core/model.hpp"

#include <cmath>
#include <memory>

using namespace blochsum;

TEST_CASE("zero family is the constant shift") {
    FourierPotential v = build_potential(PotentialSpec::zero(1, 1.0));
    CHECK(v.coefficient(IVec{0, 0, 0}) == cxd(1.0, 0.0));
    CHECK(v.coefficient(IVec{1, 0, 0}) == cxd(0.0, 0.0));
    CHECK(v.coefficient(IVec{5, 0, 0}) == cxd(0.0, 0.0));
    CHECK(v.support_radius() == 0);
}

TEST_CASE("trig family places cosine amplitudes symmetrically") {
    // V(x) = 2 cos(2 pi x) + 3  =>  V^(+-1) = 1, V^(0) = 3
    FourierPotential v = build_potential(PotentialSpec::trig(1, {2.0}, 3.0));
    CHECK(v.coefficient(IVec{1, 0, 0}).real() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(v.coefficient(IVec{-1, 0, 0}).real() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(v.coefficient(IVec{0, 0, 0}).real() == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(v.support_radius() == 1);

    // d=2: each listed amplitude appears on both axes
    FourierPotential v2 = build_potential(PotentialSpec::trig(2, {2.0}, 0.0));
    CHECK(v2.coefficient(IVec{0, 1, 0}).real() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(v2.coefficient(IVec{1, 0, 0}).real() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("truncated comb has flat coefficients") {
    FourierPotential v = build_potential(PotentialSpec::truncated_delta(1, 1.0, 64, 0.0));
    int count = 0;
    for (const auto& [m, c] : v.coefficients()) {
        (void)m;
        CHECK(c.real() == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(c.imag() == 0.0);
        ++count;
    }
    CHECK(count == 129);
    CHECK(v.support_radius() == 64);
}

TEST_CASE("invalid family parameters are rejected") {
    CHECK_THROWS_AS((void)build_potential(PotentialSpec::truncated_delta(1, -1.0, 8, 0.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)build_potential(PotentialSpec::truncated_delta(1, 0.0, 8, 0.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)build_potential(PotentialSpec::power_law(1, 1.0, 1.0, 8, 0.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)build_potential(PotentialSpec::power_law(1, 1.0, 0.5, 8, 0.0)),
                    std::invalid_argument);
}

TEST_CASE("sampled potentials are real valued") {
    auto specs = {PotentialSpec::power_law(1, 1.5, 2.0, 16, 0.0),
                  PotentialSpec::gaussian(1, 2.0, 4.0, 16, 1.0),
                  PotentialSpec::random_smooth(1, 1.0, 5.0, 16, 42u, 0.0),
                  PotentialSpec::random_smooth(2, 1.0, 3.0, 6, 7u, 2.0)};
    for (const auto& s : specs) {
        FourierPotential v = build_potential(s);
        for (double x : {0.0, 0.13, 0.5, 0.77}) {
            cxd val = v.evaluate(KVec{x, 0.25, 0.0});
            CHECK(std::abs(val.imag()) < 1e-12);
        }
    }
}

TEST_CASE("shift only moves the zero coefficient") {
    PotentialSpec a = PotentialSpec::gaussian(1, 2.0, 4.0, 16, 1.0);
    PotentialSpec b = PotentialSpec::gaussian(1, 2.0, 4.0, 16, 3.5);
    FourierPotential va = build_potential(a);
    FourierPotential vb = build_potential(b);
    CHECK(vb.coefficient(IVec{0, 0, 0}).real() - va.coefficient(IVec{0, 0, 0}).real() ==
          doctest::Approx(2.5).epsilon(1e-14));
    for (const auto& [m, c] : va.coefficients()) {
        if (m == IVec{0, 0, 0}) continue;
        CHECK(std::abs(vb.coefficient(m) - c) < 1e-15);
    }
}

TEST_CASE("random family is seed deterministic with conjugate symmetry") {
    PotentialSpec s = PotentialSpec::random_smooth(2, 1.0, 3.0, 5, 1234u, 0.0);
    FourierPotential a = build_potential(s);
    FourierPotential b = build_potential(s);
    CHECK(a.coefficients().size() == b.coefficients().size());
    double max_diff = 0.0;
    double max_sym = 0.0;
    for (const auto& [m, c] : a.coefficients()) {
        max_diff = std::max(max_diff, std::abs(c - b.coefficient(m)));
        IVec neg{-m[0], -m[1], -m[2]};
        max_sym = std::max(max_sym, std::abs(std::conj(c) - a.coefficient(neg)));
    }
    CHECK(max_diff == 0.0);
    CHECK(max_sym < 1e-12);

    FourierPotential other = build_potential(
        PotentialSpec::random_smooth(2, 1.0, 3.0, 5, 99u, 0.0));
    double seen_diff = 0.0;
    for (const auto& [m, c] : a.coefficients())
        seen_diff = std::max(seen_diff, std::abs(c - other.coefficient(m)));
    CHECK(seen_diff > 1e-6);
}

TEST_CASE("basis enumerates frequencies lexicographically") {
    PlaneWaveBasis b1 = build_basis(1, 1);
    REQUIRE(b1.size() == 3);
    CHECK(b1.frequency(0) == IVec{-1, 0, 0});
    CHECK(b1.frequency(1) == IVec{0, 0, 0});
    CHECK(b1.frequency(2) == IVec{1, 0, 0});

    PlaneWaveBasis b2 = build_basis(2, 1);
    REQUIRE(b2.size() == 9);
    CHECK(b2.frequency(0) == IVec{-1, -1, 0});
    CHECK(b2.frequency(8) == IVec{1, 1, 0});

    CHECK(build_basis(1, 128).size() == 257);

    for (int i = 0; i < b2.size(); ++i) CHECK(b2.index_of(b2.frequency(i)) == i);
    CHECK(b2.index_of(IVec{2, 0, 0}) == -1);
}

TEST_CASE("basis size limit guards huge requests") {
    CHECK_THROWS_AS((void)build_basis(3, 32), std::invalid_argument);
    CHECK_THROWS_AS((void)build_basis(0, 4), std::invalid_argument);
    CHECK_THROWS_AS((void)build_basis(4, 4), std::invalid_argument);
}

TEST_CASE("aliasing guard rejects unrepresentable potential support") {
    FourierPotential v = build_potential(PotentialSpec::truncated_delta(1, 1.0, 64, 0.0));
    auto small = std::make_shared<const PlaneWaveBasis>(build_basis(1, 16));
    CHECK_THROWS_AS((void)assemble_fiber(v, small, KVec{0.0, 0.0, 0.0}),
                    std::invalid_argument);
    auto ok = std::make_shared<const PlaneWaveBasis>(build_basis(1, 32));
    CHECK_NOTHROW((void)assemble_fiber(v, ok, KVec{0.0, 0.0, 0.0}));
}

TEST_CASE("quasi-momentum grids integrate to the zone volume") {
    KGrid g1 = sample_brillouin(1, 1);
    REQUIRE(g1.size() == 1);
    CHECK(g1.weights[0] == doctest::Approx(kTwoPi).epsilon(1e-14));

    KGrid g4 = sample_brillouin(1, 4);
    double sum = 0.0;
    for (double w : g4.weights) sum += w;
    CHECK(sum == doctest::Approx(kTwoPi).epsilon(1e-12));

    KGrid g9 = sample_brillouin(2, 3);
    REQUIRE(g9.size() == 9);
    sum = 0.0;
    for (double w : g9.weights) sum += w;
    CHECK(sum == doctest::Approx(4.0 * kPi * kPi).epsilon(1e-12));
    for (const KVec& k : g9.points) {
        CHECK(k[0] >= -kPi);
        CHECK(k[0] < kPi);
        CHECK(k[1] >= -kPi);
        CHECK(k[1] < kPi);
    }
}

TEST_CASE("contour parameters are validated") {
    ContourSpec c;
    c.beta = 2.0;
    c.delta = kPi / (2.0 * c.beta);  // boundary value allowed
    CHECK_NOTHROW(c.validate());
    c.delta = kPi / (2.0 * c.beta) * 1.01;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.delta = -0.1;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.delta = 0.3;
    c.x_max = c.left;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}
