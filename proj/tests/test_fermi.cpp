#include <doctest.h>

#include "core/fermi.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace blochsum;

namespace {

// Monomial test function with analytic divided differences.
class Cubic : public DifferentiableFunction {
  public:
    double value(double x) const override { return x * x * x; }
    double derivative(int order, double x) const override {
        switch (order) {
            case 0: return x * x * x;
            case 1: return 3.0 * x * x;
            case 2: return 6.0 * x;
            case 3: return 6.0;
            default: return 0.0;
        }
    }
};

}  // namespace

TEST_CASE("occupation factor hits the frozen reference values") {
    FermiDirac f(1.0, 0.0);
    CHECK(f.value(1.0) == doctest::Approx(0.2689414213699951).epsilon(1e-14));
    // f' = -beta e^u / (1+e^u)^2 at u = 1
    CHECK(f.derivative(1, 1.0) == doctest::Approx(-0.19661193324148185).epsilon(1e-13));
    CHECK(f.derivative(0, 1.0) == f.value(1.0));
    CHECK(f.value(0.0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("beta and mu rescale the argument") {
    FermiDirac f(2.5, 1.5);
    FermiDirac base(1.0, 0.0);
    CHECK(f.value(2.0) == doctest::Approx(base.value(2.5 * 0.5)).epsilon(1e-14));
    // chain rule brings one factor of beta per derivative order
    CHECK(f.derivative(2, 2.0) ==
          doctest::Approx(2.5 * 2.5 * base.derivative(2, 2.5 * 0.5)).epsilon(1e-12));
}

TEST_CASE("derivatives agree with central differences") {
    FermiDirac f(1.3, 0.4);
    double h = 1e-5;
    for (int order = 1; order <= 3; ++order) {
        double fd = (f.derivative(order - 1, 1.0 + h) - f.derivative(order - 1, 1.0 - h)) /
                    (2.0 * h);
        CHECK(f.derivative(order, 1.0) == doctest::Approx(fd).epsilon(1e-8));
    }
}

TEST_CASE("extreme arguments do not overflow") {
    FermiDirac f(1.0, 0.0);
    CHECK(f.value(800.0) == 0.0);
    CHECK(f.value(-800.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(f.derivative(3, 800.0) == 0.0);
    CHECK(std::isfinite(f.value(cxd(700.0, 0.3)).real()));
}

TEST_CASE("divided differences reduce to values and derivatives") {
    FermiDirac f(1.0, 0.0);
    std::vector<double> one{1.0};
    CHECK(divided_difference(f, one) == doctest::Approx(0.2689414213699951).epsilon(1e-14));
    std::vector<double> pair{1.0, 1.0};
    CHECK(divided_difference(f, pair) ==
          doctest::Approx(-0.19661193324148185).epsilon(1e-13));
}

TEST_CASE("divided differences of a cubic are exact") {
    Cubic f;
    std::vector<double> abc{1.0, 2.0, 5.0};
    // f[x0,x1,x2] = x0 + x1 + x2 for f = x^3
    CHECK(divided_difference(f, abc) == doctest::Approx(8.0).epsilon(1e-12));
    std::vector<double> confluent{2.0, 2.0, 2.0};
    CHECK(divided_difference(f, confluent) == doctest::Approx(6.0).epsilon(1e-12));
    std::vector<double> mixed{2.0, 2.0, 5.0};
    // Newton table with the Hermite rule at the doubled node:
    // f[2,2,5] = (f[2,5] - f'(2)) / 3 = (39 - 12) / 3 = 9
    CHECK(divided_difference(f, mixed) == doctest::Approx(9.0).epsilon(1e-12));
    std::vector<double> four{1.0, 2.0, 2.0, 5.0};
    // third divided difference of a monic cubic is its leading coefficient
    CHECK(divided_difference(f, four) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("divided differences are permutation symmetric") {
    FermiDirac f(1.0, 0.0);
    std::vector<double> a{1.0, 2.0, 5.0};
    std::vector<double> b{5.0, 1.0, 2.0};
    std::vector<double> c{2.0, 5.0, 1.0};
    double va = divided_difference(f, a);
    CHECK(std::abs(va - divided_difference(f, b)) < 1e-12);
    CHECK(std::abs(va - divided_difference(f, c)) < 1e-12);
}

TEST_CASE("near-coincident nodes are merged stably") {
    FermiDirac f(1.0, 0.0);
    std::vector<double> tight{2.0, 2.0 + 1e-12};
    std::vector<double> exact{2.0, 2.0};
    CHECK(std::abs(divided_difference(f, tight, 1e-9) - divided_difference(f, exact)) <
          1e-10);
}

TEST_CASE("confluence beyond the derivative table is rejected") {
    FermiDirac f(1.0, 0.0);
    std::vector<double> ten(10, 3.0);  // needs f^(9)
    CHECK_THROWS_AS((void)divided_difference(f, ten), std::invalid_argument);
    std::vector<double> nine(9, 3.0);  // needs f^(8), the cap
    CHECK_NOTHROW((void)divided_difference(f, nine));
}

TEST_CASE("contour encloses a single pole with the right residue") {
    ContourSpec contour;
    contour.beta = 1.0;
    contour.mu = 0.0;
    contour.delta = 0.5;
    contour.x_max = 30.0;
    contour.n_quad = 512;
    std::vector<double> pole{1.0};
    ContourQuadratureResult res = contour_integral_quadrature(contour, pole);
    // residue: -2 pi i f(1), magnitude 2 pi * 0.2689414
    CHECK(std::abs(res.value.real()) < 1e-10);
    CHECK(res.value.imag() == doctest::Approx(-kTwoPi * 0.2689414213699951).epsilon(1e-10));
    CHECK_FALSE(res.tail_warning);
}

TEST_CASE("two-pole contour matches the divided difference") {
    ContourSpec contour;
    contour.beta = 1.0;
    contour.mu = 0.0;
    contour.delta = 0.5;
    contour.x_max = 30.0;
    contour.n_quad = 512;
    std::vector<double> poles{1.0, 2.0};
    ContourQuadratureResult res = contour_integral_quadrature(contour, poles);
    FermiDirac f(1.0, 0.0);
    cxd expected = cxd(0.0, kTwoPi) * divided_difference(f, poles);
    CHECK(std::abs(res.value - expected) < 1e-10);
}

TEST_CASE("residue identity holds for random node sets") {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> node_dist(1.0, 50.0);
    std::uniform_int_distribution<int> count_dist(1, 4);
    for (int trial = 0; trial < 12; ++trial) {
        double beta = (trial % 2 == 0) ? 0.5 : 2.0;
        ContourSpec contour;
        contour.beta = beta;
        contour.mu = 10.0;
        contour.delta = 0.5 * kPi / (2.0 * beta);
        contour.x_max = 60.0;
        contour.n_quad = 1024;
        int n = count_dist(rng);
        std::vector<double> nodes;
        for (int i = 0; i < n; ++i) nodes.push_back(node_dist(rng));
        if (trial == 5 && n >= 2) nodes[1] = nodes[0];  // one confluent pair
        ContourQuadratureResult res = contour_integral_quadrature(contour, nodes);
        FermiDirac f(beta, 10.0);
        double sign = (n % 2 == 0) ? 1.0 : -1.0;
        cxd expected = sign * cxd(0.0, kTwoPi) * divided_difference(f, nodes);
        CHECK(std::abs(res.value - expected) < 1e-8);
    }
}

TEST_CASE("contour vanishes when the band is empty") {
    ContourSpec contour;
    contour.beta = 1.0;
    contour.mu = -40.0;
    contour.delta = 0.5;
    contour.x_max = 30.0;
    contour.n_quad = 512;
    std::vector<double> pole{1.0};
    ContourQuadratureResult res = contour_integral_quadrature(contour, pole);
    CHECK(std::abs(res.value) < 1e-12);
}

TEST_CASE("poles outside the contour are rejected") {
    ContourSpec contour;
    contour.beta = 1.0;
    contour.mu = 0.0;
    contour.delta = 0.5;
    contour.x_max = 30.0;
    std::vector<double> outside{40.0};
    CHECK_THROWS_AS((void)contour_integral_quadrature(contour, outside),
                    std::invalid_argument);
    std::vector<double> left_of{-2.0};
    CHECK_THROWS_AS((void)contour_integral_quadrature(contour, left_of),
                    std::invalid_argument);
}

TEST_CASE("a short right edge raises the tail warning") {
    ContourSpec contour;
    contour.beta = 0.25;
    contour.mu = 0.0;
    contour.delta = 0.5;
    contour.x_max = 10.0;  // exp(-beta x_max) ~ 0.076, far from negligible
    contour.n_quad = 256;
    std::vector<double> pole{1.0};
    ContourQuadratureResult res = contour_integral_quadrature(contour, pole);
    CHECK(res.tail_warning);
    CHECK(res.tail_estimate > 1e-10);
}
