#pragma once

#include "model.hpp"

#include <span>

namespace blochsum {

// Scalar function with derivatives, the interface divided differences need
// at confluent nodes.
class DifferentiableFunction {
  public:
    virtual ~DifferentiableFunction() = default;
    virtual double value(double x) const = 0;
    // order 0 returns the value itself; implementations may cap the order
    // and throw beyond it.
    virtual double derivative(int order, double x) const = 0;
};

// Fermi-Dirac factor f(x) = 1 / (exp(beta (x - mu)) + 1), evaluated through
// the saturating branch so large arguments neither overflow nor lose the
// tail.  Derivatives up to order 8 come from the logistic recurrence
// g' = -beta g (1 - g) expanded into polynomials in g.
class FermiDirac : public DifferentiableFunction {
  public:
    FermiDirac(double beta, double mu);

    double beta() const { return m_beta; }
    double mu() const { return m_mu; }

    double value(double x) const override;
    double derivative(int order, double x) const override;
    // Complex continuation used on contour points.
    cxd value(cxd z) const;

    static constexpr int kMaxDerivativeOrder = 8;

  private:
    double m_beta;
    double m_mu;
};

// Newton divided difference f[x_1, ..., x_n] with confluent handling: nodes
// closer than confluence_tol are clustered onto their mean and the table
// falls back to derivatives of the matching order.  Symmetric under node
// permutation by construction (nodes are sorted internally).
double divided_difference(const DifferentiableFunction& f, std::span<const double> nodes,
                          double confluence_tol = 1e-9);

// One quadrature node of the counterclockwise truncated rectangle contour.
struct ContourNode {
    cxd z;
    cxd weight;  // includes the segment direction dz
};

// Composite Gauss-Legendre discretisation of the contour; panel lengths stay
// below the strip half-width so the nearby poles on the real axis are
// resolved.
std::vector<ContourNode> contour_nodes(const ContourSpec& contour);

struct ContourQuadratureResult {
    cxd value;
    double tail_estimate;  // Fermi factor magnitude at the right edge
    bool tail_warning;     // set when the truncated tail is not negligible
};

// Quadrature of f_FD(z) * prod_j (lambda_j - z)^{-1} over the truncated
// contour.  All poles must lie strictly inside (left < lambda_j < x_max and
// farther than the strip half-width from either vertical edge).
ContourQuadratureResult contour_integral_quadrature(const ContourSpec& contour,
                                                    std::span<const double> poles);

}  // namespace blochsum
