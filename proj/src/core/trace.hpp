#pragma once

#include "fermi.hpp"
#include "momentum.hpp"

namespace blochsum {

// Trace per unit volume of the velocity-resolvent product
//   (2 pi)^{-d} integral_BZ tr[ prod_a (p_a + k_a) S(k) ] dk,
// where S carries the Fermi-Dirac contour factor; one resolvent follows
// each velocity factor.  Two routes are provided:
//  - band sum: eigenbasis reduction, z-integral folded into the divided
//    difference (-1)^n 2 pi i f[lambda_{j1}, ..., lambda_{jn}];
//  - direct: numerical contour quadrature of f(z) tr prod (p R(z)) with
//    dense LU resolvents, no eigenbasis.
struct TraceResult {
    std::vector<int> alphas;      // velocity direction per factor
    cxd value = 0.0;              // BZ-averaged trace, 2 pi i times a real number
    int band_cutoff = 0;          // bands per fiber (band sum route only)
    std::vector<cxd> per_k;       // integrand value at each grid point
    std::vector<double> abs_per_k;  // absolute-term majorant per grid point
};

TraceResult trace_band_sum(const FourierPotential& v,
                           std::shared_ptr<const PlaneWaveBasis> basis,
                           const ContourSpec& contour, std::span<const int> alphas,
                           int band_cutoff, const KGrid& grid, int workers = 1,
                           double confluence_tol = 1e-6);

TraceResult trace_direct(const FourierPotential& v,
                         std::shared_ptr<const PlaneWaveBasis> basis,
                         const ContourSpec& contour, std::span<const int> alphas,
                         const KGrid& grid, int workers = 1);

}  // namespace blochsum
