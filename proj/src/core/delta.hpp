#pragma once

#include "common.hpp"
#include "fit.hpp"

#include <span>
#include <vector>

namespace blochsum {

// Semi-analytic spectrum of the 1-D point-interaction fiber at k = 0 on the
// unit cell with periodic boundary conditions.  Odd levels are exact free
// modes sqrt(2) sin(2 pi j x) with lambda_j = 4 pi^2 j^2; even levels come
// from the quantization condition beta tan(beta/2) = g with eigenfunctions
// C_j (cos(beta_j x) + (g/beta_j) sin(beta_j x)) mirrored evenly about 0.
// Note the displayed family carries derivative jump 2 C g at the origin,
// i.e. it diagonalizes the comb of strength 2g; callers matching against a
// Fourier comb of flat coefficients s must use g = s/2.
struct DeltaModel {
    double g = 1.0;
    int j_max = 0;
    std::vector<double> beta;         // even-level wavenumbers, one per bracket
    std::vector<double> lambda_even;  // beta^2
    std::vector<double> c_norm;       // L2 normalization constants C_j

    double odd_level(int j) const { return 4.0 * kPi * kPi * j * j; }
};

DeltaModel delta_levels(double g, int j_max);

// Quantization misfit beta tan(beta/2) - g (diagnostic; poles excluded by
// the bracket choice).
double delta_quantization_residual(const DeltaModel& model, int j);

// Even eigenfunction value at x in [-1/2, 1/2].
double delta_even_eigenfunction(const DeltaModel& model, int j, double x);

// Velocity matrix element between the even ground state and odd level j,
// in closed form, with its large-j asymptote.  Both are negative imaginary
// for the orientation u_j = +sqrt(2) sin(2 pi j x) and the inner product
// linear in its first slot:
//   exact   = -i 2 sqrt(2) C_1 g (2 pi j) / (4 pi^2 j^2 - beta_1^2)
//   leading = -i sqrt(2) C_1 g / (pi j)
struct PiAsymptote {
    int j = 0;
    cxd exact = 0.0;
    cxd leading = 0.0;
    cxd remainder = 0.0;  // exact - leading, O(1/j^3)
};

PiAsymptote delta_pi(const DeltaModel& model, int j);

// Partial sums of the Riemann-type series sum_{j<=J} sin(4 pi^2 j^2 t)/j^2.
double riemann_partial_sum(double t, int j_cutoff);

// Log-log fit of |S_J(t)| against t on [t_min, t_max]: the small-t growth
// exponent (1/2 for the Riemann function, the Hoelder order at 0).
struct HolderFit {
    double exponent = 0.0;
    double amplitude = 0.0;
    double residual_rms = 0.0;
    std::vector<double> times;
    std::vector<double> values;
};

HolderFit holder_fit(double t_min, double t_max, int j_cutoff, int n_points = 24,
                     double tail_fraction = 0.02);

// Partial sums 2 sum_{j<=J} |pi_j|^2 (lambda_j - lambda_even_1) against the
// cutoff J: linear growth instead of convergence, slope vs the prediction
// 16 C_1^2 g^2 from the 1/j asymptote.
struct SumRuleSlopeReport {
    std::vector<int> cutoffs;
    std::vector<double> partial_sums;
    double measured_slope = 0.0;
    double predicted_slope = 0.0;
    double slope_residual = 0.0;
};

SumRuleSlopeReport delta_sumrule_divergence(const DeltaModel& model,
                                            std::span<const int> cutoffs);

}  // namespace blochsum
