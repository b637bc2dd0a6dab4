#pragma once

#include "momentum.hpp"

namespace blochsum {

// Left-hand side of the effective-mass sum rule for band m in direction
// alpha: the expectation <u_m, (d^2 V / d x_alpha^2) u_m>, evaluated in the
// plane-wave basis where the second derivative is the multiplier
// -(2 pi q_alpha)^2 on coefficient q.
double sumrule_lhs(const FourierPotential& v, const FiberSpectrum& spec, int band,
                   int alpha);

// Independent evaluation of the same quantity as tr-free matrix algebra:
// <u_m, [[h, d], d] u_m> with d = diag(2 pi m_alpha + k_alpha) built
// explicitly in the plane-wave basis.  Slow and direct on purpose.
double sumrule_lhs_commutator(const FourierPotential& v, const FiberSpectrum& spec,
                              int band, int alpha);

// Partial right-hand sides R_J = 2 sum_{n<=J, n!=m} |pi(m,n)|^2 (lambda_n -
// lambda_m) over a cutoff ladder, with a linear trend fitted on the upper
// half of the ladder (slope ~ 0 for convergent series, positive for the
// divergent rough-potential case).
struct SumRulePartial {
    int band = 0;
    std::vector<int> cutoffs;
    std::vector<double> partial_sums;
    double lhs = 0.0;          // filled when a reference value is supplied
    double slope = 0.0;        // d R_J / d J trend over the upper half
    double slope_residual = 0.0;
};

SumRulePartial sumrule_rhs_partial(const FiberSpectrum& spec, const MomentumMatrix& pi,
                                   int band, std::span<const int> cutoffs,
                                   double lhs_reference = 0.0);

// Time-domain partial sums S_J(t) = 2 sum_{n<=J} |pi(m,n)|^2 sin(t (lambda_m
// - lambda_n)), the oscillatory series whose t -> 0 limit order matters.
struct OscillationSeries {
    int band = 0;
    int cutoff = 0;
    std::vector<double> times;
    std::vector<double> values;
};

OscillationSeries oscillation_series(const FiberSpectrum& spec, const MomentumMatrix& pi,
                                     int band, std::span<const double> times, int cutoff);

}  // namespace blochsum
