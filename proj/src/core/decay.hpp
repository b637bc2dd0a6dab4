#pragma once

#include "momentum.hpp"

namespace blochsum {

// Smallest constant C with |pi(s,t)| <= C * lambda_s^{N+1/2} / lambda_t^N
// over the scanned index window, i.e. the sup of the inverted ratio.  The
// attaining pair is reported so growth can be traced to its source.
struct PolynomialWeightBound {
    int order = 0;        // the weight exponent N
    double constant = 0.0;
    int arg_s = 0;
    int arg_t = 0;
};

PolynomialWeightBound polynomial_weight_bound(const FiberSpectrum& spec,
                                              const MomentumMatrix& pi, int order,
                                              int s_max, int t_max);

// Envelope of |pi(s,t)| over t against lambda_t for one source band s:
// bin maxima on a log-spaced eigenvalue grid, made non-increasing by a
// running max from the top, then a log-log fit of the envelope decay.
struct DecayFit {
    int band = 0;
    std::vector<double> bin_centers;   // eigenvalue scale
    std::vector<double> envelope;      // non-increasing bound per bin
    double exponent = 0.0;             // envelope ~ amplitude * lambda^exponent
    double amplitude = 0.0;
    double residual_rms = 0.0;
    bool degenerate = false;           // all magnitudes at roundoff level
};

DecayFit decay_exponent_fit(const FiberSpectrum& spec, const MomentumMatrix& pi,
                            int band, double lambda_lo, double lambda_hi,
                            int n_bins = 12);

// Operator norms of the weighted commutator-style matrix
// A(s,t) = pi(s,t) * ((lambda_s / lambda_t)^N - 1) on nested leading
// sections, to test boundedness of [h^N, pi] h^{-N} style expressions.
struct CommutatorNormReport {
    int order = 0;
    std::vector<int> cutoffs;
    std::vector<double> norms;  // largest singular value per section
    bool stabilized = false;    // last increment below 2 percent
};

CommutatorNormReport commutator_norm(const FiberSpectrum& spec, const MomentumMatrix& pi,
                                     int order, std::span<const int> cutoffs);

}  // namespace blochsum
