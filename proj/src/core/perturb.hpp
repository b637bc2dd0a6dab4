#pragma once

#include "momentum.hpp"

namespace blochsum {

// Ground-band energy at k near a reference k0 via the Schur-complement
// closure: lambda = lambda_1(k0) + <u1, W u1> - <W u1, (P (h(k) - lambda) P
// + |u1><u1|)^{-1} W u1> with P the projection off u1 and W = h(k) - h(k0)
// (diagonal in plane waves).  Solved by damped fixed-point iteration.
struct FeshbachResult {
    double lambda = 0.0;       // last iterate, the solution when converged
    double first_order = 0.0;  // lambda_1(k0) + <u1, W u1> starting value
    int iterations = 0;
    double last_step = 0.0;    // |lambda_i+1 - lambda_i| at exit
    bool converged = false;
};

FeshbachResult feshbach_ground_energy(const FourierPotential& v,
                                      std::shared_ptr<const PlaneWaveBasis> basis,
                                      const KVec& k0, const KVec& k, double tol = 1e-12,
                                      int max_iterations = 50);

// Second derivative of band `band` along alpha from second-order
// perturbation theory: 2 + 8 sum_{j != band} |pi(band,j)|^2 / (lambda_band -
// lambda_j).  Throws DegeneracyError when the band touches a neighbour.
double kp_second_derivative(const FiberSpectrum& spec, const MomentumMatrix& pi,
                            int band, double gap_tol = 1e-8);

// Fourth-order nested sum over intermediate bands:
//   T_J = sum_{j1,j2,j3 in [2,J]} pi(1,j1) pi(j1,j2) pi(j2,j3) pi(j3,1)
//         / ((lambda_j2 - lambda_1)(lambda_j3 - lambda_1))
// accumulated innermost-first and in the mirrored grouping, plus the
// absolute-value majorant A_J per cutoff.  `converged` reports a Cauchy test
// on A_J; its negation is the flag for conditionally-convergent behaviour.
struct NestedSumReport {
    std::vector<int> cutoffs;
    std::vector<cxd> values;        // T_J per cutoff, innermost-first order
    std::vector<double> abs_sums;   // A_J per cutoff
    cxd value = 0.0;                // T at the largest cutoff
    cxd value_reversed = 0.0;       // same cutoff, mirrored accumulation
    double last_rel_increment = 0.0;  // |A_last - A_prev| / A_last
    double cauchy_tol = 0.0;
    bool converged = false;
};

NestedSumReport nested_sum(const FiberSpectrum& spec, const MomentumMatrix& pi,
                           std::span<const int> cutoffs, double cauchy_tol = 1e-8);

}  // namespace blochsum
