#pragma once

#include "fiber.hpp"
#include "fit.hpp"

namespace blochsum {

// Matrix elements of the velocity component p_alpha + k_alpha between the
// computed bands: pi(s,t) = sum_m (2 pi m_alpha + k_alpha) c_{s,m} conj(c_{t,m}).
// Hermitian; exactly real on the diagonal up to roundoff.
struct MomentumMatrix {
    int alpha = 0;
    KVec k{0.0, 0.0, 0.0};
    Matrix pi;  // n_bands x n_bands

    int n_bands() const { return static_cast<int>(pi.rows()); }
};

MomentumMatrix momentum_matrix(const FiberSpectrum& spec, int alpha);

// Largest Hermiticity defect max |pi - pi^H|.
double hermiticity_defect(const MomentumMatrix& pi);

// Finite-difference check pi(j,j) ~ d lambda_j / d k_alpha / 2 evaluated by
// re-solving the fiber at k +/- h.  The diagonal element is half the band
// slope because the symbol is |p + k|^2.  Throws DegeneracyError when the
// band is closer than gap_tol to a neighbour (the derivative is not defined
// through a crossing; a zero here must not be mistaken for agreement).
double feynman_hellmann_check(const FourierPotential& v,
                              std::shared_ptr<const PlaneWaveBasis> basis,
                              const KVec& k, int band, int alpha, double h_fd,
                              double gap_tol = 1e-6);

// Growth of the coefficient l1 norms sum_m |c_{j,m}| (a sup-norm bound on the
// Bloch function) against the eigenvalue, with a log-log fit of the trend.
struct SupNormGrowth {
    std::vector<double> eigenvalues;
    std::vector<double> bounds;
    LineFit fit;  // log(bound) vs log(lambda)
};

SupNormGrowth supnorm_growth(const FiberSpectrum& spec);

}  // namespace blochsum
