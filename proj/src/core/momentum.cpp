#include "momentum.hpp"

#include <cmath>
#include <limits>

namespace blochsum {

MomentumMatrix momentum_matrix(const FiberSpectrum& spec, int alpha) {
    if (!spec.basis) throw std::invalid_argument("momentum_matrix: spectrum has no basis");
    if (alpha < 0 || alpha >= spec.basis->dim())
        throw std::invalid_argument("momentum_matrix: direction index out of range");

    const int n = spec.basis->size();
    RealVector w(n);
    for (int i = 0; i < n; ++i)
        w(i) = kTwoPi * spec.basis->frequency(i)[alpha] + spec.k[alpha];

    MomentumMatrix out;
    out.alpha = alpha;
    out.k = spec.k;
    // pi = C diag(w) C^H with C the (bands x basis) coefficient matrix;
    // Hermitian by construction since w is real.
    out.pi = spec.coeffs * w.asDiagonal() * spec.coeffs.adjoint();
    return out;
}

double hermiticity_defect(const MomentumMatrix& pi) {
    return (pi.pi - pi.pi.adjoint()).cwiseAbs().maxCoeff();
}

double feynman_hellmann_check(const FourierPotential& v,
                              std::shared_ptr<const PlaneWaveBasis> basis,
                              const KVec& k, int band, int alpha, double h_fd,
                              double gap_tol) {
    if (!basis) throw std::invalid_argument("feynman_hellmann_check: null basis");
    if (h_fd <= 0.0)
        throw std::invalid_argument("feynman_hellmann_check: step must be positive");
    const int n_bands = std::min(band + 2, basis->size());
    FiberSpectrum at_k = solve_fiber(v, basis, k, n_bands);
    if (band < 0 || band >= at_k.n_bands())
        throw std::invalid_argument("feynman_hellmann_check: band index out of range");

    double gap = std::numeric_limits<double>::infinity();
    if (band > 0) gap = std::min(gap, at_k.eigenvalues(band) - at_k.eigenvalues(band - 1));
    if (band + 1 < at_k.n_bands())
        gap = std::min(gap, at_k.eigenvalues(band + 1) - at_k.eigenvalues(band));
    if (gap < gap_tol)
        throw DegeneracyError("feynman_hellmann_check: band gap " + std::to_string(gap) +
                              " below threshold; derivative skipped");

    MomentumMatrix pi = momentum_matrix(at_k, alpha);

    KVec kp = k, km = k;
    kp[alpha] += h_fd;
    km[alpha] -= h_fd;
    FiberSpectrum plus = solve_fiber(v, basis, kp, band + 1);
    FiberSpectrum minus = solve_fiber(v, basis, km, band + 1);
    double slope = (plus.eigenvalues(band) - minus.eigenvalues(band)) / (2.0 * h_fd);

    // d lambda/d k_alpha = 2 <u, (p_alpha + k_alpha) u> for the quadratic symbol.
    return std::abs(pi.pi(band, band).real() - 0.5 * slope);
}

SupNormGrowth supnorm_growth(const FiberSpectrum& spec) {
    const int trusted = spec.trusted_bands();
    const int n = std::min(spec.n_bands(), trusted);
    if (n < 2)
        throw std::invalid_argument("supnorm_growth: need at least two trusted bands");
    SupNormGrowth out;
    out.eigenvalues.reserve(static_cast<size_t>(n));
    out.bounds.reserve(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        out.eigenvalues.push_back(spec.eigenvalues(j));
        out.bounds.push_back(spec.coeffs.row(j).cwiseAbs().sum());
    }
    out.fit = fit_loglog(out.eigenvalues, out.bounds);
    return out;
}

}  // namespace blochsum
