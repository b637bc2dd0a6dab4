#include "decay.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace blochsum {

namespace {

void check_band_window(const FiberSpectrum& spec, int upper) {
    if (upper < 1 || upper > spec.n_bands())
        throw std::invalid_argument("band window exceeds the computed spectrum");
    if (upper > spec.trusted_bands())
        throw std::invalid_argument(
            "band window reaches past the trusted half of the basis; raise m_cut");
    if (spec.eigenvalues(0) <= 0.0)
        throw std::invalid_argument(
            "spectrum must be shifted positive before forming eigenvalue powers");
}

}  // namespace

PolynomialWeightBound polynomial_weight_bound(const FiberSpectrum& spec,
                                              const MomentumMatrix& pi, int order,
                                              int s_max, int t_max) {
    if (order < 0) throw std::invalid_argument("polynomial_weight_bound: order < 0");
    if (pi.n_bands() < std::max(s_max, t_max))
        throw std::invalid_argument("polynomial_weight_bound: matrix smaller than window");
    check_band_window(spec, std::max(s_max, t_max));

    PolynomialWeightBound out;
    out.order = order;
    double best = -std::numeric_limits<double>::infinity();
    // Work with logarithms: lambda^N spans hundreds of orders of magnitude
    // at large cutoffs and would overflow as plain powers.
    for (int s = 0; s < s_max; ++s) {
        const double log_ls = std::log(spec.eigenvalues(s));
        for (int t = 0; t < t_max; ++t) {
            double mag = std::abs(pi.pi(s, t));
            if (mag < 1e-300) continue;
            double log_ratio = std::log(mag) + order * std::log(spec.eigenvalues(t)) -
                               (order + 0.5) * log_ls;
            if (log_ratio > best) {
                best = log_ratio;
                out.arg_s = s + 1;
                out.arg_t = t + 1;
            }
        }
    }
    if (!std::isfinite(best))
        throw std::invalid_argument(
            "polynomial_weight_bound: all matrix elements vanish in the window");
    out.constant = std::exp(best);
    return out;
}

DecayFit decay_exponent_fit(const FiberSpectrum& spec, const MomentumMatrix& pi,
                            int band, double lambda_lo, double lambda_hi, int n_bins) {
    if (band < 1 || band > pi.n_bands())
        throw std::invalid_argument("decay_exponent_fit: band index out of range");
    if (!(lambda_lo > 0.0) || !(lambda_hi > lambda_lo))
        throw std::invalid_argument("decay_exponent_fit: bad eigenvalue window");
    if (n_bins < 3) throw std::invalid_argument("decay_exponent_fit: need >= 3 bins");
    check_band_window(spec, pi.n_bands());

    const int s = band - 1;
    std::vector<double> lambdas, mags;
    for (int t = 0; t < pi.n_bands(); ++t) {
        if (t == s) continue;
        double l = spec.eigenvalues(t);
        if (l < lambda_lo || l > lambda_hi) continue;
        lambdas.push_back(l);
        mags.push_back(std::abs(pi.pi(s, t)));
    }
    if (lambdas.size() < 20)
        throw std::invalid_argument(
            "decay_exponent_fit: window holds fewer than 20 bands; widen it");

    DecayFit out;
    out.band = band;
    double max_mag = 0.0;
    for (double m : mags) max_mag = std::max(max_mag, m);
    if (max_mag < 1e-14) {
        out.degenerate = true;  // nothing above roundoff, a fit would be noise
        return out;
    }

    const double log_lo = std::log(lambda_lo), log_hi = std::log(lambda_hi);
    std::vector<double> bin_max(static_cast<size_t>(n_bins), 0.0);
    for (size_t i = 0; i < lambdas.size(); ++i) {
        int b = static_cast<int>((std::log(lambdas[i]) - log_lo) / (log_hi - log_lo) *
                                 n_bins);
        b = std::clamp(b, 0, n_bins - 1);
        bin_max[static_cast<size_t>(b)] = std::max(bin_max[static_cast<size_t>(b)], mags[i]);
    }
    // Running max downward from the top bin turns the raw maxima into a
    // non-increasing envelope in lambda.
    for (int b = n_bins - 2; b >= 0; --b)
        bin_max[static_cast<size_t>(b)] =
            std::max(bin_max[static_cast<size_t>(b)], bin_max[static_cast<size_t>(b + 1)]);

    for (int b = 0; b < n_bins; ++b) {
        if (bin_max[static_cast<size_t>(b)] <= 0.0) continue;
        double center = std::exp(log_lo + (b + 0.5) * (log_hi - log_lo) / n_bins);
        out.bin_centers.push_back(center);
        out.envelope.push_back(bin_max[static_cast<size_t>(b)]);
    }
    if (out.bin_centers.size() < 3)
        throw std::invalid_argument("decay_exponent_fit: too few populated bins");

    LineFit fit = fit_loglog(out.bin_centers, out.envelope);
    out.exponent = fit.slope;
    out.amplitude = std::exp(fit.intercept);
    out.residual_rms = fit.residual_rms;
    return out;
}

CommutatorNormReport commutator_norm(const FiberSpectrum& spec, const MomentumMatrix& pi,
                                     int order, std::span<const int> cutoffs) {
    if (order < 1) throw std::invalid_argument("commutator_norm: order must be >= 1");
    if (cutoffs.empty()) throw std::invalid_argument("commutator_norm: no cutoffs");
    int largest = 0;
    for (size_t i = 0; i < cutoffs.size(); ++i) {
        if (cutoffs[i] < 2) throw std::invalid_argument("commutator_norm: cutoff < 2");
        if (i > 0 && cutoffs[i] <= cutoffs[i - 1])
            throw std::invalid_argument("commutator_norm: cutoffs must increase");
        largest = std::max(largest, cutoffs[i]);
    }
    if (largest > pi.n_bands())
        throw std::invalid_argument("commutator_norm: cutoff exceeds matrix size");
    check_band_window(spec, largest);

    // (lambda_s/lambda_t)^N - 1 is the eigenbasis kernel of the weighted
    // commutator; the quotient form avoids overflowing lambda^N.
    Matrix a(largest, largest);
    for (int s = 0; s < largest; ++s)
        for (int t = 0; t < largest; ++t)
            a(s, t) = pi.pi(s, t) *
                      (std::pow(spec.eigenvalues(s) / spec.eigenvalues(t), order) - 1.0);

    CommutatorNormReport out;
    out.order = order;
    for (size_t i = 0; i < cutoffs.size(); ++i) {
        int c = cutoffs[i];
        Matrix block = a.topLeftCorner(c, c);
        // Operator 2-norm via the top eigenvalue of block^H block.
        Eigen::SelfAdjointEigenSolver<Matrix> es(block.adjoint() * block,
                                                 Eigen::EigenvaluesOnly);
        double top = es.eigenvalues().maxCoeff();
        out.cutoffs.push_back(c);
        out.norms.push_back(std::sqrt(std::max(0.0, top)));
    }
    if (out.norms.size() >= 2) {
        double last = out.norms.back();
        double prev = out.norms[out.norms.size() - 2];
        out.stabilized = std::abs(last - prev) <= 0.02 * std::max(1e-300, std::abs(last));
    }
    return out;
}

}  // namespace blochsum
