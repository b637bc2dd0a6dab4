#include "sumrule.hpp"

#include "fit.hpp"

#include <cmath>

namespace blochsum {

namespace {

void check_band(const FiberSpectrum& spec, int band) {
    if (band < 1 || band > spec.n_bands())
        throw std::invalid_argument("band index out of range");
    if (band > spec.trusted_bands())
        throw std::invalid_argument("band index past the trusted half of the basis");
}

}  // namespace

double sumrule_lhs(const FourierPotential& v, const FiberSpectrum& spec, int band,
                   int alpha) {
    check_band(spec, band);
    if (alpha < 0 || alpha >= spec.basis->dim())
        throw std::invalid_argument("sumrule_lhs: direction index out of range");
    const PlaneWaveBasis& basis = *spec.basis;
    const int row = band - 1;

    // <u, W u> with W the multiplier -(2 pi q_alpha)^2 v(q): group the double
    // sum over coefficients by the transfer q across the potential support.
    cxd acc = 0.0;
    for (const auto& [q, vq] : v.coefficients()) {
        double w = -(kTwoPi * q[alpha]) * (kTwoPi * q[alpha]);
        if (w == 0.0) continue;
        cxd overlap = 0.0;
        for (int i = 0; i < basis.size(); ++i) {
            const IVec& m = basis.frequency(i);
            IVec shifted{m[0] + q[0], m[1] + q[1], m[2] + q[2]};
            int j = basis.index_of(shifted);
            if (j >= 0) overlap += spec.coeffs(row, j) * std::conj(spec.coeffs(row, i));
        }
        acc += w * vq * overlap;
    }
    if (std::abs(acc.imag()) > 1e-10 * (1.0 + std::abs(acc.real())))
        throw std::runtime_error(
            "sumrule_lhs: expectation of a real multiplier came out complex (" +
            std::to_string(acc.imag()) + ")");
    return acc.real();
}

double sumrule_lhs_commutator(const FourierPotential& v, const FiberSpectrum& spec,
                              int band, int alpha) {
    check_band(spec, band);
    const PlaneWaveBasis& basis = *spec.basis;
    const int n = basis.size();

    Matrix h = assemble_fiber(v, spec.basis, spec.k).h;
    RealVector d(n);
    for (int i = 0; i < n; ++i)
        d(i) = kTwoPi * basis.frequency(i)[alpha] + spec.k[alpha];

    // [d, [h, d]] = 2 d h d - d^2 h - h d^2, all dense products; only the
    // potential part survives since the kinetic diagonal commutes with d.
    Matrix hd = h * d.asDiagonal();
    Matrix c = 2.0 * (d.asDiagonal() * hd);
    c -= d.cwiseProduct(d).asDiagonal() * h;
    c -= hd * d.asDiagonal();

    Vector u = spec.coeffs.row(band - 1).transpose();
    cxd val = u.adjoint() * (c * u);
    if (std::abs(val.imag()) > 1e-8 * (1.0 + std::abs(val.real())))
        throw std::runtime_error("sumrule_lhs_commutator: non-real expectation");
    return val.real();
}

SumRulePartial sumrule_rhs_partial(const FiberSpectrum& spec, const MomentumMatrix& pi,
                                   int band, std::span<const int> cutoffs,
                                   double lhs_reference) {
    check_band(spec, band);
    if (cutoffs.empty())
        throw std::invalid_argument("sumrule_rhs_partial: no cutoffs");
    for (size_t i = 0; i < cutoffs.size(); ++i) {
        if (cutoffs[i] < 1 || cutoffs[i] > pi.n_bands())
            throw std::invalid_argument("sumrule_rhs_partial: cutoff out of range");
        if (i > 0 && cutoffs[i] <= cutoffs[i - 1])
            throw std::invalid_argument("sumrule_rhs_partial: cutoffs must increase");
    }
    if (cutoffs.back() > spec.trusted_bands())
        throw std::invalid_argument(
            "sumrule_rhs_partial: cutoff past the trusted half of the basis");

    const int m = band - 1;
    SumRulePartial out;
    out.band = band;
    out.lhs = lhs_reference;

    // One sweep over n, emitting the running sum at each requested cutoff.
    double running = 0.0;
    size_t next = 0;
    for (int n = 0; n < cutoffs.back() && next < cutoffs.size(); ++n) {
        if (n != m) {
            double mag = std::abs(pi.pi(m, n));
            running += 2.0 * mag * mag * (spec.eigenvalues(n) - spec.eigenvalues(m));
        }
        while (next < cutoffs.size() && cutoffs[next] == n + 1) {
            out.cutoffs.push_back(cutoffs[next]);
            out.partial_sums.push_back(running);
            ++next;
        }
    }

    // Trend from the upper half of the ladder, where transients have died out.
    const size_t nfit = std::max<size_t>(2, (out.cutoffs.size() + 1) / 2);
    std::vector<double> xs, ys;
    for (size_t i = out.cutoffs.size() - nfit; i < out.cutoffs.size(); ++i) {
        xs.push_back(static_cast<double>(out.cutoffs[i]));
        ys.push_back(out.partial_sums[i]);
    }
    LineFit fit = fit_line(xs, ys);
    out.slope = fit.slope;
    out.slope_residual = fit.residual_rms;
    return out;
}

OscillationSeries oscillation_series(const FiberSpectrum& spec, const MomentumMatrix& pi,
                                     int band, std::span<const double> times,
                                     int cutoff) {
    check_band(spec, band);
    if (cutoff < 1 || cutoff > pi.n_bands())
        throw std::invalid_argument("oscillation_series: cutoff out of range");
    if (cutoff > spec.trusted_bands())
        throw std::invalid_argument(
            "oscillation_series: cutoff past the trusted half of the basis");
    if (times.empty()) throw std::invalid_argument("oscillation_series: no times");

    const int m = band - 1;
    OscillationSeries out;
    out.band = band;
    out.cutoff = cutoff;
    out.times.assign(times.begin(), times.end());
    out.values.reserve(times.size());
    for (double t : times) {
        if (!std::isfinite(t)) throw std::invalid_argument("oscillation_series: bad time");
        double s = 0.0;
        for (int n = 0; n < cutoff; ++n) {
            if (n == m) continue;
            double mag = std::abs(pi.pi(m, n));
            s += 2.0 * mag * mag * std::sin(t * (spec.eigenvalues(m) - spec.eigenvalues(n)));
        }
        out.values.push_back(s);
    }
    return out;
}

}  // namespace blochsum
