#include "delta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace blochsum {

namespace {

// Quantization condition in pole-free form: F(beta) = beta sin(beta/2) -
// g cos(beta/2), entire in beta, same zeros as beta tan(beta/2) - g away
// from the tan poles.
double quantization_f(double beta, double g) {
    return beta * std::sin(beta / 2.0) - g * std::cos(beta / 2.0);
}

double quantization_df(double beta, double g) {
    return std::sin(beta / 2.0) + (beta / 2.0) * std::cos(beta / 2.0) +
           (g / 2.0) * std::sin(beta / 2.0);
}

// Root in the j-th bracket.  The nominal bracket (2 pi (j-1), 2 pi j)
// contains a tan pole at (2j-1) pi; for g > 0 the root always lies in the
// lower sub-bracket, where F changes sign, so we split there and run
// safeguarded Newton with a bisection fallback.
double solve_even_level(double g, int j) {
    double lo = kTwoPi * (j - 1);
    double hi = (2.0 * j - 1.0) * kPi;
    // The entire form alternates orientation from bracket to bracket:
    // F(lo) = -g (-1)^{j-1}, F(hi) = (2j-1) pi (-1)^{j-1}.  Normalize the
    // sign so the solver always sees an increasing crossing.
    const double sgn = (j % 2 == 1) ? 1.0 : -1.0;
    double flo = sgn * quantization_f(lo, g);
    double fhi = sgn * quantization_f(hi, g);
    if (!(flo < 0.0) || !(fhi > 0.0))
        throw std::runtime_error(
            "delta_levels: quantization root not bracketed in sub-bracket " +
            std::to_string(j));

    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        double fx = sgn * quantization_f(x, g);
        if (fx == 0.0) return x;
        if (fx < 0.0)
            lo = x;
        else
            hi = x;
        double dfx = sgn * quantization_df(x, g);
        double step = fx / dfx;
        double next = x - step;
        if (!(next > lo) || !(next < hi) || dfx == 0.0)
            next = 0.5 * (lo + hi);  // Newton left the bracket; bisect
        if (hi - lo <= 1e-15 * hi || std::abs(next - x) <= 1e-15 * std::abs(x)) {
            x = next;
            break;
        }
        x = next;
    }
    return x;
}

double normalization(double beta, double g) {
    // 2 * integral_0^{1/2} (cos(beta x) + (g/beta) sin(beta x))^2 dx = 1/C^2.
    const double r = g / beta;
    const double s = std::sin(beta) / (4.0 * beta);
    const double half = std::sin(beta / 2.0);
    double integral = 0.25 * (1.0 + r * r) + s * (1.0 - r * r) +
                      r * half * half / beta;
    return 1.0 / std::sqrt(2.0 * integral);
}

}  // namespace

DeltaModel delta_levels(double g, int j_max) {
    if (!(g > 0.0)) throw std::invalid_argument("delta_levels: g must be positive");
    if (j_max < 1) throw std::invalid_argument("delta_levels: j_max must be >= 1");

    DeltaModel model;
    model.g = g;
    model.j_max = j_max;
    model.beta.reserve(static_cast<size_t>(j_max));
    for (int j = 1; j <= j_max; ++j) {
        double beta = solve_even_level(g, j);
        model.beta.push_back(beta);
        model.lambda_even.push_back(beta * beta);
        model.c_norm.push_back(normalization(beta, g));
    }
    return model;
}

double delta_quantization_residual(const DeltaModel& model, int j) {
    if (j < 1 || j > model.j_max)
        throw std::invalid_argument("delta_quantization_residual: level out of range");
    double beta = model.beta[static_cast<size_t>(j - 1)];
    return beta * std::tan(beta / 2.0) - model.g;
}

double delta_even_eigenfunction(const DeltaModel& model, int j, double x) {
    if (j < 1 || j > model.j_max)
        throw std::invalid_argument("delta_even_eigenfunction: level out of range");
    if (x < -0.5 || x > 0.5)
        throw std::invalid_argument("delta_even_eigenfunction: x outside the unit cell");
    double beta = model.beta[static_cast<size_t>(j - 1)];
    double c = model.c_norm[static_cast<size_t>(j - 1)];
    double ax = std::abs(x);
    return c * (std::cos(beta * ax) + (model.g / beta) * std::sin(beta * ax));
}

PiAsymptote delta_pi(const DeltaModel& model, int j) {
    if (j < 1) throw std::invalid_argument("delta_pi: level index must be >= 1");
    const double beta1 = model.beta.at(0);
    const double c1 = model.c_norm.at(0);
    const double b = kTwoPi * j;

    PiAsymptote out;
    out.j = j;
    // i <u~_1, u_j'> reduces to one rational term once the quantization
    // condition cancels the oscillatory part of the overlap integral.
    out.exact = cxd(0.0, -1.0) * 2.0 * std::sqrt(2.0) * c1 * model.g * b /
                (b * b - beta1 * beta1);
    out.leading = cxd(0.0, -1.0) * std::sqrt(2.0) * c1 * model.g / (kPi * j);
    out.remainder = out.exact - out.leading;
    return out;
}

double riemann_partial_sum(double t, int j_cutoff) {
    if (j_cutoff < 1) throw std::invalid_argument("riemann_partial_sum: cutoff >= 1");
    if (!std::isfinite(t)) throw std::invalid_argument("riemann_partial_sum: bad time");
    double s = 0.0;
    for (int j = 1; j <= j_cutoff; ++j) {
        double jj = static_cast<double>(j);
        s += std::sin(4.0 * kPi * kPi * jj * jj * t) / (jj * jj);
    }
    return s;
}

HolderFit holder_fit(double t_min, double t_max, int j_cutoff, int n_points,
                     double tail_fraction) {
    if (!(t_min > 0.0) || !(t_max > t_min))
        throw std::invalid_argument("holder_fit: need 0 < t_min < t_max");
    if (j_cutoff < 100) throw std::invalid_argument("holder_fit: cutoff too small for a fit");
    if (n_points < 4) throw std::invalid_argument("holder_fit: need >= 4 sample points");

    HolderFit out;
    out.times.reserve(static_cast<size_t>(n_points));
    out.values.reserve(static_cast<size_t>(n_points));
    const double log_lo = std::log(t_min), log_hi = std::log(t_max);
    double min_abs = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_points; ++i) {
        double t = std::exp(log_lo + (log_hi - log_lo) * i / (n_points - 1));
        double s = riemann_partial_sum(t, j_cutoff);
        out.times.push_back(t);
        out.values.push_back(s);
        min_abs = std::min(min_abs, std::abs(s));
    }
    // The truncation tail is bounded by sum_{j>J} 1/j^2 < 1/J; demand it be
    // a small fraction of the smallest sampled magnitude or the fit exponent
    // is not trustworthy.
    if (1.0 / j_cutoff > tail_fraction * min_abs)
        throw std::invalid_argument(
            "holder_fit: truncation tail 1/J is not negligible against the smallest "
            "sample; raise the cutoff or shrink the window");

    std::vector<double> mags;
    mags.reserve(out.values.size());
    for (double v : out.values) mags.push_back(std::abs(v));
    LineFit fit = fit_loglog(out.times, mags);
    out.exponent = fit.slope;
    out.amplitude = std::exp(fit.intercept);
    out.residual_rms = fit.residual_rms;
    return out;
}

SumRuleSlopeReport delta_sumrule_divergence(const DeltaModel& model,
                                            std::span<const int> cutoffs) {
    if (cutoffs.empty())
        throw std::invalid_argument("delta_sumrule_divergence: no cutoffs");
    for (size_t i = 0; i < cutoffs.size(); ++i) {
        if (cutoffs[i] < 1)
            throw std::invalid_argument("delta_sumrule_divergence: cutoff must be >= 1");
        if (i > 0 && cutoffs[i] <= cutoffs[i - 1])
            throw std::invalid_argument("delta_sumrule_divergence: cutoffs must increase");
    }

    SumRuleSlopeReport out;
    const double lambda1 = model.lambda_even.at(0);
    double running = 0.0;
    size_t next = 0;
    for (int j = 1; j <= cutoffs.back() && next < cutoffs.size(); ++j) {
        PiAsymptote pi = delta_pi(model, j);
        double mag = std::abs(pi.exact);
        running += 2.0 * mag * mag * (model.odd_level(j) - lambda1);
        while (next < cutoffs.size() && cutoffs[next] == j) {
            out.cutoffs.push_back(j);
            out.partial_sums.push_back(running);
            ++next;
        }
    }

    const size_t nfit = std::max<size_t>(2, (out.cutoffs.size() + 1) / 2);
    std::vector<double> xs, ys;
    for (size_t i = out.cutoffs.size() - nfit; i < out.cutoffs.size(); ++i) {
        xs.push_back(static_cast<double>(out.cutoffs[i]));
        ys.push_back(out.partial_sums[i]);
    }
    LineFit fit = fit_line(xs, ys);
    out.measured_slope = fit.slope;
    out.slope_residual = fit.residual_rms;

    const double c1 = model.c_norm.at(0);
    out.predicted_slope = 16.0 * c1 * c1 * model.g * model.g;
    return out;
}

}  // namespace blochsum
