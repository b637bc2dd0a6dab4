#include "blochsum.h"

#include "core/decay.hpp"
#include "core/delta.hpp"
#include "core/fermi.hpp"
#include "core/fiber.hpp"
#include "core/model.hpp"
#include "core/momentum.hpp"
#include "core/perturb.hpp"
#include "core/sumrule.hpp"
#include "core/trace.hpp"

#include <cstring>
#include <memory>
#include <string>

using namespace blochsum;

struct bs_potential {
    FourierPotential impl;
};
struct bs_basis {
    std::shared_ptr<const PlaneWaveBasis> impl;
};
struct bs_kgrid {
    KGrid impl;
};
struct bs_spectrum {
    FiberSpectrum impl;
};
struct bs_momentum {
    MomentumMatrix impl;
};
struct bs_delta {
    DeltaModel impl;
};

namespace {

thread_local std::string t_last_error;

int fail(int code, const std::string& what) {
    t_last_error = what;
    return code;
}

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        int rc = fn();
        if (rc == BS_OK) t_last_error.clear();
        return rc;
    } catch (const DegeneracyError& e) {
        return fail(BS_ERR_DEGENERATE, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(BS_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(BS_ERR_NOMEM, "out of memory");
    } catch (const std::exception& e) {
        return fail(BS_ERR_RUNTIME, e.what());
    }
}

int require(const void* p, const char* name) {
    if (p) return BS_OK;
    return fail(BS_ERR_NULL, std::string(name) + " must not be NULL");
}

KVec to_kvec(const double k[3]) { return KVec{k[0], k[1], k[2]}; }

ContourSpec to_contour(const bs_contour* c) {
    ContourSpec spec;
    spec.beta = c->beta;
    spec.mu = c->mu;
    spec.delta = c->delta;
    spec.x_max = c->x_max;
    spec.left = c->left;
    spec.n_quad = c->n_quad;
    return spec;
}

template <typename Handle, typename Impl>
int make_handle(Impl&& impl, Handle** out) {
    *out = new Handle{std::forward<Impl>(impl)};
    return BS_OK;
}

}  // namespace

extern "C" {

const char* bs_error_name(int code) {
    switch (code) {
        case BS_OK: return "BS_OK";
        case BS_ERR_INVALID_ARGUMENT: return "BS_ERR_INVALID_ARGUMENT";
        case BS_ERR_RUNTIME: return "BS_ERR_RUNTIME";
        case BS_ERR_DEGENERATE: return "BS_ERR_DEGENERATE";
        case BS_ERR_DIVERGED: return "BS_ERR_DIVERGED";
        case BS_ERR_NOMEM: return "BS_ERR_NOMEM";
        case BS_ERR_NULL: return "BS_ERR_NULL";
        default: return "BS_ERR_UNKNOWN";
    }
}

const char* bs_last_error(void) { return t_last_error.c_str(); }

void bs_version(int* major, int* minor, int* patch) {
    if (major) *major = 0;
    if (minor) *minor = 1;
    if (patch) *patch = 0;
}

/* ---------------- potentials ---------------- */

static int build_into(const PotentialSpec& spec, bs_potential** out) {
    return guarded([&]() -> int {
        if (int rc = require(out, "out")) return rc;
        return make_handle(build_potential(spec), out);
    });
}

int bs_potential_zero(int dim, double shift, bs_potential** out) {
    return build_into(PotentialSpec::zero(dim, shift), out);
}

int bs_potential_trig(int dim, const double* amplitudes, int n_amplitudes, double shift,
                      bs_potential** out) {
    return guarded([&]() -> int {
        if (int rc = require(amplitudes, "amplitudes")) return rc;
        if (int rc = require(out, "out")) return rc;
        if (n_amplitudes < 1)
            return fail(BS_ERR_INVALID_ARGUMENT, "need at least one amplitude");
        std::vector<double> amps(amplitudes, amplitudes + n_amplitudes);
        return make_handle(build_potential(PotentialSpec::trig(dim, amps, shift)), out);
    });
}

int bs_potential_power_law(int dim, double amplitude, double decay_exponent, int cutoff,
                           double shift, bs_potential** out) {
    return build_into(PotentialSpec::power_law(dim, amplitude, decay_exponent, cutoff, shift),
                      out);
}

int bs_potential_gaussian(int dim, double amplitude, double width, int cutoff,
                          double shift, bs_potential** out) {
    return build_into(PotentialSpec::gaussian(dim, amplitude, width, cutoff, shift), out);
}

int bs_potential_truncated_delta(int dim, double strength, int cutoff, double shift,
                                 bs_potential** out) {
    return build_into(PotentialSpec::truncated_delta(dim, strength, cutoff, shift), out);
}

int bs_potential_random_smooth(int dim, double amplitude, double width, int cutoff,
                               uint64_t seed, double shift, bs_potential** out) {
    return build_into(
        PotentialSpec::random_smooth(dim, amplitude, width, cutoff, seed, shift), out);
}

void bs_potential_free(bs_potential* p) { delete p; }

int bs_potential_coefficient(const bs_potential* p, const int m[3], double* re,
                             double* im) {
    return guarded([&]() -> int {
        if (int rc = require(p, "potential")) return rc;
        if (int rc = require(m, "m")) return rc;
        cxd v = p->impl.coefficient(IVec{m[0], m[1], m[2]});
        if (re) *re = v.real();
        if (im) *im = v.imag();
        return BS_OK;
    });
}

int bs_potential_support_radius(const bs_potential* p, int* out) {
    return guarded([&]() -> int {
        if (int rc = require(p, "potential")) return rc;
        if (int rc = require(out, "out")) return rc;
        *out = p->impl.support_radius();
        return BS_OK;
    });
}

int bs_potential_n_coefficients(const bs_potential* p, int* out) {
    return guarded([&]() -> int {
        if (int rc = require(p, "potential")) return rc;
        if (int rc = require(out, "out")) return rc;
        *out = static_cast<int>(p->impl.coefficients().size());
        return BS_OK;
    });
}

/* ---------------- basis and k-grid ---------------- */

int bs_basis_create(int dim, int m_cut, int size_limit, bs_basis** out) {
    return guarded([&]() -> int {
        if (int rc = require(out, "out")) return rc;
        int limit = size_limit > 0 ? size_limit : kDefaultBasisSizeLimit;
        auto basis = std::make_shared<const PlaneWaveBasis>(dim, m_cut, limit);
        return make_handle(std::move(basis), out);
    });
}

void bs_basis_free(bs_basis* b) { delete b; }

int bs_basis_size(const bs_basis* b, int* out) {
    return guarded([&]() -> int {
        if (int rc = require(b, "basis")) return rc;
        if (int rc = require(out, "out")) return rc;
        *out = b->impl->size();
        return BS_OK;
    });
}

int bs_basis_frequency(const bs_basis* b, int idx, int m_out[3]) {
    return guarded([&]() -> int {
        if (int rc = require(b, "basis")) return rc;
        if (int rc = require(m_out, "m_out")) return rc;
        if (idx < 0 || idx >= b->impl->size())
            return fail(BS_ERR_INVALID_ARGUMENT, "basis index out of range");
        const IVec& m = b->impl->frequency(idx);
        m_out[0] = m[0];
        m_out[1] = m[1];
        m_out[2] = m[2];
        return BS_OK;
    });
}

int bs_kgrid_create(int dim, int points_per_axis, double offset, bs_kgrid** out) {
    return guarded([&]() -> int {
        if (int rc = require(out, "out")) return rc;
        return make_handle(sample_brillouin(dim, points_per_axis, offset), out);
    });
}

void bs_kgrid_free(bs_kgrid* g) { delete g; }

int bs_kgrid_size(const bs_kgrid* g, int* out) {
    return guarded([&]() -> int {
        if (int rc = require(g, "kgrid")) return rc;
        if (int rc = require(out, "out")) return rc;
        *out = g->impl.size();
        return BS_OK;
    });
}

int bs_kgrid_point(const bs_kgrid* g, int idx, double k_out[3], double* weight_out) {
    return guarded([&]() -> int {
        if (int rc = require(g, "kgrid")) return rc;
        if (idx < 0 || idx >= g->impl.size())
            return fail(BS_ERR_INVALID_ARGUMENT, "k-grid index out of range");
        if (k_out) {
            const KVec& k = g->impl.points[static_cast<size_t>(idx)];
            k_out[0] = k[0];
            k_out[1] = k[1];
            k_out[2] = k[2];
        }
        if (weight_out) *weight_out = g->impl.weights[static_cast<size_t>(idx)];
        return BS_OK;
    });
}

/* ---------------- fiber spectra ---------------- */

int bs_solve_fiber(const bs_potential* v, const bs_basis* b, const double k[3],
                   int n_bands, bs_spectrum** out) {
    return guarded([&]() -> int {
        if (int rc = require(v, "potential")) return rc;
        if (int rc = require(b, "basis")) return rc;
        if (int rc = require(k, "k")) return rc;
        if (int rc = require(out, "out")) return rc;
        return make_handle(solve_fiber(v->impl, b->impl, to_kvec(k), n_bands), out);
    });
}

void bs_spectrum_free(bs_spectrum* s) { delete s; }

int bs_spectrum_n_bands(const bs_spectrum* s, int* out) {
    return guarded([&]() -> int {
        if (int rc = require(s, "spectrum")) return rc;
        if (int rc = require(out, "out")) return rc;
        *out = s->impl.n_bands();
        return BS_OK;
    });
}

int bs_spectrum_trusted_bands(const bs_spectrum* s, int* out) {
    return guarded([&]() -> int {
        if (int rc = require(s, "spectrum")) return rc;
        if (int rc = require(out, "out")) return rc;
        *out = s->impl.trusted_bands();
        return BS_OK;
    });
}

int bs_spectrum_eigenvalues(const bs_spectrum* s, double* buf, int buf_len) {
    return guarded([&]() -> int {
        if (int rc = require(s, "spectrum")) return rc;
        if (int rc = require(buf, "buf")) return rc;
        int n = std::min(buf_len, s->impl.n_bands());
        for (int i = 0; i < n; ++i) buf[i] = s->impl.eigenvalues(i);
        return BS_OK;
    });
}

int bs_spectrum_coefficient(const bs_spectrum* s, int band, int idx, double* re,
                            double* im) {
    return guarded([&]() -> int {
        if (int rc = require(s, "spectrum")) return rc;
        if (band < 1 || band > s->impl.n_bands())
            return fail(BS_ERR_INVALID_ARGUMENT, "band index out of range");
        if (idx < 0 || idx >= static_cast<int>(s->impl.coeffs.cols()))
            return fail(BS_ERR_INVALID_ARGUMENT, "basis index out of range");
        cxd c = s->impl.coeffs(band - 1, idx);
        if (re) *re = c.real();
        if (im) *im = c.imag();
        return BS_OK;
    });
}

int bs_fiber_hermiticity_defect(const bs_potential* v, const bs_basis* b,
                                const double k[3], double* out) {
    return guarded([&]() -> int {
        if (int rc = require(v, "potential")) return rc;
        if (int rc = require(b, "basis")) return rc;
        if (int rc = require(k, "k")) return rc;
        if (int rc = require(out, "out")) return rc;
        *out = hermiticity_defect(assemble_fiber(v->impl, b->impl, to_kvec(k)).h);
        return BS_OK;
    });
}

int bs_band_structure(const bs_potential* v, const bs_basis* b, const bs_kgrid* g,
                      int n_bands, int workers, double* eigenvalues_out) {
    return guarded([&]() -> int {
        if (int rc = require(v, "potential")) return rc;
        if (int rc = require(b, "basis")) return rc;
        if (int rc = require(g, "kgrid")) return rc;
        if (int rc = require(eigenvalues_out, "eigenvalues_out")) return rc;
        BandStructure bs = band_structure(v->impl, b->impl, g->impl, n_bands, workers);
        for (int i = 0; i < bs.eigenvalues.rows(); ++i)
            for (int j = 0; j < bs.eigenvalues.cols(); ++j)
                eigenvalues_out[i * bs.eigenvalues.cols() + j] = bs.eigenvalues(i, j);
        return BS_OK;
    });
}

/* ---------------- velocity matrix elements ---------------- */

int bs_momentum_matrix(const bs_spectrum* s, int alpha, bs_momentum** out) {
    return guarded([&]() -> int {
        if (int rc = require(s, "spectrum")) return rc;
        if (int rc = require(out, "out")) return rc;
        return make_handle(momentum_matrix(s->impl, alpha), out);
    });
}

void bs_momentum_free(bs_momentum* m) { delete m; }

int bs_momentum_n_bands(const bs_momentum* m, int* out) {
    return guarded([&]() -> int {
        if (int rc = require(m, "momentum")) return rc;
        if (int rc = require(out, "out")) return rc;
        *out = m->impl.n_bands();
        return BS_OK;
    });
}

int bs_momentum_entry(const bs_momentum* m, int s, int t, double* re, double* im) {
    return guarded([&]() -> int {
        if (int rc = require(m, "momentum")) return rc;
        if (s < 1 || s > m->impl.n_bands() || t < 1 || t > m->impl.n_bands())
            return fail(BS_ERR_INVALID_ARGUMENT, "matrix index out of range");
        cxd v = m->impl.pi(s - 1, t - 1);
        if (re) *re = v.real();
        if (im) *im = v.imag();
        return BS_OK;
    });
}

int bs_momentum_hermiticity_defect(const bs_momentum* m, double* out) {
    return guarded([&]() -> int {
        if (int rc = require(m, "momentum")) return rc;
        if (int rc = require(out, "out")) return rc;
        *out = hermiticity_defect(m->impl);
        return BS_OK;
    });
}

int bs_feynman_hellmann_check(const bs_potential* v, const bs_basis* b,
                              const double k[3], int band, int alpha, double h_fd,
                              double gap_tol, double* residual_out) {
    return guarded([&]() -> int {
        if (int rc = require(v, "potential")) return rc;
        if (int rc = require(b, "basis")) return rc;
        if (int rc = require(k, "k")) return rc;
        if (int rc = require(residual_out, "residual_out")) return rc;
        *residual_out = feynman_hellmann_check(v->impl, b->impl, to_kvec(k), band - 1,
                                               alpha, h_fd, gap_tol);
        return BS_OK;
    });
}

int bs_supnorm_growth(const bs_spectrum* s, double* eigen_buf, double* bound_buf,
                      int buf_len, int* n_out, double* exponent_out) {
    return guarded([&]() -> int {
        if (int rc = require(s, "spectrum")) return rc;
        SupNormGrowth g = supnorm_growth(s->impl);
        int n = static_cast<int>(g.bounds.size());
        if (n_out) *n_out = n;
        int m = std::min(buf_len, n);
        for (int i = 0; i < m; ++i) {
            if (eigen_buf) eigen_buf[i] = g.eigenvalues[static_cast<size_t>(i)];
            if (bound_buf) bound_buf[i] = g.bounds[static_cast<size_t>(i)];
        }
        if (exponent_out) *exponent_out = g.fit.slope;
        return BS_OK;
    });
}

/* ---------------- decay diagnostics ---------------- */

int bs_polynomial_weight_bound(const bs_spectrum* s, const bs_momentum* m, int order,
                               int s_max, int t_max, double* constant_out,
                               int* arg_s_out, int* arg_t_out) {
    return guarded([&]() -> int {
        if (int rc = require(s, "spectrum")) return rc;
        if (int rc = require(m, "momentum")) return rc;
        if (int rc = require(constant_out, "constant_out")) return rc;
        PolynomialWeightBound b =
            polynomial_weight_bound(s->impl, m->impl, order, s_max, t_max);
        *constant_out = b.constant;
        if (arg_s_out) *arg_s_out = b.arg_s;
        if (arg_t_out) *arg_t_out = b.arg_t;
        return BS_OK;
    });
}

int bs_decay_exponent_fit(const bs_spectrum* s, const bs_momentum* m, int band,
                          double lambda_lo, double lambda_hi, int n_bins,
                          double* exponent_out, double* amplitude_out,
                          int* degenerate_out) {
    return guarded([&]() -> int {
        if (int rc = require(s, "spectrum")) return rc;
        if (int rc = require(m, "momentum")) return rc;
        DecayFit fit = decay_exponent_fit(s->impl, m->impl, band, lambda_lo, lambda_hi,
                                          n_bins);
        if (exponent_out) *exponent_out = fit.exponent;
        if (amplitude_out) *amplitude_out = fit.amplitude;
        if (degenerate_out) *degenerate_out = fit.degenerate ? 1 : 0;
        return BS_OK;
    });
}

int bs_commutator_norm(const bs_spectrum* s, const bs_momentum* m, int order,
                       const int* cutoffs, int n_cutoffs, double* norms_out,
                       int* stabilized_out) {
    return guarded([&]() -> int {
        if (int rc = require(s, "spectrum")) return rc;
        if (int rc = require(m, "momentum")) return rc;
        if (int rc = require(cutoffs, "cutoffs")) return rc;
        if (int rc = require(norms_out, "norms_out")) return rc;
        if (n_cutoffs < 1) return fail(BS_ERR_INVALID_ARGUMENT, "n_cutoffs < 1");
        CommutatorNormReport rep = commutator_norm(
            s->impl, m->impl, order, std::span<const int>(cutoffs, static_cast<size_t>(n_cutoffs)));
        for (size_t i = 0; i < rep.norms.size(); ++i) norms_out[i] = rep.norms[i];
        if (stabilized_out) *stabilized_out = rep.stabilized ? 1 : 0;
        return BS_OK;
    });
}

/* ---------------- sum rules ---------------- */

int bs_sumrule_lhs(const bs_potential* v, const bs_spectrum* s, int band, int alpha,
                   double* out) {
    return guarded([&]() -> int {
        if (int rc = require(v, "potential")) return rc;
        if (int rc = require(s, "spectrum")) return rc;
        if (int rc = require(out, "out")) return rc;
        *out = sumrule_lhs(v->impl, s->impl, band, alpha);
        return BS_OK;
    });
}

int bs_sumrule_rhs_partial(const bs_spectrum* s, const bs_momentum* m, int band,
                           const int* cutoffs, int n_cutoffs, double* partial_sums_out,
                           double* slope_out) {
    return guarded([&]() -> int {
        if (int rc = require(s, "spectrum")) return rc;
        if (int rc = require(m, "momentum")) return rc;
        if (int rc = require(cutoffs, "cutoffs")) return rc;
        if (int rc = require(partial_sums_out, "partial_sums_out")) return rc;
        if (n_cutoffs < 1) return fail(BS_ERR_INVALID_ARGUMENT, "n_cutoffs < 1");
        SumRulePartial rep = sumrule_rhs_partial(
            s->impl, m->impl, band,
            std::span<const int>(cutoffs, static_cast<size_t>(n_cutoffs)));
        for (size_t i = 0; i < rep.partial_sums.size(); ++i)
            partial_sums_out[i] = rep.partial_sums[i];
        if (slope_out) *slope_out = rep.slope;
        return BS_OK;
    });
}

int bs_oscillation_series(const bs_spectrum* s, const bs_momentum* m, int band,
                          const double* times, int n_times, int cutoff,
                          double* values_out) {
    return guarded([&]() -> int {
        if (int rc = require(s, "spectrum")) return rc;
        if (int rc = require(m, "momentum")) return rc;
        if (int rc = require(times, "times")) return rc;
        if (int rc = require(values_out, "values_out")) return rc;
        if (n_times < 1) return fail(BS_ERR_INVALID_ARGUMENT, "n_times < 1");
        OscillationSeries rep = oscillation_series(
            s->impl, m->impl, band,
            std::span<const double>(times, static_cast<size_t>(n_times)), cutoff);
        for (size_t i = 0; i < rep.values.size(); ++i) values_out[i] = rep.values[i];
        return BS_OK;
    });
}

/* ---------------- perturbation tools ---------------- */

int bs_feshbach_ground_energy(const bs_potential* v, const bs_basis* b,
                              const double k0[3], const double k[3], double tol,
                              int max_iterations, double* lambda_out,
                              int* iterations_out, int* converged_out) {
    return guarded([&]() -> int {
        if (int rc = require(v, "potential")) return rc;
        if (int rc = require(b, "basis")) return rc;
        if (int rc = require(k0, "k0")) return rc;
        if (int rc = require(k, "k")) return rc;
        FeshbachResult res = feshbach_ground_energy(v->impl, b->impl, to_kvec(k0),
                                                    to_kvec(k), tol, max_iterations);
        if (lambda_out) *lambda_out = res.lambda;
        if (iterations_out) *iterations_out = res.iterations;
        if (converged_out) *converged_out = res.converged ? 1 : 0;
        if (!res.converged)
            return fail(BS_ERR_DIVERGED,
                        "fixed-point iteration did not converge; last iterate returned");
        return BS_OK;
    });
}

int bs_kp_second_derivative(const bs_spectrum* s, const bs_momentum* m, int band,
                            double gap_tol, double* out) {
    return guarded([&]() -> int {
        if (int rc = require(s, "spectrum")) return rc;
        if (int rc = require(m, "momentum")) return rc;
        if (int rc = require(out, "out")) return rc;
        *out = kp_second_derivative(s->impl, m->impl, band, gap_tol);
        return BS_OK;
    });
}

int bs_nested_sum(const bs_spectrum* s, const bs_momentum* m, const int* cutoffs,
                  int n_cutoffs, double cauchy_tol, double* values_re,
                  double* values_im, double* abs_sums, double* reversed_re,
                  double* reversed_im, double* last_rel_increment,
                  int* converged_out) {
    return guarded([&]() -> int {
        if (int rc = require(s, "spectrum")) return rc;
        if (int rc = require(m, "momentum")) return rc;
        if (int rc = require(cutoffs, "cutoffs")) return rc;
        if (n_cutoffs < 1) return fail(BS_ERR_INVALID_ARGUMENT, "n_cutoffs < 1");
        NestedSumReport rep = nested_sum(
            s->impl, m->impl, std::span<const int>(cutoffs, static_cast<size_t>(n_cutoffs)),
            cauchy_tol);
        for (size_t i = 0; i < rep.values.size(); ++i) {
            if (values_re) values_re[i] = rep.values[i].real();
            if (values_im) values_im[i] = rep.values[i].imag();
            if (abs_sums) abs_sums[i] = rep.abs_sums[i];
        }
        if (reversed_re) *reversed_re = rep.value_reversed.real();
        if (reversed_im) *reversed_im = rep.value_reversed.imag();
        if (last_rel_increment) *last_rel_increment = rep.last_rel_increment;
        if (converged_out) *converged_out = rep.converged ? 1 : 0;
        return BS_OK;
    });
}

/* ---------------- Fermi factor and contour ---------------- */

int bs_fermi_value(double beta, double mu, double x, double* out) {
    return guarded([&]() -> int {
        if (int rc = require(out, "out")) return rc;
        *out = FermiDirac(beta, mu).value(x);
        return BS_OK;
    });
}

int bs_fermi_derivative(double beta, double mu, int order, double x, double* out) {
    return guarded([&]() -> int {
        if (int rc = require(out, "out")) return rc;
        *out = FermiDirac(beta, mu).derivative(order, x);
        return BS_OK;
    });
}

int bs_divided_difference(double beta, double mu, const double* nodes, int n_nodes,
                          double confluence_tol, double* out) {
    return guarded([&]() -> int {
        if (int rc = require(nodes, "nodes")) return rc;
        if (int rc = require(out, "out")) return rc;
        if (n_nodes < 1) return fail(BS_ERR_INVALID_ARGUMENT, "n_nodes < 1");
        FermiDirac f(beta, mu);
        *out = divided_difference(
            f, std::span<const double>(nodes, static_cast<size_t>(n_nodes)),
            confluence_tol);
        return BS_OK;
    });
}

int bs_contour_quadrature(const bs_contour* c, const double* poles, int n_poles,
                          double* re_out, double* im_out, double* tail_out) {
    return guarded([&]() -> int {
        if (int rc = require(c, "contour")) return rc;
        if (int rc = require(poles, "poles")) return rc;
        if (n_poles < 1) return fail(BS_ERR_INVALID_ARGUMENT, "n_poles < 1");
        ContourQuadratureResult res = contour_integral_quadrature(
            to_contour(c), std::span<const double>(poles, static_cast<size_t>(n_poles)));
        if (re_out) *re_out = res.value.real();
        if (im_out) *im_out = res.value.imag();
        if (tail_out) *tail_out = res.tail_estimate;
        return BS_OK;
    });
}

/* ---------------- trace per unit volume ---------------- */

static int trace_common(const TraceResult& res, const bs_kgrid* g, double* re_out,
                        double* im_out, double* per_k_re, double* per_k_im,
                        double* abs_per_k) {
    if (re_out) *re_out = res.value.real();
    if (im_out) *im_out = res.value.imag();
    for (int i = 0; i < g->impl.size(); ++i) {
        if (per_k_re) per_k_re[i] = res.per_k[static_cast<size_t>(i)].real();
        if (per_k_im) per_k_im[i] = res.per_k[static_cast<size_t>(i)].imag();
        if (abs_per_k) abs_per_k[i] = res.abs_per_k[static_cast<size_t>(i)];
    }
    return BS_OK;
}

int bs_trace_band_sum(const bs_potential* v, const bs_basis* b, const bs_contour* c,
                      const int* alphas, int n_alphas, int band_cutoff,
                      const bs_kgrid* g, int workers, double* re_out, double* im_out,
                      double* per_k_re, double* per_k_im, double* abs_per_k) {
    return guarded([&]() -> int {
        if (int rc = require(v, "potential")) return rc;
        if (int rc = require(b, "basis")) return rc;
        if (int rc = require(c, "contour")) return rc;
        if (int rc = require(alphas, "alphas")) return rc;
        if (int rc = require(g, "kgrid")) return rc;
        TraceResult res = trace_band_sum(
            v->impl, b->impl, to_contour(c),
            std::span<const int>(alphas, static_cast<size_t>(n_alphas)), band_cutoff,
            g->impl, workers);
        return trace_common(res, g, re_out, im_out, per_k_re, per_k_im, abs_per_k);
    });
}

int bs_trace_direct(const bs_potential* v, const bs_basis* b, const bs_contour* c,
                    const int* alphas, int n_alphas, const bs_kgrid* g, int workers,
                    double* re_out, double* im_out, double* per_k_re, double* per_k_im,
                    double* abs_per_k) {
    return guarded([&]() -> int {
        if (int rc = require(v, "potential")) return rc;
        if (int rc = require(b, "basis")) return rc;
        if (int rc = require(c, "contour")) return rc;
        if (int rc = require(alphas, "alphas")) return rc;
        if (int rc = require(g, "kgrid")) return rc;
        TraceResult res = trace_direct(
            v->impl, b->impl, to_contour(c),
            std::span<const int>(alphas, static_cast<size_t>(n_alphas)), g->impl,
            workers);
        return trace_common(res, g, re_out, im_out, per_k_re, per_k_im, abs_per_k);
    });
}

/* ---------------- point-interaction chain ---------------- */

int bs_delta_levels(double g, int j_max, bs_delta** out) {
    return guarded([&]() -> int {
        if (int rc = require(out, "out")) return rc;
        return make_handle(delta_levels(g, j_max), out);
    });
}

void bs_delta_free(bs_delta* d) { delete d; }

int bs_delta_j_max(const bs_delta* d, int* out) {
    return guarded([&]() -> int {
        if (int rc = require(d, "delta")) return rc;
        if (int rc = require(out, "out")) return rc;
        *out = d->impl.j_max;
        return BS_OK;
    });
}

int bs_delta_even_level(const bs_delta* d, int j, double* beta_out, double* lambda_out,
                        double* c_norm_out) {
    return guarded([&]() -> int {
        if (int rc = require(d, "delta")) return rc;
        if (j < 1 || j > d->impl.j_max)
            return fail(BS_ERR_INVALID_ARGUMENT, "level index out of range");
        if (beta_out) *beta_out = d->impl.beta[static_cast<size_t>(j - 1)];
        if (lambda_out) *lambda_out = d->impl.lambda_even[static_cast<size_t>(j - 1)];
        if (c_norm_out) *c_norm_out = d->impl.c_norm[static_cast<size_t>(j - 1)];
        return BS_OK;
    });
}

int bs_delta_odd_level(const bs_delta* d, int j, double* lambda_out) {
    return guarded([&]() -> int {
        if (int rc = require(d, "delta")) return rc;
        if (int rc = require(lambda_out, "lambda_out")) return rc;
        if (j < 1) return fail(BS_ERR_INVALID_ARGUMENT, "level index must be >= 1");
        *lambda_out = d->impl.odd_level(j);
        return BS_OK;
    });
}

int bs_delta_quantization_residual(const bs_delta* d, int j, double* out) {
    return guarded([&]() -> int {
        if (int rc = require(d, "delta")) return rc;
        if (int rc = require(out, "out")) return rc;
        *out = delta_quantization_residual(d->impl, j);
        return BS_OK;
    });
}

int bs_delta_pi(const bs_delta* d, int j, double* exact_re, double* exact_im,
                double* leading_re, double* leading_im, double* remainder_abs) {
    return guarded([&]() -> int {
        if (int rc = require(d, "delta")) return rc;
        PiAsymptote pi = delta_pi(d->impl, j);
        if (exact_re) *exact_re = pi.exact.real();
        if (exact_im) *exact_im = pi.exact.imag();
        if (leading_re) *leading_re = pi.leading.real();
        if (leading_im) *leading_im = pi.leading.imag();
        if (remainder_abs) *remainder_abs = std::abs(pi.remainder);
        return BS_OK;
    });
}

int bs_riemann_partial_sum(double t, int j_cutoff, double* out) {
    return guarded([&]() -> int {
        if (int rc = require(out, "out")) return rc;
        *out = riemann_partial_sum(t, j_cutoff);
        return BS_OK;
    });
}

int bs_holder_fit(double t_min, double t_max, int j_cutoff, int n_points,
                  double tail_fraction, double* exponent_out) {
    return guarded([&]() -> int {
        if (int rc = require(exponent_out, "exponent_out")) return rc;
        HolderFit fit = holder_fit(t_min, t_max, j_cutoff, n_points, tail_fraction);
        *exponent_out = fit.exponent;
        return BS_OK;
    });
}

int bs_delta_sumrule_divergence(const bs_delta* d, const int* cutoffs, int n_cutoffs,
                                double* partial_sums_out, double* measured_slope_out,
                                double* predicted_slope_out) {
    return guarded([&]() -> int {
        if (int rc = require(d, "delta")) return rc;
        if (int rc = require(cutoffs, "cutoffs")) return rc;
        if (n_cutoffs < 1) return fail(BS_ERR_INVALID_ARGUMENT, "n_cutoffs < 1");
        SumRuleSlopeReport rep = delta_sumrule_divergence(
            d->impl, std::span<const int>(cutoffs, static_cast<size_t>(n_cutoffs)));
        for (size_t i = 0; i < rep.partial_sums.size(); ++i)
            if (partial_sums_out) partial_sums_out[i] = rep.partial_sums[i];
        if (measured_slope_out) *measured_slope_out = rep.measured_slope;
        if (predicted_slope_out) *predicted_slope_out = rep.predicted_slope;
        return BS_OK;
    });
}

} /* extern "C" */
