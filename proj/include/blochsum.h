/*
 * blochsum -- periodic Schroedinger fibers, velocity matrix elements, decay
 * and sum-rule diagnostics, Fermi-Dirac contour traces, and the semi-analytic
 * point-interaction chain, behind a flat C interface.
 *
 * Conventions
 *  - Every function returns a status code (BS_OK == 0 on success) except the
 *    _free functions.  On failure, outputs are untouched unless a function
 *    documents otherwise, and bs_last_error() holds a thread-local message.
 *  - Opaque handles are created by bs_*_create/bs_solve_* and released by the
 *    matching bs_*_free (NULL is ignored).  Handles are immutable after
 *    creation and may be shared across threads.
 *  - Quasi-momenta and frequencies are passed as length-3 arrays; components
 *    beyond the active dimension must be zero.
 *  - Caller-allocated buffers: sizes are documented per call; the library
 *    never allocates memory it hands to the caller.
 *  - Band and level indices at this interface are 1-based (band 1 is the
 *    lowest); direction indices alpha are 0-based (0 => x).
 */
#ifndef BLOCHSUM_H
#define BLOCHSUM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define BS_API __declspec(dllexport)
#else
#define BS_API __attribute__((visibility("default")))
#endif

enum bs_status {
    BS_OK = 0,
    BS_ERR_INVALID_ARGUMENT = 1, /* bad parameter, size limit, or precondition */
    BS_ERR_RUNTIME = 2,          /* numerical failure inside the library */
    BS_ERR_DEGENERATE = 3,       /* band gap below threshold; result skipped */
    BS_ERR_DIVERGED = 4,         /* iteration did not converge; last iterate returned */
    BS_ERR_NOMEM = 5,
    BS_ERR_NULL = 6 /* required pointer argument was NULL */
};

/* Stable name for a status code ("BS_OK", ...). */
BS_API const char* bs_error_name(int code);
/* Message describing the most recent failure on this thread ("" if none). */
BS_API const char* bs_last_error(void);
/* Library version. Any output pointer may be NULL. */
BS_API void bs_version(int* major, int* minor, int* patch);

typedef struct bs_potential bs_potential;
typedef struct bs_basis bs_basis;
typedef struct bs_kgrid bs_kgrid;
typedef struct bs_spectrum bs_spectrum;
typedef struct bs_momentum bs_momentum;
typedef struct bs_delta bs_delta;

/* Truncated rectangle contour enclosing the spectrum window [left, x_max],
 * strip half-width delta (must stay below pi/(2 beta)), with the Fermi
 * factor parameters; n_quad is the node target per horizontal edge. */
typedef struct bs_contour {
    double beta;
    double mu;
    double delta;
    double x_max;
    double left;
    int n_quad;
} bs_contour;

/* ---------------- potentials ---------------- */

BS_API int bs_potential_zero(int dim, double shift, bs_potential** out);
BS_API int bs_potential_trig(int dim, const double* amplitudes, int n_amplitudes,
                             double shift, bs_potential** out);
BS_API int bs_potential_power_law(int dim, double amplitude, double decay_exponent,
                                  int cutoff, double shift, bs_potential** out);
BS_API int bs_potential_gaussian(int dim, double amplitude, double width, int cutoff,
                                 double shift, bs_potential** out);
BS_API int bs_potential_truncated_delta(int dim, double strength, int cutoff,
                                        double shift, bs_potential** out);
BS_API int bs_potential_random_smooth(int dim, double amplitude, double width,
                                      int cutoff, uint64_t seed, double shift,
                                      bs_potential** out);
BS_API void bs_potential_free(bs_potential* p);
/* Fourier coefficient at integer frequency m (0 off the support). */
BS_API int bs_potential_coefficient(const bs_potential* p, const int m[3], double* re,
                                    double* im);
BS_API int bs_potential_support_radius(const bs_potential* p, int* out);
/* Number of stored coefficients. */
BS_API int bs_potential_n_coefficients(const bs_potential* p, int* out);

/* ---------------- basis and k-grid ---------------- */

/* Plane waves with |m_alpha| <= m_cut; size_limit <= 0 selects the built-in
 * cap on (2 m_cut + 1)^dim. */
BS_API int bs_basis_create(int dim, int m_cut, int size_limit, bs_basis** out);
BS_API void bs_basis_free(bs_basis* b);
BS_API int bs_basis_size(const bs_basis* b, int* out);
BS_API int bs_basis_frequency(const bs_basis* b, int idx, int m_out[3]);

/* Shifted midpoint grid over [-pi, pi)^dim; weights sum to (2 pi)^dim. */
BS_API int bs_kgrid_create(int dim, int points_per_axis, double offset,
                           bs_kgrid** out);
BS_API void bs_kgrid_free(bs_kgrid* g);
BS_API int bs_kgrid_size(const bs_kgrid* g, int* out);
BS_API int bs_kgrid_point(const bs_kgrid* g, int idx, double k_out[3],
                          double* weight_out);

/* ---------------- fiber spectra ---------------- */

BS_API int bs_solve_fiber(const bs_potential* v, const bs_basis* b, const double k[3],
                          int n_bands, bs_spectrum** out);
BS_API void bs_spectrum_free(bs_spectrum* s);
BS_API int bs_spectrum_n_bands(const bs_spectrum* s, int* out);
/* Bands above half the basis size are truncation artefacts. */
BS_API int bs_spectrum_trusted_bands(const bs_spectrum* s, int* out);
/* buf receives min(buf_len, n_bands) ascending eigenvalues. */
BS_API int bs_spectrum_eigenvalues(const bs_spectrum* s, double* buf, int buf_len);
/* Plane-wave coefficient of `band` at basis index idx (phase-fixed gauge). */
BS_API int bs_spectrum_coefficient(const bs_spectrum* s, int band, int idx, double* re,
                                   double* im);
/* Largest |h - h^H| entry of the assembled fiber matrix at k. */
BS_API int bs_fiber_hermiticity_defect(const bs_potential* v, const bs_basis* b,
                                       const double k[3], double* out);
/* Eigenvalues over the whole grid, row-major n_k x n_bands into
 * eigenvalues_out (length >= n_k * n_bands).  workers <= 1 runs serial. */
BS_API int bs_band_structure(const bs_potential* v, const bs_basis* b,
                             const bs_kgrid* g, int n_bands, int workers,
                             double* eigenvalues_out);

/* ---------------- velocity matrix elements ---------------- */

BS_API int bs_momentum_matrix(const bs_spectrum* s, int alpha, bs_momentum** out);
BS_API void bs_momentum_free(bs_momentum* m);
BS_API int bs_momentum_n_bands(const bs_momentum* m, int* out);
BS_API int bs_momentum_entry(const bs_momentum* m, int s, int t, double* re,
                             double* im);
BS_API int bs_momentum_hermiticity_defect(const bs_momentum* m, double* out);
/* |diagonal element - half the finite-difference band slope|.  Returns
 * BS_ERR_DEGENERATE when the band gap at k is below gap_tol. */
BS_API int bs_feynman_hellmann_check(const bs_potential* v, const bs_basis* b,
                                     const double k[3], int band, int alpha,
                                     double h_fd, double gap_tol,
                                     double* residual_out);
/* Coefficient l1-norm bound per trusted band plus a log-log growth fit.
 * eigen_buf/bound_buf hold min(buf_len, n) entries; *n_out is the full count. */
BS_API int bs_supnorm_growth(const bs_spectrum* s, double* eigen_buf,
                             double* bound_buf, int buf_len, int* n_out,
                             double* exponent_out);

/* ---------------- decay diagnostics ---------------- */

/* Smallest C with |pi(s,t)| <= C lambda_s^{order+1/2} / lambda_t^order over
 * s <= s_max, t <= t_max, with the attaining pair. */
BS_API int bs_polynomial_weight_bound(const bs_spectrum* s, const bs_momentum* m,
                                      int order, int s_max, int t_max,
                                      double* constant_out, int* arg_s_out,
                                      int* arg_t_out);
/* Log-log fit of the row-envelope decay of |pi(band, .)| over the eigenvalue
 * window; *degenerate_out is 1 when everything is at roundoff (no fit). */
BS_API int bs_decay_exponent_fit(const bs_spectrum* s, const bs_momentum* m, int band,
                                 double lambda_lo, double lambda_hi, int n_bins,
                                 double* exponent_out, double* amplitude_out,
                                 int* degenerate_out);
/* Largest singular value of the weighted commutator matrix on each leading
 * section; norms_out has n_cutoffs entries. */
BS_API int bs_commutator_norm(const bs_spectrum* s, const bs_momentum* m, int order,
                              const int* cutoffs, int n_cutoffs, double* norms_out,
                              int* stabilized_out);

/* ---------------- sum rules ---------------- */

/* Expectation of the second derivative of V in `band` along alpha. */
BS_API int bs_sumrule_lhs(const bs_potential* v, const bs_spectrum* s, int band,
                          int alpha, double* out);
/* Partial sums 2 sum_{n<=J} |pi(band,n)|^2 (lambda_n - lambda_band) at each
 * cutoff (partial_sums_out: n_cutoffs entries) and the linear trend of the
 * upper half of the ladder. */
BS_API int bs_sumrule_rhs_partial(const bs_spectrum* s, const bs_momentum* m, int band,
                                  const int* cutoffs, int n_cutoffs,
                                  double* partial_sums_out, double* slope_out);
/* S_J(t) = 2 sum_{n<=cutoff} |pi(band,n)|^2 sin(t (lambda_band - lambda_n)). */
BS_API int bs_oscillation_series(const bs_spectrum* s, const bs_momentum* m, int band,
                                 const double* times, int n_times, int cutoff,
                                 double* values_out);

/* ---------------- perturbation tools ---------------- */

/* Ground-band energy at k by the projected fixed-point closure around k0.
 * On BS_ERR_DIVERGED the outputs still receive the last iterate. */
BS_API int bs_feshbach_ground_energy(const bs_potential* v, const bs_basis* b,
                                     const double k0[3], const double k[3], double tol,
                                     int max_iterations, double* lambda_out,
                                     int* iterations_out, int* converged_out);
/* Second derivative of the band dispersion from second-order perturbation
 * theory.  BS_ERR_DEGENERATE when a neighbour sits closer than gap_tol. */
BS_API int bs_kp_second_derivative(const bs_spectrum* s, const bs_momentum* m,
                                   int band, double gap_tol, double* out);
/* Fourth-order nested band sum per cutoff (values_*: n_cutoffs entries),
 * the mirrored-order value at the largest cutoff, the absolute majorant
 * A_J per cutoff, and a Cauchy flag on A_J at cauchy_tol. */
BS_API int bs_nested_sum(const bs_spectrum* s, const bs_momentum* m,
                         const int* cutoffs, int n_cutoffs, double cauchy_tol,
                         double* values_re, double* values_im, double* abs_sums,
                         double* reversed_re, double* reversed_im,
                         double* last_rel_increment, int* converged_out);

/* ---------------- Fermi factor and contour ---------------- */

BS_API int bs_fermi_value(double beta, double mu, double x, double* out);
/* order in [0, 8]; order 0 returns the value itself. */
BS_API int bs_fermi_derivative(double beta, double mu, int order, double x,
                               double* out);
/* Divided difference of the Fermi factor over the nodes; nodes closer than
 * confluence_tol collapse onto derivatives (clusters capped at order 8+1). */
BS_API int bs_divided_difference(double beta, double mu, const double* nodes,
                                 int n_nodes, double confluence_tol, double* out);
/* Quadrature of f(z) prod (pole_j - z)^{-1} around the contour; equals
 * (-1)^n 2 pi i f[pole_1, ..., pole_n] up to quadrature error.  Poles must
 * lie inside with margin delta.  tail_out (optional) receives the Fermi
 * factor magnitude at x_max. */
BS_API int bs_contour_quadrature(const bs_contour* c, const double* poles, int n_poles,
                                 double* re_out, double* im_out, double* tail_out);

/* ---------------- trace per unit volume ---------------- */

/* Brillouin-averaged trace of the velocity/resolvent product with the Fermi
 * weight, n_alphas in [1,4] direction factors.  Band-sum route: eigenbasis +
 * divided differences with band_cutoff bands.  per_k_* and abs_per_k are
 * optional (NULL) buffers of n_k entries. */
BS_API int bs_trace_band_sum(const bs_potential* v, const bs_basis* b,
                             const bs_contour* c, const int* alphas, int n_alphas,
                             int band_cutoff, const bs_kgrid* g, int workers,
                             double* re_out, double* im_out, double* per_k_re,
                             double* per_k_im, double* abs_per_k);
/* Direct route: dense resolvents on the contour nodes, no eigenbasis. */
BS_API int bs_trace_direct(const bs_potential* v, const bs_basis* b,
                           const bs_contour* c, const int* alphas, int n_alphas,
                           const bs_kgrid* g, int workers, double* re_out,
                           double* im_out, double* per_k_re, double* per_k_im,
                           double* abs_per_k);

/* ---------------- point-interaction chain ---------------- */

/* Semi-analytic levels of the 1-D delta fiber at k=0: even levels from the
 * quantization condition beta tan(beta/2) = g, odd levels 4 pi^2 j^2. */
BS_API int bs_delta_levels(double g, int j_max, bs_delta** out);
BS_API void bs_delta_free(bs_delta* d);
BS_API int bs_delta_j_max(const bs_delta* d, int* out);
BS_API int bs_delta_even_level(const bs_delta* d, int j, double* beta_out,
                               double* lambda_out, double* c_norm_out);
BS_API int bs_delta_odd_level(const bs_delta* d, int j, double* lambda_out);
BS_API int bs_delta_quantization_residual(const bs_delta* d, int j, double* out);
/* Closed-form velocity element between the even ground state and odd level
 * j, with its 1/j asymptote; any output may be NULL. */
BS_API int bs_delta_pi(const bs_delta* d, int j, double* exact_re, double* exact_im,
                       double* leading_re, double* leading_im,
                       double* remainder_abs);
BS_API int bs_riemann_partial_sum(double t, int j_cutoff, double* out);
/* Growth exponent of |S_J(t)| on [t_min, t_max] (1/2 for the Riemann series).
 * Fails when the truncation tail 1/J exceeds tail_fraction of the smallest
 * sample. */
BS_API int bs_holder_fit(double t_min, double t_max, int j_cutoff, int n_points,
                         double tail_fraction, double* exponent_out);
/* Sum-rule partial sums over the odd levels per cutoff plus the fitted and
 * predicted divergence slopes (prediction 16 C_1^2 g^2). */
BS_API int bs_delta_sumrule_divergence(const bs_delta* d, const int* cutoffs,
                                       int n_cutoffs, double* partial_sums_out,
                                       double* measured_slope_out,
                                       double* predicted_slope_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* BLOCHSUM_H */
