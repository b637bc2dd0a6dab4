#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "util.hpp"

namespace cli {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr const char* kSec = "experiment";

struct FiberSetup {
    PotentialPtr v;
    BasisPtr basis;
    SpectrumPtr spec;
    int n_bands = 0;
    double k[3] = {0.0, 0.0, 0.0};
    int dim = 1;
};

// Shared preamble: potential + basis + one fiber solve at the configured k.
FiberSetup solve_configured_fiber(const IniConfig& cfg, const RunOptions& opts) {
    FiberSetup s;
    s.v = make_potential(cfg, cfg.get_string(kSec, "potential"), opts.seed);
    s.dim = cfg.get_int_or(cfg.get_string(kSec, "potential"), "dim", 1);
    s.basis = make_basis(s.dim, cfg.get_int(kSec, "m_cut"),
                         cfg.get_int_or(kSec, "size_limit", 0));
    read_kvec(cfg, kSec, "k", s.k);
    s.n_bands = cfg.get_int(kSec, "n_bands");
    s.spec = solve_fiber(s.v.get(), s.basis.get(), s.k, s.n_bands);
    return s;
}

json bound_to_json(int order, int t_max, double constant, int arg_s, int arg_t) {
    json j;
    j["order"] = order;
    j["t_max"] = t_max;
    j["constant"] = constant;
    j["attained_s"] = arg_s;
    j["attained_t"] = arg_t;
    return j;
}

}  // namespace

int run_spectrum(const IniConfig& cfg, const RunOptions& opts) {
    const std::string pot_name = cfg.get_string(kSec, "potential");
    PotentialPtr v = make_potential(cfg, pot_name, opts.seed);
    const int dim = cfg.get_int_or(pot_name, "dim", 1);
    BasisPtr basis = make_basis(dim, cfg.get_int(kSec, "m_cut"),
                                cfg.get_int_or(kSec, "size_limit", 0));
    KGridPtr grid = make_kgrid(dim, cfg.get_int(kSec, "grid_points"),
                               cfg.get_double_or(kSec, "grid_offset", 0.5));
    const int n_bands = cfg.get_int(kSec, "n_bands");

    int n_k = 0;
    check_status(bs_kgrid_size(grid.get(), &n_k), "querying k-grid");
    std::vector<double> table(static_cast<size_t>(n_k) * n_bands);
    check_status(bs_band_structure(v.get(), basis.get(), grid.get(), n_bands,
                                   opts.workers, table.data()),
                 "computing band structure");

    CsvWriter csv(opts.out_dir + "/bands.csv", {"k1", "k2", "k3", "band", "eigenvalue"});
    double lam_min = table[0], lam_max = table[0];
    for (int i = 0; i < n_k; ++i) {
        double k[3];
        double w;
        check_status(bs_kgrid_point(grid.get(), i, k, &w), "reading k-point");
        for (int j = 0; j < n_bands; ++j) {
            double lam = table[static_cast<size_t>(i) * n_bands + j];
            lam_min = std::min(lam_min, lam);
            lam_max = std::max(lam_max, lam);
            csv.row({fmt17(k[0]), fmt17(k[1]), fmt17(k[2]), std::to_string(j + 1),
                     fmt17(lam)});
        }
    }

    CheckLedger checks;
    // self-adjointness of the assembled fiber at the first grid point
    double k0[3];
    double w0;
    check_status(bs_kgrid_point(grid.get(), 0, k0, &w0), "reading k-point");
    double defect = 0.0;
    check_status(bs_fiber_hermiticity_defect(v.get(), basis.get(), k0, &defect),
                 "hermiticity defect");
    checks.bound("fiber_hermiticity", defect,
                 cfg.get_double_or(kSec, "hermiticity_tol", 1e-12));

    bool ascending = true;
    for (int i = 0; i < n_k && ascending; ++i)
        for (int j = 1; j < n_bands; ++j)
            if (table[static_cast<size_t>(i) * n_bands + j] <
                table[static_cast<size_t>(i) * n_bands + j - 1]) {
                ascending = false;
                break;
            }
    checks.require("eigenvalues_ascending", ascending);

    if (cfg.has_key(kSec, "continuity_bound")) {
        const double bound = cfg.get_double(kSec, "continuity_bound");
        double worst = 0.0;
        for (int j = 0; j < n_bands; ++j)
            for (int i = 1; i < n_k; ++i)
                worst = std::max(
                    worst, std::abs(table[static_cast<size_t>(i) * n_bands + j] -
                                    table[static_cast<size_t>(i - 1) * n_bands + j]));
        checks.bound("band_continuity", worst, bound,
                     "max |eigenvalue step| between neighbouring grid points");
    }

    json results;
    results["n_k"] = n_k;
    results["n_bands"] = n_bands;
    results["lambda_min"] = lam_min;
    results["lambda_max"] = lam_max;
    return write_report(opts.out_dir, "spectrum", cfg, results, checks);
}

int run_pimatrix(const IniConfig& cfg, const RunOptions& opts) {
    FiberSetup s = solve_configured_fiber(cfg, opts);
    const int alpha = cfg.get_int_or(kSec, "alpha", 0);
    MomentumPtr pi = make_momentum(s.spec.get(), alpha);

    CsvWriter csv(opts.out_dir + "/pimatrix.csv", {"s", "t", "re", "im"});
    double max_abs = 0.0, frob2 = 0.0;
    int max_s = 1, max_t = 1;
    for (int a = 1; a <= s.n_bands; ++a)
        for (int b = 1; b <= s.n_bands; ++b) {
            double re = 0.0, im = 0.0;
            check_status(bs_momentum_entry(pi.get(), a, b, &re, &im),
                         "reading velocity entry");
            double mag = std::hypot(re, im);
            frob2 += mag * mag;
            if (mag > max_abs) {
                max_abs = mag;
                max_s = a;
                max_t = b;
            }
            csv.row({std::to_string(a), std::to_string(b), fmt17(re), fmt17(im)});
        }

    CheckLedger checks;
    double defect = 0.0;
    check_status(bs_momentum_hermiticity_defect(pi.get(), &defect),
                 "hermiticity defect");
    checks.bound("velocity_hermiticity", defect,
                 cfg.get_double_or(kSec, "hermiticity_tol", 1e-12));

    const int band = cfg.get_int_or(kSec, "band", 1);
    double residual = 0.0;
    check_status(bs_feynman_hellmann_check(
                     s.v.get(), s.basis.get(), s.k, band, alpha,
                     cfg.get_double_or(kSec, "h_fd", 1e-4),
                     cfg.get_double_or(kSec, "gap_tol", 1e-8), &residual),
                 "band-slope consistency");
    checks.bound("band_slope_residual", residual,
                 cfg.get_double_or(kSec, "fh_tol", 1e-6));

    json results;
    results["n_bands"] = s.n_bands;
    results["alpha"] = alpha;
    results["frobenius_norm"] = std::sqrt(frob2);
    results["max_entry"] = {{"s", max_s}, {"t", max_t}, {"abs", max_abs}};
    return write_report(opts.out_dir, "pimatrix", cfg, results, checks);
}

int run_decay(const IniConfig& cfg, const RunOptions& opts) {
    FiberSetup s = solve_configured_fiber(cfg, opts);
    const int alpha = cfg.get_int_or(kSec, "alpha", 0);
    MomentumPtr pi = make_momentum(s.spec.get(), alpha);
    const int band = cfg.get_int_or(kSec, "band", 1);

    std::vector<double> lam(static_cast<size_t>(s.n_bands));
    check_status(bs_spectrum_eigenvalues(s.spec.get(), lam.data(), s.n_bands),
                 "reading eigenvalues");

    CsvWriter csv(opts.out_dir + "/envelope.csv", {"t", "lambda_t", "abs_pi"});
    for (int t = 1; t <= s.n_bands; ++t) {
        double re = 0.0, im = 0.0;
        check_status(bs_momentum_entry(pi.get(), band, t, &re, &im),
                     "reading velocity entry");
        csv.row({std::to_string(t), fmt17(lam[static_cast<size_t>(t - 1)]),
                 fmt17(std::hypot(re, im))});
    }

    CheckLedger checks;
    json results;

    // polynomial weight-bound constants and their t_max stabilization
    std::vector<int> orders = cfg.get_ints(kSec, "orders");
    const int s_max = cfg.get_int_or(kSec, "s_max", 4);
    const int t_small = cfg.get_int(kSec, "t_max_small");
    const int t_large = cfg.get_int(kSec, "t_max_large");
    const double stability_tol = cfg.get_double_or(kSec, "stability_tol", 0.01);
    const bool expect_stable = cfg.get_bool_or(kSec, "expect_stable", true);
    json bounds = json::array();
    for (int order : orders) {
        double c_small = 0.0, c_large = 0.0;
        int as = 0, at = 0;
        check_status(bs_polynomial_weight_bound(s.spec.get(), pi.get(), order, s_max,
                                                t_small, &c_small, &as, &at),
                     "weight bound");
        bounds.push_back(bound_to_json(order, t_small, c_small, as, at));
        check_status(bs_polynomial_weight_bound(s.spec.get(), pi.get(), order, s_max,
                                                t_large, &c_large, &as, &at),
                     "weight bound");
        bounds.push_back(bound_to_json(order, t_large, c_large, as, at));
        double rel_change = std::abs(c_large - c_small) / std::max(1e-300, c_small);
        if (expect_stable)
            checks.bound("weight_bound_stable_order_" + std::to_string(order),
                         rel_change, stability_tol,
                         "relative change of the constant when t_max grows");
        else
            checks.require("weight_bound_grows_order_" + std::to_string(order),
                           rel_change > stability_tol,
                           "constant must keep growing with t_max");
    }
    results["weight_bounds"] = bounds;

    // envelope decay fit over a configured eigenvalue window
    const int lo_band = cfg.get_int(kSec, "fit_lo_band");
    const int hi_band = cfg.get_int(kSec, "fit_hi_band");
    double exponent = 0.0, amplitude = 0.0;
    int degenerate = 0;
    check_status(bs_decay_exponent_fit(s.spec.get(), pi.get(), band,
                                       lam[static_cast<size_t>(lo_band - 1)],
                                       lam[static_cast<size_t>(hi_band - 1)],
                                       cfg.get_int_or(kSec, "n_bins", 12), &exponent,
                                       &amplitude, &degenerate),
                 "envelope fit");
    results["fit"] = {{"exponent", exponent},
                      {"amplitude", amplitude},
                      {"degenerate", degenerate != 0}};
    checks.require("fit_not_degenerate", degenerate == 0);
    if (cfg.has_key(kSec, "exponent_max"))
        checks.require("fit_exponent_below_max",
                       exponent <= cfg.get_double(kSec, "exponent_max"),
                       "fitted exponent vs configured ceiling");

    // weighted commutator norms over leading sections
    std::vector<int> cutoffs = cfg.get_ints(kSec, "comm_cutoffs");
    std::vector<double> norms(cutoffs.size());
    int stabilized = 0;
    check_status(bs_commutator_norm(s.spec.get(), pi.get(),
                                    cfg.get_int_or(kSec, "comm_order", 1),
                                    cutoffs.data(), static_cast<int>(cutoffs.size()),
                                    norms.data(), &stabilized),
                 "commutator norms");
    results["commutator"] = {{"cutoffs", cutoffs},
                             {"norms", norms},
                             {"stabilized", stabilized != 0}};
    if (cfg.has_key(kSec, "expect_comm_stabilized"))
        checks.require("commutator_norms_stabilized",
                       (stabilized != 0) == cfg.get_bool(kSec, "expect_comm_stabilized"));

    return write_report(opts.out_dir, "decay", cfg, results, checks);
}

int run_sumrule(const IniConfig& cfg, const RunOptions& opts) {
    FiberSetup s = solve_configured_fiber(cfg, opts);
    const int alpha = cfg.get_int_or(kSec, "alpha", 0);
    MomentumPtr pi = make_momentum(s.spec.get(), alpha);
    const int band = cfg.get_int_or(kSec, "band", 1);

    double lhs = 0.0;
    check_status(bs_sumrule_lhs(s.v.get(), s.spec.get(), band, alpha, &lhs),
                 "second-derivative expectation");

    std::vector<int> cutoffs = cfg.get_ints(kSec, "cutoffs");
    std::vector<double> partial(cutoffs.size());
    double slope = 0.0;
    check_status(bs_sumrule_rhs_partial(s.spec.get(), pi.get(), band, cutoffs.data(),
                                        static_cast<int>(cutoffs.size()),
                                        partial.data(), &slope),
                 "partial sums");

    CsvWriter sums_csv(opts.out_dir + "/partial_sums.csv", {"J", "R_J"});
    for (size_t i = 0; i < cutoffs.size(); ++i)
        sums_csv.row({std::to_string(cutoffs[i]), fmt17(partial[i])});

    CheckLedger checks;
    json results;
    results["lhs"] = lhs;
    results["final_partial_sum"] = partial.back();
    results["gap"] = partial.back() - lhs;
    results["tail_slope"] = slope;

    if (band == 1) {
        bool monotone = true;
        for (size_t i = 1; i < partial.size(); ++i)
            if (partial[i] < partial[i - 1] - 1e-12) monotone = false;
        checks.require("partial_sums_monotone", monotone,
                       "ground-band terms are all non-negative");
    }
    if (cfg.get_bool_or(kSec, "expect_convergence", true)) {
        const double rel_tol = cfg.get_double(kSec, "rel_tol");
        checks.bound("partial_sum_matches_lhs",
                     (partial.back() - lhs) / std::max(1e-300, std::abs(lhs)), rel_tol,
                     "relative gap at the largest cutoff");
    }

    if (cfg.has_key(kSec, "times")) {
        std::vector<double> times = cfg.get_doubles(kSec, "times");
        std::vector<double> osc(times.size());
        check_status(bs_oscillation_series(s.spec.get(), pi.get(), band, times.data(),
                                           static_cast<int>(times.size()),
                                           cfg.get_int_or(kSec, "osc_cutoff",
                                                          cutoffs.back()),
                                           osc.data()),
                     "oscillation series");
        CsvWriter osc_csv(opts.out_dir + "/oscillation.csv", {"t", "S"});
        for (size_t i = 0; i < times.size(); ++i)
            osc_csv.row({fmt17(times[i]), fmt17(osc[i])});
        results["oscillation_points"] = times.size();
    }

    return write_report(opts.out_dir, "sumrule", cfg, results, checks);
}

int run_perturb(const IniConfig& cfg, const RunOptions& opts) {
    FiberSetup s = solve_configured_fiber(cfg, opts);
    const int alpha = cfg.get_int_or(kSec, "alpha", 0);
    MomentumPtr pi = make_momentum(s.spec.get(), alpha);

    CheckLedger checks;
    json results;

    // ground-energy fixed point around k0
    double k0[3];
    read_kvec(cfg, kSec, "k0", k0);
    double lambda = 0.0;
    int iterations = 0, converged = 0;
    int st = bs_feshbach_ground_energy(s.v.get(), s.basis.get(), k0, s.k,
                                       cfg.get_double_or(kSec, "tol", 1e-10),
                                       cfg.get_int_or(kSec, "max_iterations", 50),
                                       &lambda, &iterations, &converged);
    if (st != BS_OK && st != BS_ERR_DIVERGED)
        check_status(st, "ground-energy fixed point");
    results["fixed_point"] = {{"lambda", lambda},
                              {"iterations", iterations},
                              {"converged", converged != 0}};
    checks.require("fixed_point_converged",
                   (converged != 0) == cfg.get_bool_or(kSec, "expect_converged", true),
                   "convergence state vs expectation");

    // band curvature from second-order perturbation theory vs finite difference
    const int band = cfg.get_int_or(kSec, "band", 1);
    double curvature = 0.0;
    check_status(bs_kp_second_derivative(s.spec.get(), pi.get(), band,
                                         cfg.get_double_or(kSec, "gap_tol", 1e-8),
                                         &curvature),
                 "band curvature");
    json kp = {{"value", curvature}};
    if (cfg.has_key(kSec, "kp_fd_rel_tol")) {
        const double h = cfg.get_double_or(kSec, "kp_fd_step", 1e-3);
        double kp_plus[3] = {s.k[0], s.k[1], s.k[2]};
        double kp_minus[3] = {s.k[0], s.k[1], s.k[2]};
        kp_plus[alpha] += h;
        kp_minus[alpha] -= h;
        SpectrumPtr plus = solve_fiber(s.v.get(), s.basis.get(), kp_plus, band);
        SpectrumPtr minus = solve_fiber(s.v.get(), s.basis.get(), kp_minus, band);
        std::vector<double> lp(static_cast<size_t>(band)), lm(static_cast<size_t>(band)),
            lc(static_cast<size_t>(band));
        check_status(bs_spectrum_eigenvalues(plus.get(), lp.data(), band), "eigenvalues");
        check_status(bs_spectrum_eigenvalues(minus.get(), lm.data(), band),
                     "eigenvalues");
        check_status(bs_spectrum_eigenvalues(s.spec.get(), lc.data(), band),
                     "eigenvalues");
        double fd = (lp[static_cast<size_t>(band - 1)] -
                     2.0 * lc[static_cast<size_t>(band - 1)] +
                     lm[static_cast<size_t>(band - 1)]) /
                    (h * h);
        kp["fd_value"] = fd;
        double rel = std::abs(curvature - fd) / std::max(1e-300, std::abs(fd));
        kp["rel_diff"] = rel;
        checks.bound("curvature_matches_fd", rel, cfg.get_double(kSec, "kp_fd_rel_tol"),
                     "series curvature vs central second difference");
    }
    results["curvature"] = kp;

    // fourth-order nested band sums
    std::vector<int> cutoffs = cfg.get_ints(kSec, "cutoffs");
    const size_t nc = cutoffs.size();
    std::vector<double> vre(nc), vim(nc), abs_sums(nc);
    double rre = 0.0, rim = 0.0, last_inc = 0.0;
    int nested_converged = 0;
    check_status(bs_nested_sum(s.spec.get(), pi.get(), cutoffs.data(),
                               static_cast<int>(nc),
                               cfg.get_double_or(kSec, "cauchy_tol", 1e-8), vre.data(),
                               vim.data(), abs_sums.data(), &rre, &rim, &last_inc,
                               &nested_converged),
                 "nested band sum");
    results["nested"] = {{"cutoffs", cutoffs},
                         {"values_re", vre},
                         {"values_im", vim},
                         {"abs_majorants", abs_sums},
                         {"reversed_re", rre},
                         {"reversed_im", rim},
                         {"last_rel_increment", last_inc},
                         {"cauchy", nested_converged != 0}};
    checks.require("nested_cauchy",
                   (nested_converged != 0) ==
                       cfg.get_bool_or(kSec, "expect_cauchy", true),
                   "majorant Cauchy state vs expectation");
    if (cfg.get_bool_or(kSec, "expect_cauchy", true)) {
        double scale = std::max(1.0, std::hypot(vre.back(), vim.back()));
        checks.bound("nested_order_independent",
                     std::hypot(vre.back() - rre, vim.back() - rim) / scale,
                     cfg.get_double_or(kSec, "order_tol", 1e-8),
                     "forward vs mirrored summation order at the largest cutoff");
    }

    return write_report(opts.out_dir, "perturb", cfg, results, checks);
}

int run_trace(const IniConfig& cfg, const RunOptions& opts) {
    const std::string pot_name = cfg.get_string(kSec, "potential");
    PotentialPtr v = make_potential(cfg, pot_name, opts.seed);
    const int dim = cfg.get_int_or(pot_name, "dim", 1);
    BasisPtr basis = make_basis(dim, cfg.get_int(kSec, "m_cut"),
                                cfg.get_int_or(kSec, "size_limit", 0));
    KGridPtr grid = make_kgrid(dim, cfg.get_int(kSec, "grid_points"),
                               cfg.get_double_or(kSec, "grid_offset", 0.5));

    bs_contour contour;
    contour.beta = cfg.get_double(kSec, "beta");
    contour.mu = cfg.get_double(kSec, "mu");
    contour.delta = cfg.get_double(kSec, "delta");
    contour.x_max = cfg.get_double(kSec, "x_max");
    contour.left = cfg.get_double_or(kSec, "left", -5.0);
    contour.n_quad = cfg.get_int(kSec, "n_quad");

    std::vector<int> alphas = cfg.get_ints(kSec, "alphas");
    const int band_cutoff = cfg.get_int(kSec, "band_cutoff");

    int n_k = 0;
    check_status(bs_kgrid_size(grid.get(), &n_k), "querying k-grid");
    std::vector<double> per_re(static_cast<size_t>(n_k)), per_im(per_re.size()),
        per_abs(per_re.size());
    double band_re = 0.0, band_im = 0.0;
    check_status(bs_trace_band_sum(v.get(), basis.get(), &contour, alphas.data(),
                                   static_cast<int>(alphas.size()), band_cutoff,
                                   grid.get(), opts.workers, &band_re, &band_im,
                                   per_re.data(), per_im.data(), per_abs.data()),
                 "band-sum trace");

    CheckLedger checks;
    json results;
    results["value_re"] = band_re;
    results["value_im"] = band_im;

    // value = 2 pi i x (real number) when every direction index is paired
    // with itself; report the normalized imaginary part either way
    std::complex<double> normalized =
        std::complex<double>(band_re, band_im) / std::complex<double>(0.0, 2.0 * kPi);
    results["normalized_re"] = normalized.real();
    results["normalized_im"] = normalized.imag();
    if (std::all_of(alphas.begin(), alphas.end(),
                    [&](int a) { return a == alphas.front(); }))
        checks.bound("normalized_imaginary_part", normalized.imag(),
                     cfg.get_double_or(kSec, "imag_tol", 1e-8),
                     "imaginary part of value / (2 pi i)");

    const bool compare = cfg.get_bool_or(kSec, "compare_direct", true);
    std::vector<double> dre, dim_v;
    if (compare) {
        dre.resize(per_re.size());
        dim_v.resize(per_re.size());
        double direct_re = 0.0, direct_im = 0.0;
        check_status(bs_trace_direct(v.get(), basis.get(), &contour, alphas.data(),
                                     static_cast<int>(alphas.size()), grid.get(),
                                     opts.workers, &direct_re, &direct_im, dre.data(),
                                     dim_v.data(), nullptr),
                     "direct trace");
        results["direct_re"] = direct_re;
        results["direct_im"] = direct_im;

        double scale = std::max(1.0, std::hypot(direct_re, direct_im));
        double rel = std::hypot(band_re - direct_re, band_im - direct_im) / scale;
        // name the worst k-point so a failure is actionable
        int worst = 0;
        double worst_diff = -1.0;
        for (int i = 0; i < n_k; ++i) {
            double d = std::hypot(per_re[static_cast<size_t>(i)] -
                                      dre[static_cast<size_t>(i)],
                                  per_im[static_cast<size_t>(i)] -
                                      dim_v[static_cast<size_t>(i)]);
            if (d > worst_diff) {
                worst_diff = d;
                worst = i;
            }
        }
        double wk[3];
        double ww;
        check_status(bs_kgrid_point(grid.get(), worst, wk, &ww), "reading k-point");
        checks.bound("band_sum_matches_direct", rel,
                     cfg.get_double(kSec, "rel_tol"),
                     "largest per-k mismatch at k index " + std::to_string(worst) +
                         ", k = (" + fmt17(wk[0]) + ", " + fmt17(wk[1]) + ", " +
                         fmt17(wk[2]) + ")");
    }

    std::vector<std::string> cols = {"k1", "k2", "k3", "re", "im", "abs"};
    if (compare) {
        cols.push_back("direct_re");
        cols.push_back("direct_im");
    }
    CsvWriter csv(opts.out_dir + "/perk.csv", cols);
    for (int i = 0; i < n_k; ++i) {
        double k[3];
        double w;
        check_status(bs_kgrid_point(grid.get(), i, k, &w), "reading k-point");
        std::vector<std::string> cells = {
            fmt17(k[0]), fmt17(k[1]), fmt17(k[2]),
            fmt17(per_re[static_cast<size_t>(i)]),
            fmt17(per_im[static_cast<size_t>(i)]),
            fmt17(per_abs[static_cast<size_t>(i)])};
        if (compare) {
            cells.push_back(fmt17(dre[static_cast<size_t>(i)]));
            cells.push_back(fmt17(dim_v[static_cast<size_t>(i)]));
        }
        csv.row(cells);
    }

    return write_report(opts.out_dir, "trace", cfg, results, checks);
}

int run_delta(const IniConfig& cfg, const RunOptions& opts) {
    const double g = cfg.get_double_or(kSec, "g", 1.0);
    const int j_max = cfg.get_int(kSec, "j_max");
    DeltaPtr model;
    {
        bs_delta* raw = nullptr;
        check_status(bs_delta_levels(g, j_max, &raw), "solving point-interaction model");
        model.reset(raw);
    }

    CheckLedger checks;
    json results;

    CsvWriter levels_csv(opts.out_dir + "/levels.csv", {"j", "parity", "lambda"});
    double worst_residual = 0.0;
    double beta1 = 0.0, lambda1 = 0.0, c1 = 0.0;
    for (int j = 1; j <= j_max; ++j) {
        double beta = 0.0, lambda = 0.0, c = 0.0;
        check_status(bs_delta_even_level(model.get(), j, &beta, &lambda, &c),
                     "reading even level");
        if (j == 1) {
            beta1 = beta;
            lambda1 = lambda;
            c1 = c;
        }
        double odd = 0.0;
        check_status(bs_delta_odd_level(model.get(), j, &odd), "reading odd level");
        levels_csv.row({std::to_string(j), "even", fmt17(lambda)});
        levels_csv.row({std::to_string(j), "odd", fmt17(odd)});
        double r = 0.0;
        check_status(bs_delta_quantization_residual(model.get(), j, &r),
                     "quantization residual");
        worst_residual = std::max(worst_residual, std::abs(r) / (1.0 + beta * beta));
    }
    results["beta_1"] = beta1;
    results["lambda_1"] = lambda1;
    results["c_1"] = c1;
    checks.bound("quantization_residuals", worst_residual,
                 cfg.get_double_or(kSec, "residual_tol", 1e-13),
                 "max |residual| / (1 + beta^2) over all levels");

    const int pi_rows = cfg.get_int_or(kSec, "pi_rows", std::min(j_max, 200));
    CsvWriter pi_csv(opts.out_dir + "/pi.csv",
                     {"j", "im_exact", "im_leading", "remainder_abs"});
    for (int j = 1; j <= pi_rows; ++j) {
        double ex_re = 0.0, ex_im = 0.0, ld_re = 0.0, ld_im = 0.0, rem = 0.0;
        check_status(bs_delta_pi(model.get(), j, &ex_re, &ex_im, &ld_re, &ld_im, &rem),
                     "velocity element");
        pi_csv.row({std::to_string(j), fmt17(ex_im), fmt17(ld_im), fmt17(rem)});
    }

    std::vector<int> cutoffs = cfg.get_ints(kSec, "sumrule_cutoffs");
    std::vector<double> partial(cutoffs.size());
    double measured = 0.0, predicted = 0.0;
    check_status(bs_delta_sumrule_divergence(model.get(), cutoffs.data(),
                                             static_cast<int>(cutoffs.size()),
                                             partial.data(), &measured, &predicted),
                 "divergence slope");
    CsvWriter sums_csv(opts.out_dir + "/partial_sums.csv", {"J", "R_J"});
    for (size_t i = 0; i < cutoffs.size(); ++i)
        sums_csv.row({std::to_string(cutoffs[i]), fmt17(partial[i])});
    results["measured_slope"] = measured;
    results["predicted_slope"] = predicted;
    checks.bound("divergence_slope_matches_prediction",
                 (measured - predicted) / predicted,
                 cfg.get_double_or(kSec, "slope_rel_tol", 0.1),
                 "relative deviation from the asymptotic prediction");

    if (cfg.has_key(kSec, "holder_t_min")) {
        double exponent = 0.0;
        check_status(bs_holder_fit(cfg.get_double(kSec, "holder_t_min"),
                                   cfg.get_double(kSec, "holder_t_max"),
                                   cfg.get_int(kSec, "holder_j_cutoff"),
                                   cfg.get_int_or(kSec, "holder_points", 24),
                                   cfg.get_double_or(kSec, "holder_tail_fraction", 0.02),
                                   &exponent),
                     "growth-exponent fit");
        results["holder_exponent"] = exponent;
        const double lo = cfg.get_double_or(kSec, "holder_lo", 0.4);
        const double hi = cfg.get_double_or(kSec, "holder_hi", 0.6);
        checks.require("holder_exponent_in_range", exponent >= lo && exponent <= hi,
                       "fitted growth exponent inside [" + fmt17(lo) + ", " + fmt17(hi) +
                           "]");
    }

    return write_report(opts.out_dir, "delta", cfg, results, checks);
}

}  // namespace cli
