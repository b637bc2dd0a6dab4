#include "perturb.hpp"

#include <Eigen/LU>

#include <cmath>
#include <limits>

namespace blochsum {

FeshbachResult feshbach_ground_energy(const FourierPotential& v,
                                      std::shared_ptr<const PlaneWaveBasis> basis,
                                      const KVec& k0, const KVec& k, double tol,
                                      int max_iterations) {
    if (!basis) throw std::invalid_argument("feshbach: null basis");
    if (tol <= 0.0) throw std::invalid_argument("feshbach: tolerance must be positive");
    if (max_iterations < 1) throw std::invalid_argument("feshbach: need iterations >= 1");

    const int n = basis->size();
    FiberSpectrum ref = solve_fiber(v, basis, k0, std::min(2, n));
    if (ref.n_bands() > 1 && ref.eigenvalues(1) - ref.eigenvalues(0) < 1e-10)
        throw DegeneracyError("feshbach: ground band degenerate at the reference point");
    const double lambda0 = ref.eigenvalues(0);
    Vector u1 = ref.coeffs.row(0).transpose();

    // W = h(k) - h(k0) is diagonal in plane waves:
    // 2 sum_a dk_a (2 pi m_a + k0_a) + |dk|^2.
    RealVector w(n);
    double dk2 = 0.0;
    KVec dk{0.0, 0.0, 0.0};
    for (int a = 0; a < basis->dim(); ++a) {
        dk[a] = k[a] - k0[a];
        dk2 += dk[a] * dk[a];
    }
    for (int i = 0; i < n; ++i) {
        const IVec& m = basis->frequency(i);
        double s = 0.0;
        for (int a = 0; a < basis->dim(); ++a) s += dk[a] * (kTwoPi * m[a] + k0[a]);
        w(i) = 2.0 * s + dk2;
    }

    Matrix h = assemble_fiber(v, basis, k).h;
    Vector wu = w.asDiagonal() * u1;
    cxd u_wu = u1.adjoint() * wu;
    Vector b = wu - u1 * u_wu;  // projection of W u1 off the ground vector

    FeshbachResult out;
    out.first_order = lambda0 + u_wu.real();
    double lambda = out.first_order;

    auto rhs = [&](double lam) {
        // P (h - lam) P + |u1><u1| is invertible near the isolated ground
        // band; the rank-one pad keeps the solve on the orthogonal block.
        Matrix a = h;
        a.diagonal().array() -= lam;
        Vector au = a * u1;
        cxd uau = u1.adjoint() * au;
        a -= au * u1.adjoint();
        a -= u1 * au.adjoint();
        a += u1 * (uau * u1.adjoint());
        a += u1 * u1.adjoint();
        // LU rather than Cholesky: the padded block is positive definite only
        // while lam stays below the second band, and iterates may overshoot.
        Eigen::PartialPivLU<Matrix> solver(a);
        Vector x = solver.solve(b);
        cxd corr = b.adjoint() * x;
        return out.first_order - corr.real();
    };

    double prev_step = std::numeric_limits<double>::infinity();
    int growth_streak = 0;
    for (int it = 1; it <= max_iterations; ++it) {
        double next = rhs(lambda);
        double step = std::abs(next - lambda);
        out.iterations = it;
        out.last_step = step;
        if (step > prev_step) {
            // Damp when the residual stops shrinking; three growths in a row
            // means the map is not contracting at this k-distance.
            if (++growth_streak >= 3) {
                out.lambda = next;
                return out;
            }
            next = 0.5 * (next + lambda);
        } else {
            growth_streak = 0;
        }
        prev_step = step;
        lambda = next;
        if (step <= tol) {
            out.lambda = lambda;
            out.converged = true;
            return out;
        }
    }
    out.lambda = lambda;
    return out;
}

double kp_second_derivative(const FiberSpectrum& spec, const MomentumMatrix& pi,
                            int band, double gap_tol) {
    if (band < 1 || band > pi.n_bands())
        throw std::invalid_argument("kp_second_derivative: band out of range");
    if (band > spec.trusted_bands())
        throw std::invalid_argument("kp_second_derivative: band past the trusted range");
    const int m = band - 1;
    for (int j = 0; j < pi.n_bands(); ++j) {
        if (j == m) continue;
        if (std::abs(spec.eigenvalues(j) - spec.eigenvalues(m)) < gap_tol)
            throw DegeneracyError(
                "kp_second_derivative: band " + std::to_string(band) +
                " is degenerate with band " + std::to_string(j + 1));
    }
    double acc = 0.0;
    for (int j = 0; j < pi.n_bands(); ++j) {
        if (j == m) continue;
        double mag = std::abs(pi.pi(m, j));
        acc += mag * mag / (spec.eigenvalues(m) - spec.eigenvalues(j));
    }
    return 2.0 + 8.0 * acc;
}

NestedSumReport nested_sum(const FiberSpectrum& spec, const MomentumMatrix& pi,
                           std::span<const int> cutoffs, double cauchy_tol) {
    if (cutoffs.empty()) throw std::invalid_argument("nested_sum: no cutoffs");
    for (size_t i = 0; i < cutoffs.size(); ++i) {
        if (cutoffs[i] < 2) throw std::invalid_argument("nested_sum: cutoff must be >= 2");
        if (i > 0 && cutoffs[i] <= cutoffs[i - 1])
            throw std::invalid_argument("nested_sum: cutoffs must increase");
    }
    const int j_max = cutoffs.back();
    if (j_max > pi.n_bands())
        throw std::invalid_argument("nested_sum: cutoff exceeds matrix size");
    if (j_max > spec.trusted_bands())
        throw std::invalid_argument("nested_sum: cutoff past the trusted range");
    if (spec.eigenvalues(1) - spec.eigenvalues(0) < 1e-10)
        throw DegeneracyError("nested_sum: ground band is degenerate");

    NestedSumReport out;
    out.cauchy_tol = cauchy_tol;

    const auto denom = [&](int j) { return spec.eigenvalues(j) - spec.eigenvalues(0); };

    for (int c : cutoffs) {
        // Innermost sum first (j3, then j2, then j1), fixed ascending order.
        std::vector<cxd> inner(static_cast<size_t>(c), 0.0);
        for (int j2 = 1; j2 < c; ++j2) {
            cxd s = 0.0;
            for (int j3 = 1; j3 < c; ++j3)
                s += pi.pi(j2, j3) * pi.pi(j3, 0) / denom(j3);
            inner[static_cast<size_t>(j2)] = s;
        }
        cxd total = 0.0;
        for (int j1 = 1; j1 < c; ++j1) {
            cxd s = 0.0;
            for (int j2 = 1; j2 < c; ++j2)
                s += pi.pi(j1, j2) * inner[static_cast<size_t>(j2)] / denom(j2);
            total += pi.pi(0, j1) * s;
        }
        out.cutoffs.push_back(c);
        out.values.push_back(total);

        // Absolute-value majorant with the same grouping.
        std::vector<double> inner_abs(static_cast<size_t>(c), 0.0);
        for (int j2 = 1; j2 < c; ++j2) {
            double s = 0.0;
            for (int j3 = 1; j3 < c; ++j3)
                s += std::abs(pi.pi(j2, j3)) * std::abs(pi.pi(j3, 0)) / denom(j3);
            inner_abs[static_cast<size_t>(j2)] = s;
        }
        double total_abs = 0.0;
        for (int j1 = 1; j1 < c; ++j1) {
            double s = 0.0;
            for (int j2 = 1; j2 < c; ++j2)
                s += std::abs(pi.pi(j1, j2)) * inner_abs[static_cast<size_t>(j2)] / denom(j2);
            total_abs += std::abs(pi.pi(0, j1)) * s;
        }
        out.abs_sums.push_back(total_abs);
    }

    out.value = out.values.back();

    // Mirrored grouping at the largest cutoff: contract from the outer index
    // inward (j1 first, then j2, then j3).
    {
        const int c = j_max;
        std::vector<cxd> left(static_cast<size_t>(c), 0.0);
        for (int j2 = 1; j2 < c; ++j2) {
            cxd s = 0.0;
            for (int j1 = 1; j1 < c; ++j1) s += pi.pi(0, j1) * pi.pi(j1, j2);
            left[static_cast<size_t>(j2)] = s;
        }
        cxd total = 0.0;
        for (int j3 = 1; j3 < c; ++j3) {
            cxd s = 0.0;
            for (int j2 = 1; j2 < c; ++j2)
                s += left[static_cast<size_t>(j2)] * pi.pi(j2, j3) / denom(j2);
            total += s * pi.pi(j3, 0) / denom(j3);
        }
        out.value_reversed = total;
    }

    if (out.abs_sums.size() >= 2) {
        double last = out.abs_sums.back();
        double prev = out.abs_sums[out.abs_sums.size() - 2];
        out.last_rel_increment = std::abs(last - prev) / std::max(1e-300, std::abs(last));
        out.converged = out.last_rel_increment <= cauchy_tol;
    }
    return out;
}

}  // namespace blochsum
