#include "fiber.hpp"

#include "parallel.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace blochsum {

FiberOperator assemble_fiber(const FourierPotential& v,
                             std::shared_ptr<const PlaneWaveBasis> basis,
                             const KVec& k) {
    if (!basis) throw std::invalid_argument("assemble_fiber: null basis");
    if (v.dim() != basis->dim())
        throw std::invalid_argument("assemble_fiber: potential/basis dimension mismatch");
    for (int a = 0; a < basis->dim(); ++a)
        if (!std::isfinite(k[a]) || std::abs(k[a]) > 4.0 * kPi)
            throw std::invalid_argument("assemble_fiber: quasi-momentum out of range");
    // A coupling that reaches across the whole box would alias back in; the
    // basis must resolve twice the potential support.
    if (v.support_radius() > 2 * basis->m_cut())
        throw std::invalid_argument(
            "assemble_fiber: potential support exceeds twice the basis cutoff");

    const int n = basis->size();
    FiberOperator op;
    op.basis = basis;
    op.k = k;
    op.h = Matrix::Zero(n, n);

    for (int j = 0; j < n; ++j) {
        const IVec& m = basis->frequency(j);
        double kin = 0.0;
        for (int a = 0; a < basis->dim(); ++a) {
            double q = kTwoPi * m[a] + k[a];
            kin += q * q;
        }
        op.h(j, j) = kin;
    }
    // Fill couplings by walking the (small) potential support once per column.
    for (const auto& [q, vq] : v.coefficients()) {
        for (int j = 0; j < n; ++j) {
            const IVec& m = basis->frequency(j);
            IVec mp{m[0] + q[0], m[1] + q[1], m[2] + q[2]};
            int i = basis->index_of(mp);
            if (i >= 0) op.h(i, j) += vq;
        }
    }
    return op;
}

double hermiticity_defect(const Matrix& h) {
    return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

FiberSpectrum solve_fiber(const FiberOperator& op, int n_bands) {
    const int n = static_cast<int>(op.h.rows());
    if (n_bands < 1 || n_bands > n)
        throw std::invalid_argument("solve_fiber: band count must lie in [1, basis size]");

    Eigen::SelfAdjointEigenSolver<Matrix> solver(op.h);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("solve_fiber: eigensolver failed to converge");

    FiberSpectrum spec;
    spec.basis = op.basis;
    spec.k = op.k;
    spec.eigenvalues = solver.eigenvalues().head(n_bands);
    spec.coeffs = solver.eigenvectors().leftCols(n_bands).transpose();

    // Deterministic gauge: rotate each row so its largest-magnitude entry is
    // real positive (first such entry wins on ties).
    for (int j = 0; j < n_bands; ++j) {
        int best = 0;
        double best_mag = 0.0;
        for (int i = 0; i < n; ++i) {
            double mag = std::abs(spec.coeffs(j, i));
            if (mag > best_mag * (1.0 + 1e-12)) {
                best_mag = mag;
                best = i;
            }
        }
        if (best_mag > 0.0) {
            cxd phase = spec.coeffs(j, best) / best_mag;
            spec.coeffs.row(j) *= std::conj(phase);
        }
    }
    return spec;
}

FiberSpectrum solve_fiber(const FourierPotential& v,
                          std::shared_ptr<const PlaneWaveBasis> basis, const KVec& k,
                          int n_bands) {
    return solve_fiber(assemble_fiber(v, std::move(basis), k), n_bands);
}

BandStructure band_structure(const FourierPotential& v,
                             std::shared_ptr<const PlaneWaveBasis> basis,
                             const KGrid& grid, int n_bands, int workers) {
    if (grid.size() == 0) throw std::invalid_argument("band_structure: empty k-grid");
    BandStructure bs;
    bs.grid = grid;
    bs.eigenvalues.resize(grid.size(), n_bands);
    parallel_for(grid.size(), workers, [&](int i) {
        try {
            FiberSpectrum spec = solve_fiber(v, basis, grid.points[static_cast<size_t>(i)],
                                             n_bands);
            bs.eigenvalues.row(i) = spec.eigenvalues.transpose();
        } catch (const std::exception& e) {
            const KVec& k = grid.points[static_cast<size_t>(i)];
            std::ostringstream os;
            os << "band_structure: failure at k-point " << i << " (" << k[0];
            if (grid.dim > 1) os << ", " << k[1];
            if (grid.dim > 2) os << ", " << k[2];
            os << "): " << e.what();
            throw std::runtime_error(os.str());
        }
    });
    return bs;
}

}  // namespace blochsum
