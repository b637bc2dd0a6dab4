#include "trace.hpp"

#include "parallel.hpp"

#include <Eigen/LU>

#include <cmath>
#include <sstream>

namespace blochsum {

namespace {

void check_alphas(std::span<const int> alphas, int dim) {
    if (alphas.empty() || alphas.size() > 4)
        throw std::invalid_argument("trace: need between 1 and 4 velocity factors");
    for (int a : alphas)
        if (a < 0 || a >= dim)
            throw std::invalid_argument("trace: direction index out of range");
}

constexpr double kMaxQuadNodes = 200000;

}  // namespace

TraceResult trace_band_sum(const FourierPotential& v,
                           std::shared_ptr<const PlaneWaveBasis> basis,
                           const ContourSpec& contour, std::span<const int> alphas,
                           int band_cutoff, const KGrid& grid, int workers,
                           double confluence_tol) {
    if (!basis) throw std::invalid_argument("trace_band_sum: null basis");
    contour.validate();
    check_alphas(alphas, basis->dim());
    if (grid.size() == 0) throw std::invalid_argument("trace_band_sum: empty k-grid");
    if (band_cutoff < 1 || band_cutoff > basis->size() / 2)
        throw std::invalid_argument(
            "trace_band_sum: band cutoff must stay within the trusted half of the basis");

    const int n_factors = static_cast<int>(alphas.size());
    const int nj = band_cutoff;
    FermiDirac fermi(contour.beta, contour.mu);
    const cxd front = cxd(0.0, kTwoPi) * ((n_factors % 2 == 0) ? 1.0 : -1.0);

    TraceResult out;
    out.alphas.assign(alphas.begin(), alphas.end());
    out.band_cutoff = band_cutoff;
    out.per_k.assign(static_cast<size_t>(grid.size()), cxd(0.0));
    out.abs_per_k.assign(static_cast<size_t>(grid.size()), 0.0);

    parallel_for(grid.size(), workers, [&](int gi) {
        FiberSpectrum spec = solve_fiber(v, basis, grid.points[static_cast<size_t>(gi)], nj);
        std::vector<MomentumMatrix> pis;
        pis.reserve(alphas.size());
        for (int a : alphas) pis.push_back(momentum_matrix(spec, a));

        std::vector<int> idx(static_cast<size_t>(n_factors), 0);
        std::vector<double> nodes(static_cast<size_t>(n_factors));
        cxd acc = 0.0;
        double acc_abs = 0.0;
        // Walk all index tuples (j1, ..., jn) in [0, nj)^n.
        for (;;) {
            cxd prod = 1.0;
            for (int f = 0; f < n_factors; ++f) {
                int row = idx[static_cast<size_t>(f)];
                int col = idx[static_cast<size_t>((f + 1) % n_factors)];
                prod *= pis[static_cast<size_t>(f)].pi(row, col);
                nodes[static_cast<size_t>(f)] = spec.eigenvalues(row);
            }
            if (prod != cxd(0.0)) {
                double dd;
                try {
                    dd = divided_difference(fermi, nodes, confluence_tol);
                } catch (const std::exception& e) {
                    std::ostringstream os;
                    os << "trace_band_sum: divided difference failed on band tuple (";
                    for (int f = 0; f < n_factors; ++f)
                        os << idx[static_cast<size_t>(f)] + 1
                           << (f + 1 < n_factors ? ", " : ")");
                    os << " at k-point " << gi << ": " << e.what();
                    throw std::runtime_error(os.str());
                }
                cxd term = prod * front * dd;
                acc += term;
                acc_abs += std::abs(term);
            }
            int f = n_factors - 1;
            while (f >= 0 && ++idx[static_cast<size_t>(f)] == nj) {
                idx[static_cast<size_t>(f)] = 0;
                --f;
            }
            if (f < 0) break;
        }
        out.per_k[static_cast<size_t>(gi)] = acc;
        out.abs_per_k[static_cast<size_t>(gi)] = acc_abs;
    });

    double cell = std::pow(kTwoPi, grid.dim);
    cxd total = 0.0;
    for (int gi = 0; gi < grid.size(); ++gi)
        total += grid.weights[static_cast<size_t>(gi)] * out.per_k[static_cast<size_t>(gi)];
    out.value = total / cell;
    return out;
}

TraceResult trace_direct(const FourierPotential& v,
                         std::shared_ptr<const PlaneWaveBasis> basis,
                         const ContourSpec& contour, std::span<const int> alphas,
                         const KGrid& grid, int workers) {
    if (!basis) throw std::invalid_argument("trace_direct: null basis");
    contour.validate();
    check_alphas(alphas, basis->dim());
    if (grid.size() == 0) throw std::invalid_argument("trace_direct: empty k-grid");

    const std::vector<ContourNode> nodes = contour_nodes(contour);
    if (static_cast<double>(nodes.size()) > kMaxQuadNodes)
        throw std::invalid_argument("trace_direct: contour discretisation too large");
    const int n = basis->size();
    const int n_factors = static_cast<int>(alphas.size());
    FermiDirac fermi(contour.beta, contour.mu);

    TraceResult out;
    out.alphas.assign(alphas.begin(), alphas.end());
    out.per_k.assign(static_cast<size_t>(grid.size()), cxd(0.0));
    out.abs_per_k.assign(static_cast<size_t>(grid.size()), 0.0);

    parallel_for(grid.size(), workers, [&](int gi) {
        const KVec& k = grid.points[static_cast<size_t>(gi)];
        Matrix h = assemble_fiber(v, basis, k).h;
        std::vector<RealVector> vel(alphas.size(), RealVector(n));
        for (size_t f = 0; f < alphas.size(); ++f)
            for (int i = 0; i < n; ++i)
                vel[f](i) = kTwoPi * basis->frequency(i)[out.alphas[f]] + k[out.alphas[f]];

        cxd acc = 0.0;
        double acc_abs = 0.0;
        Matrix shifted(n, n);
        for (const ContourNode& node : nodes) {
            shifted = h;
            shifted.diagonal().array() -= node.z;
            Eigen::PartialPivLU<Matrix> lu(shifted);
            Matrix r = lu.inverse();
            cxd tr;
            if (n_factors == 1) {
                tr = (vel[0].cast<cxd>().asDiagonal() * r).trace();
            } else if (n_factors == 2) {
                // tr(V1 R V2 R) without forming the product matrix.
                Matrix a = vel[0].cast<cxd>().asDiagonal() * r;
                Matrix b = vel[1].cast<cxd>().asDiagonal() * r;
                tr = (a.transpose().cwiseProduct(b)).sum();
            } else {
                Matrix prod = vel[0].cast<cxd>().asDiagonal() * r;
                for (int f = 1; f < n_factors; ++f)
                    prod = prod * (vel[static_cast<size_t>(f)].cast<cxd>().asDiagonal() * r);
                tr = prod.trace();
            }
            cxd term = node.weight * fermi.value(node.z) * tr;
            acc += term;
            acc_abs += std::abs(term);
        }
        out.per_k[static_cast<size_t>(gi)] = acc;
        out.abs_per_k[static_cast<size_t>(gi)] = acc_abs;
    });

    double cell = std::pow(kTwoPi, grid.dim);
    cxd total = 0.0;
    for (int gi = 0; gi < grid.size(); ++gi)
        total += grid.weights[static_cast<size_t>(gi)] * out.per_k[static_cast<size_t>(gi)];
    out.value = total / cell;
    return out;
}

}  // namespace blochsum
