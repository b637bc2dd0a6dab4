#include "fermi.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <vector>

namespace blochsum {

namespace {

// Coefficient table for d^n/du^n of the logistic g(u) = 1/(e^u + 1) as a
// polynomial in g: row n holds a_{n,k} with g^{(n)} = sum_k a_{n,k} g^k,
// generated from g' = g^2 - g.
const std::vector<std::vector<double>>& logistic_tables() {
    static const std::vector<std::vector<double>> tables = [] {
        std::vector<std::vector<double>> t;
        t.push_back({0.0, 1.0});  // g itself: coefficients by power, index = power
        for (int n = 1; n <= FermiDirac::kMaxDerivativeOrder; ++n) {
            const auto& prev = t.back();
            std::vector<double> next(prev.size() + 1, 0.0);
            for (size_t k = 1; k < prev.size(); ++k) {
                // d/du of a g^k term via the chain rule: k g^{k-1} (g^2 - g).
                next[k + 1] += static_cast<double>(k) * prev[k];
                next[k] -= static_cast<double>(k) * prev[k];
            }
            t.push_back(std::move(next));
        }
        return t;
    }();
    return tables;
}

double logistic(double u) {
    // 1/(e^u + 1) without overflow on either side.
    if (u >= 0.0) {
        double e = std::exp(-u);
        return e / (1.0 + e);
    }
    return 1.0 / (std::exp(u) + 1.0);
}

struct GaussLegendre16 {
    std::array<double, 16> x;  // nodes on [-1, 1]
    std::array<double, 16> w;
};

// Nodes/weights by Newton iteration on the Legendre polynomial; computed
// once, accurate to machine precision.
const GaussLegendre16& gl16() {
    static const GaussLegendre16 rule = [] {
        GaussLegendre16 r{};
        const int n = 16;
        for (int i = 0; i < n; ++i) {
            double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
            for (int iter = 0; iter < 100; ++iter) {
                double p0 = 1.0, p1 = x;
                for (int j = 2; j <= n; ++j) {
                    double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                double dp = n * (x * p1 - p0) / (x * x - 1.0);
                double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (x * p1 - p0) / (x * x - 1.0);
            r.x[static_cast<size_t>(n - 1 - i)] = x;
            r.w[static_cast<size_t>(n - 1 - i)] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        return r;
    }();
    return rule;
}

// Append composite GL-16 nodes for the straight segment a -> b.
void append_segment(std::vector<ContourNode>& out, cxd a, cxd b, int n_panels) {
    const auto& rule = gl16();
    cxd d = (b - a) / static_cast<double>(n_panels);
    for (int p = 0; p < n_panels; ++p) {
        cxd lo = a + d * static_cast<double>(p);
        for (int q = 0; q < 16; ++q) {
            ContourNode node;
            node.z = lo + d * (0.5 * (rule.x[static_cast<size_t>(q)] + 1.0));
            node.weight = d * (0.5 * rule.w[static_cast<size_t>(q)]);
            out.push_back(node);
        }
    }
}

}  // namespace

FermiDirac::FermiDirac(double beta, double mu) : m_beta(beta), m_mu(mu) {
    if (!(beta > 0.0)) throw std::invalid_argument("FermiDirac: beta must be positive");
    if (!std::isfinite(mu)) throw std::invalid_argument("FermiDirac: mu must be finite");
}

double FermiDirac::value(double x) const { return logistic(m_beta * (x - m_mu)); }

double FermiDirac::derivative(int order, double x) const {
    if (order == 0) return value(x);
    if (order < 1 || order > kMaxDerivativeOrder)
        throw std::invalid_argument("FermiDirac: derivative order " +
                                    std::to_string(order) + " outside [0, " +
                                    std::to_string(kMaxDerivativeOrder) + "]");
    const double g = logistic(m_beta * (x - m_mu));
    const auto& row = logistic_tables()[static_cast<size_t>(order)];
    // Horner in g, then the chain-rule factor beta^order.
    double p = 0.0;
    for (size_t k = row.size(); k-- > 0;) p = p * g + row[k];
    return std::pow(m_beta, order) * p;
}

cxd FermiDirac::value(cxd z) const {
    cxd u = m_beta * (z - m_mu);
    if (u.real() >= 0.0) {
        cxd e = std::exp(-u);
        return e / (1.0 + e);
    }
    return 1.0 / (std::exp(u) + 1.0);
}

double divided_difference(const DifferentiableFunction& f, std::span<const double> nodes,
                          double confluence_tol) {
    const int n = static_cast<int>(nodes.size());
    if (n < 1) throw std::invalid_argument("divided_difference: need at least one node");
    if (confluence_tol < 0.0)
        throw std::invalid_argument("divided_difference: negative confluence tolerance");
    for (double z : nodes)
        if (!std::isfinite(z))
            throw std::invalid_argument("divided_difference: non-finite node");

    std::vector<double> z(nodes.begin(), nodes.end());
    std::sort(z.begin(), z.end());

    // Cluster nodes closer than the tolerance (chained by gaps) onto their
    // mean, so members of a cluster compare exactly equal below.
    size_t i = 0;
    int max_multiplicity = 1;
    while (i < z.size()) {
        size_t j = i + 1;
        while (j < z.size() && z[j] - z[j - 1] <= confluence_tol) ++j;
        if (j - i > 1) {
            double mean = 0.0;
            for (size_t t = i; t < j; ++t) mean += z[t];
            mean /= static_cast<double>(j - i);
            for (size_t t = i; t < j; ++t) z[t] = mean;
            max_multiplicity = std::max(max_multiplicity, static_cast<int>(j - i));
        }
        i = j;
    }
    if (max_multiplicity - 1 > FermiDirac::kMaxDerivativeOrder) {
        std::ostringstream os;
        os << "divided_difference: confluent cluster of " << max_multiplicity
           << " nodes needs derivative order " << max_multiplicity - 1
           << " beyond the supported cap";
        throw std::invalid_argument(os.str());
    }

    // Newton table with the Hermite rule at repeated abscissae:
    // f[z_i, ..., z_{i+L}] = f^{(L)}(z_i)/L! when the nodes coincide.
    std::vector<double> col(z.size());
    for (size_t t = 0; t < z.size(); ++t) col[t] = f.value(z[t]);
    double factorial = 1.0;
    for (int level = 1; level < n; ++level) {
        factorial *= level;
        for (int t = n - 1; t >= level; --t) {
            if (z[static_cast<size_t>(t)] == z[static_cast<size_t>(t - level)])
                col[static_cast<size_t>(t)] =
                    f.derivative(level, z[static_cast<size_t>(t)]) / factorial;
            else
                col[static_cast<size_t>(t)] =
                    (col[static_cast<size_t>(t)] - col[static_cast<size_t>(t - 1)]) /
                    (z[static_cast<size_t>(t)] - z[static_cast<size_t>(t - level)]);
        }
    }
    return col[static_cast<size_t>(n - 1)];
}

std::vector<ContourNode> contour_nodes(const ContourSpec& contour) {
    contour.validate();
    const double d = contour.delta;
    const cxd bl(contour.left, -d), br(contour.x_max, -d);
    const cxd tr(contour.x_max, d), tl(contour.left, d);

    const double horiz_len = contour.x_max - contour.left;
    int h_panels = std::max(1, contour.n_quad / 16);
    // Keep panels no longer than the pole distance delta, otherwise the
    // near-axis variation is undersampled no matter the node budget.
    h_panels = std::max(h_panels, static_cast<int>(std::ceil(horiz_len / d)));
    const double panel_len = horiz_len / h_panels;
    const int v_panels = std::max(1, static_cast<int>(std::ceil(2.0 * d / panel_len)));

    std::vector<ContourNode> nodes;
    nodes.reserve(static_cast<size_t>(2 * h_panels + 2 * v_panels) * 16);
    append_segment(nodes, bl, br, h_panels);  // below the axis, left to right
    append_segment(nodes, br, tr, v_panels);  // right edge, upward
    append_segment(nodes, tr, tl, h_panels);  // above the axis, right to left
    append_segment(nodes, tl, bl, v_panels);  // left edge, downward
    return nodes;
}

ContourQuadratureResult contour_integral_quadrature(const ContourSpec& contour,
                                                    std::span<const double> poles) {
    contour.validate();
    if (poles.empty())
        throw std::invalid_argument("contour quadrature: need at least one pole");
    for (double p : poles) {
        if (!std::isfinite(p))
            throw std::invalid_argument("contour quadrature: non-finite pole");
        if (p <= contour.left + contour.delta || p >= contour.x_max - contour.delta)
            throw std::invalid_argument(
                "contour quadrature: pole at " + std::to_string(p) +
                " is not strictly inside the truncated contour");
    }

    FermiDirac f(contour.beta, contour.mu);
    cxd total = 0.0;
    for (const ContourNode& node : contour_nodes(contour)) {
        cxd g = f.value(node.z);
        for (double p : poles) g /= (p - node.z);
        total += node.weight * g;
    }

    ContourQuadratureResult out;
    out.value = total;
    out.tail_estimate = f.value(contour.x_max);
    out.tail_warning = out.tail_estimate > 1e-10;
    return out;
}

}  // namespace blochsum
