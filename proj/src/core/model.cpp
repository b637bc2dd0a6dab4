#include "model.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace blochsum {

namespace {

void check_dim(int dim) {
    if (dim < 1 || dim > 3)
        throw std::invalid_argument("dimension must be 1, 2 or 3, got " +
                                    std::to_string(dim));
}

double sup_norm(const IVec& m, int dim) {
    int r = 0;
    for (int a = 0; a < dim; ++a) r = std::max(r, std::abs(m[a]));
    return static_cast<double>(r);
}

double euclid_norm(const IVec& m, int dim) {
    double s = 0.0;
    for (int a = 0; a < dim; ++a) s += static_cast<double>(m[a]) * m[a];
    return std::sqrt(s);
}

// Visit every nonzero frequency in the sup-norm box of radius `cutoff`
// whose first nonzero component is positive (one representative per
// conjugate pair), in lexicographic order so seeded draws are stable.
template <typename F>
void for_each_positive_rep(int dim, int cutoff, F&& fn) {
    IVec m{0, 0, 0};
    int lo[3] = {0, 0, 0}, hi[3] = {0, 0, 0};
    for (int a = 0; a < dim; ++a) {
        lo[a] = -cutoff;
        hi[a] = cutoff;
    }
    for (m[0] = lo[0]; m[0] <= hi[0]; ++m[0])
        for (m[1] = lo[1]; m[1] <= hi[1]; ++m[1])
            for (m[2] = lo[2]; m[2] <= hi[2]; ++m[2]) {
                int lead = 0;
                for (int a = 0; a < dim; ++a)
                    if (m[a] != 0) {
                        lead = m[a];
                        break;
                    }
                if (lead > 0) fn(m);
            }
}

}  // namespace

PotentialSpec PotentialSpec::zero(int dim, double shift) {
    PotentialSpec s;
    s.dim = dim;
    s.family = PotentialFamily::Zero;
    s.shift = shift;
    return s;
}

PotentialSpec PotentialSpec::trig(int dim, std::vector<double> amplitudes, double shift) {
    PotentialSpec s;
    s.dim = dim;
    s.family = PotentialFamily::TrigPolynomial;
    s.amplitudes = std::move(amplitudes);
    s.shift = shift;
    return s;
}

PotentialSpec PotentialSpec::power_law(int dim, double amplitude, double s_exp,
                                       int cutoff, double shift) {
    PotentialSpec s;
    s.dim = dim;
    s.family = PotentialFamily::PowerLaw;
    s.amplitude = amplitude;
    s.decay_exponent = s_exp;
    s.cutoff = cutoff;
    s.shift = shift;
    return s;
}

PotentialSpec PotentialSpec::gaussian(int dim, double amplitude, double width,
                                      int cutoff, double shift) {
    PotentialSpec s;
    s.dim = dim;
    s.family = PotentialFamily::GaussianDecay;
    s.amplitude = amplitude;
    s.width = width;
    s.cutoff = cutoff;
    s.shift = shift;
    return s;
}

PotentialSpec PotentialSpec::truncated_delta(int dim, double strength, int cutoff,
                                             double shift) {
    PotentialSpec s;
    s.dim = dim;
    s.family = PotentialFamily::TruncatedDelta;
    s.strength = strength;
    s.cutoff = cutoff;
    s.shift = shift;
    return s;
}

PotentialSpec PotentialSpec::random_smooth(int dim, double amplitude, double width,
                                           int cutoff, std::uint64_t seed, double shift) {
    PotentialSpec s;
    s.dim = dim;
    s.family = PotentialFamily::RandomSmooth;
    s.amplitude = amplitude;
    s.width = width;
    s.cutoff = cutoff;
    s.seed = seed;
    s.shift = shift;
    return s;
}

FourierPotential::FourierPotential(int dim, std::map<IVec, cxd> coeffs)
    : m_dim(dim), m_coeffs(std::move(coeffs)) {
    check_dim(dim);
    for (const auto& [m, v] : m_coeffs) {
        (void)v;
        for (int a = dim; a < 3; ++a)
            if (m[a] != 0)
                throw std::invalid_argument(
                    "frequency uses components beyond the active dimension");
        m_support_radius =
            std::max(m_support_radius, static_cast<int>(sup_norm(m, dim)));
    }
    // Conjugate symmetry keeps the potential real; reject tables that break it.
    for (const auto& [m, v] : m_coeffs) {
        IVec neg{-m[0], -m[1], -m[2]};
        auto it = m_coeffs.find(neg);
        cxd partner = (it == m_coeffs.end()) ? cxd(0.0) : it->second;
        if (std::abs(partner - std::conj(v)) > 1e-12 * (1.0 + std::abs(v)))
            throw std::invalid_argument("coefficient table is not conjugate symmetric");
    }
}

cxd FourierPotential::coefficient(const IVec& m) const {
    auto it = m_coeffs.find(m);
    return it == m_coeffs.end() ? cxd(0.0) : it->second;
}

double FourierPotential::coefficient_l1() const {
    double s = 0.0;
    for (const auto& [m, v] : m_coeffs) {
        (void)m;
        s += std::abs(v);
    }
    return s;
}

cxd FourierPotential::evaluate(const KVec& x) const {
    cxd s = 0.0;
    for (const auto& [m, v] : m_coeffs) {
        double phase = kTwoPi * (m[0] * x[0] + m[1] * x[1] + m[2] * x[2]);
        s += v * cxd(std::cos(phase), std::sin(phase));
    }
    return s;
}

FourierPotential build_potential(const PotentialSpec& spec) {
    check_dim(spec.dim);
    if (!std::isfinite(spec.shift))
        throw std::invalid_argument("potential shift must be finite");

    std::map<IVec, cxd> coeffs;
    auto add_pair = [&](const IVec& m, cxd v) {
        coeffs[m] += v;
        IVec neg{-m[0], -m[1], -m[2]};
        coeffs[neg] += std::conj(v);
    };

    switch (spec.family) {
        case PotentialFamily::Zero:
            break;
        case PotentialFamily::TrigPolynomial: {
            if (spec.amplitudes.empty())
                throw std::invalid_argument("trig potential needs at least one amplitude");
            for (size_t n = 0; n < spec.amplitudes.size(); ++n) {
                double a = spec.amplitudes[n];
                if (!std::isfinite(a))
                    throw std::invalid_argument("trig amplitude must be finite");
                if (a == 0.0) continue;
                for (int axis = 0; axis < spec.dim; ++axis) {
                    IVec m{0, 0, 0};
                    m[axis] = static_cast<int>(n) + 1;
                    // A cos(2 pi n x) contributes A/2 at +/- n.
                    add_pair(m, cxd(a / 2.0, 0.0));
                }
            }
            break;
        }
        case PotentialFamily::PowerLaw: {
            if (spec.cutoff < 1) throw std::invalid_argument("power-law cutoff must be >= 1");
            if (spec.decay_exponent <= 1.0)
                throw std::invalid_argument("power-law decay exponent must exceed 1");
            for_each_positive_rep(spec.dim, spec.cutoff, [&](const IVec& m) {
                double r = euclid_norm(m, spec.dim);
                add_pair(m, cxd(spec.amplitude * std::pow(1.0 + r, -spec.decay_exponent),
                                0.0));
            });
            break;
        }
        case PotentialFamily::GaussianDecay: {
            if (spec.cutoff < 1) throw std::invalid_argument("gaussian cutoff must be >= 1");
            if (spec.width <= 0.0) throw std::invalid_argument("gaussian width must be positive");
            for_each_positive_rep(spec.dim, spec.cutoff, [&](const IVec& m) {
                double r = euclid_norm(m, spec.dim);
                add_pair(m, cxd(spec.amplitude * std::exp(-(r * r) / (spec.width * spec.width)),
                                0.0));
            });
            break;
        }
        case PotentialFamily::TruncatedDelta: {
            if (spec.cutoff < 1)
                throw std::invalid_argument("truncated-delta cutoff must be >= 1");
            if (spec.strength <= 0.0)
                throw std::invalid_argument("truncated-delta strength must be positive");
            for_each_positive_rep(spec.dim, spec.cutoff, [&](const IVec& m) {
                add_pair(m, cxd(spec.strength, 0.0));
            });
            coeffs[IVec{0, 0, 0}] += spec.strength;
            break;
        }
        case PotentialFamily::RandomSmooth: {
            if (spec.cutoff < 1)
                throw std::invalid_argument("random-smooth cutoff must be >= 1");
            if (spec.width <= 0.0)
                throw std::invalid_argument("random-smooth width must be positive");
            std::mt19937_64 rng(spec.seed);
            std::uniform_real_distribution<double> unif(0.0, kTwoPi);
            for_each_positive_rep(spec.dim, spec.cutoff, [&](const IVec& m) {
                double theta = unif(rng);
                double r = euclid_norm(m, spec.dim);
                double mag = spec.amplitude * std::exp(-(r * r) / (spec.width * spec.width));
                add_pair(m, mag * cxd(std::cos(theta), std::sin(theta)));
            });
            break;
        }
    }

    coeffs[IVec{0, 0, 0}] += spec.shift;

    // Drop exact zeros so the support radius reflects actual content.
    for (auto it = coeffs.begin(); it != coeffs.end();) {
        if (it->second == cxd(0.0) && !(it->first == IVec{0, 0, 0}))
            it = coeffs.erase(it);
        else
            ++it;
    }
    return FourierPotential(spec.dim, std::move(coeffs));
}

PlaneWaveBasis::PlaneWaveBasis(int dim, int m_cut, int size_limit)
    : m_dim(dim), m_m_cut(m_cut) {
    check_dim(dim);
    if (m_cut < 1) throw std::invalid_argument("m_cut must be >= 1");
    long long n = 1;
    for (int a = 0; a < dim; ++a) n *= 2LL * m_cut + 1;
    if (n > size_limit) {
        std::ostringstream os;
        os << "basis size " << n << " exceeds limit " << size_limit
           << " (dim=" << dim << ", m_cut=" << m_cut << ")";
        throw std::invalid_argument(os.str());
    }
    m_freqs.reserve(static_cast<size_t>(n));
    int lo[3] = {0, 0, 0}, hi[3] = {0, 0, 0};
    for (int a = 0; a < dim; ++a) {
        lo[a] = -m_cut;
        hi[a] = m_cut;
    }
    IVec m{0, 0, 0};
    for (m[0] = lo[0]; m[0] <= hi[0]; ++m[0])
        for (m[1] = lo[1]; m[1] <= hi[1]; ++m[1])
            for (m[2] = lo[2]; m[2] <= hi[2]; ++m[2]) m_freqs.push_back(m);
}

int PlaneWaveBasis::index_of(const IVec& m) const {
    int idx = 0;
    for (int a = 0; a < m_dim; ++a) {
        if (std::abs(m[a]) > m_m_cut) return -1;
        idx = idx * (2 * m_m_cut + 1) + (m[a] + m_m_cut);
    }
    for (int a = m_dim; a < 3; ++a)
        if (m[a] != 0) return -1;
    return idx;
}

PlaneWaveBasis build_basis(int dim, int m_cut, int size_limit) {
    return PlaneWaveBasis(dim, m_cut, size_limit);
}

KGrid sample_brillouin(int dim, int points_per_axis, double offset) {
    check_dim(dim);
    if (points_per_axis < 1)
        throw std::invalid_argument("k-grid needs at least one point per axis");
    if (offset < 0.0 || offset >= 1.0)
        throw std::invalid_argument("k-grid offset must lie in [0, 1)");

    const int n = points_per_axis;
    std::vector<double> axis(static_cast<size_t>(n));
    const double h = kTwoPi / n;
    for (int i = 0; i < n; ++i) axis[static_cast<size_t>(i)] = -kPi + h * (i + offset);

    KGrid grid;
    grid.dim = dim;
    double w = 1.0;
    for (int a = 0; a < dim; ++a) w *= h;

    int total = 1;
    for (int a = 0; a < dim; ++a) total *= n;
    grid.points.reserve(static_cast<size_t>(total));
    grid.weights.assign(static_cast<size_t>(total), w);
    int idx[3] = {0, 0, 0};
    for (idx[0] = 0; idx[0] < (dim > 0 ? n : 1); ++idx[0])
        for (idx[1] = 0; idx[1] < (dim > 1 ? n : 1); ++idx[1])
            for (idx[2] = 0; idx[2] < (dim > 2 ? n : 1); ++idx[2]) {
                KVec k{0.0, 0.0, 0.0};
                for (int a = 0; a < dim; ++a) k[a] = axis[static_cast<size_t>(idx[a])];
                grid.points.push_back(k);
            }
    return grid;
}

void ContourSpec::validate() const {
    if (!(beta > 0.0)) throw std::invalid_argument("contour: beta must be positive");
    if (!std::isfinite(mu)) throw std::invalid_argument("contour: mu must be finite");
    if (!(delta > 0.0))
        throw std::invalid_argument("contour: strip half-width must be positive");
    // Fermi factor poles sit at mu + i pi (2l+1)/beta; the strip must not
    // reach the first one.
    if (delta >= kPi / beta * 0.5 * (1.0 + 1e-12))
        throw std::invalid_argument(
            "contour: strip half-width reaches the first pole of the Fermi factor");
    if (!std::isfinite(x_max) || !(x_max > left))
        throw std::invalid_argument("contour: x_max must exceed the left edge");
    if (n_quad < 16) throw std::invalid_argument("contour: need at least 16 nodes");
}

}  // namespace blochsum
