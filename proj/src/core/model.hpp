#pragma once

#include "common.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

namespace blochsum {

// Families of real, smooth-to-rough periodic potentials on the unit cell,
// all specified through their Fourier coefficients on the integer lattice.
enum class PotentialFamily {
    Zero,
    TrigPolynomial,  // sums of cos(2*pi*n*x_alpha) per axis
    PowerLaw,        // |coefficient| ~ amplitude * (1+|m|)^(-decay_exponent)
    GaussianDecay,   // amplitude * exp(-|m|^2/width^2)
    TruncatedDelta,  // flat coefficients on a box, a delta-comb approximant
    RandomSmooth,    // gaussian envelope with seeded random phases
};

struct PotentialSpec {
    int dim = 1;
    PotentialFamily family = PotentialFamily::Zero;
    double shift = 0.0;  // added to the (0,...,0) coefficient

    std::vector<double> amplitudes;  // TrigPolynomial: harmonic n -> amplitudes[n-1]
    double amplitude = 1.0;          // PowerLaw / GaussianDecay / RandomSmooth scale
    double decay_exponent = 2.0;     // PowerLaw s
    double width = 4.0;              // GaussianDecay / RandomSmooth envelope width
    double strength = 1.0;           // TruncatedDelta coupling g
    int cutoff = 0;                  // support radius in sup-norm (families with a box)
    std::uint64_t seed = 0;          // RandomSmooth phases

    static PotentialSpec zero(int dim, double shift);
    static PotentialSpec trig(int dim, std::vector<double> amplitudes, double shift);
    static PotentialSpec power_law(int dim, double amplitude, double s, int cutoff,
                                   double shift);
    static PotentialSpec gaussian(int dim, double amplitude, double width, int cutoff,
                                  double shift);
    static PotentialSpec truncated_delta(int dim, double strength, int cutoff,
                                         double shift);
    static PotentialSpec random_smooth(int dim, double amplitude, double width,
                                       int cutoff, std::uint64_t seed, double shift);
};

// Real potential as a finite table of Fourier coefficients.  Conjugate
// symmetry v(-m) = conj(v(m)) holds by construction.
class FourierPotential {
  public:
    FourierPotential() = default;
    FourierPotential(int dim, std::map<IVec, cxd> coeffs);

    int dim() const { return m_dim; }
    // Coefficient at frequency m (zero off the stored support).
    cxd coefficient(const IVec& m) const;
    const std::map<IVec, cxd>& coefficients() const { return m_coeffs; }
    // Largest sup-norm frequency carried by the support.
    int support_radius() const { return m_support_radius; }
    // l1 norm of the coefficients = sup-norm bound on the potential.
    double coefficient_l1() const;
    // Point evaluation by direct Fourier summation (test/diagnostic use).
    cxd evaluate(const KVec& x) const;

  private:
    int m_dim = 1;
    int m_support_radius = 0;
    std::map<IVec, cxd> m_coeffs;
};

FourierPotential build_potential(const PotentialSpec& spec);

// Plane-wave basis exp(2*pi*i m.x) with |m_alpha| <= m_cut, frequencies in
// lexicographic order so matrix layouts are reproducible across runs.
class PlaneWaveBasis {
  public:
    PlaneWaveBasis(int dim, int m_cut, int size_limit);

    int dim() const { return m_dim; }
    int m_cut() const { return m_m_cut; }
    int size() const { return static_cast<int>(m_freqs.size()); }
    const IVec& frequency(int idx) const { return m_freqs[static_cast<size_t>(idx)]; }
    const std::vector<IVec>& frequencies() const { return m_freqs; }
    // Index of frequency m, or -1 when it falls outside the box.
    int index_of(const IVec& m) const;

  private:
    int m_dim;
    int m_m_cut;
    std::vector<IVec> m_freqs;
};

constexpr int kDefaultBasisSizeLimit = 1 << 14;

PlaneWaveBasis build_basis(int dim, int m_cut, int size_limit = kDefaultBasisSizeLimit);

// Quasi-momentum grid over the Brillouin zone [-pi, pi)^d, product of
// shifted midpoint rules; weights sum to (2*pi)^d.
struct KGrid {
    int dim = 1;
    std::vector<KVec> points;
    std::vector<double> weights;

    int size() const { return static_cast<int>(points.size()); }
};

KGrid sample_brillouin(int dim, int points_per_axis, double offset = 0.5);

// Truncated rectangular contour around the spectrum: two horizontal lines
// Im z = -delta and Im z = +delta joined by vertical edges at Re z = left
// and Re z = x_max, traversed counterclockwise.  The strip half-width must
// stay below the first Matsubara pole pi/(2*beta) of the Fermi factor.
struct ContourSpec {
    double beta = 1.0;
    double mu = 0.0;
    double delta = 0.5;
    double x_max = 50.0;
    double left = -1.0;
    int n_quad = 2048;  // target quadrature nodes along a horizontal edge

    void validate() const;
};

}  // namespace blochsum
