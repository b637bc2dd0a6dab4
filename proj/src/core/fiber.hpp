#pragma once

#include "model.hpp"

#include <memory>

namespace blochsum {

// Fiber Hamiltonian h(k) = (-i grad + k)^2 + V in the plane-wave basis:
// dense Hermitian matrix with kinetic diagonal |2 pi m + k|^2 and
// v(m - m') off the diagonal.
struct FiberOperator {
    std::shared_ptr<const PlaneWaveBasis> basis;
    KVec k{0.0, 0.0, 0.0};
    Matrix h;
};

// Eigenpairs of one fiber, bands in ascending order.  Coefficient row j
// holds the plane-wave expansion of band j with the phase fixed so the
// largest-magnitude coefficient is real and positive.
struct FiberSpectrum {
    std::shared_ptr<const PlaneWaveBasis> basis;
    KVec k{0.0, 0.0, 0.0};
    RealVector eigenvalues;  // size n_bands
    Matrix coeffs;           // n_bands x basis_size

    int n_bands() const { return static_cast<int>(eigenvalues.size()); }
    // Half the matrix dimension: bands above this are truncation artefacts.
    int trusted_bands() const { return static_cast<int>(coeffs.cols()) / 2; }
};

// Eigenvalues on a quasi-momentum grid, row i <-> grid.points[i].
struct BandStructure {
    KGrid grid;
    RealMatrix eigenvalues;  // n_k x n_bands
};

// The quasi-momentum may leave the fundamental zone [-pi, pi)^d (the fibers
// are 2*pi-periodic in each component); |k_alpha| is capped at 4*pi to catch
// unit mistakes.
FiberOperator assemble_fiber(const FourierPotential& v,
                             std::shared_ptr<const PlaneWaveBasis> basis,
                             const KVec& k);

FiberSpectrum solve_fiber(const FiberOperator& op, int n_bands);
FiberSpectrum solve_fiber(const FourierPotential& v,
                          std::shared_ptr<const PlaneWaveBasis> basis, const KVec& k,
                          int n_bands);

BandStructure band_structure(const FourierPotential& v,
                             std::shared_ptr<const PlaneWaveBasis> basis,
                             const KGrid& grid, int n_bands, int workers = 1);

// Largest Hermiticity defect max |h - h^H| of an assembled fiber.
double hermiticity_defect(const Matrix& h);

}  // namespace blochsum
