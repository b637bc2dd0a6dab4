#pragma once

#include <Eigen/Core>
#include <Eigen/Dense>

#include <array>
#include <complex>
#include <stdexcept>
#include <string>

namespace blochsum {

using cxd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Integer frequency vector and quasi-momentum; entries beyond the active
// dimension stay zero so the types are dimension-agnostic.
using IVec = std::array<int, 3>;
using KVec = std::array<double, 3>;

inline double dot(const KVec& a, const KVec& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double norm2(const KVec& a) { return dot(a, a); }

// Raised when an operation requires a spectral gap that is not there
// (crossings, zone-boundary degeneracies).  Callers treat it as a skip
// signal, never as a zero result.
class DegeneracyError : public std::runtime_error {
  public:
    explicit DegeneracyError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace blochsum
