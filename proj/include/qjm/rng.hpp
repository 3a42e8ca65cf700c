#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "qjm/hermitian.hpp"

namespace qjm {

/// Deterministic random source. Distribution mappings are written out
/// explicitly so that a given seed produces identical streams on every
/// platform (std::uniform_real_distribution et al. are not portable).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Independent stream derived from (seed, index); used by parallel scans.
  static Rng substream(std::uint64_t seed, std::uint64_t index) {
    return Rng(seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
  }

  std::uint64_t next_u64() { return gen_(); }

  double uniform() {  // [0, 1)
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double gaussian() {  // Box-Muller, one value per call
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * M_PI * u2;
    spare_ = r * std::sin(th);
    have_spare_ = true;
    return r * std::cos(th);
  }

  Complex gaussian_complex() {
    const double re = gaussian();
    const double im = gaussian();
    return Complex(re, im);
  }

  CMatrix gaussian_matrix(int rows, int cols) {
    CMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = gaussian_complex();
    return m;
  }

  /// Haar-random unitary via QR of a Ginibre matrix with phase correction.
  CMatrix haar_unitary(int dim) {
    const CMatrix g = gaussian_matrix(dim, dim);
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ();
    CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < dim; ++i) {
      Complex d = r(i, i);
      q.col(i) *= (std::abs(d) > 0 ? d / std::abs(d) : Complex(1, 0));
    }
    return q;
  }

  /// Random density operator (PSD, trace 1) of full rank a.s.
  HermitianOperator density_operator(int dim) {
    const CMatrix g = gaussian_matrix(dim, dim);
    CMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return HermitianOperator(0.5 * (rho + rho.adjoint()));
  }

  Eigen::Vector3d unit_vector3() {
    const double z = uniform(-1.0, 1.0);
    const double phi = uniform(0.0, 2.0 * M_PI);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(phi), r * std::sin(phi), z};
  }

  /// Uniform over the unit ball (Bloch vectors of valid unbiased effects).
  Eigen::Vector3d ball_vector3() {
    return std::cbrt(uniform()) * unit_vector3();
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace qjm
