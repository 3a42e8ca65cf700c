#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>

#include "qjm/errors.hpp"

namespace qjm {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kHermiticityTol = 1e-12;
inline constexpr double kPsdTol = 1e-9;

/// Dense complex Hermitian matrix with dimension metadata. Carrier of states,
/// effects, conditional states and parent-POVM elements. Immutable after
/// construction; all operations on it are pure.
class HermitianOperator {
 public:
  /// Validates squareness and hermiticity (defect <= tol) of `m`.
  explicit HermitianOperator(CMatrix m, double tol = kHermiticityTol);

  static HermitianOperator identity(int dim);
  static HermitianOperator zero(int dim);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const CMatrix& matrix() const { return mat_; }
  double trace() const { return mat_.trace().real(); }
  double min_eigenvalue() const;

  HermitianOperator scaled(double c) const { return HermitianOperator(c * mat_); }

 private:
  CMatrix mat_;
};

HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b);
HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b);
HermitianOperator operator*(double c, const HermitianOperator& a);

struct ValidationReport {
  int dim = 0;
  double hermiticity_defect = 0.0;
  double min_eigenvalue = 0.0;
  bool passed = false;
  std::string notes;
};

/// Hermiticity / positivity report for a raw complex matrix.
/// Throws NonSquare when row and column counts differ.
ValidationReport validate(const CMatrix& m, bool psd_required, double tol = kPsdTol);
ValidationReport validate(const HermitianOperator& op, bool psd_required,
                          double tol = kPsdTol);

/// Kronecker product; subsystem ordering is A-first, row-major over (iA, iB).
HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b);
CMatrix tensor(const CMatrix& a, const CMatrix& b);

enum class Side { A, B };

/// Reduced operator on the kept side of a dA*dB bipartite operator.
HermitianOperator partial_trace(const HermitianOperator& op, int dim_a, int dim_b,
                                Side keep);
CMatrix partial_trace(const CMatrix& op, int dim_a, int dim_b, Side keep);

/// Entrywise transpose in the computational basis (an involution).
HermitianOperator transpose(const HermitianOperator& op);

/// Pauli decomposition of a qubit operator: op = (weight*I + vec.sigma)/2.
/// The operator is PSD iff |vec| <= weight.
struct BlochVector {
  double weight = 0.0;
  Eigen::Vector3d vec = Eigen::Vector3d::Zero();
};

BlochVector bloch(const HermitianOperator& op);       // dim 2 only
HermitianOperator from_bloch(const BlochVector& b);

const CMatrix& pauli_x();
const CMatrix& pauli_y();
const CMatrix& pauli_z();

/// Coordinates of a Hermitian matrix over the orthonormal Hermitian basis
/// (diagonal units, then sqrt(2)-scaled real/imaginary off-diagonal pairs).
/// Preserves the trace inner product: tr(XY) = hvec(X).dot(hvec(Y)).
RVector hvec(const CMatrix& x);
CMatrix hmat(const RVector& v, int dim);
inline int hvec_size(int dim) { return dim * dim; }

}  // namespace qjm
