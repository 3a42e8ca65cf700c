#include "qjm/hermitian.hpp"

#include <cmath>

namespace qjm {

namespace {

double hermiticity_defect_of(const CMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double min_eig_of(const CMatrix& m) {
  if (m.rows() == 1) return m(0, 0).real();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace

HermitianOperator::HermitianOperator(CMatrix m, double tol) : mat_(std::move(m)) {
  if (mat_.rows() != mat_.cols())
    throw NonSquare("HermitianOperator: " + std::to_string(mat_.rows()) + "x" +
                    std::to_string(mat_.cols()) + " matrix is not square");
  if (mat_.rows() < 1) throw RangeError("HermitianOperator: dimension must be >= 1");
  const double defect = hermiticity_defect_of(mat_);
  if (!(defect <= tol))
    throw InputError("HermitianOperator: hermiticity defect " + std::to_string(defect) +
                     " exceeds tolerance");
}

HermitianOperator HermitianOperator::identity(int dim) {
  return HermitianOperator(CMatrix::Identity(dim, dim));
}

HermitianOperator HermitianOperator::zero(int dim) {
  return HermitianOperator(CMatrix::Zero(dim, dim));
}

double HermitianOperator::min_eigenvalue() const { return min_eig_of(mat_); }

HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("operator+: dimensions differ");
  return HermitianOperator(a.matrix() + b.matrix());
}

HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("operator-: dimensions differ");
  return HermitianOperator(a.matrix() - b.matrix());
}

HermitianOperator operator*(double c, const HermitianOperator& a) { return a.scaled(c); }

ValidationReport validate(const CMatrix& m, bool psd_required, double tol) {
  if (m.rows() != m.cols())
    throw NonSquare("validate: " + std::to_string(m.rows()) + "x" +
                    std::to_string(m.cols()) + " matrix is not square");
  ValidationReport rep;
  rep.dim = static_cast<int>(m.rows());
  rep.hermiticity_defect = hermiticity_defect_of(m);
  const CMatrix herm = 0.5 * (m + m.adjoint());
  rep.min_eigenvalue = min_eig_of(herm);
  rep.passed = rep.hermiticity_defect <= tol &&
               (!psd_required || rep.min_eigenvalue >= -tol);
  if (!rep.passed) {
    if (rep.hermiticity_defect > tol) rep.notes += "hermiticity defect above tolerance; ";
    if (psd_required && rep.min_eigenvalue < -tol)
      rep.notes += "negative eigenvalue " + std::to_string(rep.min_eigenvalue) + "; ";
  }
  return rep;
}

ValidationReport validate(const HermitianOperator& op, bool psd_required, double tol) {
  return validate(op.matrix(), psd_required, tol);
}

CMatrix tensor(const CMatrix& a, const CMatrix& b) {
  const int ra = static_cast<int>(a.rows()), ca = static_cast<int>(a.cols());
  const int rb = static_cast<int>(b.rows()), cb = static_cast<int>(b.cols());
  CMatrix out(ra * rb, ca * cb);
  for (int i = 0; i < ra; ++i)
    for (int j = 0; j < ca; ++j) out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
  return out;
}

HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b) {
  return HermitianOperator(tensor(a.matrix(), b.matrix()));
}

CMatrix partial_trace(const CMatrix& op, int dim_a, int dim_b, Side keep) {
  if (op.rows() != op.cols()) throw NonSquare("partial_trace: matrix is not square");
  if (dim_a < 1 || dim_b < 1 ||
      op.rows() != static_cast<Eigen::Index>(dim_a) * dim_b)
    throw DimensionMismatch("partial_trace: operator dimension " +
                            std::to_string(op.rows()) + " is not " +
                            std::to_string(dim_a) + "*" + std::to_string(dim_b));
  if (keep == Side::A) {
    CMatrix out = CMatrix::Zero(dim_a, dim_a);
    for (int ia = 0; ia < dim_a; ++ia)
      for (int ja = 0; ja < dim_a; ++ja)
        for (int ib = 0; ib < dim_b; ++ib)
          out(ia, ja) += op(ia * dim_b + ib, ja * dim_b + ib);
    return out;
  }
  CMatrix out = CMatrix::Zero(dim_b, dim_b);
  for (int ib = 0; ib < dim_b; ++ib)
    for (int jb = 0; jb < dim_b; ++jb)
      for (int ia = 0; ia < dim_a; ++ia)
        out(ib, jb) += op(ia * dim_b + ib, ia * dim_b + jb);
  return out;
}

HermitianOperator partial_trace(const HermitianOperator& op, int dim_a, int dim_b,
                                Side keep) {
  return HermitianOperator(partial_trace(op.matrix(), dim_a, dim_b, keep));
}

HermitianOperator transpose(const HermitianOperator& op) {
  return HermitianOperator(op.matrix().transpose());
}

const CMatrix& pauli_x() {
  static const CMatrix m = (CMatrix(2, 2) << 0, 1, 1, 0).finished();
  return m;
}

const CMatrix& pauli_y() {
  static const CMatrix m =
      (CMatrix(2, 2) << 0, Complex(0, -1), Complex(0, 1), 0).finished();
  return m;
}

const CMatrix& pauli_z() {
  static const CMatrix m = (CMatrix(2, 2) << 1, 0, 0, -1).finished();
  return m;
}

BlochVector bloch(const HermitianOperator& op) {
  if (op.dim() != 2) throw DimensionMismatch("bloch: defined for dim 2 only");
  BlochVector b;
  const CMatrix& m = op.matrix();
  b.weight = m.trace().real();
  b.vec[0] = (m * pauli_x()).trace().real();
  b.vec[1] = (m * pauli_y()).trace().real();
  b.vec[2] = (m * pauli_z()).trace().real();
  return b;
}

HermitianOperator from_bloch(const BlochVector& b) {
  CMatrix m = 0.5 * (b.weight * CMatrix::Identity(2, 2) + b.vec[0] * pauli_x() +
                     b.vec[1] * pauli_y() + b.vec[2] * pauli_z());
  return HermitianOperator(std::move(m));
}

RVector hvec(const CMatrix& x) {
  const int d = static_cast<int>(x.rows());
  RVector v(d * d);
  int idx = 0;
  for (int i = 0; i < d; ++i) v[idx++] = x(i, i).real();
  const double rt2 = std::sqrt(2.0);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < j; ++i) {
      const Complex e = 0.5 * (x(i, j) + std::conj(x(j, i)));
      v[idx++] = rt2 * e.real();
      v[idx++] = rt2 * e.imag();
    }
  return v;
}

CMatrix hmat(const RVector& v, int dim) {
  if (v.size() != static_cast<Eigen::Index>(dim) * dim)
    throw DimensionMismatch("hmat: coordinate size does not match dimension");
  CMatrix x(dim, dim);
  int idx = 0;
  for (int i = 0; i < dim; ++i) x(i, i) = v[idx++];
  const double inv_rt2 = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < j; ++i) {
      const Complex e(inv_rt2 * v[idx], inv_rt2 * v[idx + 1]);
      idx += 2;
      x(i, j) = e;
      x(j, i) = std::conj(e);
    }
  return x;
}

}  // namespace qjm
