#include "qjm/ipm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qjm/errors.hpp"

namespace qjm::conic {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Cone-space vector in the Nesterov-Todd scaled frame: one Hermitian matrix
// per PSD block plus plain reals for the nonnegative part.
struct ScaledVec {
  std::vector<CMatrix> blocks;
  VectorXd scalars;
};

struct Scaling {
  // Per block: s = r diag(lam) r^dag, z = rti diag(lam) rti^dag, rti = r^{-dag}.
  std::vector<CMatrix> r, rti, q, qinv;  // q = r r^dag
  std::vector<VectorXd> lam;
  // Per scalar: wsc = sqrt(s/z), slam = sqrt(s z).
  VectorXd wsc, slam;
};

class ConeOps {
 public:
  explicit ConeOps(const ConeLayout& k) : k_(k) {}

  int nblocks() const { return static_cast<int>(k_.block_dims.size()); }
  int dim(int i) const { return k_.block_dims[i]; }
  int offset(int i) const { return k_.block_offset(i); }
  int scalar_offset() const { return k_.scalar_offset(); }
  int nscalar() const { return k_.nonneg; }
  int len() const { return k_.total_len(); }
  int degree() const { return k_.degree(); }

  CMatrix block(const VectorXd& v, int i) const {
    return hmat(v.segment(offset(i), dim(i) * dim(i)), dim(i));
  }
  void set_block(VectorXd& v, int i, const CMatrix& m) const {
    v.segment(offset(i), dim(i) * dim(i)) = hvec(m);
  }
  auto scalars(const VectorXd& v) const { return v.segment(scalar_offset(), nscalar()); }
  auto scalars(VectorXd& v) const { return v.segment(scalar_offset(), nscalar()); }

  VectorXd identity() const {
    VectorXd e = VectorXd::Zero(len());
    for (int i = 0; i < nblocks(); ++i) set_block(e, i, CMatrix::Identity(dim(i), dim(i)));
    scalars(e).setOnes();
    return e;
  }

  Scaling compute_scaling(const VectorXd& s, const VectorXd& z) const {
    Scaling w;
    w.r.resize(nblocks());
    w.rti.resize(nblocks());
    w.q.resize(nblocks());
    w.qinv.resize(nblocks());
    w.lam.resize(nblocks());
    for (int i = 0; i < nblocks(); ++i) {
      const CMatrix S = block(s, i), Z = block(z, i);
      Eigen::LLT<CMatrix> ls(S), lz(Z);
      if (ls.info() != Eigen::Success || lz.info() != Eigen::Success)
        throw NumericalFailure("ipm: scaling point left the cone");
      const CMatrix Ls = ls.matrixL();
      const CMatrix Lz = lz.matrixL();
      Eigen::JacobiSVD<CMatrix> svd(Lz.adjoint() * Ls,
                                    Eigen::ComputeFullU | Eigen::ComputeFullV);
      const VectorXd sig = svd.singularValues();
      const VectorXd isq = sig.cwiseSqrt().cwiseInverse();
      w.r[i] = Ls * svd.matrixV() * isq.asDiagonal();
      w.rti[i] = Lz * svd.matrixU() * isq.asDiagonal();
      w.lam[i] = sig;
      w.q[i] = w.r[i] * w.r[i].adjoint();
      w.qinv[i] = w.rti[i] * w.rti[i].adjoint();
    }
    w.wsc.resize(nscalar());
    w.slam.resize(nscalar());
    for (int j = 0; j < nscalar(); ++j) {
      const double sj = s[scalar_offset() + j];
      const double zj = z[scalar_offset() + j];
      if (!(sj > 0.0) || !(zj > 0.0))
        throw NumericalFailure("ipm: scalar scaling point left the cone");
      w.wsc[j] = std::sqrt(sj / zj);
      w.slam[j] = std::sqrt(sj * zj);
    }
    return w;
  }

  Scaling identity_scaling() const {
    Scaling w;
    w.r.assign(nblocks(), CMatrix());
    for (int i = 0; i < nblocks(); ++i) {
      w.r[i] = CMatrix::Identity(dim(i), dim(i));
    }
    w.rti = w.r;
    w.q = w.r;
    w.qinv = w.r;
    w.lam.resize(nblocks());
    for (int i = 0; i < nblocks(); ++i) w.lam[i] = VectorXd::Ones(dim(i));
    w.wsc = VectorXd::Ones(nscalar());
    w.slam = VectorXd::Ones(nscalar());
    return w;
  }

  // (W^T W)(v): block -> q V q, scalar -> wsc^2 v.
  VectorXd wtw(const Scaling& w, const VectorXd& v) const {
    VectorXd out(len());
    for (int i = 0; i < nblocks(); ++i)
      out.segment(offset(i), dim(i) * dim(i)) = hvec(w.q[i] * block(v, i) * w.q[i]);
    scalars(out) = w.wsc.array().square() * scalars(v).array();
    return out;
  }

  // W(z-like) = r^dag V r; scalar wsc*v. Lands in the scaled frame.
  ScaledVec scale_z(const Scaling& w, const VectorXd& v) const {
    ScaledVec out;
    out.blocks.resize(nblocks());
    for (int i = 0; i < nblocks(); ++i)
      out.blocks[i] = w.r[i].adjoint() * block(v, i) * w.r[i];
    out.scalars = w.wsc.array() * scalars(v).array();
    return out;
  }

  // W^{-T}(s-like) = rti^dag V rti; scalar v/wsc.
  ScaledVec scale_s(const Scaling& w, const VectorXd& v) const {
    ScaledVec out;
    out.blocks.resize(nblocks());
    for (int i = 0; i < nblocks(); ++i)
      out.blocks[i] = w.rti[i].adjoint() * block(v, i) * w.rti[i];
    out.scalars = scalars(v).array() / w.wsc.array();
    return out;
  }

  // W^T(scaled s-dir) = r V r^dag; scalar wsc*v. Back to the unscaled frame.
  VectorXd unscale_s(const Scaling& w, const ScaledVec& v) const {
    VectorXd out(len());
    for (int i = 0; i < nblocks(); ++i)
      out.segment(offset(i), dim(i) * dim(i)) = hvec(w.r[i] * v.blocks[i] * w.r[i].adjoint());
    scalars(out) = w.wsc.array() * v.scalars.array();
    return out;
  }

  // Jordan division against the scaled point: solve lam o X = R.
  ScaledVec jordan_div_lambda(const Scaling& w, const ScaledVec& rc) const {
    ScaledVec out;
    out.blocks.resize(nblocks());
    for (int i = 0; i < nblocks(); ++i) {
      const int d = dim(i);
      CMatrix x(d, d);
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
          x(a, b) = 2.0 * rc.blocks[i](a, b) / (w.lam[i][a] + w.lam[i][b]);
      out.blocks[i] = x;
    }
    out.scalars = rc.scalars.array() / w.slam.array();
    return out;
  }

  ScaledVec jordan_product(const ScaledVec& a, const ScaledVec& b) const {
    ScaledVec out;
    out.blocks.resize(nblocks());
    for (int i = 0; i < nblocks(); ++i)
      out.blocks[i] = 0.5 * (a.blocks[i] * b.blocks[i] + b.blocks[i] * a.blocks[i]);
    out.scalars = a.scalars.array() * b.scalars.array();
    return out;
  }

  ScaledVec neg_lambda_sq(const Scaling& w) const {
    ScaledVec out;
    out.blocks.resize(nblocks());
    for (int i = 0; i < nblocks(); ++i) {
      out.blocks[i] = CMatrix::Zero(dim(i), dim(i));
      out.blocks[i].diagonal() = -w.lam[i].array().square().cast<Complex>();
    }
    out.scalars = -w.slam.array().square();
    return out;
  }

  void add_scaled_identity(ScaledVec& v, double c) const {
    for (int i = 0; i < nblocks(); ++i)
      v.blocks[i] += c * CMatrix::Identity(dim(i), dim(i));
    v.scalars.array() += c;
  }

  ScaledVec sub(const ScaledVec& a, const ScaledVec& b) const {
    ScaledVec out;
    out.blocks.resize(nblocks());
    for (int i = 0; i < nblocks(); ++i) out.blocks[i] = a.blocks[i] - b.blocks[i];
    out.scalars = a.scalars - b.scalars;
    return out;
  }

  // Largest alpha with lam + alpha*dir in the cone (scaled frame), capped.
  double max_step(const Scaling& w, const ScaledVec& dir, double cap) const {
    double alpha = cap;
    for (int i = 0; i < nblocks(); ++i) {
      const VectorXd inv_sqrt = w.lam[i].cwiseSqrt().cwiseInverse();
      const CMatrix m = inv_sqrt.asDiagonal() * dir.blocks[i] * inv_sqrt.asDiagonal();
      Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
      const double emin = es.eigenvalues().minCoeff();
      if (emin < 0.0) alpha = std::min(alpha, -1.0 / emin);
    }
    for (int j = 0; j < nscalar(); ++j) {
      const double rho = dir.scalars[j] / w.slam[j];
      if (rho < 0.0) alpha = std::min(alpha, -1.0 / rho);
    }
    return alpha;
  }

 private:
  const ConeLayout& k_;
};

class KktSolver {
 public:
  KktSolver(const ConeOps& ops, const MatrixXd& A) : ops_(ops), A_(A) {}

  void factor(const Scaling& w) {
    w_ = &w;
    const int m = static_cast<int>(A_.rows());
    MatrixXd M = MatrixXd::Zero(m, m);
    // M = A (W^T W) A^T accumulated per cone component.
    for (int i = 0; i < ops_.nblocks(); ++i) {
      const int d = ops_.dim(i);
      const int off = ops_.offset(i);
      MatrixXd aq(m, d * d);
      for (int r = 0; r < m; ++r) {
        const CMatrix row = hmat(A_.row(r).segment(off, d * d).transpose(), d);
        aq.row(r) = hvec(w.q[i] * row * w.q[i]).transpose();
      }
      M.noalias() += aq * A_.middleCols(off, d * d).transpose();
    }
    if (ops_.nscalar() > 0) {
      const auto cols = A_.middleCols(ops_.scalar_offset(), ops_.nscalar());
      M.noalias() += cols * w.wsc.array().square().matrix().asDiagonal() * cols.transpose();
    }
    M = 0.5 * (M + M.transpose());
    m_ = M;
    llt_.compute(M);
    if (llt_.info() != Eigen::Success) {
      // Semi-definite fallback with a floor on the diagonal.
      MatrixXd Mreg = M;
      Mreg.diagonal().array() += 1e-13 * std::max(1.0, M.trace() / m);
      ldlt_.compute(Mreg);
      use_ldlt_ = true;
      if (ldlt_.info() != Eigen::Success)
        throw NumericalFailure("ipm: KKT factorization failed");
    } else {
      use_ldlt_ = false;
    }
  }

  // Solves [0 A^T -I; A 0 0; -I 0 -W^T W] (ux,uy,uz) = (bx,by,bz)
  // (the conic KKT system specialized to G = -I, h = 0).
  void solve(const VectorXd& bx, const VectorXd& by, const VectorXd& bz,
             VectorXd& ux, VectorXd& uy, VectorXd& uz) const {
    const VectorXd tmp = ops_.wtw(*w_, bx) - bz;
    const VectorXd rhs = A_ * tmp - by;
    uy = solve_m(rhs);
    uy += solve_m(rhs - m_ * uy);  // one refinement pass
    uz = A_.transpose() * uy - bx;
    ux = -bz - ops_.wtw(*w_, uz);
  }

 private:
  VectorXd solve_m(const VectorXd& rhs) const {
    return use_ldlt_ ? ldlt_.solve(rhs) : llt_.solve(rhs);
  }

  const ConeOps& ops_;
  const MatrixXd& A_;
  const Scaling* w_ = nullptr;
  MatrixXd m_;
  Eigen::LLT<MatrixXd> llt_;
  Eigen::LDLT<MatrixXd> ldlt_;
  bool use_ldlt_ = false;
};

struct Direction {
  VectorXd x, y, z, s;
  double tau = 0.0, kappa = 0.0;
  ScaledVec sbar, zbar;  // scaled cone directions, reused by the corrector
};

}  // namespace

IpmSolution solve_standard_form(const StandardForm& p, const IpmSettings& st) {
  const ConeOps ops(p.cone);
  const int n = ops.len();
  const int m = static_cast<int>(p.A.rows());
  if (p.A.cols() != n || p.b.size() != m || p.c.size() != n)
    throw ShapeMismatch("ipm: inconsistent problem dimensions");

  const double resx0 = std::max(1.0, p.c.norm());
  const double resy0 = std::max(1.0, p.b.norm());
  const double resz0 = 1.0;
  const double nu = ops.degree();

  // Initial point: least-norm primal/dual guesses shifted into the cone.
  KktSolver kkt(ops, p.A);
  Scaling w = ops.identity_scaling();
  kkt.factor(w);

  VectorXd x(n), y(m), z(n), s(n);
  {
    VectorXd ux, uy, uz;
    kkt.solve(VectorXd::Zero(n), p.b, VectorXd::Zero(n), ux, uy, uz);
    s = ux;  // = min-norm solution of A x = b
    x = ux;
    const ScaledVec sv = ops.scale_z(w, s);  // identity scaling: just views
    double mineig = std::numeric_limits<double>::infinity();
    for (int i = 0; i < ops.nblocks(); ++i) {
      Eigen::SelfAdjointEigenSolver<CMatrix> es(sv.blocks[i], Eigen::EigenvaluesOnly);
      mineig = std::min(mineig, es.eigenvalues().minCoeff());
    }
    if (ops.nscalar() > 0 && sv.scalars.size() > 0)
      mineig = std::min(mineig, sv.scalars.minCoeff());
    if (mineig < 1.0) s += (1.0 - mineig) * ops.identity();

    kkt.solve(-p.c, VectorXd::Zero(m), VectorXd::Zero(n), ux, uy, uz);
    y = uy;
    z = uz;
    mineig = std::numeric_limits<double>::infinity();
    const ScaledVec zv = ops.scale_z(w, z);
    for (int i = 0; i < ops.nblocks(); ++i) {
      Eigen::SelfAdjointEigenSolver<CMatrix> es(zv.blocks[i], Eigen::EigenvaluesOnly);
      mineig = std::min(mineig, es.eigenvalues().minCoeff());
    }
    if (ops.nscalar() > 0 && zv.scalars.size() > 0)
      mineig = std::min(mineig, zv.scalars.minCoeff());
    if (mineig < 1.0) z += (1.0 - mineig) * ops.identity();
  }
  double tau = 1.0, kappa = 1.0;

  IpmSolution sol;
  int stalls = 0;

  for (int iter = 0; iter <= st.max_iterations; ++iter) {
    // Residuals of the self-dual system.
    const VectorXd rx = p.A.transpose() * y - z + p.c * tau;  // A^T y + G^T z + c tau
    const VectorXd ry = p.A * x - p.b * tau;
    const VectorXd rz = s - x;  // s + G x - h tau
    const double rt = kappa + p.c.dot(x) + p.b.dot(y);

    const double gap_h = s.dot(z);  // homogeneous <s, z>
    const double pcost = p.c.dot(x) / tau;
    const double dcost = -p.b.dot(y) / tau;
    const double gap_abs = gap_h / (tau * tau);
    double relgap = std::numeric_limits<double>::infinity();
    if (pcost < 0.0)
      relgap = gap_abs / -pcost;
    else if (dcost > 0.0)
      relgap = gap_abs / dcost;
    const double pres = std::max(ry.norm() / resy0, rz.norm() / resz0) / tau;
    const double dres = rx.norm() / (resx0 * tau);

    sol.iterations = iter;
    sol.primal_objective = pcost;
    sol.dual_objective = dcost;
    sol.gap = gap_abs;
    sol.primal_residual = pres;
    sol.dual_residual = dres;

    if (pres <= st.feastol && dres <= st.feastol &&
        (gap_abs <= st.abstol || relgap <= st.reltol)) {
      sol.status = IpmStatus::Optimal;
      sol.x = s / tau;  // cone-feasible by construction
      sol.y = y / tau;
      sol.z = z / tau;
      return sol;
    }

    const double xi = -p.b.dot(y);  // -(h^T z + b^T y), h = 0
    if (xi > 0.0) {
      const VectorXd axz = p.A.transpose() * y - z;
      if (axz.norm() / (resx0 * xi) <= st.feastol) {
        sol.status = IpmStatus::PrimalInfeasible;
        const double scale = y.norm();
        sol.y = y / scale;
        sol.z = z / scale;
        sol.x = VectorXd::Zero(n);
        return sol;
      }
    }
    const double zeta = -p.c.dot(x);
    if (zeta > 0.0) {
      const double dinf =
          std::max((p.A * x).norm() / resy0, (s - x).norm() / resz0) / zeta;
      if (dinf <= st.feastol) {
        sol.status = IpmStatus::DualInfeasible;
        sol.x = x / zeta;
        sol.y = VectorXd::Zero(m);
        sol.z = VectorXd::Zero(n);
        return sol;
      }
    }

    if (iter == st.max_iterations) {
      sol.status = IpmStatus::IterationLimit;
      sol.x = s / tau;
      sol.y = y / tau;
      sol.z = z / tau;
      sol.notes = "iteration limit";
      return sol;
    }

    w = ops.compute_scaling(s, z);
    kkt.factor(w);
    const double mu = (gap_h + tau * kappa) / (nu + 1.0);

    VectorXd vx, vy, vz;
    kkt.solve(-p.c, p.b, VectorXd::Zero(n), vx, vy, vz);

    const auto compute_direction = [&](double sigma, const ScaledVec& rc,
                                       double rkappa) -> Direction {
      Direction d;
      const double rfac = 1.0 - sigma;
      const VectorXd rhs1 = -rfac * rx;
      const VectorXd rhs2 = -rfac * ry;
      const VectorXd rhs3 = -rfac * rz;
      const double rhs4 = -rfac * rt;

      const ScaledVec ldiv = ops.jordan_div_lambda(w, rc);
      const VectorXd bz = rhs3 - ops.unscale_s(w, ldiv);

      VectorXd ux, uy, uz;
      kkt.solve(rhs1, rhs2, bz, ux, uy, uz);

      const double den = p.c.dot(vx) + p.b.dot(vy) - kappa / tau;
      const double num = rhs4 - rkappa / tau - p.c.dot(ux) - p.b.dot(uy);
      if (std::abs(den) < 1e-300) throw NumericalFailure("ipm: singular tau step");
      d.tau = num / den;
      d.x = ux + d.tau * vx;
      d.y = uy + d.tau * vy;
      d.z = uz + d.tau * vz;
      d.zbar = ops.scale_z(w, d.z);
      d.sbar = ops.sub(ldiv, d.zbar);
      d.s = ops.unscale_s(w, d.sbar);
      d.kappa = (rkappa - kappa * d.tau) / tau;
      return d;
    };

    const auto max_step_all = [&](const Direction& d) {
      double a = ops.max_step(w, d.sbar, 1e18);
      a = std::min(a, ops.max_step(w, d.zbar, 1e18));
      if (d.tau < 0.0) a = std::min(a, -tau / d.tau);
      if (d.kappa < 0.0) a = std::min(a, -kappa / d.kappa);
      return a;
    };

    // Predictor.
    const Direction daff =
        compute_direction(0.0, ops.neg_lambda_sq(w), -tau * kappa);
    const double alpha_aff = std::min(1.0, max_step_all(daff));
    const double sigma =
        std::pow(1.0 - alpha_aff, 3.0);

    // Corrector (combined direction).
    ScaledVec rc = ops.neg_lambda_sq(w);
    rc = ops.sub(rc, ops.jordan_product(daff.sbar, daff.zbar));
    ops.add_scaled_identity(rc, sigma * mu);
    const double rkappa = -tau * kappa - daff.tau * daff.kappa + sigma * mu;
    const Direction d = compute_direction(sigma, rc, rkappa);

    double alpha = std::min(1.0, st.step_fraction * max_step_all(d));
    if (alpha < 1e-8) {
      if (++stalls >= 3) {
        sol.status = IpmStatus::Stalled;
        sol.x = s / tau;
        sol.y = y / tau;
        sol.z = z / tau;
        sol.notes = "step length collapsed";
        return sol;
      }
    } else {
      stalls = 0;
    }

    x += alpha * d.x;
    y += alpha * d.y;
    z += alpha * d.z;
    s += alpha * d.s;
    tau += alpha * d.tau;
    kappa += alpha * d.kappa;
  }

  sol.status = IpmStatus::IterationLimit;
  return sol;
}

}  // namespace qjm::conic
