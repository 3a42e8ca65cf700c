#pragma once

#include <Eigen/Dense>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "qjm/hermitian.hpp"

namespace qjm::conic {

struct SolverTolerances {
  double feasibility = 1e-8;
  double duality_gap = 1e-8;
  double witness_threshold = 1e-7;
  double bisection_width = 1e-7;
  int max_iterations = 200;
};

// |margin| below this is reported as Marginal in verification notes.
inline constexpr double kMarginalBand = 1e-7;

/// Real-linear map between Hermitian spaces, stored over the orthonormal
/// Hermitian basis coordinates (dout^2 x din^2 real matrix).
class HermitianMap {
 public:
  HermitianMap(int dim_in, int dim_out, Eigen::MatrixXd coeff);

  static HermitianMap scale(int dim, double factor);
  /// Builds the coordinate matrix by applying `f` to every basis element.
  /// `f` must be real-linear in its Hermitian argument.
  static HermitianMap from_function(int dim_in, int dim_out,
                                    const std::function<CMatrix(const CMatrix&)>& f);

  int dim_in() const { return din_; }
  int dim_out() const { return dout_; }
  const Eigen::MatrixXd& coeff() const { return coeff_; }

  CMatrix apply(const CMatrix& x) const;
  CMatrix apply_adjoint(const CMatrix& y) const;

 private:
  int din_, dout_;
  Eigen::MatrixXd coeff_;
};

/// Feasibility / linear-objective problem over Hermitian PSD block variables,
/// bounded nonnegative scalars and affine operator equalities.
class ConicProblem {
 public:
  struct Variable {
    std::string name;
    int dim;
  };
  struct Scalar {
    std::string name;
    double lower;
    double upper;  // +inf allowed
  };
  struct BlockTerm {
    int var;
    HermitianMap map;
  };
  struct ScalarTerm {
    int scalar;
    CMatrix coeff;  // Hermitian, equality dimension
  };
  struct Equality {
    std::string label;
    CMatrix target;  // Hermitian
    std::vector<BlockTerm> blocks;
    std::vector<ScalarTerm> scalars;
  };

  int add_variable(std::string name, int dim);
  int add_scalar(std::string name, double lower = 0.0,
                 double upper = std::numeric_limits<double>::infinity());

  void add_equality(Equality eq);
  /// Convenience: sum of scaled variables (+ scalar-coefficient terms) = target.
  void add_equality(std::string label, const CMatrix& target,
                    const std::vector<std::pair<int, double>>& block_coeffs,
                    const std::vector<std::pair<int, CMatrix>>& scalar_coeffs = {});

  /// Objective: maximize sum_i <C_i, X_i> + sum_j w_j u_j. Default: none
  /// (pure feasibility).
  void set_block_objective(int var, const CMatrix& c);
  void set_scalar_objective(int scalar, double weight);
  void maximize_scalar(int scalar) { set_scalar_objective(scalar, 1.0); }

  bool has_objective() const { return has_objective_; }
  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Scalar>& scalar_variables() const { return scalars_; }
  const std::vector<Equality>& equalities() const { return equalities_; }
  const std::vector<CMatrix>& block_objectives() const { return block_obj_; }
  const std::vector<double>& scalar_objectives() const { return scalar_obj_; }
  int variable_index(const std::string& name) const;

 private:
  std::vector<Variable> variables_;
  std::vector<Scalar> scalars_;
  std::vector<Equality> equalities_;
  std::vector<CMatrix> block_obj_;
  std::vector<double> scalar_obj_;
  bool has_objective_ = false;
};

enum class Status { Feasible, Infeasible, NumericalFailure };

/// Solver output. For Feasible the primal assignment is populated; for
/// Infeasible the equality multipliers form a Farkas witness: pairing them
/// against any cone-feasible assignment gives a nonnegative value while the
/// pairing with the targets is strictly negative.
struct ConicCertificate {
  Status status = Status::NumericalFailure;
  std::vector<CMatrix> blocks;
  std::vector<double> scalars;
  std::optional<double> objective;
  std::vector<CMatrix> multipliers;  // one Hermitian per equality
  double max_equality_violation = 0.0;
  double min_block_eigenvalue = 0.0;
  double witness_value = 0.0;  // -<targets, multipliers> when Infeasible
  double duality_gap = 0.0;
  int iterations = 0;
  std::string notes;
};

ConicCertificate solve(const ConicProblem& problem,
                       const SolverTolerances& tol = SolverTolerances());

struct VerificationReport {
  bool passed = false;
  double max_residual = 0.0;       // Feasible: worst equality violation
  double min_eigenvalue = 0.0;     // Feasible: worst block eigenvalue
  double witness_cone_eigenvalue = 0.0;  // Infeasible: min eig of A^T y blocks
  double witness_value = 0.0;            // Infeasible: -<b, y>
  bool marginal = false;
  std::string notes;
};

/// Recomputes all residuals from the problem data alone; shares no state with
/// the solver. Throws ShapeMismatch when certificate and problem disagree.
VerificationReport verify(const ConicProblem& problem, const ConicCertificate& cert,
                          double tol);

/// Self-describing JSON dump (variables, constraint matrices as sparse
/// triplets over the orthonormal Hermitian basis) for external cross-checks.
nlohmann::json debug_dump(const ConicProblem& problem);

/// Noise-robustness outcome shared by the incompatibility and steering
/// modules: optimal noise parameter plus certificates.
struct RobustnessResult {
  double lambda_max = 0.0;
  ConicCertificate optimum;
  std::optional<ConicCertificate> witness_above;  // infeasibility just past the optimum
  std::string method;
};

struct RobustnessOptions {
  enum class Method { DirectSdp, Bisection };
  Method method = Method::DirectSdp;
  SolverTolerances tolerances;
};

}  // namespace qjm::conic
