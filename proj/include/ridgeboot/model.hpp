#pragma once

#include <Eigen/Dense>

#include <optional>

namespace ridgeboot {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kDefaultRankTolerance = 1e-10;

/// Thin singular value decomposition X = P * diag(singular) * Q^T restricted
/// to the numerically positive singular values.
struct ThinSvd {
  Matrix left;      // n x r, orthonormal columns (P)
  Vector singular;  // r values, descending, all > rank_tolerance * singular[0]
  Matrix right;     // p x r, orthonormal columns (Q)
  double rank_tolerance = kDefaultRankTolerance;

  Eigen::Index rank() const { return singular.size(); }
  Eigen::Index rows() const { return left.rows(); }
  Eigen::Index cols() const { return right.rows(); }
  bool full_column_rank() const { return rank() == cols(); }
  double smallest() const { return singular(rank() - 1); }
};

/// Ridge and threshold tuning pair (rho_n, b_n).
struct Hyperparams {
  double rho = 0.0;
  double threshold = 0.0;

  void validate() const;
};

/// Throws DataError unless the matrix is nonempty and every entry is finite.
void validate_design(const Matrix& design);

/// Computes the thin SVD and truncates to r = #{lambda_k > tol * lambda_1}.
/// Throws NumericalError when the decomposition fails or r = 0.
ThinSvd thin_svd(const Matrix& design, double rank_tolerance = kDefaultRankTolerance);

/// (I - QQ^T) v: the component of v in the null space of the design.
/// Exactly zero when the design has full column rank.
Vector complement_project(const ThinSvd& svd, const Vector& v);

struct RowSpaceParams {
  Vector zeta;   // Q^T beta
  Vector theta;  // Q Q^T beta
};

RowSpaceParams row_space_params(const ThinSvd& svd, const Vector& beta);

struct BiasSdBound {
  double bias = 0.0;
  double sd = 0.0;
};

/// Worst-case bias and standard deviation of a^T times the plain ridge
/// estimator, with the smallest positive singular value standing in for
/// lambda_p.
BiasSdBound ridge_bias_sd_bound(const ThinSvd& svd, double rho, const Vector& a,
                                double beta_norm, double err_var);

/// Design, response and combination matrix together with the cached SVD of
/// the design. Immutable once built.
class ModelFrame {
 public:
  ModelFrame(Matrix design, Vector response, std::optional<Matrix> combination = std::nullopt,
             double rank_tolerance = kDefaultRankTolerance);

  // Reuses an existing decomposition of `design` (bootstrap and CV refits).
  ModelFrame(Matrix design, Vector response, Matrix combination, ThinSvd svd);

  const Matrix& design() const { return design_; }
  const Vector& response() const { return response_; }
  const Matrix& combination() const { return combination_; }
  const ThinSvd& svd() const { return svd_; }

  Eigen::Index n() const { return design_.rows(); }
  Eigen::Index p() const { return design_.cols(); }
  Eigen::Index p1() const { return combination_.rows(); }

  /// Same design and combination, new response.
  ModelFrame with_response(Vector response) const;

 private:
  Matrix design_;
  Vector response_;
  Matrix combination_;
  ThinSvd svd_;
};

}  // namespace ridgeboot
