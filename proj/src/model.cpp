#include "ridgeboot/model.hpp"

#include "ridgeboot/error.hpp"

#include <cmath>
#include <sstream>

namespace ridgeboot {

std::string dims(long rows, long cols) {
  std::ostringstream os;
  os << rows << "x" << cols;
  return os.str();
}

void Hyperparams::validate() const {
  if (!std::isfinite(rho) || rho < 0.0) {
    throw InvalidArgument("ridge parameter must be finite and nonnegative");
  }
  if (!std::isfinite(threshold) || threshold < 0.0) {
    throw InvalidArgument("threshold must be finite and nonnegative");
  }
}

void validate_design(const Matrix& design) {
  if (design.rows() < 1 || design.cols() < 1) {
    throw DataError("design matrix is empty");
  }
  if (!design.allFinite()) {
    throw DataError("design matrix has non-finite entries");
  }
}

ThinSvd thin_svd(const Matrix& design, double rank_tolerance) {
  validate_design(design);
  if (!(rank_tolerance > 0.0 && rank_tolerance < 1.0)) {
    throw InvalidArgument("rank tolerance must lie in (0, 1)");
  }
  Eigen::BDCSVD<Matrix> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) {
    throw NumericalError("singular value decomposition did not converge");
  }
  const Vector& sv = svd.singularValues();
  if (sv.size() == 0 || !(sv(0) > 0.0)) {
    throw NumericalError("design matrix has rank zero");
  }
  const double cutoff = rank_tolerance * sv(0);
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > cutoff) ++r;

  ThinSvd out;
  out.left = svd.matrixU().leftCols(r);
  out.singular = sv.head(r);
  out.right = svd.matrixV().leftCols(r);
  out.rank_tolerance = rank_tolerance;
  return out;
}

Vector complement_project(const ThinSvd& svd, const Vector& v) {
  if (v.size() != svd.cols()) {
    throw DimensionError("complement_project: expected length " + std::to_string(svd.cols()) +
                         ", found " + std::to_string(v.size()));
  }
  if (svd.full_column_rank()) return Vector::Zero(v.size());
  return v - svd.right * (svd.right.transpose() * v);
}

RowSpaceParams row_space_params(const ThinSvd& svd, const Vector& beta) {
  if (beta.size() != svd.cols()) {
    throw DimensionError("row_space_params: expected length " + std::to_string(svd.cols()) +
                         ", found " + std::to_string(beta.size()));
  }
  RowSpaceParams out;
  out.zeta = svd.right.transpose() * beta;
  out.theta = svd.right * out.zeta;
  return out;
}

BiasSdBound ridge_bias_sd_bound(const ThinSvd& svd, double rho, const Vector& a,
                                double beta_norm, double err_var) {
  if (a.size() != svd.cols()) {
    throw DimensionError("ridge_bias_sd_bound: expected length " + std::to_string(svd.cols()) +
                         ", found " + std::to_string(a.size()));
  }
  if (rho < 0.0 || err_var < 0.0) {
    throw InvalidArgument("ridge_bias_sd_bound: rho and err_var must be nonnegative");
  }
  const double lam = svd.smallest();
  const double anorm = a.norm();
  return {rho * anorm * beta_norm / (lam * lam + rho), std::sqrt(err_var) * anorm / lam};
}

ModelFrame::ModelFrame(Matrix design, Vector response, std::optional<Matrix> combination,
                       double rank_tolerance)
    : design_(std::move(design)), response_(std::move(response)) {
  validate_design(design_);
  combination_ = combination ? std::move(*combination) : Matrix::Identity(p(), p());
  if (response_.size() != n()) {
    throw DimensionError("response length " + std::to_string(response_.size()) +
                         " does not match design rows " + std::to_string(n()));
  }
  if (!response_.allFinite()) throw DataError("response has non-finite entries");
  if (combination_.cols() != p() || combination_.rows() < 1) {
    throw DimensionError("combination matrix is " + dims(combination_.rows(), combination_.cols()) +
                         ", expected p1x" + std::to_string(p()));
  }
  if (!combination_.allFinite()) throw DataError("combination matrix has non-finite entries");
  svd_ = thin_svd(design_, rank_tolerance);
}

ModelFrame::ModelFrame(Matrix design, Vector response, Matrix combination, ThinSvd svd)
    : design_(std::move(design)),
      response_(std::move(response)),
      combination_(std::move(combination)),
      svd_(std::move(svd)) {
  if (response_.size() != n() || combination_.cols() != p() || svd_.rows() != n() ||
      svd_.cols() != p()) {
    throw DimensionError("model frame components have inconsistent shapes");
  }
}

ModelFrame ModelFrame::with_response(Vector response) const {
  return ModelFrame(design_, std::move(response), combination_, svd_);
}

}  // namespace ridgeboot
