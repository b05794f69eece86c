#include "sparsevar/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/special_functions/gamma.hpp>
#include <algorithm>
#include <limits>
#include <cmath>
#include <string>

#include "sparsevar/error.hpp"

namespace sparsevar {

std::vector<Index> collinear_columns(const Matrix& X) {
  Eigen::ColPivHouseholderQR<Matrix> qr(X);
  qr.setThreshold(1e-10);
  std::vector<Index> dropped;
  const Index rank = qr.rank();
  for (Index i = rank; i < X.cols(); ++i) dropped.push_back(qr.colsPermutation().indices()[i]);
  std::sort(dropped.begin(), dropped.end());
  return dropped;
}

OlsFit least_squares(const Matrix& X, const Vector& y) {
  if (X.rows() != y.size()) throw Error("least_squares: row mismatch");
  if (X.cols() > X.rows()) {
    throw Error("least_squares: " + std::to_string(X.cols()) + " regressors exceed " + std::to_string(X.rows()) +
                " observations");
  }
  Eigen::ColPivHouseholderQR<Matrix> qr(X);
  qr.setThreshold(1e-10);
  if (qr.rank() < X.cols()) {
    std::string cols;
    for (Index c : collinear_columns(X)) cols += (cols.empty() ? "" : ",") + std::to_string(c);
    throw Error("least_squares: singular design, collinear columns [" + cols + "]");
  }
  OlsFit fit;
  fit.rank = qr.rank();
  fit.beta = qr.solve(y);
  fit.residuals = y - X * fit.beta;
  fit.rss = fit.residuals.squaredNorm();
  const Index dof = X.rows() - X.cols();
  fit.std_errors = Vector::Constant(X.cols(), std::numeric_limits<double>::quiet_NaN());
  if (dof > 0 && X.cols() > 0) {
    const double sigma2 = fit.rss / static_cast<double>(dof);
    const Matrix xtx_inv = (X.transpose() * X).ldlt().solve(Matrix::Identity(X.cols(), X.cols()));
    fit.std_errors = (sigma2 * xtx_inv.diagonal().array()).sqrt();
  }
  return fit;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double chi_squared_sf(double x, double df) {
  if (!(df > 0.0)) throw Error("chi_squared_sf: df must be positive");
  if (x <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * df, 0.5 * x);
}

double companion_spectral_radius(const Matrix& A, int p) {
  const Index k = A.rows();
  if (A.cols() != k * p) throw Error("companion_spectral_radius: A must be K x Kp");
  Matrix companion = Matrix::Zero(k * p, k * p);
  companion.topRows(k) = A;
  if (p > 1) companion.bottomLeftCorner(k * (p - 1), k * (p - 1)).setIdentity();
  Eigen::EigenSolver<Matrix> es(companion, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace sparsevar
