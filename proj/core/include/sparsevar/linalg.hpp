#pragma once

#include <vector>

#include "sparsevar/panel.hpp"

namespace sparsevar {

// Least squares fit of y on the columns of X (no implicit intercept).
struct OlsFit {
  Vector beta;
  Vector residuals;
  double rss = 0.0;
  Vector std_errors;  // classical, sigma^2 = rss / (n - k)
  Index rank = 0;
};

/// Throws Error if X is rank deficient; the message lists the indices of the
/// columns the pivoted QR found to be linearly dependent.
OlsFit least_squares(const Matrix& X, const Vector& y);

/// Column indices that a pivoted QR drops as collinear (empty if full rank).
std::vector<Index> collinear_columns(const Matrix& X);

double normal_cdf(double x);

/// Upper tail P(X > x) for X ~ chi-squared(df).
double chi_squared_sf(double x, double df);

/// Spectral radius of the VAR companion matrix built from A = [A_1, ..., A_p].
double companion_spectral_radius(const Matrix& A, int p);

}  // namespace sparsevar
