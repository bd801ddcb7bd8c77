#include "shearlab/fit.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

namespace shearlab {

LinearFit weighted_least_squares(const std::vector<std::vector<double>>& columns, const std::vector<double>& y,
                                 const std::vector<double>& weights) {
  const std::size_t n = y.size(), m = columns.size();
  if (n < m || m == 0) throw InsufficientDataError("least squares: fewer data points than unknowns");
  Eigen::MatrixXd A(n, m);
  Eigen::VectorXd b(n);
  for (std::size_t i = 0; i < n; ++i) {
    b(i) = weights[i] * y[i];
    for (std::size_t j = 0; j < m; ++j) A(i, j) = weights[i] * columns[j][i];
  }
  // Column scaling keeps the QR well conditioned for mixed powers of T.
  Eigen::VectorXd scale(m);
  for (std::size_t j = 0; j < m; ++j) {
    scale(j) = A.col(j).norm();
    if (scale(j) == 0.0) scale(j) = 1.0;
    A.col(j) /= scale(j);
  }
  Eigen::VectorXd x = A.colPivHouseholderQr().solve(b);
  LinearFit out;
  out.coef.resize(m);
  for (std::size_t j = 0; j < m; ++j) out.coef[j] = x(j) / scale(j);
  double r2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double pred = 0.0;
    for (std::size_t j = 0; j < m; ++j) pred += out.coef[j] * columns[j][i];
    double r = weights[i] * (y[i] - pred);
    r2 += r * r;
  }
  out.residual = std::sqrt(r2);
  return out;
}

ExponentFit nested_exponent_fit(const std::function<std::vector<std::vector<double>>(double)>& design,
                                const std::vector<double>& y, const std::vector<double>& weights, double lo,
                                double hi) {
  auto objective = [&](double e) { return weighted_least_squares(design(e), y, weights).residual; };
  const int grid = 400;
  double best_e = lo, best_r = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= grid; ++i) {
    double e = lo + (hi - lo) * i / grid;
    double r = objective(e);
    if (r < best_r) {
      best_r = r;
      best_e = e;
    }
  }
  double step = (hi - lo) / grid;
  double a = std::max(lo, best_e - step), b = std::min(hi, best_e + step);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = objective(c), fd = objective(d);
  for (int it = 0; it < 100 && b - a > 1e-13; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = objective(d);
    }
  }
  double e = 0.5 * (a + b);
  if (objective(e) > best_r) e = best_e;
  ExponentFit out;
  out.exponent = e;
  out.inner = weighted_least_squares(design(e), y, weights);
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InsufficientDataError("loglog_slope: need >= 2 points");
  std::vector<double> lx(x.size()), ly(y.size()), one(x.size(), 1.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    lx[i] = std::log(x[i]);
    ly[i] = std::log(std::abs(y[i]));
  }
  return weighted_least_squares({one, lx}, ly, one).coef[1];
}

}  // namespace shearlab
