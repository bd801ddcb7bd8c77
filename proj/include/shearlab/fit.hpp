#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

namespace shearlab {

class InsufficientDataError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct LinearFit {
  std::vector<double> coef;
  double residual = 0.0;  // sqrt(sum (w_i (y_i - yhat_i))^2)
};

// Weighted least squares y ~ sum_j coef_j * columns[j]; weights multiply residuals.
LinearFit weighted_least_squares(const std::vector<std::vector<double>>& columns, const std::vector<double>& y,
                                 const std::vector<double>& weights);

struct ExponentFit {
  double exponent = 0.0;
  LinearFit inner;
};

// Minimizes the weighted LS residual over a scalar exponent in [lo, hi]
// (grid scan, then golden-section refinement around the best grid cell).
ExponentFit nested_exponent_fit(const std::function<std::vector<std::vector<double>>(double)>& design,
                                const std::vector<double>& y, const std::vector<double>& weights, double lo,
                                double hi);

// Least-squares slope of log|y| against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace shearlab
