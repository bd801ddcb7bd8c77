#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shearlab/fit.hpp"
#include "shearlab/group.hpp"

namespace shearlab {

enum class NormKind { Sup, Euclidean };

struct OrbitQuery {
  GroupSpec spec;
  IntFormVector x0{0, 1, 0};
  NormKind norm = NormKind::Sup;
  std::vector<double> T_list;  // strictly increasing
  std::optional<std::int64_t> q;
  std::optional<CosetLabel> coset_filter;
  WordBudget budget;
  // The search visits only elements whose orbit point lies below
  // window_slack * max(T_max, |x0|).
  double window_slack = 1.0;
};

struct CountResult {
  std::vector<double> T;
  std::vector<std::int64_t> counts;
  std::vector<bool> saturated;
  double wall_seconds = 0.0;
  double x0_norm = 0.0;
  std::size_t elements_visited = 0;
  bool budget_exceeded = false;
  std::optional<std::int64_t> q;
  std::size_t congruence_index = 1;  // size of the image in PSL(2, Z/q)
  std::map<CosetLabel, std::vector<std::int64_t>> per_coset;
};

double form_norm(const IntFormVector& v, NormKind kind);

CountResult count_orbit(const OrbitQuery& query);

enum class CountingModel {
  TLogTPlusT,       // C1 T log T + C2 T
  LinearPlusPower,  // C1 T + C2 T^delta
  PurePower,        // C1 T^delta
  Linear,           // C1 T
  TLogT,            // C1 T log T
};

std::string to_string(CountingModel m);
CountingModel counting_model_from_string(const std::string& s);

struct FitResult {
  CountingModel model = CountingModel::TLogTPlusT;
  double C1 = 0.0;
  double C2 = 0.0;
  std::optional<double> delta;
  // Relative least squares: residual = sqrt(sum ((y - yhat)/y)^2) over the fitted points.
  double residual = 0.0;
  std::vector<double> T;
  std::vector<double> y;
  std::vector<double> fitted;

  double predict(double T) const;
  // max |y - yhat| / y over fitted points with T >= T_max / 2.
  double top_octave_relative_residual() const;
};

FitResult fit_counting_law(const std::vector<double>& T, const std::vector<double>& y, CountingModel model);
// Uses saturated points with T >= 10 |x0|; needs at least 4.
FitResult fit_counting_law(const CountResult& result, CountingModel model);

// max over cosets / mean over the full congruence image, at the largest saturated T.
double coset_disparity(const CountResult& result);

}  // namespace shearlab
