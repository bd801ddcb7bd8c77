#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "shearlab/algebra.hpp"
#include "shearlab/group.hpp"
#include "shearlab/shear.hpp"

namespace shearlab {

// Raised when the requested (route, s) pair lies outside the region where
// the route converges.
struct NonConvergentError : std::domain_error {
  using std::domain_error::domain_error;
};

enum class EisensteinRoute { Auto, Fourier, CosetSum };
std::string to_string(EisensteinRoute r);
EisensteinRoute eisenstein_route_from_string(const std::string& s);

struct EisensteinOptions {
  // Fourier route: number of K-Bessel modes; 0 picks it from the target 1e-12.
  int max_mode = 0;
  // Coset route: lattice radius |cz+d| <= R, or bottom-row cutoff c <= C for
  // thin groups. 0 picks a default.
  double max_coset_height = 0.0;
};

struct EisensteinValue {
  double value = 0.0;
  double error = 0.0;
  EisensteinRoute route = EisensteinRoute::Auto;
};

// E(z,s) = (1/w) sum over Gamma_inf \ Gamma of Im(gamma z)^s at the cusp at
// infinity of a Hecke-type group {(1 w; 0 1), S}. w = 1 is PSL(2,Z); w >= 3
// gives a free product of infinite covolume.
class EisensteinEvaluator {
 public:
  explicit EisensteinEvaluator(const GroupSpec& spec, EisensteinRoute route = EisensteinRoute::Auto,
                               EisensteinOptions options = {}, std::size_t cusp_index = 0);
  ~EisensteinEvaluator();
  EisensteinEvaluator(const EisensteinEvaluator&) = delete;
  EisensteinEvaluator& operator=(const EisensteinEvaluator&) = delete;

  EisensteinValue evaluate(const UTBPoint& z, double s) const;

  const GroupSpec& spec() const { return spec_; }
  int width() const { return width_; }
  bool lattice() const { return width_ == 1; }
  EisensteinRoute route() const { return route_; }
  // Critical exponent used for thin convergence checks and tail
  // extrapolation: GroupSpec::delta_hat when set, else an estimate from the growth
  // of the coset tree.
  double delta_hat() const;

 private:
  struct ModeTable;
  const ModeTable& modes(double s) const;
  EisensteinValue lattice_fourier(const UTBPoint& z, double s) const;
  EisensteinValue lattice_cosets(const UTBPoint& z, double s) const;
  EisensteinValue thin_modes(const UTBPoint& z, double s) const;
  EisensteinValue thin_direct(const UTBPoint& z, double s) const;
  double thin_cutoff() const;

  GroupSpec spec_;
  EisensteinRoute route_;
  EisensteinOptions options_;
  int width_;
  mutable std::mutex mutex_;
  mutable std::map<double, std::unique_ptr<ModeTable>> tables_;
  mutable double delta_hat_ = 0.0;
};

// Number of bottom rows (c, d) with 0 < c <= C in Gamma_inf \ Gamma / Gamma_inf
// for the width-w Hecke-type group, together with the slope of
// log N against log C over the last few octaves (which tends to 2 delta).
struct CosetTreeCount {
  std::vector<double> cutoffs;
  std::vector<std::size_t> counts;
  double exponent = 0.0;  // estimate of delta
};
CosetTreeCount count_coset_tree(int width, double max_cutoff);

// (3/pi) (2 gamma - 2 zeta'(2)/zeta(2) - log(4 y |eta(z)|^4)) for PSL(2,Z).
double regularized_E1(const UTBPoint& z);

// <psi, E(., 1)> over the fundamental domain (dx dy / y^2). For lattices the
// regularized series is used and `regularized` must be true.
double mu_eis(const EisensteinEvaluator& e, const TestFunction& psi, bool regularized, double tol = 1e-10);

}  // namespace shearlab
