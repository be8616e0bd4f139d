#include "cutoff.hpp"

#include <cmath>
#include <numbers>

namespace fockrg {

namespace {
double bump(double t) {
  if (t <= 0.0) return 0.0;
  if (t < 1e-3) return 0.0;  // exp(-1000) underflows anyway
  return std::exp(-1.0 / t);
}
}  // namespace

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = bump(t);
  const double b = bump(1.0 - t);
  return a / (a + b);
}

double Cutoff::chi(double x) const {
  if (x <= plateau) return 1.0;
  if (x >= 1.0) return 0.0;
  const double phase = smooth_step((x - plateau) / (1.0 - plateau));
  return std::cos(0.5 * std::numbers::pi * phase);
}

double Cutoff::chibar(double x) const {
  if (x <= plateau) return 0.0;
  if (x >= 1.0) return 1.0;
  const double phase = smooth_step((x - plateau) / (1.0 - plateau));
  return std::sin(0.5 * std::numbers::pi * phase);
}

}  // namespace fockrg
