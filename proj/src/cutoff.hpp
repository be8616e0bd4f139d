#pragma once

namespace fockrg {

/// C-infinity monotone step: 0 for t <= 0, 1 for t >= 1, strictly
/// increasing in between (bump-integral construction).
double smooth_step(double t);

/// Smooth cutoff pair (chi, chibar) with chi^2 + chibar^2 == 1 pointwise.
/// chi == 1 on [0, plateau], chi == 0 for x >= 1, non-increasing; chibar
/// is the complementary sine of the same phase.
struct Cutoff {
  double plateau = 0.75;

  double chi(double x) const;
  double chibar(double x) const;

  // chi_t(x) = chi(x / t), same for chibar.
  double chi_at(double x, double t) const { return chi(x / t); }
  double chibar_at(double x, double t) const { return chibar(x / t); }
};

}  // namespace fockrg
