#include "unshred/analytic.hpp"

#include <cmath>
#include <stdexcept>

namespace unshred {

namespace {

ThresholdPoint clamp_point(uint32_t n, double c, ThresholdRegime regime,
                           double raw) {
  ThresholdPoint pt;
  pt.n = n;
  pt.c = c;
  pt.regime = regime;
  pt.p = raw;
  if (raw < 0.0) {
    pt.p = 0.0;
    pt.clamped = true;
  } else if (raw > 0.5) {
    pt.p = 0.5;
    pt.clamped = true;
  }
  return pt;
}

void check_inputs(uint32_t n, double c) {
  if (n < 3) throw std::invalid_argument("threshold formulas require n >= 3");
  if (!std::isfinite(c)) throw std::invalid_argument("c must be finite");
}

}  // namespace

ThresholdPoint p_weak(uint32_t n, double c) {
  check_inputs(n, c);
  const double ln_n = std::log(static_cast<double>(n));
  const double raw = (ln_n + std::log(ln_n) + c) / (2.0 * n);
  return clamp_point(n, c, ThresholdRegime::weak, raw);
}

ThresholdPoint p_strong(uint32_t n, double c) {
  check_inputs(n, c);
  const double raw = (std::log(static_cast<double>(n)) + c) / n;
  return clamp_point(n, c, ThresholdRegime::strong, raw);
}

double limit_weak_reconstructible(double c) {
  if (!std::isfinite(c)) throw std::invalid_argument("c must be finite");
  const double lambda = 0.5 * std::exp(-c);  // limiting mean of isolated 1s
  return (1.0 + lambda) * std::exp(-lambda);
}

double limit_strong_reconstructible(double c) {
  if (!std::isfinite(c)) throw std::invalid_argument("c must be finite");
  const double mu = std::exp(-c);  // limiting mean of equal-line pairs
  const double one_side = (1.0 + mu) * std::exp(-mu);
  return one_side * one_side;
}

}  // namespace unshred
