#pragma once

#include <cstdint>

namespace unshred {

enum class ThresholdRegime : uint8_t { weak, strong };

// A point on one of the two threshold curves.  p is the formula value
// clamped into [0, 1/2]; clamped reports that the raw value fell outside.
struct ThresholdPoint {
  uint32_t n = 0;
  double c = 0.0;
  ThresholdRegime regime = ThresholdRegime::weak;
  double p = 0.0;
  bool clamped = false;
};

// p = (ln n + ln ln n + c) / (2n): the density at which the expected number
// of isolated 1s converges.  Requires n >= 3 (ln ln n must be positive).
ThresholdPoint p_weak(uint32_t n, double c);

// p = (ln n + c) / n: the density at which duplicate lines die out.
// Requires n >= 3.
ThresholdPoint p_strong(uint32_t n, double c);

// Limiting probability, along the weak-threshold curve, that the sampled
// matrix is reconstructible: (1 + e^{-c}/2) * exp(-e^{-c}/2).  Strictly
// increasing from 0 to 1 over finite c.
double limit_weak_reconstructible(double c);

// Limiting probability, along the strong-threshold curve, that no two rows
// and no two columns are equal: ((1 + e^{-c}) * exp(-e^{-c}))^2.
double limit_strong_reconstructible(double c);

}  // namespace unshred
