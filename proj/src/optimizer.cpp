#include "autotune/optimizer.hpp"

#include <algorithm>

namespace autotune {

GainVector GainBounds::clip(GainVector g) const {
  g.kp = std::clamp(g.kp, lo.kp, hi.kp);
  g.ki = std::clamp(g.ki, lo.ki, hi.ki);
  g.kd = std::clamp(g.kd, lo.kd, hi.kd);
  return g;
}

GainVector GainBounds::sample_uniform(Rng& rng) const {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  GainVector g;
  g.kp = lo.kp + u(rng) * (hi.kp - lo.kp);
  g.ki = lo.ki + u(rng) * (hi.ki - lo.ki);
  g.kd = lo.kd + u(rng) * (hi.kd - lo.kd);
  return g;
}

std::array<double, 3> GainBounds::normalize(const GainVector& g) const {
  auto norm = [](double v, double l, double h) {
    return h > l ? (v - l) / (h - l) : 0.0;
  };
  return {norm(g.kp, lo.kp, hi.kp), norm(g.ki, lo.ki, hi.ki),
          norm(g.kd, lo.kd, hi.kd)};
}

GainVector GainBounds::denormalize(const std::array<double, 3>& u) const {
  return {lo.kp + u[0] * (hi.kp - lo.kp), lo.ki + u[1] * (hi.ki - lo.ki),
          lo.kd + u[2] * (hi.kd - lo.kd)};
}

}  // namespace autotune
