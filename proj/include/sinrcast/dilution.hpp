#pragma once

// Dilution factors for one-station-per-box transmission schedules.

#include <cstddef>
#include <map>
#include <mutex>
#include <string_view>
#include <utility>

#include "sinrcast/sinr.hpp"

namespace sinrcast {

// 2 sqrt(2) (8 beta e_a(n))^(1/alpha), e_a(n) = sum_{i=1..n} i^(1-alpha).
double flat_d_alpha(std::size_t n, const SinrParams& params);

enum class DilutionPolicy {
  // Smallest d for which the worst-case ring interference bound certifies
  // reception within the required reach.
  Sufficient,
  // ceil(sqrt(d_a(n))) and ceil((d_a(n)/lambda)^(1/alpha)) taken verbatim.
  Literal,
};

DilutionPolicy parse_dilution(std::string_view name);
std::string_view to_string(DilutionPolicy p);

// Smallest integer d >= o + 2, o = ceil(reach / x), such that with at most one
// transmitter per G_x box, a d-diluted class and at most n stations,
//   1 + beta * sum_{m=1..n} 8m / ((m d - o - 1) x)^alpha <= reach^-alpha / margin.
// margin >= 1 demands SINR >= margin * beta. Throws UnsupportedParameters when
// even a lone transmitter cannot reach that far.
long sufficient_dilution(const SinrParams& params, std::size_t n, double x, double reach, double margin = 1.0);

class DilutionRule {
 public:
  DilutionRule(const SinrParams& params, std::size_t n, DilutionPolicy policy, double margin = 1.0);

  // Every transmitter heard within 2 sqrt(2) x.
  long diluted_transmit(double x) const;
  // Sub-box leaders heard across their G_2x box (reach 2 sqrt(2) x).
  long lead_increase(double x, double lambda) const;
  // New G_z leaders heard inside their own box (reach sqrt(2) z).
  long selection(double z, double lambda) const;
  // Stage transmissions on boxes of side (1 - eps')/(2 sqrt 2), reach 1 - eps'.
  long stage(double eps_prime) const;

  DilutionPolicy policy() const { return policy_; }
  double margin() const { return margin_; }
  double d_alpha() const { return d_alpha_; }

 private:
  long cached(double x, double reach) const;

  SinrParams params_;
  std::size_t n_;
  DilutionPolicy policy_;
  double margin_;
  double d_alpha_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<double, double>, long> cache_;
};

// Box side used by stage transmissions.
double stage_box_side(double eps_prime);

}  // namespace sinrcast
