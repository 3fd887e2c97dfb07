#include "sinrcast/dilution.hpp"

#include <cmath>
#include <sstream>

#include "sinrcast/errors.hpp"

namespace sinrcast {

namespace {

long ceil_long(double v) { return static_cast<long>(std::ceil(v * (1.0 - 1e-12))); }

}  // namespace

double flat_d_alpha(std::size_t n, const SinrParams& params) {
  if (!(params.alpha > 2.0)) throw UnsupportedParameters("flat_d_alpha: alpha must exceed 2");
  if (n < 1) throw InvalidArgument("flat_d_alpha: n must be >= 1");
  double e = 0.0;
  for (std::size_t i = n; i >= 1; --i) e += std::pow(static_cast<double>(i), 1.0 - params.alpha);
  return 2.0 * std::sqrt(2.0) * std::pow(8.0 * params.beta * e, 1.0 / params.alpha);
}

DilutionPolicy parse_dilution(std::string_view name) {
  if (name == "sufficient") return DilutionPolicy::Sufficient;
  if (name == "literal") return DilutionPolicy::Literal;
  throw InvalidArgument("unknown dilution policy '" + std::string(name) + "'");
}

std::string_view to_string(DilutionPolicy p) { return p == DilutionPolicy::Literal ? "literal" : "sufficient"; }

long sufficient_dilution(const SinrParams& params, std::size_t n, double x, double reach, double margin) {
  if (!(x > 0.0) || !(reach > 0.0)) throw InvalidArgument("sufficient_dilution: x and reach must be positive");
  if (!(margin >= 1.0)) throw InvalidArgument("sufficient_dilution: margin must be >= 1");
  const double a = params.alpha;
  const double budget = std::pow(reach, -a) / margin - 1.0;
  if (!(budget > 0.0)) {
    std::ostringstream os;
    os << "no dilution reaches " << reach << " with margin " << margin;
    throw UnsupportedParameters(os.str());
  }
  const auto o = static_cast<long>(std::ceil(reach / x - 1e-12));
  const std::size_t rings = std::max<std::size_t>(n, 1);
  for (long d = o + 2;; ++d) {
    double sum = 0.0;
    for (std::size_t m = 1; m <= rings; ++m) {
      const double gap = (static_cast<double>(m) * static_cast<double>(d) - static_cast<double>(o) - 1.0) * x;
      const double term = 8.0 * static_cast<double>(m) * std::pow(gap, -a);
      sum += term;
      if (term < sum * 1e-17) break;
    }
    if (params.beta * sum <= budget) return d;
    if (d > 1'000'000) throw UnsupportedParameters("dilution search did not converge");
  }
}

DilutionRule::DilutionRule(const SinrParams& params, std::size_t n, DilutionPolicy policy, double margin)
    : params_(params), n_(std::max<std::size_t>(n, 1)), policy_(policy), margin_(margin),
      d_alpha_(flat_d_alpha(n_, params)) {
  if (!(margin >= 1.0)) throw InvalidArgument("dilution margin must be >= 1");
}

long DilutionRule::cached(double x, double reach) const {
  std::lock_guard<std::mutex> lock(mu_);
  const auto key = std::make_pair(x, reach);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  const long d = sufficient_dilution(params_, n_, x, reach, margin_);
  cache_.emplace(key, d);
  return d;
}

long DilutionRule::diluted_transmit(double x) const {
  if (policy_ == DilutionPolicy::Literal) return ceil_long(std::sqrt(d_alpha_));
  return cached(x, 2.0 * std::sqrt(2.0) * x);
}

long DilutionRule::lead_increase(double x, double lambda) const {
  if (policy_ == DilutionPolicy::Literal) return ceil_long(std::pow(d_alpha_ / lambda, 1.0 / params_.alpha));
  return cached(x, 2.0 * std::sqrt(2.0) * x);
}

long DilutionRule::selection(double z, double lambda) const {
  if (policy_ == DilutionPolicy::Literal) return ceil_long(std::pow(d_alpha_ / lambda, 1.0 / params_.alpha));
  return cached(z, std::sqrt(2.0) * z);
}

long DilutionRule::stage(double eps_prime) const {
  if (policy_ == DilutionPolicy::Literal) return ceil_long(std::pow(d_alpha_ / eps_prime, 1.0 / params_.alpha));
  return cached(stage_box_side(eps_prime), 1.0 - eps_prime);
}

double stage_box_side(double eps_prime) { return (1.0 - eps_prime) / (2.0 * std::sqrt(2.0)); }

}  // namespace sinrcast
