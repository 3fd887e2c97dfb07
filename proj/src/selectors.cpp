#include "sinrcast/selectors.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "sinrcast/errors.hpp"

namespace sinrcast {

namespace {

__extension__ using u128 = unsigned __int128;

constexpr StationId kMaxMaterialise = StationId{1} << 22;

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL}) {
    if (n % p == 0) return n == p;
  }
  for (std::uint64_t f = 17; f <= n / f; f += 2) {
    if (n % f == 0) return false;
  }
  return true;
}

// Smallest r with r^m >= n.
std::uint64_t ceil_root(std::uint64_t n, std::size_t m) {
  if (n <= 1) return 1;
  auto reaches = [&](std::uint64_t r) {
    u128 acc = 1;
    for (std::size_t i = 0; i < m; ++i) {
      acc *= r;
      if (acc >= n) return true;
    }
    return acc >= n;
  };
  auto r = static_cast<std::uint64_t>(std::pow(static_cast<double>(n), 1.0 / static_cast<double>(m)));
  r = std::max<std::uint64_t>(r, 1);
  while (r > 1 && reaches(r - 1)) --r;
  while (!reaches(r)) ++r;
  return r;
}

double binomial(double n, double k) {
  double out = 1.0;
  for (double i = 0; i < k; ++i) out = out * (n - i) / (i + 1.0);
  return out;
}

}  // namespace

std::uint64_t next_prime(std::uint64_t n) {
  if (n <= 2) return 2;
  while (!is_prime(n)) ++n;
  return n;
}

Ssf Ssf::from_sets(StationId id_domain, std::size_t k, std::vector<std::vector<StationId>> sets,
                   std::string construction) {
  if (id_domain < 1) throw InvalidArgument("ssf: ID domain must be positive");
  if (k < 1 || k > id_domain) throw InvalidArgument("ssf: k must lie in [1, I]");
  for (auto& s : sets) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    for (StationId v : s) {
      if (v < 1 || v > id_domain) {
        std::ostringstream os;
        os << "ssf: member " << v << " outside [1, " << id_domain << "]";
        throw InvalidArgument(os.str());
      }
    }
  }
  Ssf f;
  f.kind_ = Kind::Explicit;
  f.id_domain_ = id_domain;
  f.k_ = k;
  f.construction_ = std::move(construction);
  f.sets_ = std::move(sets);
  return f;
}

std::size_t Ssf::size() const {
  switch (kind_) {
    case Kind::Single: return 1;
    case Kind::Singletons: return static_cast<std::size_t>(id_domain_);
    case Kind::Polynomial: return points_ * static_cast<std::size_t>(q_);
    case Kind::Explicit: return sets_.size();
  }
  return 0;
}

std::uint64_t Ssf::evaluate(StationId id, std::uint64_t point) const {
  // Coefficients are the base-q digits of id - 1; Horner from the top digit.
  std::uint64_t digits[64];
  std::uint64_t rest = id - 1;
  for (std::size_t j = 0; j < m_; ++j) {
    digits[j] = rest % q_;
    rest /= q_;
  }
  u128 acc = 0;
  for (std::size_t j = m_; j-- > 0;) acc = (acc * point + digits[j]) % q_;
  return static_cast<std::uint64_t>(acc);
}

bool Ssf::contains(std::size_t set_index, StationId id) const {
  if (id < 1 || id > id_domain_ || set_index >= size()) return false;
  switch (kind_) {
    case Kind::Single: return true;
    case Kind::Singletons: return set_index == id - 1;
    case Kind::Polynomial: {
      const std::uint64_t a = set_index / q_;
      const std::uint64_t b = set_index % q_;
      return evaluate(id, a) == b;
    }
    case Kind::Explicit: return std::binary_search(sets_[set_index].begin(), sets_[set_index].end(), id);
  }
  return false;
}

std::vector<std::size_t> Ssf::rounds_of(StationId id) const {
  std::vector<std::size_t> out;
  if (id < 1 || id > id_domain_) {
    std::ostringstream os;
    os << "ssf: ID " << id << " outside [1, " << id_domain_ << "]";
    throw InvalidArgument(os.str());
  }
  switch (kind_) {
    case Kind::Single: out.push_back(0); break;
    case Kind::Singletons: out.push_back(static_cast<std::size_t>(id - 1)); break;
    case Kind::Polynomial:
      out.reserve(points_);
      for (std::size_t a = 0; a < points_; ++a) out.push_back(a * q_ + evaluate(id, a));
      break;
    case Kind::Explicit:
      for (std::size_t i = 0; i < sets_.size(); ++i)
        if (std::binary_search(sets_[i].begin(), sets_[i].end(), id)) out.push_back(i);
      break;
  }
  return out;
}

std::vector<StationId> Ssf::set(std::size_t index) const {
  if (index >= size()) throw InvalidArgument("ssf: set index out of range");
  if (kind_ == Kind::Explicit) return sets_[index];
  if (kind_ == Kind::Singletons) return {static_cast<StationId>(index + 1)};
  if (id_domain_ > kMaxMaterialise) throw RefuseToEnumerate("ssf: ID domain too large to materialise sets");
  std::vector<StationId> out;
  for (StationId id = 1; id <= id_domain_; ++id)
    if (contains(index, id)) out.push_back(id);
  return out;
}

Ssf build_ssf(StationId id_domain, std::size_t k) {
  if (id_domain < 1) throw InvalidArgument("build_ssf: ID domain must be positive");
  if (k < 1 || k > id_domain) throw InvalidArgument("build_ssf: k must lie in [1, I]");

  Ssf f;
  f.id_domain_ = id_domain;
  f.k_ = k;
  if (k == 1) {
    f.kind_ = Ssf::Kind::Single;
    f.construction_ = "single";
    return f;
  }

  // Polynomials of degree < m over F_q; distinct ones agree on at most m - 1
  // points, so (k-1)(m-1)+1 evaluation points leave a private point for each
  // member of any k-subset.
  std::uint64_t best_size = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t best_q = 0;
  std::size_t best_m = 0, best_points = 0;
  for (std::size_t m = 1; m <= 63; ++m) {
    const std::uint64_t points = static_cast<std::uint64_t>(k - 1) * (m - 1) + 1;
    if (points >= best_size) break;
    const std::uint64_t q0 = std::max<std::uint64_t>({points, ceil_root(id_domain, m), 2});
    // Singletons are no larger once points * q reaches I.
    if (static_cast<u128>(points) * q0 >= std::min<std::uint64_t>(best_size, id_domain)) continue;
    const std::uint64_t q = next_prime(q0);
    const u128 size = static_cast<u128>(points) * q;
    if (size < best_size) {
      best_size = static_cast<std::uint64_t>(size);
      best_q = q;
      best_m = m;
      best_points = static_cast<std::size_t>(points);
    }
  }

  if (id_domain <= best_size) {
    f.kind_ = Ssf::Kind::Singletons;
    f.construction_ = "singletons";
  } else {
    f.kind_ = Ssf::Kind::Polynomial;
    f.construction_ = "polynomial";
    f.q_ = best_q;
    f.m_ = best_m;
    f.points_ = best_points;
  }
  // Pruning re-verifies once per set, so only when that stays cheap.
  if (id_domain <= 64 && binomial(static_cast<double>(id_domain), static_cast<double>(k)) * static_cast<double>(f.size()) <= 5e7)
    return prune_ssf(f);
  return f;
}

Ssf prune_ssf(const Ssf& family) {
  std::vector<std::vector<StationId>> sets;
  sets.reserve(family.size());
  for (std::size_t i = 0; i < family.size(); ++i) sets.push_back(family.set(i));
  Ssf current = Ssf::from_sets(family.id_domain(), family.k(), sets, family.construction() + "+pruned");
  for (std::size_t i = current.sets_.size(); i-- > 0;) {
    std::vector<StationId> removed = std::move(current.sets_[i]);
    current.sets_.erase(current.sets_.begin() + static_cast<std::ptrdiff_t>(i));
    if (find_violation(current)) current.sets_.insert(current.sets_.begin() + static_cast<std::ptrdiff_t>(i), std::move(removed));
  }
  return current;
}

std::optional<SsfViolation> find_violation(const Ssf& family) {
  const StationId I = family.id_domain();
  const std::size_t k = std::min<std::size_t>(family.k(), static_cast<std::size_t>(I));
  // Isolation from a k-subset implies isolation from each of its subsets, so
  // the subsets of size exactly min(k, I) cover every |Z| <= k.
  if (binomial(static_cast<double>(I), static_cast<double>(k)) > kMaxEnumeration || I > (StationId{1} << 20)) {
    std::ostringstream os;
    os << "verify_ssf: refusing to enumerate subsets of size " << k << " of [1, " << I << "]";
    throw RefuseToEnumerate(os.str());
  }
  const std::size_t s = family.size();
  const std::size_t words = std::max<std::size_t>(1, (s + 63) / 64);
  // member[id-1] is the bitset of set indices containing id.
  std::vector<std::vector<std::uint64_t>> member(static_cast<std::size_t>(I), std::vector<std::uint64_t>(words, 0));
  for (std::size_t i = 0; i < s; ++i) {
    for (StationId id : family.set(i)) member[id - 1][i / 64] |= std::uint64_t{1} << (i % 64);
  }

  std::vector<std::size_t> c(k);
  for (std::size_t i = 0; i < k; ++i) c[i] = i;
  std::vector<std::uint64_t> others(words);
  const auto n = static_cast<std::size_t>(I);
  while (true) {
    for (std::size_t p = 0; p < k; ++p) {
      std::fill(others.begin(), others.end(), 0);
      for (std::size_t q = 0; q < k; ++q) {
        if (q == p) continue;
        for (std::size_t w = 0; w < words; ++w) others[w] |= member[c[q]][w];
      }
      bool isolated = false;
      for (std::size_t w = 0; w < words && !isolated; ++w) isolated = (member[c[p]][w] & ~others[w]) != 0;
      if (!isolated) {
        SsfViolation v;
        for (std::size_t idx : c) v.subset.push_back(idx + 1);
        v.element = c[p] + 1;
        return v;
      }
    }
    std::size_t i = k;
    while (i > 0 && c[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) break;
    ++c[i - 1];
    for (std::size_t j = i; j < k; ++j) c[j] = c[j - 1] + 1;
  }
  return std::nullopt;
}

bool verify_ssf(const Ssf& family) { return !find_violation(family).has_value(); }

Ssf read_ssf(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  StationId I = 0;
  std::size_t k = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream hs(line);
    if (!(hs >> I >> k)) throw ParseError("ssf file line " + std::to_string(lineno) + ": expected header 'I k'");
    break;
  }
  if (I == 0) throw ParseError("ssf file: missing header");
  std::vector<std::vector<StationId>> sets;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    std::vector<StationId> s;
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        const auto v = std::stoull(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        s.push_back(v);
      } catch (const std::exception&) {
        throw ParseError("ssf file line " + std::to_string(lineno) + ": bad ID '" + tok + "'");
      }
    }
    sets.push_back(std::move(s));
  }
  try {
    return Ssf::from_sets(I, k, std::move(sets));
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
}

void write_ssf(std::ostream& out, const Ssf& family) {
  out << family.id_domain() << ' ' << family.k() << '\n';
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto s = family.set(i);
    for (std::size_t j = 0; j < s.size(); ++j) out << (j ? " " : "") << s[j];
    out << '\n';
  }
}

EliminationConstants elimination_constants(const SinrParams& params, double lambda) {
  if (!(params.alpha > 2.0)) throw UnsupportedParameters("elimination_k: alpha must exceed 2");
  if (!(lambda > 0.0 && lambda < 1.0)) throw InvalidArgument("elimination_k: lambda must lie in (0, 1)");
  const double a = params.alpha;
  const double base = 8.0 * std::pow(2.0, a / 2.0) / (params.noise * lambda * (a - 2.0));
  EliminationConstants c;
  c.d = static_cast<long>(std::ceil(std::pow(base, 1.0 / (a - 2.0)) * (1.0 - 1e-12)));
  c.d_prime = static_cast<long>(std::ceil(static_cast<double>(c.d) / std::pow(lambda, 1.0 / (a - 2.0)) * (1.0 - 1e-12)));
  const auto side = static_cast<std::size_t>(2 * c.d_prime + 1);
  c.k = side * side;
  return c;
}

std::size_t elimination_k(const SinrParams& params, double lambda) { return elimination_constants(params, lambda).k; }

}  // namespace sinrcast
