#pragma once

// (I,k)-strongly-selective families. Families over large ID domains are kept
// implicit: a node only needs the rounds in which its own ID is a member.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sinrcast/sinr.hpp"

namespace sinrcast {

class Ssf {
 public:
  enum class Kind { Single, Singletons, Polynomial, Explicit };

  // Explicit family; sets are sorted and deduplicated, members checked against [1, I].
  static Ssf from_sets(StationId id_domain, std::size_t k, std::vector<std::vector<StationId>> sets,
                       std::string construction = "explicit");

  StationId id_domain() const { return id_domain_; }
  std::size_t k() const { return k_; }
  std::size_t size() const;
  Kind kind() const { return kind_; }
  const std::string& construction() const { return construction_; }

  bool contains(std::size_t set_index, StationId id) const;
  // Indices of the sets containing id, ascending.
  std::vector<std::size_t> rounds_of(StationId id) const;
  // Materialised set; throws RefuseToEnumerate for very large ID domains.
  std::vector<StationId> set(std::size_t index) const;

  // Polynomial construction details (zero otherwise).
  std::uint64_t field() const { return q_; }
  std::size_t degree_bound() const { return m_; }
  std::size_t points() const { return points_; }

 private:
  friend Ssf build_ssf(StationId, std::size_t);
  friend Ssf prune_ssf(const Ssf&);

  std::uint64_t evaluate(StationId id, std::uint64_t point) const;

  Kind kind_ = Kind::Single;
  StationId id_domain_ = 1;
  std::size_t k_ = 1;
  std::string construction_;
  std::uint64_t q_ = 0;
  std::size_t m_ = 0;
  std::size_t points_ = 0;
  std::vector<std::vector<StationId>> sets_;
};

// Size bound constant: build_ssf(I, k).size() <= kSsfSizeConstant * k^2 * max(1, ceil(log2 I)).
inline constexpr double kSsfSizeConstant = 4.0;

// Deterministic construction. Throws InvalidArgument unless 1 <= k <= I.
Ssf build_ssf(StationId id_domain, std::size_t k);

// Reverse-delete pruning with exhaustive re-verification (small domains only).
Ssf prune_ssf(const Ssf& family);

struct SsfViolation {
  std::vector<StationId> subset;
  StationId element = 0;
};

// Exhaustive check over every Z with |Z| <= k. Returns the first (Z, z) for
// which no set isolates z. Throws RefuseToEnumerate past kMaxEnumeration subsets.
std::optional<SsfViolation> find_violation(const Ssf& family);
bool verify_ssf(const Ssf& family);

inline constexpr double kMaxEnumeration = 2e7;

// Text format: header "I k", then one set per line (space separated IDs).
Ssf read_ssf(std::istream& in);
void write_ssf(std::ostream& out, const Ssf& family);

struct EliminationConstants {
  long d = 0;        // isolation radius guaranteeing the closest partner hears
  long d_prime = 0;  // d stretched by lambda^(-1/(alpha-2))
  std::size_t k = 0; // (2 d' + 1)^2
};

// Throws UnsupportedParameters for alpha <= 2, InvalidArgument for lambda outside (0, 1).
EliminationConstants elimination_constants(const SinrParams& params, double lambda);
std::size_t elimination_k(const SinrParams& params, double lambda);

// Smallest prime >= n (n >= 2).
std::uint64_t next_prime(std::uint64_t n);

}  // namespace sinrcast
