#pragma once

// Message recovery against the original scheme from public data only.
//
// C1 = s^h leaks the Hamming weight h of the message. C2 is then the product
// of exactly h of the public u_i, found either by walking all C(n, h) weight-h
// subsets or by a meet-in-the-middle split of the index set.

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "knapsack_lab/bigint.hpp"
#include "knapsack_lab/modified.hpp"
#include "knapsack_lab/numtheory.hpp"
#include "knapsack_lab/original.hpp"

namespace knapsack_lab::attack {

enum class Strategy { exhaustive, mitm };

inline const char* to_string(Strategy s) { return s == Strategy::exhaustive ? "exhaustive" : "mitm"; }

struct AttackReport {
  Strategy strategy = Strategy::exhaustive;
  std::size_t n = 0;
  std::size_t recovered_h = 0;
  std::vector<BitVector> candidates;   // canonical order
  std::uint64_t subsets_examined = 0;  // full subsets tested, or list entries built for mitm
  BigInt exact_count;                  // C(n, h)
  double predicted_bound = 0.0;        // 2^(n H(h/n))
  std::chrono::duration<double, std::milli> elapsed{0};
};

// Smallest h in [1, n] with s^h == C1 (unreduced).
inline std::size_t recover_hamming_weight(const original::PublicKey& pk, const BigInt& c1) {
  const BigInt& s = pk.common_s();
  BigInt power = 1;
  for (std::size_t h = 1; h <= pk.n; ++h) {
    power *= s;
    if (power == c1) return h;
    if (power > c1 && s > 1) break;
  }
  throw Error(ErrorKind::malformed_ciphertext, "C1 is not s^h for any h in [1, n]");
}

// Variant for ciphertexts reduced mod p: linear scan of s^1..s^n mod p.
inline std::size_t recover_hamming_weight_mod(const BigInt& s, const BigInt& c1, const BigInt& p, std::size_t n) {
  BigInt power = 1;
  for (std::size_t h = 1; h <= n; ++h) {
    power = power * s % p;
    if (power == c1 % p) return h;
  }
  throw Error(ErrorKind::malformed_ciphertext, "C1 is not s^h mod p for any h in [1, n]");
}

inline AttackReport exhaustive_subset_attack(const original::PublicKey& pk, const original::Ciphertext& ct) {
  const auto start = std::chrono::steady_clock::now();
  AttackReport report;
  report.strategy = Strategy::exhaustive;
  report.n = pk.n;
  report.recovered_h = recover_hamming_weight(pk, ct.c1);
  const std::size_t n = pk.n, h = report.recovered_h;
  report.exact_count = binomial(n, h);
  report.predicted_bound = entropy_bound(n, h);

  // Lexicographic weight-h combinations. Every u_i >= 1, so a prefix whose
  // product already exceeds C2 cannot be completed.
  std::vector<std::size_t> chosen;
  chosen.reserve(h);
  auto walk = [&](auto&& self, std::size_t first, const BigInt& prefix) -> void {
    if (chosen.size() == h) {
      ++report.subsets_examined;
      if (prefix == ct.c2) {
        auto m = BitVector::zeros(n);
        for (auto i : chosen) m.set(i, true);
        report.candidates.push_back(std::move(m));
      }
      return;
    }
    const std::size_t left = h - chosen.size();
    for (std::size_t i = first; i + left <= n; ++i) {
      BigInt next = prefix * pk.u[i];
      if (next > ct.c2) continue;
      chosen.push_back(i);
      self(self, i + 1, next);
      chosen.pop_back();
    }
  };
  walk(walk, 0, BigInt(1));
  std::sort(report.candidates.begin(), report.candidates.end());
  report.elapsed = std::chrono::steady_clock::now() - start;
  return report;
}

struct MitmOptions {
  std::uint64_t max_list_entries = std::uint64_t{1} << 24;
};

namespace detail {

inline std::uint64_t checked_list_size(std::size_t bits, const MitmOptions& opts) {
  if (bits > 62) throw Error(ErrorKind::too_large, "mitm half exceeds 62 indices");
  const std::uint64_t size = std::uint64_t{1} << bits;
  if (size > opts.max_list_entries)
    throw Error(ErrorKind::too_large, "mitm list of 2^" + std::to_string(bits) + " entries exceeds the configured cap");
  return size;
}

inline BitVector join_masks(std::uint64_t left, std::uint64_t right, std::size_t split, std::size_t n) {
  return BitVector::from_mask(left | (right << split), n);
}

}  // namespace detail

// Splits indices into [0, split) and [split, n); pairs (A, B) with
// prod_A * prod_B == C2 and |A| + |B| == h.
inline AttackReport mitm_subset_attack(const original::PublicKey& pk, const original::Ciphertext& ct, std::size_t split,
                                       const MitmOptions& opts = {}) {
  const std::size_t n = pk.n;
  if (split < 1 || split >= n) throw Error(ErrorKind::domain, "split must lie in [1, n)");
  const auto start = std::chrono::steady_clock::now();
  AttackReport report;
  report.strategy = Strategy::mitm;
  report.n = n;
  report.recovered_h = recover_hamming_weight(pk, ct.c1);
  const std::size_t h = report.recovered_h;
  report.exact_count = binomial(n, h);
  report.predicted_bound = entropy_bound(n, h);

  const std::uint64_t left_size = detail::checked_list_size(split, opts);
  const std::uint64_t right_size = detail::checked_list_size(n - split, opts);

  std::map<BigInt, std::vector<std::uint64_t>> left;
  {
    std::vector<BigInt> prod(left_size);
    prod[0] = 1;
    for (std::uint64_t mask = 0; mask < left_size; ++mask) {
      if (mask != 0) prod[mask] = prod[mask & (mask - 1)] * pk.u[static_cast<std::size_t>(__builtin_ctzll(mask))];
      if (ct.c2 % prod[mask] == 0) left[prod[mask]].push_back(mask);
    }
  }
  std::vector<BigInt> prod(right_size);
  prod[0] = 1;
  for (std::uint64_t mask = 0; mask < right_size; ++mask) {
    if (mask != 0) prod[mask] = prod[mask & (mask - 1)] * pk.u[split + static_cast<std::size_t>(__builtin_ctzll(mask))];
    if (ct.c2 % prod[mask] != 0) continue;
    auto it = left.find(ct.c2 / prod[mask]);
    if (it == left.end()) continue;
    const auto right_weight = static_cast<std::size_t>(__builtin_popcountll(mask));
    for (auto lmask : it->second)
      if (static_cast<std::size_t>(__builtin_popcountll(lmask)) + right_weight == h)
        report.candidates.push_back(detail::join_masks(lmask, mask, split, n));
  }
  report.subsets_examined = left_size + right_size;
  std::sort(report.candidates.begin(), report.candidates.end());
  report.elapsed = std::chrono::steady_clock::now() - start;
  return report;
}

// Modular birthday search: all index sets T with prod_{i in T} factors_i == target (mod p),
// optionally restricted to |T| == weight. Used against ciphertexts reduced mod p.
inline std::vector<BitVector> mitm_subset_product_mod(std::span<const BigInt> factors, const BigInt& p,
                                                      const BigInt& target, std::size_t split,
                                                      std::optional<std::size_t> weight = std::nullopt,
                                                      const MitmOptions& opts = {}) {
  const std::size_t n = factors.size();
  if (split < 1 || split >= n) throw Error(ErrorKind::domain, "split must lie in [1, n)");
  const std::uint64_t left_size = detail::checked_list_size(split, opts);
  const std::uint64_t right_size = detail::checked_list_size(n - split, opts);
  const BigInt goal = target % p;

  std::map<BigInt, std::vector<std::uint64_t>> left;
  {
    std::vector<BigInt> prod(left_size);
    prod[0] = 1;
    for (std::uint64_t mask = 0; mask < left_size; ++mask) {
      if (mask != 0) prod[mask] = prod[mask & (mask - 1)] * factors[static_cast<std::size_t>(__builtin_ctzll(mask))] % p;
      left[prod[mask]].push_back(mask);
    }
  }
  std::vector<BitVector> found;
  std::vector<BigInt> prod(right_size);
  prod[0] = 1;
  for (std::uint64_t mask = 0; mask < right_size; ++mask) {
    if (mask != 0)
      prod[mask] = prod[mask & (mask - 1)] * factors[split + static_cast<std::size_t>(__builtin_ctzll(mask))] % p;
    if (gcd(prod[mask], p) != 1) continue;
    auto it = left.find(goal * mod_inv(prod[mask], p) % p);
    if (it == left.end()) continue;
    const auto right_weight = static_cast<std::size_t>(__builtin_popcountll(mask));
    for (auto lmask : it->second) {
      if (weight && static_cast<std::size_t>(__builtin_popcountll(lmask)) + right_weight != *weight) continue;
      found.push_back(detail::join_masks(lmask, mask, split, n));
    }
  }
  std::sort(found.begin(), found.end());
  return found;
}

struct RandomnessRecovery {
  BitVector r;
  BigInt message;
};

// Public-key-only break of the randomized variant when n is small: h from
// C1' = s^h mod p, r by birthday search on C1'', then m = C2^{1/r'} - h since
// p - 1 is public.
inline std::vector<RandomnessRecovery> modified_birthday_attack(const modified::PublicKey& pk,
                                                                const modified::Ciphertext& ct, std::size_t split,
                                                                const MitmOptions& opts = {}) {
  const std::size_t h = recover_hamming_weight_mod(pk.common_s(), ct.c1_prime, pk.p, pk.n);
  std::vector<RandomnessRecovery> out;
  for (auto& r : mitm_subset_product_mod(pk.u, pk.p, ct.c1_dprime, split, h, opts)) {
    if (!modified::valid_randomness(r)) continue;
    const BigInt r_adj = modified::adjusted_exponent(r);
    BigInt m = mod_pow(ct.c2, mod_inv(r_adj, pk.p - 1), pk.p) - h;
    out.push_back({std::move(r), std::move(m)});
  }
  return out;
}

enum class Regime { small, medium, large };

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::small: return "small";
    case Regime::medium: return "medium";
    case Regime::large: return "large";
  }
  return "?";
}

struct ComplexityProfile {
  BigInt exact;
  double bound = 0.0;
  Regime regime = Regime::small;
};

inline constexpr double kMediumEntropyThreshold = 0.9;

// medium iff H(h/n) > threshold; otherwise small below n/2 and large above.
inline ComplexityProfile attack_complexity_profile(std::size_t n, std::size_t h,
                                                   double medium_threshold = kMediumEntropyThreshold) {
  if (h > n) throw Error(ErrorKind::domain, "h > n");
  ComplexityProfile prof{binomial(n, h), entropy_bound(n, h), Regime::small};
  const double lambda = n == 0 ? 0.0 : static_cast<double>(h) / static_cast<double>(n);
  if (binary_entropy(lambda) > medium_threshold)
    prof.regime = Regime::medium;
  else
    prof.regime = 2 * h < n ? Regime::small : Regime::large;
  return prof;
}

// Encryption is deterministic, so re-encrypting m0 and comparing decides the bit.
inline int deterministic_distinguisher(const original::PublicKey& pk, const BitVector& m0, const BitVector& m1,
                                       const original::Ciphertext& challenge) {
  if (m0.size() != pk.n || m1.size() != pk.n) throw Error(ErrorKind::length_mismatch, "message length mismatch");
  return original::encrypt(pk, m0) == challenge ? 0 : 1;
}

}  // namespace knapsack_lab::attack
