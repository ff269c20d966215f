#pragma once

// The original ElGamal / multiplicative-knapsack cryptosystem, reproduced with
// its defects intact: ciphertexts are unreduced products, encryption is
// deterministic, and decryption is only unique when the secret knapsack is
// pairwise coprime and smaller than the modulus.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "knapsack_lab/bigint.hpp"
#include "knapsack_lab/numtheory.hpp"
#include "knapsack_lab/random.hpp"

namespace knapsack_lab::original {

struct PublicKey {
  std::size_t n = 0;
  BigInt p;
  std::vector<BigInt> s;  // all equal to g^k mod p
  std::vector<BigInt> u;  // y^k a_i mod p

  const BigInt& common_s() const { return s.at(0); }

  void validate() const {
    if (n < 1 || s.size() != n || u.size() != n) throw Error(ErrorKind::format, "public key length mismatch");
    if (p < 3) throw Error(ErrorKind::format, "public key modulus too small");
    for (std::size_t i = 0; i < n; ++i) {
      if (s[i] != s[0]) throw Error(ErrorKind::format, "public key s_i are not all equal");
      if (s[i] < 1 || s[i] >= p || u[i] < 1 || u[i] >= p)
        throw Error(ErrorKind::format, "public key component out of range");
    }
  }

  friend bool operator==(const PublicKey&, const PublicKey&) = default;
};

struct SecretKey {
  BigInt p;
  BigInt g;
  BigInt y;
  BigInt x;
  BigInt k;
  SuperIncreasingSeq a;

  std::size_t n() const noexcept { return a.size(); }

  void validate() const {
    if (!is_probable_prime(p)) throw Error(ErrorKind::format, "secret modulus is not prime");
    if (x < 1 || x > p - 2 || k < 1 || k > p - 2) throw Error(ErrorKind::format, "secret exponent out of range");
    if (mod_pow(g, x, p) != y) throw Error(ErrorKind::format, "secret key has y != g^x mod p");
  }

  friend bool operator==(const SecretKey&, const SecretKey&) = default;
};

struct Ciphertext {
  BigInt c1;
  BigInt c2;

  friend bool operator==(const Ciphertext&, const Ciphertext&) = default;
};

struct KeyPair {
  PublicKey pk;
  SecretKey sk;
};

enum class KnapsackShape {
  superincreasing,          // as published; small terms divide larger ones
  superincreasing_coprime,  // additionally pairwise coprime, every term >= 2
};

struct KeygenOptions {
  std::size_t n = 8;
  std::size_t modulus_bits = 0;  // 0: smallest size with p > prod a_i
  KnapsackShape shape = KnapsackShape::superincreasing;
  std::size_t slack_bits = 4;
  bool allow_modulus_overflow = false;  // permit p < prod a_i
};

// Explicit key material, e.g. a worked example.
struct FixedKeyParams {
  BigInt p;
  BigInt g;
  BigInt x;
  BigInt k;
  std::vector<BigInt> a;
};

inline PublicKey derive_public(const SecretKey& sk) {
  PublicKey pk;
  pk.n = sk.n();
  pk.p = sk.p;
  const BigInt s = mod_pow(sk.g, sk.k, sk.p);
  const BigInt yk = mod_pow(sk.y, sk.k, sk.p);
  for (std::size_t i = 0; i < pk.n; ++i) {
    pk.s.push_back(s);
    pk.u.push_back(yk * sk.a[i] % sk.p);
  }
  return pk;
}

inline KeyPair keygen_from(const FixedKeyParams& params, bool allow_modulus_overflow = false) {
  SuperIncreasingSeq a(params.a);
  if (a.size() < 2) throw Error(ErrorKind::parameter, "need n >= 2");
  if (!is_probable_prime(params.p)) throw Error(ErrorKind::parameter, "p is not prime");
  if (params.x < 1 || params.x > params.p - 2 || params.k < 1 || params.k > params.p - 2)
    throw Error(ErrorKind::parameter, "x and k must lie in [1, p-2]");
  if (params.g < 2 || params.g >= params.p) throw Error(ErrorKind::parameter, "g out of range");
  if (!allow_modulus_overflow && params.p < a.product())
    throw Error(ErrorKind::parameter, "p < product of the knapsack; decryption would be incomplete");
  SecretKey sk{params.p, params.g, mod_pow(params.g, params.x, params.p), params.x, params.k, std::move(a)};
  PublicKey pk = derive_public(sk);
  return {std::move(pk), std::move(sk)};
}

inline KeyPair keygen(const KeygenOptions& opts, Rng& rng) {
  if (opts.n < 2) throw Error(ErrorKind::parameter, "need n >= 2");
  SuperIncreasingSeq a = opts.shape == KnapsackShape::superincreasing_coprime
                             ? gen_superincreasing_coprime(opts.n, rng, opts.slack_bits)
                             : gen_superincreasing(opts.n, rng, opts.slack_bits);
  const std::size_t needed = std::max<std::size_t>(bit_length(a.product()) + 1, 5);
  std::size_t bits = opts.modulus_bits == 0 ? needed : opts.modulus_bits;
  if (bits < needed && !opts.allow_modulus_overflow)
    throw Error(ErrorKind::parameter, "modulus_bits=" + std::to_string(bits) + " cannot exceed the knapsack product; need " +
                                          std::to_string(needed));
  if (bits < 5) bits = 5;
  const SafePrimeGroup grp = gen_safe_prime(bits, rng);
  FixedKeyParams params{grp.p, grp.g, rng.between(BigInt(1), grp.p - 2), rng.between(BigInt(1), grp.p - 2),
                        {a.terms().begin(), a.terms().end()}};
  return keygen_from(params, opts.allow_modulus_overflow);
}

inline KeyPair keygen(std::size_t n, std::size_t modulus_bits, Rng& rng) {
  KeygenOptions opts;
  opts.n = n;
  opts.modulus_bits = modulus_bits;
  return keygen(opts, rng);
}

// C1 = prod s_i^{m_i}, C2 = prod u_i^{m_i}, both unreduced.
inline Ciphertext encrypt(const PublicKey& pk, const BitVector& m) {
  if (m.size() != pk.n)
    throw Error(ErrorKind::length_mismatch, "message has " + std::to_string(m.size()) + " bits, key expects " +
                                                std::to_string(pk.n));
  if (m.none()) throw Error(ErrorKind::message_range, "all-zero message encrypts to (1, 1)");
  Ciphertext ct{1, 1};
  for (std::size_t i = 0; i < pk.n; ++i) {
    if (!m[i]) continue;
    ct.c1 *= pk.s[i];
    ct.c2 *= pk.u[i];
  }
  return ct;
}

// d = C2 (C1^x)^{-1} mod p.
inline BigInt decrypt_d(const SecretKey& sk, const Ciphertext& ct) {
  if (ct.c1 < 1 || ct.c2 < 1) throw Error(ErrorKind::malformed_ciphertext, "ciphertext components must be >= 1");
  if (gcd(ct.c1 % sk.p, sk.p) != 1) throw Error(ErrorKind::no_inverse, "C1 shares a factor with p");
  const BigInt mask = mod_pow(ct.c1, sk.x, sk.p);
  return ct.c2 % sk.p * mod_inv(mask, sk.p) % sk.p;
}

inline constexpr std::size_t kMaxDecryptAllN = 64;

// Every nonzero indicator x with prod a_i^{x_i} == d exactly, in canonical order.
inline std::vector<BitVector> subset_product_solutions(const SuperIncreasingSeq& a, const BigInt& d) {
  const std::size_t n = a.size();
  if (n > kMaxDecryptAllN) throw Error(ErrorKind::too_large, "subset scan limited to n <= 64");
  std::vector<BitVector> found;
  if (d < 1) return found;
  auto x = BitVector::zeros(n);
  // Only branches whose partial product still divides d are explored.
  auto walk = [&](auto&& self, std::size_t i, const BigInt& remaining) -> void {
    if (i == n) {
      if (remaining == 1 && !x.none()) found.push_back(x);
      return;
    }
    self(self, i + 1, remaining);
    if (remaining % a[i] == 0) {
      x.set(i, true);
      self(self, i + 1, remaining / a[i]);
      x.set(i, false);
    }
  };
  walk(walk, 0, d);
  std::sort(found.begin(), found.end());
  return found;
}

// Size 0: decryption failure. Size >= 2: the ciphertext has several decryptions.
inline std::vector<BitVector> decrypt_all(const SecretKey& sk, const Ciphertext& ct) {
  return subset_product_solutions(sk.a, decrypt_d(sk, ct));
}

struct Collision {
  BigInt product;
  std::vector<BitVector> messages;
};

struct Overflow {
  BitVector message;
  BigInt product;
};

struct AuditReport {
  std::size_t n = 0;
  std::vector<Collision> collisions;  // distinct messages with equal knapsack products
  std::vector<Overflow> overflows;    // messages whose product is >= p
  std::uint64_t message_count = 0;    // nonzero messages scanned, 2^n - 1
  std::uint64_t unique_count = 0;     // messages that decrypt to exactly themselves

  double unique_fraction() const {
    return message_count == 0 ? 0.0 : static_cast<double>(unique_count) / static_cast<double>(message_count);
  }
};

inline constexpr std::size_t kDefaultAuditLimit = 20;

// Exhaustive scan of the nonzero message space. Decryption of m recovers
// d = prod a_i^{m_i} mod p, so m decrypts uniquely iff the only subset whose
// exact product is that d is m itself.
inline AuditReport completeness_audit(const SecretKey& sk, const PublicKey& pk,
                                      std::size_t exhaustive_limit = kDefaultAuditLimit) {
  const std::size_t n = sk.n();
  if (pk.n != n) throw Error(ErrorKind::length_mismatch, "public and secret key sizes differ");
  if (n > exhaustive_limit || n > 62)
    throw Error(ErrorKind::too_large, "audit of n=" + std::to_string(n) + " exceeds the exhaustive limit " +
                                          std::to_string(exhaustive_limit));
  AuditReport report;
  report.n = n;
  const std::uint64_t count = std::uint64_t{1} << n;
  std::vector<BigInt> product(count);
  product[0] = 1;
  std::map<BigInt, std::vector<std::uint64_t>> by_product;
  for (std::uint64_t mask = 1; mask < count; ++mask) {
    const auto low = static_cast<std::size_t>(__builtin_ctzll(mask));
    product[mask] = product[mask & (mask - 1)] * sk.a[low];
    by_product[product[mask]].push_back(mask);
  }
  report.message_count = count - 1;
  for (std::uint64_t mask = 1; mask < count; ++mask) {
    const BigInt& prod = product[mask];
    if (prod >= sk.p) report.overflows.push_back({BitVector::from_mask(mask, n), prod});
    auto it = by_product.find(prod % sk.p);
    if (it != by_product.end() && it->second.size() == 1 && it->second.front() == mask) ++report.unique_count;
  }
  for (const auto& [prod, masks] : by_product) {
    if (masks.size() < 2) continue;
    Collision c{prod, {}};
    for (auto mask : masks) c.messages.push_back(BitVector::from_mask(mask, n));
    std::sort(c.messages.begin(), c.messages.end());
    report.collisions.push_back(std::move(c));
  }
  return report;
}

}  // namespace knapsack_lab::original
