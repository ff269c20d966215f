#pragma once

// Randomized variant: the knapsack is a sequence of distinct primes, C1 hides
// the randomness r instead of the message, and C2 = (m + h)^{r'} mod p.
// Decryption recovers r by trial division, then runs two consistency checks
// before releasing a message.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

#include "knapsack_lab/bigint.hpp"
#include "knapsack_lab/numtheory.hpp"
#include "knapsack_lab/random.hpp"

namespace knapsack_lab::modified {

struct PublicKey {
  std::size_t n = 0;
  BigInt p;
  std::vector<BigInt> s;
  std::vector<BigInt> u;

  const BigInt& common_s() const { return s.at(0); }

  // Largest message such that m + h never reaches p.
  BigInt max_message() const { return p - n - 1; }

  void validate() const {
    if (n < 2 || s.size() != n || u.size() != n) throw Error(ErrorKind::format, "public key length mismatch");
    if (!is_probable_prime(p) || !is_probable_prime((p - 1) / 2))
      throw Error(ErrorKind::format, "public modulus is not a safe prime");
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
  PrimeSequence primes;

  std::size_t n() const noexcept { return primes.size(); }

  void validate() const {
    const BigInt q = (p - 1) / 2;
    if (!is_probable_prime(p) || !is_probable_prime(q)) throw Error(ErrorKind::format, "modulus is not a safe prime");
    if (!is_generator(g, p, q)) throw Error(ErrorKind::format, "g does not generate Z_p^*");
    if (mod_pow(g, x, p) != y) throw Error(ErrorKind::format, "y != g^x mod p");
    if (gcd(k, p - 1) != 1) throw Error(ErrorKind::format, "gcd(k, p-1) != 1");
    if (p <= primes.product()) throw Error(ErrorKind::format, "p must exceed the product of the primes");
  }

  friend bool operator==(const SecretKey&, const SecretKey&) = default;
};

struct Ciphertext {
  BigInt c1_prime;   // prod s_i^{r_i} mod p
  BigInt c1_dprime;  // prod u_i^{r_i} mod p
  BigInt c2;         // (m + h)^{r'} mod p

  friend bool operator==(const Ciphertext&, const Ciphertext&) = default;
};

struct KeyPair {
  PublicKey pk;
  SecretKey sk;
};

enum class RejectReason { randomness_inconsistent, message_inconsistent, malformed };

inline const char* to_string(RejectReason r) {
  switch (r) {
    case RejectReason::randomness_inconsistent: return "randomness-inconsistent";
    case RejectReason::message_inconsistent: return "message-inconsistent";
    case RejectReason::malformed: return "malformed";
  }
  return "?";
}

class DecryptOutcome {
 public:
  static DecryptOutcome accept(BigInt m) { return DecryptOutcome(std::move(m), RejectReason::malformed); }
  static DecryptOutcome reject(RejectReason why) { return DecryptOutcome(std::nullopt, why); }

  bool accepted() const noexcept { return message_.has_value(); }
  const BigInt& message() const { return message_.value(); }
  // Meaningful only when !accepted().
  RejectReason reason() const noexcept { return reason_; }

 private:
  DecryptOutcome(std::optional<BigInt> m, RejectReason r) : message_(std::move(m)), reason_(r) {}

  std::optional<BigInt> message_;
  RejectReason reason_;
};

struct KeygenOptions {
  std::size_t n = 16;
  std::size_t prime_bits = 16;
  std::size_t modulus_bits = 0;  // 0: one more bit than the summed prime sizes
};

inline PublicKey derive_public(const SecretKey& sk) {
  PublicKey pk;
  pk.n = sk.n();
  pk.p = sk.p;
  const BigInt s = mod_pow(sk.g, sk.k, sk.p);
  const BigInt yk = mod_pow(sk.y, sk.k, sk.p);
  for (std::size_t i = 0; i < pk.n; ++i) {
    pk.s.push_back(s);
    pk.u.push_back(yk * sk.primes[i] % sk.p);
  }
  return pk;
}

inline KeyPair keygen(const KeygenOptions& opts, Rng& rng) {
  if (opts.n < 2) throw Error(ErrorKind::parameter, "need n >= 2");
  PrimeSequence primes = gen_prime_sequence(opts.n, opts.prime_bits, rng);
  std::size_t summed = 0;
  for (const auto& pi : primes.primes()) summed += bit_length(pi);
  // p > prod p_i, and n < |q| - 1 so every adjusted exponent r' < 2^n is below q.
  const std::size_t needed = std::max(summed + 1, opts.n + 3);
  const std::size_t bits = opts.modulus_bits == 0 ? needed : opts.modulus_bits;
  if (bits < needed)
    throw Error(ErrorKind::parameter, "modulus_bits=" + std::to_string(bits) + " too small, need " + std::to_string(needed));
  const SafePrimeGroup grp = gen_safe_prime(bits, rng);
  if (opts.n + 1 >= bit_length(grp.q)) throw Error(ErrorKind::parameter, "n must be below |q| - 1");

  const BigInt lo = 2, hi = grp.p - 3;
  const BigInt x = rng.between(lo, hi);
  BigInt k;
  do {
    k = rng.between(lo, hi);
  } while (gcd(k, grp.p - 1) != 1);
  SecretKey sk{grp.p, grp.g, mod_pow(grp.g, x, grp.p), x, k, std::move(primes)};
  PublicKey pk = derive_public(sk);
  return {std::move(pk), std::move(sk)};
}

inline KeyPair keygen(std::size_t n, std::size_t prime_bits, Rng& rng) {
  KeygenOptions opts;
  opts.n = n;
  opts.prime_bits = prime_bits;
  return keygen(opts, rng);
}

// r read as an n-bit integer with r_1 most significant; the values 0 and 1 are excluded.
inline bool valid_randomness(const BitVector& r) { return r.to_integer() > 1; }

inline BitVector draw_randomness(std::size_t n, Rng& rng) {
  for (;;) {
    std::vector<std::uint8_t> bits(n);
    for (auto& b : bits) b = rng.coin() ? 1 : 0;
    BitVector r(std::move(bits));
    if (valid_randomness(r)) return r;
  }
}

// r' = r + 1 when r is even, r otherwise.
inline BigInt adjusted_exponent(const BitVector& r) {
  BigInt v = r.to_integer();
  if (!boost::multiprecision::bit_test(v, 0)) v += 1;
  return v;
}

inline void check_message(const PublicKey& pk, const BigInt& m) {
  if (m < 1 || m > pk.max_message())
    throw Error(ErrorKind::message_range, "message must lie in [1, p - n - 1]");
}

inline Ciphertext encrypt_with_randomness(const PublicKey& pk, const BigInt& m, const BitVector& r) {
  check_message(pk, m);
  if (r.size() != pk.n) throw Error(ErrorKind::length_mismatch, "randomness length differs from n");
  if (!valid_randomness(r)) throw Error(ErrorKind::domain, "randomness must not be the integers 0 or 1");
  Ciphertext ct{1, 1, 0};
  for (std::size_t i = 0; i < pk.n; ++i) {
    if (!r[i]) continue;
    ct.c1_prime = ct.c1_prime * pk.s[i] % pk.p;
    ct.c1_dprime = ct.c1_dprime * pk.u[i] % pk.p;
  }
  ct.c2 = mod_pow(m + r.weight(), adjusted_exponent(r), pk.p);
  return ct;
}

inline Ciphertext encrypt(const PublicKey& pk, const BigInt& m, Rng& rng) {
  return encrypt_with_randomness(pk, m, draw_randomness(pk.n, rng));
}

struct RecoveredRandomness {
  BitVector r;
  std::size_t h;
  BigInt d;  // C1'' (C1'^x)^{-1} mod p
};

// r_i = 1 iff p_i divides d.
inline RecoveredRandomness recover_randomness(const SecretKey& sk, const BigInt& c1_prime, const BigInt& c1_dprime) {
  if (c1_prime < 1 || gcd(c1_prime % sk.p, sk.p) != 1)
    throw Error(ErrorKind::malformed_ciphertext, "C1' is not invertible mod p");
  const BigInt d = c1_dprime % sk.p * mod_inv(mod_pow(c1_prime, sk.x, sk.p), sk.p) % sk.p;
  if (d == 0) throw Error(ErrorKind::malformed_ciphertext, "C1'' is zero mod p");
  auto sol = solve_coprime_subset_product(sk.primes, d);
  const std::size_t h = sol.indicator.weight();
  return {std::move(sol.indicator), h, d};
}

inline DecryptOutcome decrypt(const SecretKey& sk, const Ciphertext& ct) {
  const BigInt& p = sk.p;
  for (const BigInt* c : {&ct.c1_prime, &ct.c1_dprime, &ct.c2})
    if (*c < 1 || *c >= p) return DecryptOutcome::reject(RejectReason::malformed);

  const auto rec = recover_randomness(sk, ct.c1_prime, ct.c1_dprime);

  // C1'' == y^{k h} prod p_i^{r_i} (mod p)
  BigInt expected = mod_pow(sk.y, sk.k * rec.h, p);
  for (std::size_t i = 0; i < sk.n(); ++i)
    if (rec.r[i]) expected = expected * sk.primes[i] % p;
  if (expected != ct.c1_dprime || !valid_randomness(rec.r))
    return DecryptOutcome::reject(RejectReason::randomness_inconsistent);

  const BigInt r_adj = adjusted_exponent(rec.r);
  const BigInt w = mod_inv(r_adj, p - 1);
  const BigInt m = mod_pow(ct.c2, w, p) - rec.h;

  // C2 == (m + h)^{r'} (mod p)
  if (m + rec.h < 0 || mod_pow(m + rec.h, r_adj, p) != ct.c2)
    return DecryptOutcome::reject(RejectReason::message_inconsistent);
  if (m < 1 || m > p - sk.n() - 1) return DecryptOutcome::reject(RejectReason::message_inconsistent);
  return DecryptOutcome::accept(m);
}

}  // namespace knapsack_lab::modified
