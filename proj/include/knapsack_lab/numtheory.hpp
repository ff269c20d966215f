#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "knapsack_lab/bigint.hpp"
#include "knapsack_lab/errors.hpp"
#include "knapsack_lab/random.hpp"

namespace knapsack_lab {

// Bit string b_1..b_n. Position i (1-based in the math) is index i-1 here.
class BitVector {
 public:
  explicit BitVector(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    if (bits_.empty()) throw Error(ErrorKind::domain, "BitVector must have length >= 1");
    for (auto b : bits_)
      if (b > 1) throw Error(ErrorKind::domain, "BitVector element is not 0/1");
  }

  static BitVector zeros(std::size_t n) { return BitVector(std::vector<std::uint8_t>(n, 0)); }
  static BitVector ones(std::size_t n) { return BitVector(std::vector<std::uint8_t>(n, 1)); }

  static BitVector unit(std::size_t n, std::size_t index) {
    auto v = zeros(n);
    v.set(index, true);
    return v;
  }

  // "01001" -> (0,1,0,0,1); first character is position 1.
  static BitVector parse(std::string_view text) {
    std::vector<std::uint8_t> bits;
    bits.reserve(text.size());
    for (char c : text) {
      if (c != '0' && c != '1') throw Error(ErrorKind::format, "bit string must contain only 0/1");
      bits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return BitVector(std::move(bits));
  }

  // Bit (i-1) of `mask` becomes position i.
  static BitVector from_mask(std::uint64_t mask, std::size_t n) {
    if (n == 0 || n > 64) throw Error(ErrorKind::domain, "from_mask: length must be in [1, 64]");
    std::vector<std::uint8_t> bits(n);
    for (std::size_t i = 0; i < n; ++i) bits[i] = static_cast<std::uint8_t>((mask >> i) & 1U);
    return BitVector(std::move(bits));
  }

  std::uint64_t to_mask() const {
    if (bits_.size() > 64) throw Error(ErrorKind::domain, "to_mask: length exceeds 64");
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < bits_.size(); ++i) m |= std::uint64_t{bits_[i]} << i;
    return m;
  }

  // Integer value reading position 1 as the most significant bit.
  BigInt to_integer() const {
    BigInt v = 0;
    for (auto b : bits_) v = (v << 1) | b;
    return v;
  }

  std::size_t size() const noexcept { return bits_.size(); }
  bool operator[](std::size_t i) const { return bits_.at(i) != 0; }
  void set(std::size_t i, bool value) { bits_.at(i) = value ? 1 : 0; }

  std::size_t weight() const noexcept {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
  }
  bool none() const noexcept { return weight() == 0; }

  std::string to_string() const {
    std::string s;
    s.reserve(bits_.size());
    for (auto b : bits_) s.push_back(static_cast<char>('0' + b));
    return s;
  }

  std::span<const std::uint8_t> bits() const noexcept { return bits_; }

  friend auto operator<=>(const BitVector&, const BitVector&) = default;
  friend bool operator==(const BitVector&, const BitVector&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

// ---------------------------------------------------------------------------
// Modular arithmetic

inline BigInt gcd(const BigInt& a, const BigInt& b) {
  if (a < 0 || b < 0) throw Error(ErrorKind::domain, "gcd of negative value");
  return boost::multiprecision::gcd(a, b);
}

inline BigInt mod_pow(const BigInt& base, const BigInt& exp, const BigInt& modulus) {
  if (modulus < 2) throw Error(ErrorKind::invalid_modulus, "modulus must be >= 2");
  if (base < 0 || exp < 0) throw Error(ErrorKind::domain, "mod_pow expects nonnegative base and exponent");
  return boost::multiprecision::powm(base, exp, modulus);
}

inline BigInt mod_inv(const BigInt& a, const BigInt& modulus) {
  if (modulus < 2) throw Error(ErrorKind::invalid_modulus, "modulus must be >= 2");
  BigInt r0 = modulus, r1 = a % modulus;
  if (r1 < 0) r1 += modulus;
  BigInt t0 = 0, t1 = 1;
  while (r1 != 0) {
    const BigInt q = r0 / r1;
    r0 -= q * r1;
    std::swap(r0, r1);
    t0 -= q * t1;
    std::swap(t0, t1);
  }
  if (r0 != 1) throw Error(ErrorKind::no_inverse, "value is not invertible modulo " + to_dec(modulus));
  if (t0 < 0) t0 += modulus;
  return t0;
}

namespace detail {

inline const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> table = [] {
    constexpr std::uint32_t limit = 4096;
    std::vector<bool> composite(limit, false);
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 2; i < limit; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (std::uint32_t j = i * i; j < limit; j += i) composite[j] = true;
    }
    return out;
  }();
  return table;
}

// Sieve of [0, limit): true at primes.
inline std::vector<bool> prime_sieve(std::uint64_t limit) {
  std::vector<bool> is_prime(limit, true);
  for (std::uint64_t i = 0; i < std::min<std::uint64_t>(limit, 2); ++i) is_prime[i] = false;
  for (std::uint64_t i = 2; i * i < limit; ++i)
    if (is_prime[i])
      for (std::uint64_t j = i * i; j < limit; j += i) is_prime[j] = false;
  return is_prime;
}

inline std::uint32_t mod_small(const BigInt& v, std::uint32_t m) {
  return static_cast<std::uint32_t>(boost::multiprecision::integer_modulus(v, m));
}

inline bool miller_rabin_round(const BigInt& n, const BigInt& n_minus_1, const BigInt& odd,
                               std::size_t twos, const BigInt& base) {
  BigInt x = mod_pow(base, odd, n);
  if (x == 1 || x == n_minus_1) return true;
  for (std::size_t i = 1; i < twos; ++i) {
    x = (x * x) % n;
    if (x == n_minus_1) return true;
    if (x == 1) return false;
  }
  return false;
}

// Sizes up to this many bits are handled by exact enumeration.
inline constexpr std::size_t kEnumerateBits = 20;

}  // namespace detail

inline constexpr std::size_t kDefaultPrimalityRounds = 40;

// Miller-Rabin. `false` is certain; `true` errs with probability <= 4^-rounds.
// Bases are drawn from a stream seeded by n, so the result is a pure function
// of (n, rounds).
inline bool is_probable_prime(const BigInt& n, std::size_t rounds = kDefaultPrimalityRounds) {
  if (rounds < 1) throw Error(ErrorKind::domain, "rounds must be >= 1");
  if (n < 2) return false;
  for (std::uint32_t sp : detail::small_primes()) {
    if (n == sp) return true;
    if (detail::mod_small(n, sp) == 0) return false;
  }
  const BigInt n_minus_1 = n - 1;
  BigInt odd = n_minus_1;
  std::size_t twos = 0;
  while (!boost::multiprecision::bit_test(odd, 0)) {
    odd >>= 1;
    ++twos;
  }
  if (!detail::miller_rabin_round(n, n_minus_1, odd, twos, BigInt(2))) return false;
  Rng bases(mix_seed(detail::mod_small(n, 4294967291U)) ^ bit_length(n));
  for (std::size_t i = 1; i < rounds; ++i) {
    const BigInt a = bases.between(BigInt(2), n - 2);
    if (!detail::miller_rabin_round(n, n_minus_1, odd, twos, a)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Domain types

class SuperIncreasingSeq {
 public:
  explicit SuperIncreasingSeq(std::vector<BigInt> terms) : terms_(std::move(terms)) {
    if (terms_.empty()) throw Error(ErrorKind::domain, "super-increasing sequence must be non-empty");
    BigInt sum = 0;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      if (terms_[i] < 1) throw Error(ErrorKind::domain, "super-increasing terms must be >= 1");
      if (i > 0 && terms_[i] <= sum)
        throw Error(ErrorKind::domain, "term " + std::to_string(i + 1) + " does not exceed the sum of its predecessors");
      sum += terms_[i];
    }
  }

  std::span<const BigInt> terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  const BigInt& operator[](std::size_t i) const { return terms_.at(i); }

  BigInt product() const {
    BigInt p = 1;
    for (const auto& t : terms_) p *= t;
    return p;
  }

  bool pairwise_coprime() const {
    for (std::size_t i = 0; i < terms_.size(); ++i)
      for (std::size_t j = i + 1; j < terms_.size(); ++j)
        if (gcd(terms_[i], terms_[j]) != 1) return false;
    return true;
  }

  friend bool operator==(const SuperIncreasingSeq&, const SuperIncreasingSeq&) = default;

 private:
  std::vector<BigInt> terms_;
};

class PrimeSequence {
 public:
  explicit PrimeSequence(std::vector<BigInt> primes) : primes_(std::move(primes)) {
    if (primes_.empty()) throw Error(ErrorKind::domain, "prime sequence must be non-empty");
    for (std::size_t i = 0; i < primes_.size(); ++i) {
      if (!is_probable_prime(primes_[i])) throw Error(ErrorKind::domain, to_dec(primes_[i]) + " is not prime");
      for (std::size_t j = 0; j < i; ++j)
        if (primes_[j] == primes_[i]) throw Error(ErrorKind::domain, "prime sequence has repeated entries");
    }
  }

  std::span<const BigInt> primes() const noexcept { return primes_; }
  std::size_t size() const noexcept { return primes_.size(); }
  const BigInt& operator[](std::size_t i) const { return primes_.at(i); }

  BigInt product() const {
    BigInt p = 1;
    for (const auto& t : primes_) p *= t;
    return p;
  }

  friend bool operator==(const PrimeSequence&, const PrimeSequence&) = default;

 private:
  std::vector<BigInt> primes_;
};

// p = 2q + 1 with p, q prime and g of order p - 1.
struct SafePrimeGroup {
  BigInt p;
  BigInt q;
  BigInt g;

  bool valid() const {
    return p == 2 * q + 1 && is_probable_prime(q) && is_probable_prime(p) && g > 1 && g < p &&
           mod_pow(g, q, p) != 1 && mod_pow(g, 2, p) != 1;
  }
};

// Order of g is p - 1 iff g^q != 1 and g^2 != 1 (the only proper divisors of 2q are 1, 2, q).
inline bool is_generator(const BigInt& g, const BigInt& p, const BigInt& q) {
  return g > 0 && g < p && mod_pow(g, q, p) != 1 && mod_pow(g, 2, p) != 1;
}

inline BigInt find_generator(const BigInt& p, const BigInt& q, Rng& rng) {
  for (;;) {
    const BigInt g = rng.between(BigInt(2), p - 1);
    if (is_generator(g, p, q)) return g;
  }
}

// All safe primes with exactly `bits` bits; only for small sizes.
inline std::vector<std::uint64_t> safe_primes_with_bits(std::size_t bits) {
  if (bits < 2 || bits > detail::kEnumerateBits + 8) throw Error(ErrorKind::domain, "bit size out of enumeration range");
  const std::uint64_t lo = std::uint64_t{1} << (bits - 1), hi = std::uint64_t{1} << bits;
  const auto sieve = detail::prime_sieve(hi);
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = lo | 1; p < hi; p += 2)
    if (sieve[p] && p >= 5 && sieve[(p - 1) / 2]) out.push_back(p);
  return out;
}

inline SafePrimeGroup gen_safe_prime(std::size_t bits, Rng& rng) {
  if (bits < 3) throw Error(ErrorKind::parameter, "no safe primes below 3 bits");
  if (bits <= detail::kEnumerateBits) {
    const auto all = safe_primes_with_bits(bits);
    const BigInt p(all[rng.below_u64(all.size())]);
    const BigInt q = (p - 1) / 2;
    return {p, q, find_generator(p, q, rng)};
  }

  // Incremental sieve over odd q with bits - 1 bits, rejecting q or 2q+1
  // divisible by a small odd prime.
  const auto& primes = detail::small_primes();
  constexpr std::uint64_t kWindow = 1U << 16;
  const BigInt top = BigInt(1) << (bits - 2);
  for (;;) {
    BigInt start = rng.bits(bits - 2) | top | 1;
    std::vector<std::uint32_t> residues(primes.size());
    for (std::size_t j = 1; j < primes.size(); ++j) residues[j] = detail::mod_small(start, primes[j]);
    for (std::uint64_t step = 0; step < kWindow; ++step) {
      bool candidate = true;
      for (std::size_t j = 1; j < primes.size() && candidate; ++j) {
        const std::uint32_t r = residues[j];
        candidate = r != 0 && r != (primes[j] - 1) / 2;
      }
      for (std::size_t j = 1; j < primes.size(); ++j) {
        residues[j] += 2;
        if (residues[j] >= primes[j]) residues[j] -= primes[j];
      }
      if (!candidate) continue;
      const BigInt q = start + 2 * step;
      if (bit_length(q) != bits - 1) break;
      const BigInt p = 2 * q + 1;
      if (mod_pow(BigInt(2), p - 1, p) != 1) continue;
      if (!is_probable_prime(q) || !is_probable_prime(p)) continue;
      return {p, q, find_generator(p, q, rng)};
    }
  }
}

inline PrimeSequence gen_prime_sequence(std::size_t n, std::size_t bits_each, Rng& rng) {
  if (n < 2) throw Error(ErrorKind::parameter, "prime sequence needs n >= 2");
  if (bits_each < 2) throw Error(ErrorKind::parameter, "no primes with fewer than 2 bits");
  std::vector<BigInt> chosen;
  chosen.reserve(n);
  if (bits_each <= detail::kEnumerateBits) {
    const std::uint64_t lo = std::uint64_t{1} << (bits_each - 1), hi = std::uint64_t{1} << bits_each;
    const auto sieve = detail::prime_sieve(hi);
    std::vector<std::uint64_t> pool;
    for (std::uint64_t v = lo; v < hi; ++v)
      if (sieve[v]) pool.push_back(v);
    if (pool.size() < n)
      throw Error(ErrorKind::parameter, "only " + std::to_string(pool.size()) + " primes have " +
                                            std::to_string(bits_each) + " bits, requested " + std::to_string(n));
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.below_u64(pool.size() - i));
      std::swap(pool[i], pool[j]);
      chosen.emplace_back(pool[i]);
    }
    return PrimeSequence(std::move(chosen));
  }
  // Crude lower bound on the number of primes in [2^(b-1), 2^b).
  const double available = std::ldexp(1.0, static_cast<int>(bits_each) - 1) / (2.0 * static_cast<double>(bits_each));
  if (static_cast<double>(n) > available) throw Error(ErrorKind::parameter, "too many primes requested for this size");
  const BigInt top = BigInt(1) << (bits_each - 1);
  while (chosen.size() < n) {
    const BigInt c = rng.bits(bits_each - 1) | top | 1;
    if (!is_probable_prime(c)) continue;
    if (std::find(chosen.begin(), chosen.end(), c) != chosen.end()) continue;
    chosen.push_back(c);
  }
  return PrimeSequence(std::move(chosen));
}

// a_1 in [1, 2^slack], a_i = (sum of predecessors) + 1 + uniform [0, 2^slack).
inline SuperIncreasingSeq gen_superincreasing(std::size_t n, Rng& rng, std::size_t slack_bits = 4) {
  if (n < 1) throw Error(ErrorKind::parameter, "super-increasing sequence needs n >= 1");
  std::vector<BigInt> terms;
  terms.reserve(n);
  BigInt sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    BigInt t = sum + 1 + rng.bits(slack_bits);
    terms.push_back(t);
    sum += t;
  }
  return SuperIncreasingSeq(std::move(terms));
}

// Super-increasing and pairwise coprime, every term >= 2: each term is bumped
// until it shares no factor with the product of its predecessors.
inline SuperIncreasingSeq gen_superincreasing_coprime(std::size_t n, Rng& rng, std::size_t slack_bits = 4) {
  if (n < 1) throw Error(ErrorKind::parameter, "super-increasing sequence needs n >= 1");
  std::vector<BigInt> terms;
  terms.reserve(n);
  BigInt sum = 0, prod = 1;
  for (std::size_t i = 0; i < n; ++i) {
    BigInt t = sum + 1 + rng.bits(slack_bits);
    if (t < 2) t = 2;
    while (gcd(t, prod) != 1) ++t;
    terms.push_back(t);
    sum += t;
    prod *= t;
  }
  return SuperIncreasingSeq(std::move(terms));
}

// ---------------------------------------------------------------------------
// Knapsack solvers

// Greedy largest-first subtraction, indices n down to 1.
inline std::optional<BitVector> solve_superincreasing_subset_sum(const SuperIncreasingSeq& seq, BigInt s) {
  if (s < 0) return std::nullopt;
  auto x = BitVector::zeros(seq.size());
  for (std::size_t i = seq.size(); i-- > 0;) {
    if (s >= seq[i]) {
      x.set(i, true);
      s -= seq[i];
    }
  }
  if (s != 0) return std::nullopt;
  return x;
}

struct SubsetProductSolution {
  BitVector indicator;
  bool exact;  // product of the selected factors equals d
};

// x_i = 1 iff factor_i divides d. Correct when the factors are pairwise coprime.
inline SubsetProductSolution solve_coprime_subset_product(std::span<const BigInt> factors, const BigInt& d) {
  if (factors.empty()) throw Error(ErrorKind::domain, "empty factor list");
  if (d < 1) throw Error(ErrorKind::domain, "subset product target must be positive");
  auto x = BitVector::zeros(factors.size());
  BigInt prod = 1;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (d % factors[i] == 0) {
      x.set(i, true);
      prod *= factors[i];
    }
  }
  return {std::move(x), prod == d};
}

inline SubsetProductSolution solve_coprime_subset_product(const PrimeSequence& seq, const BigInt& d) {
  return solve_coprime_subset_product(seq.primes(), d);
}

// ---------------------------------------------------------------------------
// Counting

inline BigInt binomial(std::size_t n, std::size_t h) {
  if (h > n) throw Error(ErrorKind::domain, "binomial: h > n");
  h = std::min(h, n - h);
  BigInt r = 1;
  for (std::size_t i = 1; i <= h; ++i) r = r * (n - h + i) / i;
  return r;
}

// H(lambda) = -lambda lg lambda - (1 - lambda) lg (1 - lambda), H(0) = H(1) = 0.
inline double binary_entropy(double lambda) {
  if (lambda <= 0.0 || lambda >= 1.0) return 0.0;
  return -lambda * std::log2(lambda) - (1.0 - lambda) * std::log2(1.0 - lambda);
}

// 2^(n H(h/n)), an upper bound on C(n, h).
inline double entropy_bound(std::size_t n, std::size_t h) {
  if (h > n) throw Error(ErrorKind::domain, "entropy_bound: h > n");
  if (n == 0) return 1.0;
  return std::exp2(static_cast<double>(n) * binary_entropy(static_cast<double>(h) / static_cast<double>(n)));
}

}  // namespace knapsack_lab
