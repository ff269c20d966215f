#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "knapsack_lab/numtheory.hpp"
#include "oracles.hpp"

using namespace knapsack_lab;

namespace {

std::vector<BigInt> big(std::initializer_list<long> xs) { return {xs.begin(), xs.end()}; }

}  // namespace

TEST(ModPow, ToyKeyValues) {
  EXPECT_EQ(mod_pow(2, 1500, 2579), 862);
  EXPECT_EQ(mod_pow(2, 348, 2579), 104);
  EXPECT_EQ(mod_pow(12345, 0, 2579), 1);
}

TEST(ModPow, RejectsSmallModulus) {
  try {
    mod_pow(2, 3, 1);
    FAIL() << "expected invalid-modulus";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_modulus);
  }
}

TEST(ModPow, AgreesWithRepeatedMultiplication) {
  Rng rng(11);
  for (int i = 0; i < 10000; ++i) {
    const std::uint64_t mod = 2 + rng.below_u64(5000);
    const std::uint64_t base = rng.below_u64(100000);
    const std::uint64_t exp = rng.below_u64(300);
    ASSERT_EQ(mod_pow(base, exp, mod), oracle::naive_pow_mod(base, exp, mod)) << base << "^" << exp << " mod " << mod;
  }
}

TEST(ModInv, ToyKeyMask) {
  const BigInt mask = mod_pow(10816, 1500, 2579);
  EXPECT_EQ(mod_inv(mask, 2579), 2483);
  EXPECT_EQ(mod_inv(1, 97), 1);
}

TEST(ModInv, AgreesWithLinearSearch) {
  Rng rng(12);
  int invertible = 0;
  for (int i = 0; i < 10000; ++i) {
    const std::uint64_t mod = 2 + rng.below_u64(2000);
    const std::uint64_t a = rng.below_u64(10000);
    const std::uint64_t expected = oracle::brute_inverse(a, mod);
    if (expected == 0) {
      EXPECT_THROW(mod_inv(a, mod), Error);
    } else {
      ++invertible;
      ASSERT_EQ(mod_inv(a, mod), expected);
    }
  }
  EXPECT_GT(invertible, 1000);
}

TEST(ModInv, RandomPrimeModulusVerifiedByMultiplication) {
  Rng rng(13);
  const auto grp = gen_safe_prime(128, rng);
  for (int i = 0; i < 200; ++i) {
    const BigInt a = rng.between(BigInt(1), grp.p - 1);
    EXPECT_EQ(a * mod_inv(a, grp.p) % grp.p, 1);
  }
}

TEST(ModInv, NonInvertibleIsAnError) {
  try {
    mod_inv(6, 9);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::no_inverse);
  }
}

TEST(Gcd, Basics) {
  EXPECT_EQ(gcd(72, 3), 3);
  EXPECT_EQ(gcd(17, 0), 17);
  EXPECT_EQ(gcd(0, 0), 0);
}

TEST(Primality, KnownValues) {
  EXPECT_TRUE(is_probable_prime(2579));
  EXPECT_FALSE(is_probable_prime(1));
  EXPECT_FALSE(is_probable_prime(0));
  EXPECT_TRUE(is_probable_prime(2));
  EXPECT_THROW(is_probable_prime(7, 0), Error);
}

TEST(Primality, MatchesSieveBelowTwoHundredThousand) {
  const auto primes = oracle::primes_below(200000);
  std::set<std::uint64_t> set(primes.begin(), primes.end());
  for (std::uint64_t n = 0; n < 200000; ++n) ASSERT_EQ(is_probable_prime(n, 8), set.count(n) == 1) << n;
}

TEST(Primality, ProductOfTwo32BitPrimesIsComposite) {
  Rng rng(14);
  for (int i = 0; i < 20; ++i) {
    BigInt a, b;
    do a = rng.bits(31) | (BigInt(1) << 31) | 1; while (!oracle::trial_division_prime(to_u64(a)));
    do b = rng.bits(31) | (BigInt(1) << 31) | 1; while (!oracle::trial_division_prime(to_u64(b)));
    EXPECT_FALSE(is_probable_prime(a * b));
    EXPECT_TRUE(is_probable_prime(a));
  }
}

TEST(Primality, CarmichaelNumbers) {
  for (long c : {561L, 1105L, 1729L, 2465L, 2821L, 6601L, 8911L, 41041L, 825265L, 321197185L})
    EXPECT_FALSE(is_probable_prime(c)) << c;
}

TEST(SafePrime, SixteenBitsSatisfiesInvariants) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const auto grp = gen_safe_prime(16, rng);
    EXPECT_EQ(bit_length(grp.p), 16U);
    EXPECT_EQ(grp.p, 2 * grp.q + 1);
    EXPECT_TRUE(oracle::trial_division_prime(to_u64(grp.p)));
    EXPECT_TRUE(oracle::trial_division_prime(to_u64(grp.q)));
    EXPECT_NE(mod_pow(grp.g, grp.q, grp.p), 1);
    EXPECT_NE(mod_pow(grp.g, 2, grp.p), 1);
  }
}

TEST(SafePrime, EightBitOutputsAreExactlyTheSievedSet) {
  // Safe primes in [128, 256) by trial division.
  std::set<BigInt> expected;
  for (std::uint64_t p = 128; p < 256; ++p)
    if (oracle::trial_division_prime(p) && oracle::trial_division_prime((p - 1) / 2)) expected.insert(p);
  ASSERT_EQ(expected, (std::set<BigInt>{167, 179, 227}));
  std::set<BigInt> seen;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    seen.insert(gen_safe_prime(8, rng).p);
  }
  EXPECT_EQ(seen, expected);
}

TEST(SafePrime, GeneratorHasFullOrderSmallGroup) {
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const auto grp = gen_safe_prime(12, rng);
    const auto p = to_u64(grp.p), g = to_u64(grp.g);
    std::set<std::uint64_t> powers;
    std::uint64_t acc = 1;
    for (std::uint64_t e = 0; e + 1 < p; ++e) {
      powers.insert(acc);
      acc = acc * g % p;
    }
    EXPECT_EQ(powers.size(), p - 1);
  }
}

TEST(SafePrime, LargeSizesUseSieveSearch) {
  Rng rng(21);
  for (std::size_t bits : {24U, 64U, 160U}) {
    const auto grp = gen_safe_prime(bits, rng);
    EXPECT_EQ(bit_length(grp.p), bits);
    EXPECT_TRUE(grp.valid());
  }
}

TEST(SafePrime, RejectsImpossibleSize) { Rng rng(1); EXPECT_THROW(gen_safe_prime(2, rng), Error); }

TEST(PrimeSequence, RejectsMoreThanAvailable) {
  Rng rng(1);
  try {
    gen_prime_sequence(5, 4, rng);  // only 11 and 13 have four bits
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::parameter);
  }
  EXPECT_NO_THROW(gen_prime_sequence(2, 4, rng));
}

TEST(PrimeSequence, SmallSizes) {
  Rng rng(2);
  const auto two = gen_prime_sequence(2, 2, rng);
  EXPECT_EQ((std::set<BigInt>{two[0], two[1]}), (std::set<BigInt>{2, 3}));

  for (int i = 0; i < 100; ++i) {
    const auto seq = gen_prime_sequence(3, 8, rng);
    std::set<BigInt> uniq;
    for (const auto& p : seq.primes()) {
      EXPECT_EQ(bit_length(p), 8U);
      EXPECT_TRUE(oracle::trial_division_prime(to_u64(p)));
      uniq.insert(p);
    }
    EXPECT_EQ(uniq.size(), 3U);
  }
}

TEST(PrimeSequence, LargeBitSizes) {
  Rng rng(4);
  const auto seq = gen_prime_sequence(6, 40, rng);
  std::set<BigInt> uniq(seq.primes().begin(), seq.primes().end());
  EXPECT_EQ(uniq.size(), 6U);
  for (const auto& p : seq.primes()) {
    EXPECT_EQ(bit_length(p), 40U);
    EXPECT_TRUE(oracle::trial_division_prime(to_u64(p)));
  }
}

TEST(PrimeSequence, ValidatesConstruction) {
  EXPECT_THROW(PrimeSequence(big({2, 4})), Error);
  EXPECT_THROW(PrimeSequence(big({3, 3})), Error);
  EXPECT_NO_THROW(PrimeSequence(big({2, 3, 5})));
}

TEST(SuperIncreasing, ToySequenceValidates) {
  EXPECT_NO_THROW(SuperIncreasingSeq(big({2, 3, 6, 12, 24})));
  EXPECT_THROW(SuperIncreasingSeq(big({2, 3, 5})), Error);
  EXPECT_THROW(SuperIncreasingSeq(big({0, 3})), Error);
  EXPECT_THROW(SuperIncreasingSeq({}), Error);
}

TEST(SuperIncreasing, GeneratedSequencesHoldInvariant) {
  Rng rng(5);
  for (int draw = 0; draw < 1000; ++draw) {
    const std::size_t n = 1 + rng.below_u64(20);
    const auto seq = gen_superincreasing(n, rng);
    ASSERT_EQ(seq.size(), n);
    BigInt sum = 0;
    for (const auto& t : seq.terms()) {
      ASSERT_GE(t, 1);
      ASSERT_GT(t, sum);
      sum += t;
    }
  }
  const auto one = gen_superincreasing(1, rng);
  EXPECT_GE(one[0], 1);
}

TEST(SuperIncreasing, CoprimeVariantIsPairwiseCoprime) {
  Rng rng(6);
  for (int draw = 0; draw < 200; ++draw) {
    const auto seq = gen_superincreasing_coprime(12, rng);
    EXPECT_TRUE(seq.pairwise_coprime());
    EXPECT_GE(seq[0], 2);
  }
}

TEST(SubsetSumSolver, ToyTargets) {
  const SuperIncreasingSeq seq(big({2, 3, 6, 12, 24}));
  // Brute force: 15 has exactly one representation.
  const auto reps = oracle::all_subset_sums({2, 3, 6, 12, 24}, 15);
  ASSERT_EQ(reps.size(), 1U);
  EXPECT_EQ(oracle::mask_string(reps[0], 5), "01010");
  EXPECT_EQ(solve_superincreasing_subset_sum(seq, 15)->to_string(), "01010");
  EXPECT_EQ(solve_superincreasing_subset_sum(seq, 0)->to_string(), "00000");
  EXPECT_EQ(solve_superincreasing_subset_sum(seq, 47)->to_string(), "11111");
  EXPECT_FALSE(solve_superincreasing_subset_sum(seq, 4).has_value());
  EXPECT_FALSE(solve_superincreasing_subset_sum(seq, 48).has_value());
}

TEST(SubsetSumSolver, AgreesWithEnumerationOnEveryTarget) {
  Rng rng(7);
  for (std::size_t n = 1; n <= 9; ++n) {
    const auto seq = gen_superincreasing(n, rng, 2);
    const std::vector<BigInt> terms(seq.terms().begin(), seq.terms().end());
    const BigInt total = oracle::subset_sum(terms, (std::uint64_t{1} << n) - 1);
    for (BigInt s = 0; s <= total + 2; ++s) {
      const auto reps = oracle::all_subset_sums(terms, s);
      const auto got = solve_superincreasing_subset_sum(seq, s);
      ASSERT_LE(reps.size(), 1U);
      if (reps.empty())
        ASSERT_FALSE(got.has_value()) << s;
      else
        ASSERT_EQ(got->to_mask(), reps[0]) << s;
    }
  }
}

TEST(SubsetProductSolver, Examples) {
  const PrimeSequence five(big({2, 3, 5, 7, 11}));
  EXPECT_EQ(oracle::all_subset_products({2, 3, 5, 7, 11}, 110), (std::set<std::string>{"10101"}));
  auto sol = solve_coprime_subset_product(five, 110);
  EXPECT_EQ(sol.indicator.to_string(), "10101");
  EXPECT_TRUE(sol.exact);

  sol = solve_coprime_subset_product(five, 1);
  EXPECT_TRUE(sol.indicator.none());
  EXPECT_TRUE(sol.exact);

  const PrimeSequence three(big({2, 3, 5}));
  sol = solve_coprime_subset_product(three, 12);
  EXPECT_EQ(sol.indicator.to_string(), "110");
  EXPECT_FALSE(sol.exact);

  sol = solve_coprime_subset_product(three, 7 * 5);
  EXPECT_EQ(sol.indicator.to_string(), "001");
  EXPECT_FALSE(sol.exact);
}

TEST(SubsetProductSolver, AgreesWithEnumerationForRandomTargets) {
  Rng rng(8);
  for (int round = 0; round < 20; ++round) {
    const auto seq = gen_prime_sequence(8, 7, rng);
    const std::vector<BigInt> terms(seq.primes().begin(), seq.primes().end());
    for (int t = 0; t < 200; ++t) {
      // Half the targets are genuine subset products, half carry a stray cofactor.
      BigInt d = oracle::subset_product(terms, rng.below_u64(256));
      if (t % 2) d *= rng.between(BigInt(2), BigInt(1000));
      const auto reps = oracle::all_subset_products(terms, d);
      const auto sol = solve_coprime_subset_product(seq, d);
      ASSERT_EQ(sol.exact, !reps.empty() || d == 1) << d;
      if (!reps.empty()) {
        ASSERT_EQ(*reps.begin(), sol.indicator.to_string());
      }
    }
  }
}

TEST(Counting, BinomialAndBound) {
  EXPECT_EQ(binomial(40, 3), 9880);
  EXPECT_EQ(binomial(17, 0), 1);
  EXPECT_DOUBLE_EQ(entropy_bound(17, 0), 1.0);
  EXPECT_DOUBLE_EQ(entropy_bound(17, 17), 1.0);
  for (std::size_t n = 2; n <= 64; n += 2) EXPECT_EQ(entropy_bound(n, n / 2), std::ldexp(1.0, static_cast<int>(n)));
  EXPECT_THROW(binomial(3, 4), Error);
  EXPECT_THROW(entropy_bound(3, 4), Error);
}

TEST(Counting, BinomialMatchesPascalAndStaysUnderBound) {
  const auto tri = oracle::pascal(64);
  for (std::size_t n = 0; n <= 64; ++n)
    for (std::size_t h = 0; h <= n; ++h) {
      ASSERT_EQ(binomial(n, h), tri[n][h]);
      ASSERT_LE(tri[n][h].convert_to<double>(), entropy_bound(n, h)) << n << "," << h;
    }
}

TEST(BitVector, ParseAndMask) {
  const auto v = BitVector::parse("01001");
  EXPECT_EQ(v.weight(), 2U);
  EXPECT_EQ(v.to_mask(), 0b10010U);
  EXPECT_EQ(BitVector::from_mask(0b10010, 5), v);
  EXPECT_EQ(v.to_integer(), 9);  // position 1 is the most significant bit
  EXPECT_THROW(BitVector::parse("0120"), Error);
  EXPECT_THROW(BitVector::parse(""), Error);
}
