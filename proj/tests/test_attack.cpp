#include <gtest/gtest.h>

#include <set>

#include "knapsack_lab/attack.hpp"
#include "oracles.hpp"

using namespace knapsack_lab;
using namespace knapsack_lab::attack;

namespace {

original::KeyPair toy_keys() { return original::keygen_from({2579, 2, 1500, 348, {2, 3, 6, 12, 24}}, true); }

BitVector random_weight(std::size_t n, std::size_t h, Rng& rng) {
  auto m = BitVector::zeros(n);
  while (m.weight() < h) m.set(rng.below_u64(n), true);
  return m;
}

// Weight-h masks whose exact product of public u_i equals C2.
std::set<std::string> brute_candidates(const original::PublicKey& pk, const original::Ciphertext& ct) {
  std::set<std::string> out;
  for (std::uint64_t m = 1; m < (std::uint64_t{1} << pk.n); ++m) {
    const auto bv = BitVector::from_mask(m, pk.n);
    if (original::encrypt(pk, bv) == ct) out.insert(bv.to_string());
  }
  return out;
}

std::set<std::string> strings(const std::vector<BitVector>& v) {
  std::set<std::string> out;
  for (const auto& m : v) out.insert(m.to_string());
  return out;
}

}  // namespace

TEST(HammingWeight, ToyCiphertexts) {
  const auto keys = toy_keys();
  EXPECT_EQ(recover_hamming_weight(keys.pk, 10816), 2U);
  EXPECT_EQ(recover_hamming_weight(keys.pk, 116985856), 4U);
  EXPECT_THROW(recover_hamming_weight(keys.pk, 10817), Error);
  EXPECT_EQ(recover_hamming_weight_mod(104, BigInt(10816) % 2579, 2579, 5), 2U);
}

TEST(Exhaustive, ToyCiphertext) {
  const auto keys = toy_keys();
  const auto report = exhaustive_subset_attack(keys.pk, {10816, 372020});
  EXPECT_EQ(report.recovered_h, 2U);
  EXPECT_EQ(strings(report.candidates), (std::set<std::string>{"01001"}));
  EXPECT_EQ(report.exact_count, 10);
  EXPECT_LE(report.subsets_examined, 10U);
}

TEST(Exhaustive, WeightOneIsImmediate) {
  Rng rng(41);
  const auto keys = original::keygen(16, 0, rng);
  for (std::size_t i = 0; i < 16; ++i) {
    const auto m = BitVector::unit(16, i);
    const auto report = exhaustive_subset_attack(keys.pk, original::encrypt(keys.pk, m));
    ASSERT_EQ(report.candidates, std::vector<BitVector>{m});
    ASSERT_LE(report.subsets_examined, 16U);
  }
}

TEST(Exhaustive, MatchesReencryptionFilter) {
  Rng rng(42);
  for (int round = 0; round < 30; ++round) {
    original::KeygenOptions opts;
    opts.n = 10;
    opts.slack_bits = 1;
    const auto keys = original::keygen(opts, rng);
    const auto m = random_weight(10, 1 + rng.below_u64(10), rng);
    const auto ct = original::encrypt(keys.pk, m);
    const auto report = exhaustive_subset_attack(keys.pk, ct);
    const auto expected = brute_candidates(keys.pk, ct);
    EXPECT_EQ(strings(report.candidates), expected);
    EXPECT_TRUE(expected.count(m.to_string()));
    EXPECT_LE(BigInt(report.subsets_examined), report.exact_count);
  }
}

TEST(Mitm, MatchesExhaustive) {
  Rng rng(43);
  for (int round = 0; round < 40; ++round) {
    const std::size_t n = 4 + rng.below_u64(13);
    const auto keys = original::keygen(n, 0, rng);
    const auto m = random_weight(n, 1 + rng.below_u64(n), rng);
    const auto ct = original::encrypt(keys.pk, m);
    const auto ex = exhaustive_subset_attack(keys.pk, ct);
    for (std::size_t split : {std::size_t{1}, n / 2, n - 1}) {
      const auto mitm = mitm_subset_attack(keys.pk, ct, split);
      ASSERT_EQ(mitm.candidates, ex.candidates) << "n=" << n << " split=" << split;
      EXPECT_EQ(mitm.subsets_examined, (std::uint64_t{1} << split) + (std::uint64_t{1} << (n - split)));
    }
  }
}

TEST(Mitm, RespectsListCap) {
  Rng rng(44);
  const auto keys = original::keygen(12, 0, rng);
  const auto ct = original::encrypt(keys.pk, BitVector::unit(12, 3));
  MitmOptions opts;
  opts.max_list_entries = 16;
  try {
    mitm_subset_attack(keys.pk, ct, 6, opts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::too_large);
  }
  EXPECT_THROW(mitm_subset_attack(keys.pk, ct, 0), Error);
  EXPECT_THROW(mitm_subset_attack(keys.pk, ct, 12), Error);
}

TEST(ModularMitm, MatchesBruteScan) {
  Rng rng(45);
  for (int round = 0; round < 20; ++round) {
    const BigInt p = gen_safe_prime(14, rng).p;
    std::vector<BigInt> factors;
    for (int i = 0; i < 10; ++i) factors.push_back(rng.between(BigInt(1), p - 1));
    const BigInt target = rng.between(BigInt(1), p - 1);
    const int weight = static_cast<int>(rng.below_u64(11));
    EXPECT_EQ(strings(mitm_subset_product_mod(factors, p, target, 5, static_cast<std::size_t>(weight))),
              oracle::all_subset_products_mod(factors, p, target, weight));
    auto unrestricted = oracle::all_subset_products_mod(factors, p, target);
    if (target == 1) unrestricted.insert(std::string(10, '0'));
    EXPECT_EQ(strings(mitm_subset_product_mod(factors, p, target, 3)), unrestricted);
  }
}

TEST(Birthday, RecoversModifiedMessageFromPublicData) {
  Rng rng(46);
  for (int round = 0; round < 10; ++round) {
    const auto keys = modified::keygen(12, 10, rng);
    const BigInt m = rng.between(BigInt(1), keys.pk.max_message());
    const auto r = modified::draw_randomness(12, rng);
    const auto ct = modified::encrypt_with_randomness(keys.pk, m, r);
    const auto found = modified_birthday_attack(keys.pk, ct, 6);
    bool hit = false;
    for (const auto& f : found) hit |= f.r == r && f.message == m;
    EXPECT_TRUE(hit);
  }
}

TEST(Profile, Regimes) {
  EXPECT_EQ(attack_complexity_profile(20, 1).regime, Regime::small);
  EXPECT_EQ(attack_complexity_profile(20, 10).regime, Regime::medium);
  EXPECT_EQ(attack_complexity_profile(20, 19).regime, Regime::large);
  EXPECT_EQ(attack_complexity_profile(20, 10).exact, 184756);
  EXPECT_THROW(attack_complexity_profile(3, 4), Error);
}

TEST(Distinguisher, AlwaysCorrectAgainstDeterministicEncryption) {
  Rng rng(47);
  const auto keys = original::keygen(10, 0, rng);
  for (int i = 0; i < 200; ++i) {
    const auto m0 = random_weight(10, 1 + rng.below_u64(10), rng);
    auto m1 = random_weight(10, 1 + rng.below_u64(10), rng);
    if (m1 == m0) continue;
    const int b = rng.coin() ? 1 : 0;
    EXPECT_EQ(deterministic_distinguisher(keys.pk, m0, m1, original::encrypt(keys.pk, b ? m1 : m0)), b);
  }
}
