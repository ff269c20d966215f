#include <gtest/gtest.h>

#include <fstream>
#include <iterator>

#include "knapsack_lab/formats.hpp"

using namespace knapsack_lab;
using namespace knapsack_lab::formats;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST(BigIntText, CanonicalHex) {
  EXPECT_EQ(to_hex(BigInt(2579)), "a13");
  EXPECT_EQ(to_hex(BigInt(0)), "0");
  EXPECT_EQ(from_hex("a13"), 2579);
  EXPECT_THROW(from_hex("A13"), Error);
  EXPECT_THROW(from_hex("0a13"), Error);
  EXPECT_THROW(from_hex(""), Error);
  EXPECT_EQ(parse_integer("0x1f"), 31);
  EXPECT_EQ(parse_integer("31"), 31);
  EXPECT_THROW(parse_integer("3z"), Error);
}

TEST(KeyFile, OriginalRoundTripThousandKeys) {
  Rng rng(91);
  for (int i = 0; i < 1000; ++i) {
    const auto keys = original::keygen(2 + rng.below_u64(15), 0, rng);
    const std::string pub = serialize(keys.pk), sec = serialize(keys.sk);
    ASSERT_EQ(serialize(parse_key(pub)), pub);
    ASSERT_EQ(serialize(parse_key(sec)), sec);
    ASSERT_EQ(std::get<original::PublicKey>(parse_key(pub)), keys.pk);
    ASSERT_EQ(std::get<original::SecretKey>(parse_key(sec)), keys.sk);
  }
}

TEST(KeyFile, ModifiedRoundTripThousandKeys) {
  Rng rng(92);
  for (int i = 0; i < 1000; ++i) {
    const auto keys = modified::keygen(2 + rng.below_u64(7), 8 + rng.below_u64(5), rng);
    const std::string pub = serialize(keys.pk), sec = serialize(keys.sk);
    ASSERT_EQ(serialize(parse_key(pub)), pub);
    ASSERT_EQ(serialize(parse_key(sec)), sec);
    ASSERT_EQ(std::get<modified::SecretKey>(parse_key(sec)), keys.sk);
  }
}

TEST(KeyFile, RejectsDamage) {
  Rng rng(93);
  const auto keys = original::keygen(5, 0, rng);
  const std::string pub = serialize(keys.pk);
  EXPECT_THROW(parse_key(""), Error);
  EXPECT_THROW(parse_key("knapsack-lab-key v2\n" + pub.substr(pub.find('\n') + 1)), Error);
  std::string wrong_n = pub;
  wrong_n.replace(wrong_n.find("n=5"), 3, "n=6");
  EXPECT_THROW(parse_key(wrong_n), Error);
  EXPECT_THROW(parse_key(pub + "extra=1\n"), Error);
  std::string upper = pub;
  upper.replace(upper.find("p="), 2, "p=0");
  EXPECT_THROW(parse_key(upper), Error);
}

TEST(KeyFile, FixturesMatchToyKey) {
  const auto params = parse_params(slurp(FIXTURE_DIR "/toy_p2579.params"));
  EXPECT_EQ(params.p, 2579);
  EXPECT_EQ(params.a, (std::vector<BigInt>{2, 3, 6, 12, 24}));
  EXPECT_EQ(serialize(params), slurp(FIXTURE_DIR "/toy_p2579.params"));
  const auto keys = original::keygen_from(params, true);
  EXPECT_EQ(serialize(keys.pk), slurp(FIXTURE_DIR "/toy_p2579.pub"));
  EXPECT_EQ(serialize(keys.sk), slurp(FIXTURE_DIR "/toy_p2579.sec"));
}

TEST(Ciphertext, TextForms) {
  const original::Ciphertext ct{10816, 372020};
  EXPECT_EQ(format_ciphertext(ct, Radix::dec), "10816 372020");
  EXPECT_EQ(format_ciphertext(ct), "2a40 5ad34");
  EXPECT_EQ(parse_original_ciphertext("2a40   5ad34\n"), ct);
  EXPECT_EQ(parse_original_ciphertext("10816 372020", Radix::dec), ct);
  EXPECT_THROW(parse_original_ciphertext("2a40"), Error);
  EXPECT_THROW(parse_modified_ciphertext("1 2"), Error);
  const modified::Ciphertext mct{1, 2, 3};
  EXPECT_EQ(parse_modified_ciphertext(format_ciphertext(mct)), mct);
}

TEST(Csv, BenchRowMatchesReport) {
  attack::AttackReport r;
  r.n = 16;
  r.recovered_h = 2;
  r.exact_count = 120;
  r.predicted_bound = 256.0;
  r.subsets_examined = 99;
  r.elapsed = std::chrono::duration<double, std::milli>(1.5);
  r.candidates.push_back(BitVector::unit(16, 0));
  EXPECT_EQ(bench_row(r), "16,2,120,256,99,1.500,1");
}
