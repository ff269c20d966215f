#pragma once

// Security experiments run against either scheme: the two-stage
// chosen-ciphertext game with a decryption oracle that refuses the challenge,
// the malleation queries used in the CCA2 argument for the randomized
// variant, a component-mutation fuzzer, and completeness trials.

#include <cassert>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <type_traits>
#include <string>
#include <utility>
#include <vector>

#include "knapsack_lab/attack.hpp"
#include "knapsack_lab/modified.hpp"
#include "knapsack_lab/numtheory.hpp"
#include "knapsack_lab/original.hpp"
#include "knapsack_lab/random.hpp"

namespace knapsack_lab::game {

// ---------------------------------------------------------------------------
// Scheme adapters: a uniform Gen/Enc/Dec surface over both constructions.

struct OriginalScheme {
  using PublicKey = original::PublicKey;
  using SecretKey = original::SecretKey;
  using Ciphertext = original::Ciphertext;
  using Message = BitVector;
  using KeyPair = original::KeyPair;

  original::KeygenOptions options;

  static constexpr const char* name = "original";

  KeyPair keygen(Rng& rng) const { return original::keygen(options, rng); }
  Ciphertext encrypt(const PublicKey& pk, const Message& m, Rng&) const { return original::encrypt(pk, m); }

  // Every plaintext the secret key admits for this ciphertext.
  std::vector<Message> decrypt_candidates(const SecretKey& sk, const Ciphertext& ct) const {
    try {
      return original::decrypt_all(sk, ct);
    } catch (const Error&) {
      return {};
    }
  }

  // Dec: a unique plaintext, or bottom.
  std::optional<Message> decrypt(const SecretKey& sk, const Ciphertext& ct) const {
    auto all = decrypt_candidates(sk, ct);
    if (all.size() != 1) return std::nullopt;
    return std::move(all.front());
  }

  Message random_message(const PublicKey& pk, Rng& rng) const {
    for (;;) {
      std::vector<std::uint8_t> bits(pk.n);
      for (auto& b : bits) b = rng.coin() ? 1 : 0;
      BitVector m(std::move(bits));
      if (!m.none()) return m;
    }
  }
};

struct ModifiedScheme {
  using PublicKey = modified::PublicKey;
  using SecretKey = modified::SecretKey;
  using Ciphertext = modified::Ciphertext;
  using Message = BigInt;
  using KeyPair = modified::KeyPair;

  modified::KeygenOptions options;

  static constexpr const char* name = "modified";

  KeyPair keygen(Rng& rng) const { return modified::keygen(options, rng); }
  Ciphertext encrypt(const PublicKey& pk, const Message& m, Rng& rng) const { return modified::encrypt(pk, m, rng); }

  std::optional<Message> decrypt(const SecretKey& sk, const Ciphertext& ct) const {
    auto out = modified::decrypt(sk, ct);
    if (!out.accepted()) return std::nullopt;
    return out.message();
  }

  std::vector<Message> decrypt_candidates(const SecretKey& sk, const Ciphertext& ct) const {
    auto m = decrypt(sk, ct);
    if (!m) return {};
    return {std::move(*m)};
  }

  Message random_message(const PublicKey& pk, Rng& rng) const { return rng.between(BigInt(1), pk.max_message()); }
};

// ---------------------------------------------------------------------------
// Oracle

enum class ReplyStatus { plaintext, bottom, refused };

template <class Scheme>
struct OracleReply {
  ReplyStatus status;
  std::optional<typename Scheme::Message> message;
};

// Dec(sk, .) for the adversary. Rejection reasons are not exposed: any
// failure is the single symbol bottom. Queries equal to the challenge are
// refused without touching the secret key.
template <class Scheme>
class DecryptionOracle {
 public:
  DecryptionOracle(const Scheme& scheme, const typename Scheme::SecretKey& sk) : scheme_(scheme), sk_(sk) {}

  void set_challenge(typename Scheme::Ciphertext c) { challenge_ = std::move(c); }

  OracleReply<Scheme> query(const typename Scheme::Ciphertext& c) {
    ++queries_;
    if (challenge_ && c == *challenge_) {
      ++refused_;
      return {ReplyStatus::refused, std::nullopt};
    }
    assert(!challenge_ || !(c == *challenge_));
    auto m = scheme_.decrypt(sk_, c);
    if (!m) {
      ++bottoms_;
      return {ReplyStatus::bottom, std::nullopt};
    }
    ++plaintexts_;
    return {ReplyStatus::plaintext, std::move(m)};
  }

  std::size_t queries() const noexcept { return queries_; }
  std::size_t refused() const noexcept { return refused_; }
  std::size_t bottoms() const noexcept { return bottoms_; }
  std::size_t plaintexts() const noexcept { return plaintexts_; }

 private:
  const Scheme& scheme_;
  const typename Scheme::SecretKey& sk_;
  std::optional<typename Scheme::Ciphertext> challenge_;
  std::size_t queries_ = 0, refused_ = 0, bottoms_ = 0, plaintexts_ = 0;
};

// ---------------------------------------------------------------------------
// Adversaries

template <class Scheme>
class Adversary {
 public:
  using PublicKey = typename Scheme::PublicKey;
  using Ciphertext = typename Scheme::Ciphertext;
  using Message = typename Scheme::Message;

  virtual ~Adversary() = default;
  virtual std::string name() const = 0;

  // First stage: pick two equal-length messages.
  virtual std::pair<Message, Message> choose(const Scheme& scheme, const PublicKey& pk,
                                             DecryptionOracle<Scheme>& oracle, Rng& rng) = 0;
  // Second stage: guess which one the challenge encrypts.
  virtual int guess(const Scheme& scheme, const PublicKey& pk, const Ciphertext& challenge,
                    DecryptionOracle<Scheme>& oracle, Rng& rng) = 0;
};

// Two distinct random messages; the default first stage for every strategy here.
template <class Scheme>
class TwoMessageAdversary : public Adversary<Scheme> {
 public:
  using typename Adversary<Scheme>::PublicKey;
  using typename Adversary<Scheme>::Message;

  std::pair<Message, Message> choose(const Scheme& scheme, const PublicKey& pk, DecryptionOracle<Scheme>&,
                                     Rng& rng) override {
    Message a = scheme.random_message(pk, rng);
    Message b = scheme.random_message(pk, rng);
    while (b == a) b = scheme.random_message(pk, rng);
    m0_ = a;
    m1_ = b;
    return {std::move(a), std::move(b)};
  }

 protected:
  std::optional<Message> m0_, m1_;
};

template <class Scheme>
class RandomGuessAdversary final : public TwoMessageAdversary<Scheme> {
 public:
  std::string name() const override { return "random"; }
  int guess(const Scheme&, const typename Scheme::PublicKey&, const typename Scheme::Ciphertext&,
            DecryptionOracle<Scheme>&, Rng& rng) override {
    return rng.coin() ? 1 : 0;
  }
};

// Re-encrypt m0 under the public key and compare with the challenge.
template <class Scheme>
class DistinguisherAdversary final : public TwoMessageAdversary<Scheme> {
 public:
  std::string name() const override { return "distinguisher"; }
  int guess(const Scheme& scheme, const typename Scheme::PublicKey& pk, const typename Scheme::Ciphertext& challenge,
            DecryptionOracle<Scheme>&, Rng& rng) override {
    if constexpr (std::is_same_v<Scheme, OriginalScheme>) {
      return attack::deterministic_distinguisher(pk, *this->m0_, *this->m1_, challenge);
    } else {
      return scheme.encrypt(pk, *this->m0_, rng) == challenge ? 0 : 1;
    }
  }
};

// ---------------------------------------------------------------------------
// Malleation queries against the randomized variant

// Keep C1*, replace C2 by a uniformly random value != C2*.
inline modified::Ciphertext malleation_case1(const modified::Ciphertext& challenge, const modified::PublicKey& pk,
                                             Rng& rng) {
  modified::Ciphertext q = challenge;
  do {
    q.c2 = rng.between(BigInt(1), pk.p - 1);
  } while (q.c2 == challenge.c2);
  return q;
}

// Keep C2*, replace C1 by an honest C1 under fresh randomness r != r*. With
// same_weight, r has the challenge's Hamming weight, which is public via
// C1' = s^h mod p.
inline modified::Ciphertext malleation_case2(const modified::Ciphertext& challenge, const modified::PublicKey& pk,
                                             Rng& rng, bool same_weight = false) {
  const std::size_t n = pk.n;
  std::optional<std::size_t> weight;
  if (same_weight) {
    const std::size_t h = attack::recover_hamming_weight_mod(pk.common_s(), challenge.c1_prime, pk.p, n);
    if (h < n) weight = h;  // weight n admits only r*
  }
  for (;;) {
    BitVector r = modified::draw_randomness(n, rng);
    if (weight) {
      std::vector<std::size_t> idx(n);
      for (std::size_t i = 0; i < n; ++i) idx[i] = i;
      for (std::size_t i = 0; i < *weight; ++i) std::swap(idx[i], idx[i + rng.below_u64(n - i)]);
      r = BitVector::zeros(n);
      for (std::size_t i = 0; i < *weight; ++i) r.set(idx[i], true);
      if (!modified::valid_randomness(r)) continue;
    }
    modified::Ciphertext q{1, 1, challenge.c2};
    for (std::size_t i = 0; i < n; ++i) {
      if (!r[i]) continue;
      q.c1_prime = q.c1_prime * pk.s[i] % pk.p;
      q.c1_dprime = q.c1_dprime * pk.u[i] % pk.p;
    }
    // Distinct r give distinct C1, so equality means r == r*.
    if (q.c1_prime == challenge.c1_prime && q.c1_dprime == challenge.c1_dprime) continue;
    return q;
  }
}

namespace detail {

inline int match_guess(const std::optional<BigInt>& got, const BigInt& m0, const BigInt& m1, Rng& rng) {
  if (got && *got == m0) return 0;
  if (got && *got == m1) return 1;
  return rng.coin() ? 1 : 0;
}

}  // namespace detail

// Query a Case 1 malleation; use the answer if it names m0 or m1, else guess.
class MalleationCase1Adversary final : public TwoMessageAdversary<ModifiedScheme> {
 public:
  std::string name() const override { return "case1"; }
  int guess(const ModifiedScheme&, const modified::PublicKey& pk, const modified::Ciphertext& challenge,
            DecryptionOracle<ModifiedScheme>& oracle, Rng& rng) override {
    auto reply = oracle.query(malleation_case1(challenge, pk, rng));
    return detail::match_guess(reply.message, *m0_, *m1_, rng);
  }
};

class MalleationCase2Adversary final : public TwoMessageAdversary<ModifiedScheme> {
 public:
  explicit MalleationCase2Adversary(bool same_weight = true) : same_weight_(same_weight) {}
  std::string name() const override { return "case2"; }
  int guess(const ModifiedScheme&, const modified::PublicKey& pk, const modified::Ciphertext& challenge,
            DecryptionOracle<ModifiedScheme>& oracle, Rng& rng) override {
    auto reply = oracle.query(malleation_case2(challenge, pk, rng, same_weight_));
    return detail::match_guess(reply.message, *m0_, *m1_, rng);
  }

 private:
  bool same_weight_;
};

// Queries (C1*, C2*^e mod p). The second consistency check accepts it, and the
// answer is (m_b + h)^e - h, with h read off C1' = s^h mod p.
class ExponentMalleationAdversary final : public TwoMessageAdversary<ModifiedScheme> {
 public:
  std::string name() const override { return "exponent"; }
  int guess(const ModifiedScheme&, const modified::PublicKey& pk, const modified::Ciphertext& challenge,
            DecryptionOracle<ModifiedScheme>& oracle, Rng& rng) override {
    modified::Ciphertext q = challenge;
    BigInt e = 3;
    while ((q.c2 = mod_pow(challenge.c2, e, pk.p)) == challenge.c2) e += 2;
    auto reply = oracle.query(q);
    if (reply.status != ReplyStatus::plaintext) return rng.coin() ? 1 : 0;
    const std::size_t h = attack::recover_hamming_weight_mod(pk.common_s(), challenge.c1_prime, pk.p, pk.n);
    const auto image = [&](const BigInt& m) { return BigInt(mod_pow(m + h, e, pk.p) - h); };
    if (image(*m0_) == *reply.message) return 0;
    if (image(*m1_) == *reply.message) return 1;
    return rng.coin() ? 1 : 0;
  }
};

// ---------------------------------------------------------------------------
// Experiments

struct ExperimentResult {
  std::string scheme;
  std::string adversary;
  std::size_t trials = 0;
  std::size_t wins = 0;
  std::size_t rejections = 0;  // oracle answered bottom
  std::size_t accepted = 0;    // oracle answered with a plaintext
  std::size_t refused = 0;     // challenge queries turned away

  // |Pr[win] - 1/2|
  double advantage() const {
    return trials == 0 ? 0.0 : std::fabs(static_cast<double>(wins) / static_cast<double>(trials) - 0.5);
  }
  double win_rate() const { return trials == 0 ? 0.0 : static_cast<double>(wins) / static_cast<double>(trials); }
};

template <class Scheme>
ExperimentResult run_ind_cca2(const Scheme& scheme, Adversary<Scheme>& adversary, std::size_t trials, Rng& rng) {
  if (trials < 1) throw Error(ErrorKind::domain, "need at least one trial");
  ExperimentResult result{Scheme::name, adversary.name(), trials};
  for (std::size_t t = 0; t < trials; ++t) {
    Rng trial_rng = rng.fork(t);
    const auto keys = scheme.keygen(trial_rng);
    DecryptionOracle<Scheme> oracle(scheme, keys.sk);
    auto [m0, m1] = adversary.choose(scheme, keys.pk, oracle, trial_rng);
    if constexpr (std::is_same_v<typename Scheme::Message, BitVector>) {
      if (m0.size() != m1.size()) throw Error(ErrorKind::length_mismatch, "adversary chose messages of unequal length");
    }
    const int b = trial_rng.coin() ? 1 : 0;
    auto challenge = scheme.encrypt(keys.pk, b == 0 ? m0 : m1, trial_rng);
    oracle.set_challenge(challenge);
    const int guess = adversary.guess(scheme, keys.pk, challenge, oracle, trial_rng);
    if (guess == b) ++result.wins;
    result.rejections += oracle.bottoms();
    result.accepted += oracle.plaintexts();
    result.refused += oracle.refused();
  }
  return result;
}

// Three-sigma band of the win count for a fair coin.
inline bool within_three_sigma_of_half(const ExperimentResult& r) {
  const double n = static_cast<double>(r.trials);
  const double sigma = std::sqrt(n * 0.25);
  return std::fabs(static_cast<double>(r.wins) - n / 2.0) <= 3.0 * sigma;
}

// ---------------------------------------------------------------------------
// Mutation fuzzer

enum Component : unsigned { kC1Prime = 1, kC1DPrime = 2, kC2 = 4 };

inline std::string component_label(unsigned mask) {
  std::string s;
  const auto add = [&](const char* part) {
    if (!s.empty()) s += '+';
    s += part;
  };
  if (mask & kC1Prime) add("c1'");
  if (mask & kC1DPrime) add("c1''");
  if (mask & kC2) add("c2");
  return s;
}

struct MutationFinding {
  std::size_t index;
  std::uint64_t seed;  // Rng(seed) reproduces message, randomness and mutation
  unsigned components;
  modified::Ciphertext honest;
  modified::Ciphertext mutated;
  BigInt message;
  BigInt accepted_message;
};

struct FuzzReport {
  std::size_t mutations = 0;
  std::size_t accepted = 0;
  std::size_t accepted_by_mask[8] = {};
  std::size_t tried_by_mask[8] = {};
  std::vector<MutationFinding> findings;  // capped at max_findings
};

enum class FuzzScope { single, single_and_pairs };

// Mutations of honest ciphertexts, cycling through the single-component masks
// (and, with single_and_pairs, the pairwise ones). Replacement values are
// uniform in [1, p) and differ from the honest value.
inline FuzzReport run_mutation_fuzzer(const modified::KeyPair& keys, std::size_t mutations, Rng& rng,
                                      FuzzScope scope = FuzzScope::single, std::size_t max_findings = 32) {
  static constexpr unsigned kMasks[] = {kC1Prime, kC1DPrime, kC2, kC1Prime | kC1DPrime, kC1Prime | kC2,
                                        kC1DPrime | kC2};
  const std::size_t mask_count = scope == FuzzScope::single ? 3 : 6;
  FuzzReport report;
  const BigInt& p = keys.pk.p;
  for (std::size_t i = 0; i < mutations; ++i) {
    Rng local = rng.fork(i);
    const std::uint64_t seed = local.seed();
    const unsigned mask = kMasks[i % mask_count];
    const BigInt m = local.between(BigInt(1), keys.pk.max_message());
    const auto honest = modified::encrypt(keys.pk, m, local);
    auto mutated = honest;
    const auto replace = [&](BigInt& field, const BigInt& old) {
      do {
        field = local.between(BigInt(1), p - 1);
      } while (field == old);
    };
    if (mask & kC1Prime) replace(mutated.c1_prime, honest.c1_prime);
    if (mask & kC1DPrime) replace(mutated.c1_dprime, honest.c1_dprime);
    if (mask & kC2) replace(mutated.c2, honest.c2);
    ++report.mutations;
    ++report.tried_by_mask[mask];
    const auto out = modified::decrypt(keys.sk, mutated);
    if (!out.accepted()) continue;
    ++report.accepted;
    ++report.accepted_by_mask[mask];
    if (report.findings.size() < max_findings)
      report.findings.push_back({i, seed, mask, honest, mutated, m, out.message()});
  }
  return report;
}

// ---------------------------------------------------------------------------
// Completeness

struct CompletenessTally {
  std::size_t unique = 0;
  std::size_t ambiguous = 0;
  std::size_t failed = 0;

  std::size_t total() const noexcept { return unique + ambiguous + failed; }
};

template <class Message>
void classify(CompletenessTally& tally, const std::vector<Message>& candidates, const Message& m) {
  if (candidates.size() >= 2)
    ++tally.ambiguous;
  else if (candidates.size() == 1 && candidates.front() == m)
    ++tally.unique;
  else
    ++tally.failed;
}

// Fresh keys and a fresh random message per trial.
template <class Scheme>
CompletenessTally run_completeness_trials(const Scheme& scheme, std::size_t trials, Rng& rng) {
  if (trials < 1) throw Error(ErrorKind::domain, "need at least one trial");
  CompletenessTally tally;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng trial_rng = rng.fork(t);
    const auto keys = scheme.keygen(trial_rng);
    const auto m = scheme.random_message(keys.pk, trial_rng);
    const auto ct = scheme.encrypt(keys.pk, m, trial_rng);
    classify(tally, scheme.decrypt_candidates(keys.sk, ct), m);
  }
  return tally;
}

// Every nonzero message under one fixed original-scheme key.
inline CompletenessTally completeness_over_all_messages(const original::KeyPair& keys) {
  const std::size_t n = keys.pk.n;
  if (n > 24) throw Error(ErrorKind::too_large, "message-space scan limited to n <= 24");
  CompletenessTally tally;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    const auto m = BitVector::from_mask(mask, n);
    classify(tally, original::decrypt_all(keys.sk, original::encrypt(keys.pk, m)), m);
  }
  return tally;
}

}  // namespace knapsack_lab::game
