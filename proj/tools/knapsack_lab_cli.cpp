// knapsack-lab: key generation, encryption, attacks and experiments from the shell.
//
// Exit status: 0 success, 1 usage or format error, 2 decryption rejected.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>

#include "knapsack_lab/knapsack_lab.hpp"

namespace kl = knapsack_lab;
namespace fmt = knapsack_lab::formats;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitReject = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw kl::Error(kl::ErrorKind::format, "cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw kl::Error(kl::ErrorKind::format, "cannot write " + path);
  out << text;
}

std::string read_stdin() { return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()}; }

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed) {
  if (seed) return *seed;
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

fmt::Radix parse_radix(const std::string& s) { return s == "dec" ? fmt::Radix::dec : fmt::Radix::hex; }

// Looks only at the first lines of a key file, so secret material is never parsed.
std::string peek_role(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw kl::Error(kl::ErrorKind::format, "cannot open " + path);
  std::string line;
  for (int i = 0; i < 3 && std::getline(in, line); ++i)
    if (line.rfind("role=", 0) == 0) return line.substr(5);
  throw kl::Error(kl::ErrorKind::format, path + " is not a key file");
}

// ---------------------------------------------------------------------------

struct KeygenArgs {
  std::string scheme = "original";
  std::size_t n = 8;
  std::size_t modulus_bits = 0;
  std::size_t prime_bits = 16;
  bool coprime = false;
  bool allow_overflow = false;
  std::string fixed_key;
  std::optional<std::uint64_t> seed;
  std::string public_path, secret_path;
};

int cmd_keygen(const KeygenArgs& a) {
  kl::Rng rng(resolve_seed(a.seed));
  std::string pub, sec;
  if (a.scheme == "original") {
    const auto make = [&] {
      if (!a.fixed_key.empty())
        return kl::original::keygen_from(fmt::parse_params(read_file(a.fixed_key)), a.allow_overflow);
      kl::original::KeygenOptions opts;
      opts.n = a.n;
      opts.modulus_bits = a.modulus_bits;
      opts.allow_modulus_overflow = a.allow_overflow;
      if (a.coprime) opts.shape = kl::original::KnapsackShape::superincreasing_coprime;
      return kl::original::keygen(opts, rng);
    };
    const auto keys = make();
    pub = fmt::serialize(keys.pk);
    sec = fmt::serialize(keys.sk);
  } else {
    if (!a.fixed_key.empty()) throw kl::Error(kl::ErrorKind::parameter, "--fixed-key applies to the original scheme");
    kl::modified::KeygenOptions opts;
    opts.n = a.n;
    opts.prime_bits = a.prime_bits;
    opts.modulus_bits = a.modulus_bits;
    const auto keys = kl::modified::keygen(opts, rng);
    pub = fmt::serialize(keys.pk);
    sec = fmt::serialize(keys.sk);
  }
  write_file(a.public_path, pub);
  write_file(a.secret_path, sec);
  return kExitOk;
}

struct CryptArgs {
  std::string key;
  std::string message;
  std::string ciphertext;
  std::string radix = "hex";
  std::optional<std::uint64_t> seed;
};

int cmd_encrypt(const CryptArgs& a) {
  const auto key = fmt::parse_key(read_file(a.key));
  const auto radix = parse_radix(a.radix);
  if (const auto* pk = std::get_if<kl::original::PublicKey>(&key)) {
    std::cout << fmt::format_ciphertext(kl::original::encrypt(*pk, kl::BitVector::parse(a.message)), radix) << '\n';
  } else if (const auto* pk = std::get_if<kl::modified::PublicKey>(&key)) {
    kl::Rng rng(resolve_seed(a.seed));
    std::cout << fmt::format_ciphertext(kl::modified::encrypt(*pk, kl::parse_integer(a.message), rng), radix) << '\n';
  } else {
    throw kl::Error(kl::ErrorKind::format, "encrypt needs a public key");
  }
  return kExitOk;
}

int cmd_decrypt(const CryptArgs& a) {
  const auto key = fmt::parse_key(read_file(a.key));
  const auto radix = parse_radix(a.radix);
  const std::string text = a.ciphertext.empty() ? read_stdin() : a.ciphertext;
  if (const auto* sk = std::get_if<kl::original::SecretKey>(&key)) {
    std::vector<kl::BitVector> all;
    try {
      all = kl::original::decrypt_all(*sk, fmt::parse_original_ciphertext(text, radix));
    } catch (const kl::Error& e) {
      if (e.kind() == kl::ErrorKind::format) throw;
    }
    if (all.empty()) {
      std::cout << "REJECT\n";
      return kExitReject;
    }
    for (const auto& m : all) std::cout << m.to_string() << '\n';
    return kExitOk;
  }
  if (const auto* sk = std::get_if<kl::modified::SecretKey>(&key)) {
    const auto ct = fmt::parse_modified_ciphertext(text, radix);
    std::optional<kl::modified::DecryptOutcome> out;
    try {
      out = kl::modified::decrypt(*sk, ct);
    } catch (const kl::Error& e) {
      if (e.kind() == kl::ErrorKind::format) throw;
    }
    if (!out || !out->accepted()) {
      std::cout << "REJECT\n";
      return kExitReject;
    }
    std::cout << kl::to_dec(out->message()) << '\n';
    return kExitOk;
  }
  throw kl::Error(kl::ErrorKind::format, "decrypt needs a secret key");
}

struct AttackArgs {
  std::string key;
  std::string ciphertext;
  std::string strategy = "exhaustive";
  std::size_t split = 0;
  std::string radix = "hex";
};

int cmd_attack(const AttackArgs& a) {
  if (peek_role(a.key) != "public") throw kl::Error(kl::ErrorKind::format, "attack takes a public key only");
  const auto key = fmt::parse_key(read_file(a.key));
  const auto radix = parse_radix(a.radix);
  const std::string text = a.ciphertext.empty() ? read_stdin() : a.ciphertext;

  if (const auto* pk = std::get_if<kl::modified::PublicKey>(&key)) {
    const auto ct = fmt::parse_modified_ciphertext(text, radix);
    const std::size_t split = a.split ? a.split : pk->n / 2;
    for (const auto& hit : kl::attack::modified_birthday_attack(*pk, ct, split))
      std::cout << "candidate r=" << hit.r.to_string() << " m=" << kl::to_dec(hit.message) << '\n';
    return kExitOk;
  }
  const auto& pk = std::get<kl::original::PublicKey>(key);
  const auto ct = fmt::parse_original_ciphertext(text, radix);
  kl::attack::AttackReport report;
  if (a.strategy == "mitm")
    report = kl::attack::mitm_subset_attack(pk, ct, a.split ? a.split : pk.n / 2);
  else
    report = kl::attack::exhaustive_subset_attack(pk, ct);
  for (const auto& m : report.candidates) std::cout << "candidate " << m.to_string() << '\n';
  std::cout << fmt::kBenchHeader << '\n' << fmt::bench_row(report) << '\n';
  return kExitOk;
}

struct AuditArgs {
  std::string key;
  std::size_t limit = kl::original::kDefaultAuditLimit;
};

int cmd_audit(const AuditArgs& a) {
  const auto key = fmt::parse_key(read_file(a.key));
  const auto* sk = std::get_if<kl::original::SecretKey>(&key);
  if (!sk) throw kl::Error(kl::ErrorKind::format, "audit needs an original-scheme secret key");
  const auto report = kl::original::completeness_audit(*sk, kl::original::derive_public(*sk), a.limit);
  std::cout << "kind,product,messages\n";
  for (const auto& c : report.collisions) {
    std::cout << "collision," << kl::to_dec(c.product) << ',';
    for (std::size_t i = 0; i < c.messages.size(); ++i) std::cout << (i ? " " : "") << c.messages[i].to_string();
    std::cout << '\n';
  }
  for (const auto& o : report.overflows)
    std::cout << "overflow," << kl::to_dec(o.product) << ',' << o.message.to_string() << '\n';
  std::cout << "summary: n=" << report.n << " messages=" << report.message_count << " unique=" << report.unique_count
            << " collisions=" << report.collisions.size() << " overflows=" << report.overflows.size() << '\n';
  return kExitOk;
}

struct GameArgs {
  std::string scheme = "original";
  std::string adversary = "distinguisher";
  std::size_t trials = 1000;
  std::size_t n = 8;
  std::size_t prime_bits = 12;
  std::optional<std::uint64_t> seed;
};

int cmd_game(const GameArgs& a) {
  kl::Rng rng(resolve_seed(a.seed));
  kl::game::ExperimentResult res;
  if (a.scheme == "original") {
    kl::game::OriginalScheme scheme;
    scheme.options.n = a.n;
    if (a.adversary == "distinguisher") {
      kl::game::DistinguisherAdversary<kl::game::OriginalScheme> adv;
      res = kl::game::run_ind_cca2(scheme, adv, a.trials, rng);
    } else if (a.adversary == "random") {
      kl::game::RandomGuessAdversary<kl::game::OriginalScheme> adv;
      res = kl::game::run_ind_cca2(scheme, adv, a.trials, rng);
    } else {
      throw kl::Error(kl::ErrorKind::parameter, "adversary '" + a.adversary + "' needs --scheme modified");
    }
  } else {
    kl::game::ModifiedScheme scheme;
    scheme.options.n = a.n;
    scheme.options.prime_bits = a.prime_bits;
    std::unique_ptr<kl::game::Adversary<kl::game::ModifiedScheme>> adv;
    if (a.adversary == "distinguisher")
      adv = std::make_unique<kl::game::DistinguisherAdversary<kl::game::ModifiedScheme>>();
    else if (a.adversary == "random")
      adv = std::make_unique<kl::game::RandomGuessAdversary<kl::game::ModifiedScheme>>();
    else if (a.adversary == "case1")
      adv = std::make_unique<kl::game::MalleationCase1Adversary>();
    else if (a.adversary == "case2")
      adv = std::make_unique<kl::game::MalleationCase2Adversary>();
    else
      adv = std::make_unique<kl::game::ExponentMalleationAdversary>();
    res = kl::game::run_ind_cca2(scheme, *adv, a.trials, rng);
  }
  std::cout << fmt::kExperimentHeader << '\n' << fmt::experiment_row(res) << '\n';
  return kExitOk;
}

struct BenchArgs {
  std::size_t n = 20;
  std::vector<std::size_t> weights;
  std::string strategy = "exhaustive";
  std::optional<std::uint64_t> seed;
};

int cmd_bench(const BenchArgs& a) {
  kl::Rng rng(resolve_seed(a.seed));
  kl::original::KeygenOptions opts;
  opts.n = a.n;
  const auto keys = kl::original::keygen(opts, rng);
  std::vector<std::size_t> weights = a.weights;
  if (weights.empty())
    for (std::size_t h = 1; h <= a.n; ++h) weights.push_back(h);
  std::cout << fmt::kBenchHeader << ",regime\n";
  for (std::size_t h : weights) {
    if (h < 1 || h > a.n) throw kl::Error(kl::ErrorKind::parameter, "weights must lie in [1, n]");
    auto m = kl::BitVector::zeros(a.n);
    while (m.weight() < h) m.set(rng.below_u64(a.n), true);
    const auto ct = kl::original::encrypt(keys.pk, m);
    const auto report = a.strategy == "mitm" ? kl::attack::mitm_subset_attack(keys.pk, ct, a.n / 2)
                                             : kl::attack::exhaustive_subset_attack(keys.pk, ct);
    std::cout << fmt::bench_row(report) << ','
              << kl::attack::to_string(kl::attack::attack_complexity_profile(a.n, h).regime) << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiplicative-knapsack ElGamal lab"};
  app.require_subcommand(1);

  KeygenArgs kg;
  auto* keygen = app.add_subcommand("keygen", "Generate a key pair");
  keygen->add_option("--scheme", kg.scheme)->check(CLI::IsMember({"original", "modified"}));
  keygen->add_option("--n", kg.n, "Knapsack length");
  keygen->add_option("--modulus-bits", kg.modulus_bits, "Bit length of p (0: automatic)");
  keygen->add_option("--prime-bits", kg.prime_bits, "Bit length of each secret prime (modified)");
  keygen->add_flag("--coprime", kg.coprime, "Pairwise-coprime knapsack (original)");
  keygen->add_flag("--allow-overflow", kg.allow_overflow, "Permit p below the knapsack product (original)");
  keygen->add_option("--fixed-key", kg.fixed_key, "Parameter file with p, g, x, k, a (original)");
  keygen->add_option("--seed", kg.seed);
  keygen->add_option("--public", kg.public_path)->required();
  keygen->add_option("--secret", kg.secret_path)->required();

  CryptArgs enc;
  auto* encrypt = app.add_subcommand("encrypt", "Encrypt a message under a public key");
  encrypt->add_option("--key", enc.key)->required();
  encrypt->add_option("--message", enc.message, "Bit string (original) or integer (modified)")->required();
  encrypt->add_option("--seed", enc.seed);
  encrypt->add_option("--radix", enc.radix)->check(CLI::IsMember({"hex", "dec"}));

  CryptArgs dec;
  auto* decrypt = app.add_subcommand("decrypt", "Decrypt with a secret key; prints REJECT on failure");
  decrypt->add_option("--key", dec.key)->required();
  decrypt->add_option("--ciphertext", dec.ciphertext, "Ciphertext text; read from stdin when omitted");
  decrypt->add_option("--radix", dec.radix)->check(CLI::IsMember({"hex", "dec"}));

  AttackArgs att;
  auto* attack = app.add_subcommand("attack", "Recover plaintext from a public key and ciphertext");
  attack->add_option("--key", att.key)->required();
  attack->add_option("--ciphertext", att.ciphertext, "Ciphertext text; read from stdin when omitted");
  attack->add_option("--strategy", att.strategy)->check(CLI::IsMember({"exhaustive", "mitm"}));
  attack->add_option("--split", att.split, "Meet-in-the-middle split (default n/2)");
  attack->add_option("--radix", att.radix)->check(CLI::IsMember({"hex", "dec"}));

  AuditArgs aud;
  auto* audit = app.add_subcommand("audit", "List collisions and overflows of an original-scheme key");
  audit->add_option("--key", aud.key)->required();
  audit->add_option("--limit", aud.limit, "Largest n scanned exhaustively");

  GameArgs gm;
  auto* game = app.add_subcommand("game", "Run the chosen-ciphertext game");
  game->add_option("--scheme", gm.scheme)->check(CLI::IsMember({"original", "modified"}));
  game->add_option("--adversary", gm.adversary)
      ->check(CLI::IsMember({"random", "distinguisher", "case1", "case2", "exponent"}));
  game->add_option("--trials", gm.trials);
  game->add_option("--n", gm.n);
  game->add_option("--prime-bits", gm.prime_bits);
  game->add_option("--seed", gm.seed);

  BenchArgs bn;
  auto* bench = app.add_subcommand("bench", "Sweep Hamming weights and time the attack");
  bench->add_option("--n", bn.n);
  bench->add_option("--weights", bn.weights, "Weights to test (default 1..n)")->delimiter(',');
  bench->add_option("--strategy", bn.strategy)->check(CLI::IsMember({"exhaustive", "mitm"}));
  bench->add_option("--seed", bn.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*keygen) return cmd_keygen(kg);
    if (*encrypt) return cmd_encrypt(enc);
    if (*decrypt) return cmd_decrypt(dec);
    if (*attack) return cmd_attack(att);
    if (*audit) return cmd_audit(aud);
    if (*game) return cmd_game(gm);
    if (*bench) return cmd_bench(bn);
  } catch (const std::exception& e) {
    std::cerr << "knapsack-lab: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
