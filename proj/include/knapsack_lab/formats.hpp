#pragma once

// Text formats shared by the command-line tool and the fixtures.
//
// Key files:
//
//   knapsack-lab-key v1
//   scheme=original|modified
//   role=public|secret
//   n=<decimal count>
//   <field>=<lowercase hex>
//   <field>=<hex>,<hex>,...
//
// Fields appear in a fixed order per (scheme, role), so serialize(parse(text))
// reproduces `text` byte for byte. Parameter files use the header
// "knapsack-lab-params v1" with fields p, g, x, k, a.
//
// Ciphertexts are one line of whitespace-separated integers: "c1 c2" for the
// original scheme, "c1' c1'' c2" for the modified one.

#include <cstddef>
#include <iomanip>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "knapsack_lab/attack.hpp"
#include "knapsack_lab/bigint.hpp"
#include "knapsack_lab/game.hpp"
#include "knapsack_lab/modified.hpp"
#include "knapsack_lab/original.hpp"

namespace knapsack_lab::formats {

inline constexpr std::string_view kKeyHeader = "knapsack-lab-key v1";
inline constexpr std::string_view kParamsHeader = "knapsack-lab-params v1";

using AnyKey = std::variant<original::PublicKey, original::SecretKey, modified::PublicKey, modified::SecretKey>;

namespace detail {

inline std::string hex_list(std::span<const BigInt> values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += to_hex(values[i]);
  }
  return out;
}

class Writer {
 public:
  explicit Writer(std::string_view header) { out_ << header << '\n'; }
  Writer& field(std::string_view name, std::string_view value) {
    out_ << name << '=' << value << '\n';
    return *this;
  }
  Writer& hex(std::string_view name, const BigInt& v) { return field(name, to_hex(v)); }
  Writer& hex_seq(std::string_view name, std::span<const BigInt> v) { return field(name, hex_list(v)); }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

// Ordered key=value lines after a fixed header; every field is consumed exactly once.
class Reader {
 public:
  Reader(std::string_view text, std::string_view header) {
    std::size_t pos = 0;
    bool first = true;
    while (pos < text.size()) {
      std::size_t end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      std::string_view line = text.substr(pos, end - pos);
      pos = end + 1;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (first) {
        if (line != header) throw Error(ErrorKind::format, "expected header '" + std::string(header) + "'");
        first = false;
        continue;
      }
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw Error(ErrorKind::format, "line without '=': " + std::string(line));
      lines_.emplace_back(std::string(line.substr(0, eq)), std::string(line.substr(eq + 1)));
    }
    if (first) throw Error(ErrorKind::format, "empty file");
  }

  const std::string& next(std::string_view name) {
    if (cursor_ >= lines_.size() || lines_[cursor_].first != name)
      throw Error(ErrorKind::format, "expected field '" + std::string(name) + "'");
    return lines_[cursor_++].second;
  }

  BigInt hex(std::string_view name) { return from_hex(next(name)); }

  std::vector<BigInt> hex_seq(std::string_view name) {
    const std::string& v = next(name);
    std::vector<BigInt> out;
    std::size_t pos = 0;
    for (;;) {
      const auto comma = v.find(',', pos);
      out.push_back(from_hex(std::string_view(v).substr(pos, comma == std::string::npos ? std::string::npos : comma - pos)));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    return out;
  }

  std::size_t count(std::string_view name) {
    const BigInt v = from_dec(next(name));
    if (v > 4096) throw Error(ErrorKind::format, "count field too large");
    return v.convert_to<std::size_t>();
  }

  void finish() const {
    if (cursor_ != lines_.size()) throw Error(ErrorKind::format, "unexpected field '" + lines_[cursor_].first + "'");
  }

 private:
  std::vector<std::pair<std::string, std::string>> lines_;
  std::size_t cursor_ = 0;
};

inline void check_len(const std::vector<BigInt>& v, std::size_t n, std::string_view name) {
  if (v.size() != n) throw Error(ErrorKind::format, "field '" + std::string(name) + "' has wrong length");
}

}  // namespace detail

inline std::string serialize(const original::PublicKey& pk) {
  return detail::Writer(kKeyHeader)
      .field("scheme", "original")
      .field("role", "public")
      .field("n", std::to_string(pk.n))
      .hex("p", pk.p)
      .hex_seq("s", pk.s)
      .hex_seq("u", pk.u)
      .str();
}

inline std::string serialize(const original::SecretKey& sk) {
  return detail::Writer(kKeyHeader)
      .field("scheme", "original")
      .field("role", "secret")
      .field("n", std::to_string(sk.n()))
      .hex("p", sk.p)
      .hex("g", sk.g)
      .hex("y", sk.y)
      .hex("x", sk.x)
      .hex("k", sk.k)
      .hex_seq("a", sk.a.terms())
      .str();
}

inline std::string serialize(const modified::PublicKey& pk) {
  return detail::Writer(kKeyHeader)
      .field("scheme", "modified")
      .field("role", "public")
      .field("n", std::to_string(pk.n))
      .hex("p", pk.p)
      .hex_seq("s", pk.s)
      .hex_seq("u", pk.u)
      .str();
}

inline std::string serialize(const modified::SecretKey& sk) {
  return detail::Writer(kKeyHeader)
      .field("scheme", "modified")
      .field("role", "secret")
      .field("n", std::to_string(sk.n()))
      .hex("p", sk.p)
      .hex("g", sk.g)
      .hex("y", sk.y)
      .hex("x", sk.x)
      .hex("k", sk.k)
      .hex_seq("primes", sk.primes.primes())
      .str();
}

inline std::string serialize(const AnyKey& key) {
  return std::visit([](const auto& k) { return serialize(k); }, key);
}

inline AnyKey parse_key(std::string_view text) {
  detail::Reader r(text, kKeyHeader);
  const std::string scheme = r.next("scheme");
  const std::string role = r.next("role");
  if (scheme != "original" && scheme != "modified") throw Error(ErrorKind::format, "unknown scheme '" + scheme + "'");
  if (role != "public" && role != "secret") throw Error(ErrorKind::format, "unknown role '" + role + "'");
  const std::size_t n = r.count("n");
  if (n < 1) throw Error(ErrorKind::format, "n must be >= 1");

  if (role == "public") {
    const BigInt p = r.hex("p");
    auto s = r.hex_seq("s");
    auto u = r.hex_seq("u");
    r.finish();
    detail::check_len(s, n, "s");
    detail::check_len(u, n, "u");
    if (scheme == "original") {
      original::PublicKey pk{n, p, std::move(s), std::move(u)};
      pk.validate();
      return pk;
    }
    modified::PublicKey pk{n, p, std::move(s), std::move(u)};
    pk.validate();
    return pk;
  }

  const BigInt p = r.hex("p"), g = r.hex("g"), y = r.hex("y"), x = r.hex("x"), k = r.hex("k");
  if (scheme == "original") {
    auto a = r.hex_seq("a");
    r.finish();
    detail::check_len(a, n, "a");
    original::SecretKey sk{p, g, y, x, k, SuperIncreasingSeq(std::move(a))};
    sk.validate();
    return sk;
  }
  auto primes = r.hex_seq("primes");
  r.finish();
  detail::check_len(primes, n, "primes");
  modified::SecretKey sk{p, g, y, x, k, PrimeSequence(std::move(primes))};
  sk.validate();
  return sk;
}

inline std::string serialize(const original::FixedKeyParams& params) {
  return detail::Writer(kParamsHeader)
      .field("scheme", "original")
      .hex("p", params.p)
      .hex("g", params.g)
      .hex("x", params.x)
      .hex("k", params.k)
      .hex_seq("a", params.a)
      .str();
}

inline original::FixedKeyParams parse_params(std::string_view text) {
  detail::Reader r(text, kParamsHeader);
  if (r.next("scheme") != "original") throw Error(ErrorKind::format, "fixed parameters are only defined for the original scheme");
  original::FixedKeyParams params;
  params.p = r.hex("p");
  params.g = r.hex("g");
  params.x = r.hex("x");
  params.k = r.hex("k");
  params.a = r.hex_seq("a");
  r.finish();
  return params;
}

// ---------------------------------------------------------------------------
// Ciphertexts

enum class Radix { hex, dec };

inline std::string format_int(const BigInt& v, Radix radix) { return radix == Radix::hex ? to_hex(v) : to_dec(v); }

inline BigInt parse_int(std::string_view text, Radix radix) { return radix == Radix::hex ? from_hex(text) : from_dec(text); }

inline std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> words;
  std::istringstream in{std::string(text)};
  for (std::string w; in >> w;) words.push_back(w);
  return words;
}

inline std::string format_ciphertext(const original::Ciphertext& ct, Radix radix = Radix::hex) {
  return format_int(ct.c1, radix) + ' ' + format_int(ct.c2, radix);
}

inline std::string format_ciphertext(const modified::Ciphertext& ct, Radix radix = Radix::hex) {
  return format_int(ct.c1_prime, radix) + ' ' + format_int(ct.c1_dprime, radix) + ' ' + format_int(ct.c2, radix);
}

inline original::Ciphertext parse_original_ciphertext(std::string_view text, Radix radix = Radix::hex) {
  const auto w = split_words(text);
  if (w.size() != 2) throw Error(ErrorKind::format, "original ciphertext needs 2 integers");
  return {parse_int(w[0], radix), parse_int(w[1], radix)};
}

inline modified::Ciphertext parse_modified_ciphertext(std::string_view text, Radix radix = Radix::hex) {
  const auto w = split_words(text);
  if (w.size() != 3) throw Error(ErrorKind::format, "modified ciphertext needs 3 integers");
  return {parse_int(w[0], radix), parse_int(w[1], radix), parse_int(w[2], radix)};
}

// ---------------------------------------------------------------------------
// CSV reports

inline std::string format_double(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

inline std::string format_ms(double v) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(3) << v;
  return out.str();
}

inline constexpr std::string_view kBenchHeader = "n,h,exact,bound,examined,elapsed_ms,candidates";

inline std::string bench_row(const attack::AttackReport& r) {
  return std::to_string(r.n) + ',' + std::to_string(r.recovered_h) + ',' + to_dec(r.exact_count) + ',' +
         format_double(r.predicted_bound) + ',' + std::to_string(r.subsets_examined) + ',' +
         format_ms(r.elapsed.count()) + ',' + std::to_string(r.candidates.size());
}

inline constexpr std::string_view kExperimentHeader = "scheme,adversary,trials,wins,advantage,rejections";

inline std::string experiment_row(const game::ExperimentResult& r) {
  return r.scheme + ',' + r.adversary + ',' + std::to_string(r.trials) + ',' + std::to_string(r.wins) + ',' +
         format_double(r.advantage()) + ',' + std::to_string(r.rejections);
}

}  // namespace knapsack_lab::formats
