// Walk through the five-element toy key: key derivation, an ambiguous
// decryption, an overflowing message, and the public-key attack.

#include <iostream>

#include "knapsack_lab/knapsack_lab.hpp"

using namespace knapsack_lab;

int main() {
  const auto keys = original::keygen_from({2579, 2, 1500, 348, {2, 3, 6, 12, 24}}, true);
  std::cout << "y = " << keys.sk.y << ", s = " << keys.pk.common_s() << ", u =";
  for (const auto& u : keys.pk.u) std::cout << ' ' << u;
  std::cout << '\n';

  const auto ct = original::encrypt(keys.pk, BitVector::parse("01001"));
  std::cout << "encrypt(01001) = " << formats::format_ciphertext(ct, formats::Radix::dec) << '\n';
  std::cout << "d = " << original::decrypt_d(keys.sk, ct) << ", decryptions:";
  for (const auto& m : original::decrypt_all(keys.sk, ct)) std::cout << ' ' << m.to_string();
  std::cout << '\n';

  const auto big = original::encrypt(keys.pk, BitVector::parse("01111"));
  std::cout << "encrypt(01111) = " << formats::format_ciphertext(big, formats::Radix::dec)
            << ", d = " << original::decrypt_d(keys.sk, big) << " (product 5184 exceeds p)\n";

  const auto report = attack::exhaustive_subset_attack(keys.pk, ct);
  std::cout << "attack: h = " << report.recovered_h << ", candidates:";
  for (const auto& m : report.candidates) std::cout << ' ' << m.to_string();
  std::cout << '\n';

  const auto audit = original::completeness_audit(keys.sk, keys.pk);
  std::cout << "audit: " << audit.unique_count << " of " << audit.message_count << " messages decrypt uniquely, "
            << audit.collisions.size() << " collision groups, " << audit.overflows.size() << " overflows\n";
}
