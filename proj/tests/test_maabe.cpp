#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <string>

#include "ehr/errors.hpp"
#include "ehr/maabe.hpp"
#include "support/policy_corpus.hpp"

using namespace ehr;
using namespace ehr::maabe;

namespace {

struct World {
  bls::PairingParams params = bls::setup(128);
  SeededRandom rng{"maabe-world"};

  AbeAuthority hospital{"hospital", params};
  AbeAuthority dmv{"dmv", params};
  AbeAuthority insurer{"insurer", params};
  AbeAuthority board{"board", params};
  PkDirectory pks;

  std::string gid = "annie-foster-gid";

  World() {
    auto wire = [&](AbeAuthority& authority, const std::string& name) {
      const auto& keys = authority.register_attribute(name, rng);
      pks.publish(authority.id(), name, keys.public_key);
      authority.admit_holder(gid);
    };
    wire(hospital, "employee-id");
    wire(dmv, "drivers-license");
    wire(insurer, "policy-number");
    wire(board, "medical-license");
  }

  AbeAuthority& authority_by_id(const std::string& id) {
    if (id == "hospital") return hospital;
    if (id == "dmv") return dmv;
    if (id == "insurer") return insurer;
    return board;
  }

  // Issues keys for the label subset encoded in `mask` (corpus order).
  std::vector<AbeUserKey> keys_for_mask(unsigned mask,
                                        const std::string& holder) {
    std::vector<AbeUserKey> keys;
    for (std::size_t i = 0; i < corpus::kLabels.size(); ++i) {
      if (!(mask & (1u << i))) continue;
      auto [authority_id, name] = corpus::kLabels[i];
      AbeAuthority& authority = authority_by_id(std::string(authority_id));
      authority.admit_holder(holder);
      keys.push_back(authority.issue_key(holder, std::string(name)));
    }
    return keys;
  }
};

constexpr std::string_view kTwoOfUs =
    "employee-id@hospital AND drivers-license@dmv";

}  // namespace

TEST_CASE("round trip across payload sizes, zero bytes rejected") {
  World w;
  std::vector<AbeUserKey> keys = w.keys_for_mask(0b0011, w.gid);

  for (std::size_t size : {std::size_t{1}, std::size_t{1024},
                           std::size_t{10} * 1024 * 1024}) {
    Bytes plaintext = w.rng.bytes(size);
    Bytes ct = abe_encrypt(w.params, w.pks, kTwoOfUs, plaintext, w.rng);
    CHECK(abe_decrypt(w.params, ct, keys) == plaintext);
  }

  CHECK_THROWS_AS(abe_encrypt(w.params, w.pks, kTwoOfUs, Bytes{}, w.rng),
                  std::invalid_argument);
}

TEST_CASE("fresh randomness: the same plaintext encrypts differently") {
  World w;
  Bytes plaintext = to_bytes(std::string_view("same payload"));
  Bytes a = abe_encrypt(w.params, w.pks, kTwoOfUs, plaintext, w.rng);
  Bytes b = abe_encrypt(w.params, w.pks, kTwoOfUs, plaintext, w.rng);
  CHECK(a != b);
  std::vector<AbeUserKey> keys = w.keys_for_mask(0b0011, w.gid);
  CHECK(abe_decrypt(w.params, a, keys) == plaintext);
  CHECK(abe_decrypt(w.params, b, keys) == plaintext);
}

TEST_CASE("decryption succeeds exactly when the formula is satisfied") {
  World w;
  Bytes plaintext = to_bytes(std::string_view("exhaustive payload"));

  for (std::string_view text : corpus::kPolicies) {
    Bytes ct = abe_encrypt(w.params, w.pks, text, plaintext, w.rng);
    policy::PolicyNode root = policy::parse_policy(text);

    for (unsigned mask = 0; mask < 16; ++mask) {
      std::set<policy::AttributeLabel> held;
      for (std::size_t i = 0; i < corpus::kLabels.size(); ++i) {
        if (mask & (1u << i)) {
          held.emplace(std::string(corpus::kLabels[i].first),
                       std::string(corpus::kLabels[i].second));
        }
      }
      const bool expected = policy::policy_satisfied(root, held);
      std::vector<AbeUserKey> keys = w.keys_for_mask(mask, w.gid);
      CAPTURE(text);
      CAPTURE(mask);
      if (mask == 0) {
        CHECK_THROWS_AS(abe_decrypt(w.params, ct, keys),
                        std::invalid_argument);
      } else if (expected) {
        CHECK(abe_decrypt(w.params, ct, keys) == plaintext);
      } else {
        CHECK_THROWS_AS(abe_decrypt(w.params, ct, keys), DeniedError);
      }
    }
  }
}

TEST_CASE("two enrolled holders both decrypt with their own key sets") {
  World w;
  Bytes plaintext = to_bytes(std::string_view("shared record"));
  Bytes ct = abe_encrypt(w.params, w.pks, kTwoOfUs, plaintext, w.rng);
  std::vector<AbeUserKey> annie = w.keys_for_mask(0b0011, "annie-foster-gid");
  std::vector<AbeUserKey> beth = w.keys_for_mask(0b0011, "beth-ng-gid");
  CHECK(abe_decrypt(w.params, ct, annie) == plaintext);
  CHECK(abe_decrypt(w.params, ct, beth) == plaintext);
}

TEST_CASE("mixed-gid key sets are refused up front") {
  World w;
  Bytes ct = abe_encrypt(w.params, w.pks, kTwoOfUs,
                         to_bytes(std::string_view("x")), w.rng);
  std::vector<AbeUserKey> annie = w.keys_for_mask(0b0001, "annie-foster-gid");
  std::vector<AbeUserKey> beth = w.keys_for_mask(0b0010, "beth-ng-gid");
  std::vector<AbeUserKey> pooled;
  pooled.push_back(annie[0]);
  pooled.push_back(beth[0]);
  CHECK_THROWS_AS(abe_decrypt(w.params, ct, pooled), std::invalid_argument);
}

TEST_CASE("wrong key material fails exactly like an unsatisfied policy") {
  World w;
  Bytes ct = abe_encrypt(w.params, w.pks, kTwoOfUs,
                         to_bytes(std::string_view("x")), w.rng);

  std::string unsatisfied_msg;
  std::string wrongkey_msg;
  try {
    abe_decrypt(w.params, ct, w.keys_for_mask(0b0001, w.gid));
    FAIL("unsatisfied policy must not decrypt");
  } catch (const DeniedError& e) {
    unsatisfied_msg = e.what();
  }
  std::vector<AbeUserKey> tampered = w.keys_for_mask(0b0011, w.gid);
  tampered[0].key_material = tampered[0].key_material + bls381::Fr::one();
  try {
    abe_decrypt(w.params, ct, tampered);
    FAIL("wrong key material must not decrypt");
  } catch (const DeniedError& e) {
    wrongkey_msg = e.what();
  }
  CHECK(unsatisfied_msg == wrongkey_msg);  // uniform failure
}

TEST_CASE("byte-flip sweep: every single-byte mutation fails to decrypt") {
  World w;
  Bytes plaintext = to_bytes(std::string_view("integrity sweep payload"));
  Bytes ct = abe_encrypt(w.params, w.pks, "employee-id@hospital", plaintext,
                         w.rng);
  std::vector<AbeUserKey> keys = w.keys_for_mask(0b0001, w.gid);
  REQUIRE(abe_decrypt(w.params, ct, keys) == plaintext);

  int failures = 0;
  for (std::size_t i = 0; i < ct.size(); ++i) {
    Bytes mutated = ct;
    mutated[i] ^= 0x01;
    try {
      Bytes out = abe_decrypt(w.params, mutated, keys);
      // Any surviving decrypt must at least be byte-identical; anything
      // else is silent corruption.
      CHECK(out == plaintext);
    } catch (const ParseError&) {
      ++failures;
    } catch (const CryptoError&) {
      ++failures;
    } catch (const DeniedError&) {
      ++failures;
    }
  }
  CHECK(failures == static_cast<int>(ct.size()));
}

TEST_CASE("truncation and padding are rejected as malformed") {
  World w;
  Bytes ct = abe_encrypt(w.params, w.pks, "employee-id@hospital",
                         to_bytes(std::string_view("payload")), w.rng);
  std::vector<AbeUserKey> keys = w.keys_for_mask(0b0001, w.gid);

  Bytes truncated(ct.begin(), ct.end() - 1);
  CHECK_THROWS_AS(abe_decrypt(w.params, truncated, keys), ParseError);
  Bytes padded = ct;
  padded.push_back(0x00);
  CHECK_THROWS_AS(abe_decrypt(w.params, padded, keys), ParseError);
  CHECK_THROWS_AS(abe_decrypt(w.params, Bytes{}, keys), ParseError);
}

TEST_CASE("encrypting against a missing public key fails with state error") {
  World w;
  CHECK_THROWS_AS(abe_encrypt(w.params, w.pks, "unknown-attr@hospital",
                              to_bytes(std::string_view("x")), w.rng),
                  StateError);
  CHECK_THROWS_AS(abe_encrypt(w.params, w.pks, "employee-id@@hospital",
                              to_bytes(std::string_view("x")), w.rng),
                  ParseError);
}

TEST_CASE("authority setup rejects duplicates and avoids key collisions") {
  World w;
  CHECK_THROWS_AS(w.hospital.register_attribute("employee-id", w.rng),
                  StateError);

  AbeAuthority big("big", w.params);
  std::set<Bytes> seen;
  for (int i = 0; i < 100; ++i) {
    const auto& keys =
        big.register_attribute("attr-" + std::to_string(i), w.rng);
    auto compressed = bls381::g1_to_compressed(keys.public_key);
    Bytes pk(compressed.begin(), compressed.end());
    CHECK(seen.insert(pk).second);
  }
  CHECK(seen.size() == 100);
}

TEST_CASE("key issuance is gated on admission and ownership") {
  World w;
  CHECK_THROWS_AS(w.hospital.issue_key("stranger", "employee-id"),
                  DeniedError);
  CHECK_THROWS_AS(w.hospital.issue_key(w.gid, "drivers-license"), StateError);
  AbeUserKey key = w.hospital.issue_key(w.gid, "employee-id");
  CHECK(key.gid == w.gid);
  CHECK(key.authority_id == "hospital");
}

TEST_CASE("container inspection exposes the header without secrets") {
  World w;
  Bytes plaintext = w.rng.bytes(100 * 1024);
  Bytes ct = abe_encrypt(w.params, w.pks, kTwoOfUs, plaintext, w.rng);
  CiphertextInfo info = inspect_ciphertext(ct);
  CHECK(info.version == 1);
  CHECK(info.policy_text ==
        "employee-id@hospital AND drivers-license@dmv");
  CHECK(info.row_count == 2);
  CHECK(info.chunk_count == 2);  // 100 KiB over 64 KiB chunks
  CHECK(info.total_size == ct.size());

  Bytes garbage = to_bytes(std::string_view("not a container"));
  CHECK_THROWS_AS(inspect_ciphertext(garbage), ParseError);
}
