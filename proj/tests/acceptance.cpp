// Acceptance gate: eight end-to-end criteria, one pass/fail line each.
// Exit status is the number of failed criteria. Tolerances and runtime
// budgets are pinned below, next to the criterion they govern.

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <latch>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ehr/abms.hpp"
#include "ehr/bls.hpp"
#include "ehr/edge_store.hpp"
#include "ehr/errors.hpp"
#include "ehr/hex.hpp"
#include "ehr/ledger.hpp"
#include "ehr/lsss.hpp"
#include "ehr/maabe.hpp"
#include "ehr/policy.hpp"
#include "ehr/workflow.hpp"
#include "support/gmp_rank.hpp"
#include "support/policy_corpus.hpp"

using namespace ehr;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances.
constexpr double kFlatnessMax = 1.25;  // "independent of length"
constexpr double kR2Min = 0.98;        // "linear growth"
constexpr int kBenchTrials = 30;

// Pinned runtime budgets (seconds); 0 = no budget for this criterion.
constexpr double kBudget[9] = {0, 5, 5, 180, 120, 0, 0, 0, 30};

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void expect(bool ok, const std::string& what) {
  if (!ok) throw Failure(what);
}

fs::path fresh_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("ehr-acceptance-" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

workflow::WorkspaceConfig deterministic_config(const fs::path& dir,
                                               const std::string& seed) {
  workflow::WorkspaceConfig config;
  config.data_dir = dir;
  config.clock_mode = "fixed";
  config.fixed_clock_start = 1700000000;
  config.rng_mode = "seeded";
  config.rng_seed = seed;
  return config;
}

std::string fmt(double v, int precision = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

// ---- criterion 1: threshold outcomes -------------------------------------

std::string criterion_thresholds() {
  auto ws = workflow::Workspace::create(
      deterministic_config(fresh_dir("c1"), "c1"));
  ws->add_authority("hospital", "hospital-root", {{"employee-id", "0003231"}});
  ws->add_authority("dmv", "dmv-root", {{"drivers-license", "9907184"}});
  ws->add_authority("insurer", "insurer-root", {{"policy-number", "552761"}});
  const std::string annie = "annie";
  ws->register_patient(annie, "Annie Foster");
  ws->extract_key("hospital", annie, "employee-id", "0003231");
  ws->extract_key("dmv", annie, "drivers-license", "9907184");
  ws->extract_key("insurer", annie, "policy-number", "552761");
  ws->sign_attribute(annie, "hospital", "employee-id", "0003231");
  ws->sign_attribute(annie, "dmv", "drivers-license", "9907184");
  ws->sign_attribute(annie, "insurer", "policy-number", "552761");
  ws->write_profile(annie);
  const Bytes payload = ws->rng().bytes(4096);
  ws->upload(annie, ws->encrypt("employee-id@hospital", payload));
  ws->register_provider("lab", "Lab Scientist", "laboratory-scientist", 3, 3);
  ws->register_provider("research", "Research Scientist",
                        "research-scientist", 1, 3);
  ws->grant_acl(annie, {ledger::AclRule::Kind::kGid, "lab", "request_access"});
  ws->grant_acl(annie,
                {ledger::AclRule::Kind::kGid, "research", "request_access"});

  ledger::AccessOutcome lab = ws->request_access("lab", annie);
  expect(lab.granted && lab.valid_count == 3,
         "t=3/n=3 with 3 valid signatures must grant with valid_count=3");
  ledger::AccessOutcome research = ws->request_access("research", annie);
  expect(research.granted && research.valid_count == 3,
         "t=1/n=3 with 3 valid signatures must grant with valid_count=3");

  // Corrupting any single stored signature drops exactly one valid row:
  // the 3-of-3 policy must now reject while 1-of-3 still grants.
  for (std::size_t i = 0; i < 3; ++i) {
    ws->ledger().debug_corrupt_profile_signature(annie, i);
    lab = ws->request_access("lab", annie);
    expect(!lab.granted && lab.valid_count == 2,
           "t=3/n=3 after corrupting signature " + std::to_string(i) +
               " must reject with valid_count=2");
    research = ws->request_access("research", annie);
    expect(research.granted && research.valid_count == 2,
           "t=1/n=3 after corrupting signature " + std::to_string(i) +
               " must grant with valid_count=2");
    ws->ledger().debug_corrupt_profile_signature(annie, i);  // restore
  }
  return "3-valid grant at t=3 and t=1; each single corruption flips t=3 "
         "to reject at valid_count=2 while t=1 still grants";
}

// ---- criterion 2: one-time URL semantics ----------------------------------

std::string criterion_one_time_url() {
  const bls::PairingParams params = bls::setup(128);
  SeededRandom rng("c2");
  FixedClock clock(1700000000);
  maabe::AbeAuthority hospital("hospital", params);
  maabe::PkDirectory pks;
  pks.publish("hospital", "employee-id",
              hospital.register_attribute("employee-id", rng).public_key);
  const Bytes ciphertext = maabe::abe_encrypt(
      params, pks, "employee-id@hospital", rng.bytes(4096), rng);

  edge::EdgeStore store({fresh_dir("c2"), "https://edge.local", 3600}, clock,
                        rng);
  const std::string object_id = store.put_object("annie", ciphertext);

  const std::string token = store.issue(object_id, 0).first;
  std::optional<Bytes> first = store.redeem(token);
  expect(first.has_value() && *first == ciphertext,
         "first redemption must return the stored ciphertext");
  expect(!store.redeem(token).has_value(),
         "second redemption must report gone");

  const int kThreads = 128;
  const std::string raced = store.issue(object_id, 0).first;
  std::atomic<int> successes{0};
  std::latch gate(kThreads);
  std::vector<std::thread> pool;
  for (int i = 0; i < kThreads; ++i) {
    pool.emplace_back([&] {
      gate.arrive_and_wait();
      if (store.redeem(raced)) successes.fetch_add(1);
    });
  }
  for (auto& t : pool) t.join();
  expect(successes.load() == 1,
         "128-way concurrent redemption must yield exactly 1 success, got " +
             std::to_string(successes.load()));
  return "first redeem returned ciphertext, second gone; 128-way race: "
         "exactly 1 success";
}

// ---- criterion 3: scaling shapes -------------------------------------------

std::string criterion_scaling_shapes() {
  const bls::PairingParams params = bls::setup(128);
  SeededRandom rng("c3");

  const workflow::BenchReport by_length =
      workflow::bench_length(params, {10, 100, 1000, 10000}, kBenchTrials,
                             rng);
  expect(by_length.sign_flatness <= kFlatnessMax,
         "sign flatness over lengths " + fmt(by_length.sign_flatness) +
             " exceeds " + fmt(kFlatnessMax, 2));
  expect(by_length.verify_flatness <= kFlatnessMax,
         "verify flatness over lengths " + fmt(by_length.verify_flatness) +
             " exceeds " + fmt(kFlatnessMax, 2));

  const workflow::BenchReport by_count =
      workflow::bench_count(params, {1, 3, 5, 7, 9}, kBenchTrials, rng);
  expect(by_count.sign_r2 && *by_count.sign_r2 >= kR2Min,
         "sign total-time R2 " + fmt(*by_count.sign_r2, 4) + " below " +
             fmt(kR2Min, 2));
  expect(by_count.verify_r2 && *by_count.verify_r2 >= kR2Min,
         "verify total-time R2 " + fmt(*by_count.verify_r2, 4) + " below " +
             fmt(kR2Min, 2));

  for (const workflow::BenchReport* report : {&by_length, &by_count}) {
    for (const workflow::BenchPoint& p : report->points) {
      expect(p.verify_mean_ms > p.sign_mean_ms,
             "per-attribute verify mean must exceed sign mean at " +
                 report->scenario + " x=" + std::to_string(p.x));
    }
  }
  return "flatness sign " + fmt(by_length.sign_flatness) + " / verify " +
         fmt(by_length.verify_flatness) + " <= " + fmt(kFlatnessMax, 2) +
         "; R2 sign " + fmt(*by_count.sign_r2, 4) + " / verify " +
         fmt(*by_count.verify_r2, 4) + " >= " + fmt(kR2Min, 2) +
         "; verify > sign at all 9 points";
}

// ---- criteria 4 and 5: ABE and LSSS against the formula evaluator ---------

std::set<policy::AttributeLabel> subset_of_labels(unsigned mask) {
  std::set<policy::AttributeLabel> held;
  for (std::size_t i = 0; i < corpus::kLabels.size(); ++i) {
    if (mask & (1u << i)) {
      held.emplace(std::string(corpus::kLabels[i].first),
                   std::string(corpus::kLabels[i].second));
    }
  }
  return held;
}

std::string criterion_abe_contract() {
  const bls::PairingParams params = bls::setup(128);
  SeededRandom rng("c4");
  std::vector<std::unique_ptr<maabe::AbeAuthority>> authorities;
  maabe::PkDirectory pks;
  const std::string gid = "holder";
  for (const auto& [authority_id, name] : corpus::kLabels) {
    auto authority = std::make_unique<maabe::AbeAuthority>(
        std::string(authority_id), params);
    pks.publish(std::string(authority_id), std::string(name),
                authority->register_attribute(std::string(name), rng)
                    .public_key);
    authority->admit_holder(gid);
    authorities.push_back(std::move(authority));
  }
  const Bytes plaintext = rng.bytes(256);

  std::size_t checked = 0;
  for (std::string_view text : corpus::kPolicies) {
    const Bytes ct = maabe::abe_encrypt(params, pks, text, plaintext, rng);
    const policy::PolicyNode root = policy::parse_policy(text);
    for (unsigned mask = 0; mask < 16; ++mask) {
      const bool expected =
          policy::policy_satisfied(root, subset_of_labels(mask));
      bool decrypted = false;
      if (mask != 0) {  // an empty key set cannot even attempt decryption
        std::vector<maabe::AbeUserKey> keys;
        for (std::size_t i = 0; i < corpus::kLabels.size(); ++i) {
          if (mask & (1u << i)) {
            keys.push_back(authorities[i]->issue_key(
                gid, std::string(corpus::kLabels[i].second)));
          }
        }
        try {
          decrypted = maabe::abe_decrypt(params, ct, keys) == plaintext;
        } catch (const DeniedError&) {
          decrypted = false;
        }
      }
      expect(decrypted == expected,
             "policy \"" + std::string(text) + "\" mask " +
                 std::to_string(mask) + ": decrypt " +
                 (decrypted ? "succeeded" : "failed") + " but evaluator says " +
                 (expected ? "satisfied" : "unsatisfied"));
      ++checked;
    }
  }
  return std::to_string(checked) +
         " (policy, subset) pairs: decryption success matches the formula "
         "evaluator exactly";
}

std::string criterion_lsss_oracle() {
  constexpr char kFrModulusHex[] =
      "73eda753299d7d483339d80809a1d80553bda402fffe5bfeffffffff00000001";
  std::size_t checked = 0;
  for (std::string_view text : corpus::kPolicies) {
    const policy::PolicyNode root = policy::parse_policy(text);
    const lsss::Matrix m = lsss::policy_to_lsss(root);
    std::vector<std::string> target(m.cols, "0");
    target[0] = "1";
    for (unsigned mask = 0; mask < 16; ++mask) {
      const std::set<policy::AttributeLabel> held = subset_of_labels(mask);
      std::vector<std::vector<std::string>> selected;
      for (std::size_t i = 0; i < m.rows.size(); ++i) {
        if (!held.count(m.row_labels[i])) continue;
        std::vector<std::string> row;
        for (const lsss::Fr& cell : m.rows[i]) {
          row.push_back(to_hex(cell.to_bytes_be()));
        }
        selected.push_back(std::move(row));
      }
      const bool oracle_says =
          oracle::in_row_span(selected, target, kFrModulusHex);
      const bool solver_says = lsss::spans_target(m, held);
      const bool formula_says = policy::policy_satisfied(root, held);
      expect(oracle_says == formula_says && solver_says == formula_says,
             "policy \"" + std::string(text) + "\" mask " +
                 std::to_string(mask) + ": span oracle " +
                 (oracle_says ? "in" : "out") + ", solver " +
                 (solver_says ? "in" : "out") + ", formula " +
                 (formula_says ? "sat" : "unsat"));
      ++checked;
    }
  }
  return std::to_string(checked) +
         " (policy, subset) pairs: GMP span oracle == solver == formula";
}

// ---- criterion 6: tamper evidence ------------------------------------------

std::string criterion_tamper_evidence() {
  const bls::PairingParams params = bls::setup(128);
  SeededRandom rng("c6");
  FixedClock clock(1700000000);
  ledger::Ledger chain(fresh_dir("c6"), clock, rng, params);
  for (int i = 1; i < 50; ++i) {
    chain.register_participant(
        {"patient-" + std::to_string(i), "Patient " + std::to_string(i),
         ledger::Role::kPatient, "", {}, {}});
  }
  const std::vector<ledger::LedgerTransaction>& txs = chain.transactions();
  expect(txs.size() == 50, "expected a 50-transaction ledger");
  expect(ledger::Ledger::verify_transactions(txs).ok,
         "untampered chain must verify");

  std::mt19937_64 mix(0x5eed);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<ledger::LedgerTransaction> mutated = txs;
    const std::size_t at = mix() % mutated.size();
    ledger::LedgerTransaction& tx = mutated[at];
    switch (mix() % 8) {
      case 0: tx.seq += 1; break;
      case 1: tx.timestamp += 1; break;
      case 2:
        tx.kind = static_cast<ledger::TxKind>(
            (static_cast<int>(tx.kind) + 1) % 4);
        break;
      case 3: tx.event_id += "x"; break;
      case 4: tx.payload_digest[mix() % 32] ^= 0x40; break;
      case 5: tx.prev_hash[mix() % 32] ^= 0x40; break;
      case 6: tx.this_hash[mix() % 32] ^= 0x40; break;
      default:
        tx.payload_json[mix() % tx.payload_json.size()] ^= 0x01;
        break;
    }
    const ledger::ChainStatus status =
        ledger::Ledger::verify_transactions(mutated);
    expect(!status.ok, "mutation at position " + std::to_string(at) +
                           " (trial " + std::to_string(trial) +
                           ") went undetected");
    expect(status.break_seq <= at,
           "break reported at " + std::to_string(status.break_seq) +
               ", after the mutated position " + std::to_string(at));
  }
  return "100/100 single-field mutations of a 50-transaction ledger "
         "detected at or before the mutated position";
}

// ---- criterion 7: BLS property suite ---------------------------------------

std::string criterion_bls_properties() {
  const bls::PairingParams params = bls::setup(128);
  SeededRandom rng("c7");
  int accepts = 0, wrong_accepts = 0;
  for (int i = 0; i < 1000; ++i) {
    const bls::BlsKeyPair pair = bls::keygen(params, rng);
    const Bytes message = rng.bytes(1 + (i % 64));
    const bls::GroupSignature sig = bls::bls_sign(params, pair.sk, message);
    if (bls::bls_verify(params, pair.vk, message, sig) ==
        bls::VerifyResult::kAccept) {
      ++accepts;
    }
    switch (i % 3) {
      case 0: {  // wrong key
        const bls::BlsKeyPair other = bls::keygen(params, rng);
        if (bls::bls_verify(params, other.vk, message, sig) ==
            bls::VerifyResult::kAccept) {
          ++wrong_accepts;
        }
        break;
      }
      case 1: {  // wrong message
        Bytes other = message;
        other.push_back(0x01);
        if (bls::bls_verify(params, pair.vk, other, sig) ==
            bls::VerifyResult::kAccept) {
          ++wrong_accepts;
        }
        break;
      }
      default: {  // corrupted signature encoding
        Bytes encoded = bls::encode_signature(sig);
        encoded[encoded.size() - 1 - (i % 32)] ^= 0x04;
        try {
          const bls::GroupSignature bad = bls::decode_signature(encoded);
          if (bls::bls_verify(params, pair.vk, message, bad) ==
              bls::VerifyResult::kAccept) {
            ++wrong_accepts;
          }
        } catch (const std::exception&) {
          // refused at decode: counts as a rejection
        }
        break;
      }
    }
  }
  expect(accepts == 1000, "only " + std::to_string(accepts) +
                              "/1000 honest signatures verified");
  expect(wrong_accepts == 0,
         std::to_string(wrong_accepts) +
             " wrong-key/wrong-message/corrupted trials were accepted");
  return "1000/1000 honest accepts; 0/1000 accepts across wrong-key, "
         "wrong-message, corrupted-signature trials";
}

// ---- criterion 8: end-to-end scenario --------------------------------------

std::string criterion_scenario() {
  const fs::path dir = fresh_dir("c8");
  const fs::path transcript = dir.parent_path() / "ehr-acceptance-c8.log";
  const std::string command = std::string(EHRCTL_BIN) + " --data-dir " +
                              dir.string() +
                              " --seed c8 --fixed-clock 1700000000 "
                              "scenario annie > " +
                              transcript.string() + " 2>&1";
  const int raw = std::system(command.c_str());
  const int exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  expect(exit_code == 0, "scenario command exited " +
                             std::to_string(exit_code) + ", see " +
                             transcript.string());

  auto ws = workflow::Workspace::open(dir);
  const std::string live = ws->ledger().state_snapshot();
  const std::string replayed = ledger::Ledger::replay_snapshot(dir / "ledger");
  expect(!live.empty() && live == replayed,
         "replaying the record file did not reproduce the live "
         "registry/profile state");
  return "scenario command exited 0 on a clean workspace; replayed state "
         "matches live state byte for byte";
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* title;
    std::function<std::string()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "threshold outcomes under signature corruption",
       criterion_thresholds},
      {2, "one-time URL semantics and 128-way exactly-once",
       criterion_one_time_url},
      {3, "scaling shapes: flat in length, linear in count, verify > sign",
       criterion_scaling_shapes},
      {4, "ABE decryption matches the formula evaluator exhaustively",
       criterion_abe_contract},
      {5, "LSSS span membership equals formula satisfaction (GMP oracle)",
       criterion_lsss_oracle},
      {6, "tamper evidence under random single-field mutations",
       criterion_tamper_evidence},
      {7, "BLS correctness and forgery rejection", criterion_bls_properties},
      {8, "end-to-end scenario with replay equivalence", criterion_scenario},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string verdict, detail;
    try {
      detail = c.run();
      const double elapsed =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
              .count();
      if (kBudget[c.number] > 0 && elapsed > kBudget[c.number]) {
        verdict = "FAIL";
        detail = "exceeded runtime budget: " + fmt(elapsed, 1) + "s > " +
                 fmt(kBudget[c.number], 0) + "s";
      } else {
        verdict = "PASS";
      }
    } catch (const std::exception& e) {
      verdict = "FAIL";
      detail = e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (verdict == "FAIL") ++failures;
    std::printf("%s: criterion %d (%s) — %s [%ss]\n", verdict.c_str(),
                c.number, c.title, detail.c_str(), fmt(elapsed, 1).c_str());
    std::fflush(stdout);
  }
  return failures;
}
