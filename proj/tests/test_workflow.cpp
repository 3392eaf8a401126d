#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ehr/errors.hpp"
#include "ehr/ledger.hpp"
#include "ehr/workflow.hpp"

using namespace ehr;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
  static int counter = 0;
  fs::path dir = fs::temp_directory_path() /
                 ("ehr-workflow-" + tag + "-" + std::to_string(counter++));
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

Bytes slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return Bytes(std::istreambuf_iterator<char>(in),
               std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("scripted scenario completes on a clean workspace") {
  const fs::path dir = fresh_dir("scenario");
  std::ostringstream transcript;
  const workflow::ScenarioResult result =
      workflow::scenario_annie(deterministic_config(dir, "t1"), transcript);

  // genesis + 3 authorities + patient + profile + attach + 2 providers +
  // 2 acl grants + 2 auth events
  CHECK(result.ledger_height == 13);
  CHECK(result.event_ids.size() == 13);
  CHECK(result.ehr_bytes == std::size_t(1) << 20);
  CHECK(result.lab_url.find("/once/") != std::string::npos);
  CHECK(result.research_url.find("/once/") != std::string::npos);
  CHECK(result.lab_url != result.research_url);

  const std::string text = transcript.str();
  CHECK(text.find("step FAILED") == std::string::npos);
  CHECK(text.find("second redemption: gone") != std::string::npos);
  // Every event id from the result appears in the transcript.
  for (const std::string& id : result.event_ids) {
    CHECK(text.find(id) != std::string::npos);
  }

  SUBCASE("rerunning on the same workspace hits duplicate registration") {
    std::ostringstream again;
    CHECK_THROWS_AS(
        workflow::scenario_annie(deterministic_config(dir, "t1"), again),
        StateError);
    CHECK(again.str().find("step FAILED: authority hospital") !=
          std::string::npos);
  }

  SUBCASE("replaying the record file reproduces the live state") {
    auto ws = workflow::Workspace::open(dir);
    CHECK(ws->ledger().state_snapshot() ==
          ledger::Ledger::replay_snapshot(dir / "ledger"));
  }
}

TEST_CASE("scenario is deterministic under fixed clock and seeded rng") {
  const fs::path a = fresh_dir("det-a");
  const fs::path b = fresh_dir("det-b");
  std::ostringstream out_a, out_b;
  workflow::scenario_annie(deterministic_config(a, "same-seed"), out_a);
  workflow::scenario_annie(deterministic_config(b, "same-seed"), out_b);

  const Bytes ledger_a = slurp(a / "ledger" / "ledger.log");
  const Bytes ledger_b = slurp(b / "ledger" / "ledger.log");
  CHECK(ledger_a == ledger_b);
  CHECK(!ledger_a.empty());

  // A different seed produces a different ledger (event ids, signatures
  // of differing attribute keys, token digests).
  const fs::path c = fresh_dir("det-c");
  std::ostringstream out_c;
  workflow::scenario_annie(deterministic_config(c, "other-seed"), out_c);
  CHECK(slurp(c / "ledger" / "ledger.log") != ledger_a);
}

TEST_CASE("workspace persists key material across reopen") {
  const fs::path dir = fresh_dir("reopen");
  {
    auto ws =
        workflow::Workspace::create(deterministic_config(dir, "persist"));
    ws->add_authority("hospital", "hospital-root",
                      {{"employee-id", "0003231"}});
    ws->register_patient("annie", "Annie Foster");
    ws->extract_key("hospital", "annie", "employee-id", "0003231");
    ws->sign_attribute("annie", "hospital", "employee-id", "0003231");
  }
  {
    auto ws = workflow::Workspace::open(dir);
    // Wallet signatures survived.
    const auto labels = ws->wallet_signature_labels("annie");
    REQUIRE(labels.size() == 1);
    CHECK(labels[0] == "employee-id@hospital");
    // Restored signing keys still sign, restored registry still verifies.
    ws->sign_attribute("annie", "hospital", "employee-id", "0003231");
    ws->write_profile("annie");
    // Restored ABE public keys still encrypt; issued keys still decrypt.
    ws->register_provider("doc", "Dr. Wu", "doctor", 1, 1);
    ws->issue_abe_key("hospital", "doc", "employee-id");
    const Bytes plaintext = {1, 2, 3, 4, 5};
    const Bytes ct = ws->encrypt("employee-id@hospital", plaintext);
    CHECK(ws->decrypt("doc", ct) == plaintext);
    CHECK(ws->verify_chain().ok);
  }
  {
    // Third open: everything written by the second session is back too.
    auto ws = workflow::Workspace::open(dir);
    const Bytes plaintext = {9, 9, 9};
    const Bytes ct = ws->encrypt("employee-id@hospital", plaintext);
    CHECK(ws->decrypt("doc", ct) == plaintext);
  }
}

TEST_CASE("workspace lifecycle guards") {
  const fs::path dir = fresh_dir("guards");
  CHECK(!workflow::Workspace::exists(dir));
  CHECK_THROWS_AS(workflow::Workspace::open(dir), StateError);
  auto ws = workflow::Workspace::create(deterministic_config(dir, "g"));
  CHECK(workflow::Workspace::exists(dir));
  CHECK_THROWS_AS(
      workflow::Workspace::create(deterministic_config(dir, "g")),
      StateError);

  SUBCASE("fetch rejects non one-time URLs and unknown tokens") {
    CHECK_THROWS_AS(ws->fetch("https://edge.local/objects/abc"),
                    std::invalid_argument);
    CHECK_THROWS_AS(ws->fetch("https://edge.local/once/"),
                    std::invalid_argument);
    CHECK(!ws->fetch("https://edge.local/once/00112233445566778899aabbccddeeff"));
  }

  SUBCASE("wallet-level preconditions") {
    CHECK_THROWS_AS(ws->sign_attribute("ghost", "hospital", "x", "1"),
                    StateError);
    CHECK_THROWS_AS(ws->write_profile("ghost"), StateError);
    CHECK_THROWS_AS(ws->decrypt("ghost", Bytes{1, 2, 3}), StateError);
    CHECK_THROWS_AS(ws->extract_key("nobody", "annie", "x", "1"), StateError);
  }
}

TEST_CASE("seeded workspaces draw distinct randomness per invocation") {
  const fs::path dir = fresh_dir("invocations");
  std::string first, second;
  {
    auto ws = workflow::Workspace::create(deterministic_config(dir, "inv"));
    first = ws->rng().uuid_like();
  }
  {
    auto ws = workflow::Workspace::open(dir);
    second = ws->rng().uuid_like();
  }
  // Same seed, but the invocation counter moves the stream forward, so a
  // reopened workspace never re-issues the ids or tokens of the last run.
  CHECK(first != second);
}

TEST_CASE("length benchmark reports the requested shape") {
  const bls::PairingParams params = bls::setup(128);
  SeededRandom rng("bench-length-test");

  CHECK_THROWS_AS(workflow::bench_length(params, {10}, 29, rng),
                  std::invalid_argument);
  CHECK_THROWS_AS(workflow::bench_length(params, {0}, 30, rng),
                  std::invalid_argument);

  const workflow::BenchReport report =
      workflow::bench_length(params, {10}, 30, rng);
  CHECK(report.scenario == "vary_length");
  REQUIRE(report.points.size() == 1);
  CHECK(report.points[0].x == 10);
  CHECK(report.points[0].trials == 30);
  CHECK(report.points[0].sign_mean_ms > 0);
  CHECK(report.points[0].verify_mean_ms > 0);
  CHECK(report.points[0].sign_stddev_ms >= 0);
  CHECK(report.points[0].verify_stddev_ms >= 0);
  // Single point: flatness is exactly 1 and no fit is attempted.
  CHECK(report.sign_flatness == doctest::Approx(1.0));
  CHECK(report.verify_flatness == doctest::Approx(1.0));
  CHECK(!report.sign_r2);
  CHECK(!report.verify_r2);
}

TEST_CASE("count benchmark reports totals, means, and the linear fit") {
  const bls::PairingParams params = bls::setup(128);
  SeededRandom rng("bench-count-test");

  CHECK_THROWS_AS(workflow::bench_count(params, {1}, 10, rng),
                  std::invalid_argument);

  SUBCASE("degenerate single point skips the fit") {
    const workflow::BenchReport report =
        workflow::bench_count(params, {1}, 30, rng);
    REQUIRE(report.points.size() == 1);
    CHECK(!report.sign_r2);
    CHECK(!report.verify_r2);
    CHECK(report.points[0].total_sign_ms ==
          doctest::Approx(report.points[0].sign_mean_ms));
  }

  SUBCASE("two points produce totals, per-attribute means, and a fit") {
    const workflow::BenchReport report =
        workflow::bench_count(params, {1, 3}, 30, rng);
    REQUIRE(report.points.size() == 2);
    CHECK(report.points[1].x == 3);
    // Totals grow with the count; per-attribute means stay comparable.
    CHECK(report.points[1].total_sign_ms > report.points[0].total_sign_ms);
    CHECK(report.points[1].sign_mean_ms ==
          doctest::Approx(report.points[1].total_sign_ms / 3.0));
    REQUIRE(report.sign_r2);
    REQUIRE(report.verify_r2);
    CHECK(*report.sign_r2 <= 1.0);
    CHECK(*report.verify_r2 <= 1.0);
  }
}

TEST_CASE("least-squares fit quality") {
  using workflow::linear_fit_r2;
  CHECK_THROWS_AS(linear_fit_r2({}), std::invalid_argument);
  CHECK_THROWS_AS(linear_fit_r2({{1, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(linear_fit_r2({{1, 2}, {1, 3}}), std::invalid_argument);

  CHECK(linear_fit_r2({{1, 2}, {2, 4}, {3, 6}}) == doctest::Approx(1.0));
  CHECK(linear_fit_r2({{1, 5}, {2, 5}, {3, 5}}) == doctest::Approx(1.0));
  // Symmetric V shape: the best line is flat, explaining none of the
  // variance.
  CHECK(linear_fit_r2({{1, 1}, {2, 0}, {3, 1}}) == doctest::Approx(0.0));
}
