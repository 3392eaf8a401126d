#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "ehr/abms.hpp"
#include "ehr/bls.hpp"
#include "ehr/clock.hpp"
#include "ehr/edge_store.hpp"
#include "ehr/ledger.hpp"
#include "ehr/maabe.hpp"
#include "ehr/rng.hpp"

// Orchestration layer: a persistent workspace tying the ledger, the edge
// store, authority key material, and holder wallets together, plus the
// scripted end-to-end scenario and the benchmark harness the CLI exposes.

namespace ehr::workflow {

inline constexpr int kSchemaVersion = 1;

struct WorkspaceConfig {
  std::filesystem::path data_dir;
  int curve_id = 1;
  std::int64_t default_ttl_seconds = 24 * 60 * 60;
  std::string url_base = "https://edge.local";
  std::string clock_mode = "real";  // "real" | "fixed"
  std::int64_t fixed_clock_start = 0;
  std::string rng_mode = "os";  // "os" | "seeded"
  std::string rng_seed;
};

class Workspace {
 public:
  // Initializes a fresh workspace; refuses directories that already hold
  // one. `open` requires an initialized workspace and optionally overrides
  // the stored clock/rng modes for this invocation.
  static std::unique_ptr<Workspace> create(const WorkspaceConfig& config);
  static std::unique_ptr<Workspace> open(
      const std::filesystem::path& data_dir,
      const std::optional<std::string>& seed_override = std::nullopt,
      std::optional<std::int64_t> fixed_clock_override = std::nullopt);
  static std::unique_ptr<Workspace> open_or_create(
      const WorkspaceConfig& config);
  static bool exists(const std::filesystem::path& data_dir);

  const WorkspaceConfig& config() const { return config_; }
  const bls::PairingParams& params() const { return params_; }
  ledger::Ledger& ledger() { return *ledger_; }
  edge::EdgeStore& edge() { return *edge_; }
  Clock& clock() { return *clock_; }
  RandomSource& rng() { return *rng_; }

  // -- identity and key flows (each call persists its effects) --
  std::string add_authority(
      const std::string& authority_id, const std::string& gid,
      const std::vector<std::pair<std::string, std::string>>& attributes);
  std::string register_patient(const std::string& gid,
                               const std::string& display_name);
  std::string register_provider(const std::string& gid,
                                const std::string& display_name,
                                const std::string& kind, int t, int n);
  void extract_key(const std::string& authority_id, const std::string& gid,
                   const std::string& name, const std::string& value);
  void issue_abe_key(const std::string& authority_id, const std::string& gid,
                     const std::string& name);
  void sign_attribute(const std::string& gid, const std::string& authority_id,
                      const std::string& name, const std::string& value);
  std::string write_profile(const std::string& gid);
  std::string grant_acl(const std::string& owner_gid,
                        const ledger::AclRule& rule);

  // -- EHR data path --
  Bytes encrypt(std::string_view policy_text, BytesView plaintext);
  std::pair<std::string, std::string> upload(const std::string& owner_gid,
                                             BytesView ciphertext);
  ledger::AccessOutcome request_access(const std::string& caller_gid,
                                       const std::string& owner_gid,
                                       std::int64_t ttl_seconds = 0);
  std::optional<Bytes> fetch(const std::string& url);
  Bytes decrypt(const std::string& gid, BytesView ciphertext);

  ledger::ChainStatus verify_chain() { return ledger_->verify_chain(); }

  // Wallet introspection for the CLI.
  std::vector<std::string> wallet_signature_labels(
      const std::string& gid) const;

 private:
  Workspace() = default;
  void load(const std::filesystem::path& data_dir);
  void persist_authority(const std::string& authority_id);
  void persist_wallet(const std::string& gid);
  void persist_pk_directory();

  struct Authority {
    std::unique_ptr<abms::AttributeAuthority> abms;
    std::unique_ptr<maabe::AbeAuthority> abe;
  };
  struct WalletSik {
    std::string value;
    bls::SecretKey key;
  };
  struct Wallet {
    // Both keyed by (authority_id, attribute name).
    std::map<std::pair<std::string, std::string>, WalletSik> siks;
    std::map<std::pair<std::string, std::string>, bls381::Fr> abe_keys;
    std::map<std::pair<std::string, std::string>, abms::AttributeSignature>
        signatures;
  };

  Authority& require_authority(const std::string& authority_id);
  Wallet& wallet(const std::string& gid);

  WorkspaceConfig config_;
  bls::PairingParams params_;
  std::unique_ptr<Clock> clock_;
  std::unique_ptr<RandomSource> rng_;
  std::unique_ptr<ledger::Ledger> ledger_;
  std::unique_ptr<edge::EdgeStore> edge_;
  maabe::PkDirectory pks_;
  std::map<std::string, Authority> authorities_;
  std::map<std::string, Wallet> wallets_;
};

// -- benchmark harness --

struct BenchPoint {
  int x = 0;  // attribute length or attribute count
  int trials = 0;
  double sign_mean_ms = 0;  // per attribute
  double sign_stddev_ms = 0;
  double verify_mean_ms = 0;  // per attribute
  double verify_stddev_ms = 0;
  double total_sign_ms = 0;  // mean per trial over all attributes
  double total_verify_ms = 0;
};

struct BenchReport {
  std::string scenario;  // "vary_length" | "vary_count"
  std::vector<BenchPoint> points;
  double sign_flatness = 0;  // max mean / min mean across points
  double verify_flatness = 0;
  std::optional<double> sign_r2;  // linear fit of total time vs count
  std::optional<double> verify_r2;
};

// Least-squares R² of y against x; requires at least two distinct x.
double linear_fit_r2(const std::vector<std::pair<double, double>>& xy);

BenchReport bench_length(const bls::PairingParams& params,
                         std::vector<int> lengths, int trials,
                         RandomSource& rng);
BenchReport bench_count(const bls::PairingParams& params,
                        std::vector<int> counts, int trials,
                        RandomSource& rng);

// -- scripted end-to-end scenario --

struct ScenarioResult {
  std::vector<std::string> event_ids;  // every ledger event, in order
  std::size_t ledger_height = 0;
  std::string lab_url;
  std::string research_url;
  std::size_t ehr_bytes = 0;
};

// Runs the full workflow against `config.data_dir` (created when missing):
// three authorities, Annie's registration/extraction/signing, profile
// write, ABE encryption and upload of a 1 MiB pseudo-random EHR, provider
// registrations, two granted access requests, both redemptions (plus a
// demonstrated second-redeem failure), decryption, and chain verification.
// Transcript lines go to `out`; failures carry a step label and rethrow.
ScenarioResult scenario_annie(const WorkspaceConfig& config, std::ostream& out);

}  // namespace ehr::workflow
