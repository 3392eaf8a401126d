#include "ehr/workflow.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "ehr/errors.hpp"
#include "ehr/hex.hpp"

namespace ehr::workflow {
namespace {

using Json = nlohmann::json;

constexpr char kConfigFile[] = "config.json";
constexpr char kPkDirectoryFile[] = "pk_directory.json";
constexpr char kInvocationFile[] = "invocations";

Json read_json_file(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StateError(std::string("workspace: missing ") + what);
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) {
    throw StateError(std::string("workspace: unparseable ") + what);
  }
  return j;
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw StateError("workspace: cannot write " + path.string());
  const std::string text = j.dump(2);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

Bytes hex_or_throw(const std::string& hex, const char* what) {
  auto bytes = from_hex(hex);
  if (!bytes) throw StateError(std::string("workspace: bad hex in ") + what);
  return *bytes;
}

bls381::Fr fr_from_hex(const std::string& hex, const char* what) {
  Bytes raw = hex_or_throw(hex, what);
  auto fr = bls381::Fr::from_bytes_be(raw);
  if (!fr) throw StateError(std::string("workspace: bad scalar in ") + what);
  return *fr;
}

std::string fr_to_hex(const bls381::Fr& fr) {
  auto raw = fr.to_bytes_be();
  return to_hex(BytesView(raw));
}

Sha256Digest digest_from_hex_str(const std::string& hex, const char* what) {
  Bytes raw = hex_or_throw(hex, what);
  if (raw.size() != 32) {
    throw StateError(std::string("workspace: bad digest in ") + what);
  }
  Sha256Digest out;
  std::copy(raw.begin(), raw.end(), out.begin());
  return out;
}

}  // namespace

bool Workspace::exists(const std::filesystem::path& data_dir) {
  return std::filesystem::exists(data_dir / kConfigFile);
}

std::unique_ptr<Workspace> Workspace::create(const WorkspaceConfig& config) {
  if (exists(config.data_dir)) {
    throw StateError("workspace: already initialized: " +
                     config.data_dir.string());
  }
  if (config.curve_id != 1) {
    throw std::invalid_argument("workspace: unsupported curve id");
  }
  if (config.clock_mode != "real" && config.clock_mode != "fixed") {
    throw std::invalid_argument("workspace: clock_mode must be real|fixed");
  }
  if (config.rng_mode != "os" && config.rng_mode != "seeded") {
    throw std::invalid_argument("workspace: rng_mode must be os|seeded");
  }
  std::filesystem::create_directories(config.data_dir / "authorities");
  std::filesystem::create_directories(config.data_dir / "wallets");
  write_json_file(config.data_dir / kConfigFile,
                  Json{{"schema", kSchemaVersion},
                       {"curve_id", config.curve_id},
                       {"default_ttl_seconds", config.default_ttl_seconds},
                       {"url_base", config.url_base},
                       {"clock_mode", config.clock_mode},
                       {"fixed_clock_start", config.fixed_clock_start},
                       {"rng_mode", config.rng_mode},
                       {"rng_seed", config.rng_seed}});
  auto ws = std::unique_ptr<Workspace>(new Workspace());
  ws->config_ = config;
  ws->load(config.data_dir);
  return ws;
}

std::unique_ptr<Workspace> Workspace::open(
    const std::filesystem::path& data_dir,
    const std::optional<std::string>& seed_override,
    std::optional<std::int64_t> fixed_clock_override) {
  Json j = read_json_file(data_dir / kConfigFile, "config");
  if (j.value("schema", 0) != kSchemaVersion) {
    throw StateError("workspace: unsupported config schema");
  }
  WorkspaceConfig config;
  config.data_dir = data_dir;
  config.curve_id = j.at("curve_id").get<int>();
  config.default_ttl_seconds = j.at("default_ttl_seconds").get<std::int64_t>();
  config.url_base = j.at("url_base").get<std::string>();
  config.clock_mode = j.at("clock_mode").get<std::string>();
  config.fixed_clock_start = j.at("fixed_clock_start").get<std::int64_t>();
  config.rng_mode = j.at("rng_mode").get<std::string>();
  config.rng_seed = j.at("rng_seed").get<std::string>();
  if (seed_override) {
    config.rng_mode = "seeded";
    config.rng_seed = *seed_override;
  }
  if (fixed_clock_override) {
    config.clock_mode = "fixed";
    config.fixed_clock_start = *fixed_clock_override;
  }
  auto ws = std::unique_ptr<Workspace>(new Workspace());
  ws->config_ = config;
  ws->load(data_dir);
  return ws;
}

std::unique_ptr<Workspace> Workspace::open_or_create(
    const WorkspaceConfig& config) {
  if (exists(config.data_dir)) {
    return open(config.data_dir,
                config.rng_mode == "seeded"
                    ? std::optional<std::string>(config.rng_seed)
                    : std::nullopt,
                config.clock_mode == "fixed"
                    ? std::optional<std::int64_t>(config.fixed_clock_start)
                    : std::nullopt);
  }
  return create(config);
}

void Workspace::load(const std::filesystem::path& data_dir) {
  params_ = bls::setup(128);

  if (config_.clock_mode == "fixed") {
    clock_ = std::make_unique<FixedClock>(config_.fixed_clock_start);
  } else {
    clock_ = std::make_unique<SystemClock>();
  }
  if (config_.rng_mode == "seeded") {
    // Each invocation continues from a distinct per-run seed so repeated
    // commands never replay the same token or event-id stream, while a
    // scripted sequence from a fresh workspace stays fully reproducible.
    std::uint64_t invocation = 0;
    {
      std::ifstream in(data_dir / kInvocationFile);
      if (in) in >> invocation;
    }
    {
      std::ofstream out(data_dir / kInvocationFile, std::ios::trunc);
      out << (invocation + 1);
    }
    rng_ = std::make_unique<SeededRandom>(config_.rng_seed + "#" +
                                          std::to_string(invocation));
  } else {
    rng_ = std::make_unique<OsRandom>();
  }

  ledger_ = std::make_unique<ledger::Ledger>(data_dir / "ledger", *clock_,
                                             *rng_, params_);
  edge_ = std::make_unique<edge::EdgeStore>(
      edge::StoreConfig{data_dir / "edge", config_.url_base,
                        config_.default_ttl_seconds},
      *clock_, *rng_);

  if (std::filesystem::exists(data_dir / kPkDirectoryFile)) {
    Json j = read_json_file(data_dir / kPkDirectoryFile, "pk directory");
    for (const Json& row : j.at("keys")) {
      Bytes raw = hex_or_throw(row.at("public_key").get<std::string>(),
                               "pk directory");
      auto pk = bls381::g1_from_compressed(raw);
      if (!pk) throw StateError("workspace: bad public key in pk directory");
      pks_.publish(row.at("authority_id").get<std::string>(),
                   row.at("name").get<std::string>(), *pk);
    }
  }

  for (const auto& entry :
       std::filesystem::directory_iterator(data_dir / "authorities")) {
    Json j = read_json_file(entry.path(), "authority file");
    const std::string id = j.at("id").get<std::string>();
    Authority authority;
    authority.abms = std::make_unique<abms::AttributeAuthority>(id, params_);
    authority.abe = std::make_unique<maabe::AbeAuthority>(id, params_);
    for (const Json& row : j.at("abms")) {
      abms::AuthorityAttributeKeys keys;
      keys.attribute = {id, row.at("name").get<std::string>(),
                        row.at("value").get<std::string>()};
      keys.signature_key = bls::decode_secret_key(hex_or_throw(
          row.at("signature_key").get<std::string>(), "authority file"));
      keys.verification_key = bls::decode_verification_key(hex_or_throw(
          row.at("verification_key").get<std::string>(), "authority file"));
      authority.abms->restore_attribute(keys);
    }
    for (const Json& row : j.at("abe")) {
      maabe::AbeAttributeKeys keys;
      keys.authority_id = id;
      keys.name = row.at("name").get<std::string>();
      keys.master_secret = fr_from_hex(
          row.at("master_secret").get<std::string>(), "authority file");
      Bytes raw = hex_or_throw(row.at("public_key").get<std::string>(),
                               "authority file");
      auto pk = bls381::g1_from_compressed(raw);
      if (!pk) throw StateError("workspace: bad abe public key");
      keys.public_key = *pk;
      authority.abe->restore_attribute(keys);
    }
    authorities_.emplace(id, std::move(authority));
  }

  for (const auto& entry :
       std::filesystem::directory_iterator(data_dir / "wallets")) {
    Json j = read_json_file(entry.path(), "wallet file");
    const std::string gid = j.at("gid").get<std::string>();
    Wallet wallet;
    for (const Json& row : j.at("siks")) {
      WalletSik sik;
      sik.value = row.at("value").get<std::string>();
      sik.key = bls::decode_secret_key(
          hex_or_throw(row.at("key").get<std::string>(), "wallet file"));
      wallet.siks.emplace(
          std::make_pair(row.at("authority_id").get<std::string>(),
                         row.at("name").get<std::string>()),
          std::move(sik));
    }
    for (const Json& row : j.at("abe_keys")) {
      wallet.abe_keys.emplace(
          std::make_pair(row.at("authority_id").get<std::string>(),
                         row.at("name").get<std::string>()),
          fr_from_hex(row.at("key").get<std::string>(), "wallet file"));
    }
    for (const Json& row : j.at("signatures")) {
      abms::AttributeSignature sig;
      sig.authority_id = row.at("authority_id").get<std::string>();
      sig.attribute_name = row.at("name").get<std::string>();
      sig.hashed_value_digest = digest_from_hex_str(
          row.at("digest").get<std::string>(), "wallet file");
      sig.signature = bls::decode_signature(
          hex_or_throw(row.at("signature").get<std::string>(), "wallet file"));
      wallet.signatures.emplace(
          std::make_pair(sig.authority_id, sig.attribute_name),
          std::move(sig));
    }
    wallets_.emplace(gid, std::move(wallet));
  }
}

Workspace::Authority& Workspace::require_authority(
    const std::string& authority_id) {
  auto it = authorities_.find(authority_id);
  if (it == authorities_.end()) {
    throw StateError("workspace: unknown authority: " + authority_id);
  }
  return it->second;
}

Workspace::Wallet& Workspace::wallet(const std::string& gid) {
  return wallets_[gid];
}

void Workspace::persist_authority(const std::string& authority_id) {
  const Authority& authority = authorities_.at(authority_id);
  Json abms_rows = Json::array();
  for (const auto& attr : authority.abms->attributes()) {
    const auto& keys = authority.abms->keys_for(attr);
    abms_rows.push_back(Json{
        {"name", attr.name},
        {"value", attr.value},
        {"signature_key", to_hex(bls::encode_secret_key(keys.signature_key))},
        {"verification_key",
         to_hex(bls::encode_verification_key(keys.verification_key))}});
  }
  Json abe_rows = Json::array();
  for (const auto& name : authority.abe->attribute_names()) {
    const auto& keys = authority.abe->keys_for(name);
    auto pk = bls381::g1_to_compressed(keys.public_key);
    abe_rows.push_back(Json{{"name", name},
                            {"master_secret", fr_to_hex(keys.master_secret)},
                            {"public_key", to_hex(BytesView(pk))}});
  }
  write_json_file(config_.data_dir / "authorities" / (authority_id + ".json"),
                  Json{{"schema", kSchemaVersion},
                       {"id", authority_id},
                       {"abms", std::move(abms_rows)},
                       {"abe", std::move(abe_rows)}});
}

void Workspace::persist_wallet(const std::string& gid) {
  const Wallet& w = wallets_.at(gid);
  Json siks = Json::array();
  for (const auto& [key, sik] : w.siks) {
    siks.push_back(Json{{"authority_id", key.first},
                        {"name", key.second},
                        {"value", sik.value},
                        {"key", to_hex(bls::encode_secret_key(sik.key))}});
  }
  Json abe_keys = Json::array();
  for (const auto& [key, fr] : w.abe_keys) {
    abe_keys.push_back(Json{{"authority_id", key.first},
                            {"name", key.second},
                            {"key", fr_to_hex(fr)}});
  }
  Json signatures = Json::array();
  for (const auto& [key, sig] : w.signatures) {
    signatures.push_back(
        Json{{"authority_id", key.first},
             {"name", key.second},
             {"digest", to_hex(sig.hashed_value_digest)},
             {"signature", to_hex(bls::encode_signature(sig.signature))}});
  }
  write_json_file(config_.data_dir / "wallets" / (gid + ".json"),
                  Json{{"schema", kSchemaVersion},
                       {"gid", gid},
                       {"siks", std::move(siks)},
                       {"abe_keys", std::move(abe_keys)},
                       {"signatures", std::move(signatures)}});
}

void Workspace::persist_pk_directory() {
  Json keys = Json::array();
  for (const auto& [id, authority] : authorities_) {
    for (const auto& name : authority.abe->attribute_names()) {
      auto pk = bls381::g1_to_compressed(authority.abe->keys_for(name).public_key);
      keys.push_back(Json{{"authority_id", id},
                          {"name", name},
                          {"public_key", to_hex(BytesView(pk))}});
    }
  }
  write_json_file(config_.data_dir / kPkDirectoryFile,
                  Json{{"schema", kSchemaVersion}, {"keys", std::move(keys)}});
}

std::string Workspace::add_authority(
    const std::string& authority_id, const std::string& gid,
    const std::vector<std::pair<std::string, std::string>>& attributes) {
  if (authorities_.count(authority_id)) {
    throw StateError("workspace: authority already exists: " + authority_id);
  }
  if (attributes.empty()) {
    throw std::invalid_argument("workspace: authority needs attributes");
  }
  Authority authority;
  authority.abms =
      std::make_unique<abms::AttributeAuthority>(authority_id, params_);
  authority.abe = std::make_unique<maabe::AbeAuthority>(authority_id, params_);

  ledger::Participant participant;
  participant.gid = gid;
  participant.display_name = authority_id;
  participant.role = ledger::Role::kAuthority;
  for (const auto& [name, value] : attributes) {
    const auto& keys = authority.abms->register_attribute(
        {authority_id, name, value}, *rng_);
    authority.abe->register_attribute(name, *rng_);
    pks_.publish(authority_id, name,
                 authority.abe->keys_for(name).public_key);
    participant.registry_rows.push_back(
        {authority_id, name,
         to_hex(bls::encode_verification_key(keys.verification_key))});
  }
  const std::string event = ledger_->register_participant(participant);
  authorities_.emplace(authority_id, std::move(authority));
  persist_authority(authority_id);
  persist_pk_directory();
  return event;
}

std::string Workspace::register_patient(const std::string& gid,
                                        const std::string& display_name) {
  return ledger_->register_participant(
      {gid, display_name, ledger::Role::kPatient, "", {}, {}});
}

std::string Workspace::register_provider(const std::string& gid,
                                         const std::string& display_name,
                                         const std::string& kind, int t,
                                         int n) {
  return ledger_->register_participant(
      {gid, display_name, ledger::Role::kProvider, kind, {t, n}, {}});
}

void Workspace::extract_key(const std::string& authority_id,
                            const std::string& gid, const std::string& name,
                            const std::string& value) {
  Authority& authority = require_authority(authority_id);
  authority.abms->admit_holder(gid);
  abms::ExtractedSigningKey key =
      authority.abms->extract(gid, {authority_id, name, value}, *clock_);
  wallet(gid).siks[{authority_id, name}] = {value, key.signing_key};
  persist_wallet(gid);
}

void Workspace::issue_abe_key(const std::string& authority_id,
                              const std::string& gid,
                              const std::string& name) {
  Authority& authority = require_authority(authority_id);
  authority.abe->admit_holder(gid);
  maabe::AbeUserKey key = authority.abe->issue_key(gid, name);
  wallet(gid).abe_keys[{authority_id, name}] = key.key_material;
  persist_wallet(gid);
}

void Workspace::sign_attribute(const std::string& gid,
                               const std::string& authority_id,
                               const std::string& name,
                               const std::string& value) {
  auto wallet_it = wallets_.find(gid);
  if (wallet_it == wallets_.end() ||
      !wallet_it->second.siks.count({authority_id, name})) {
    throw StateError("workspace: no signing key in wallet for " +
                     authority_id + "/" + name);
  }
  const WalletSik& sik = wallet_it->second.siks.at({authority_id, name});
  abms::ExtractedSigningKey key;
  key.attribute = {authority_id, name, sik.value};
  key.gid = gid;
  key.signing_key = sik.key;
  abms::AttributeSignature sig = abms::sign_attribute(params_, key, value);
  wallet_it->second.signatures[{authority_id, name}] = sig;
  persist_wallet(gid);
}

std::string Workspace::write_profile(const std::string& gid) {
  auto wallet_it = wallets_.find(gid);
  if (wallet_it == wallets_.end() || wallet_it->second.signatures.empty()) {
    throw StateError("workspace: wallet holds no signatures for " + gid);
  }
  std::vector<abms::AttributeSignature> sigs;
  for (const auto& [key, sig] : wallet_it->second.signatures) {
    sigs.push_back(sig);
  }
  return ledger_->write_profile(gid, sigs);
}

std::string Workspace::grant_acl(const std::string& owner_gid,
                                 const ledger::AclRule& rule) {
  return ledger_->set_acl(owner_gid, {rule});
}

Bytes Workspace::encrypt(std::string_view policy_text, BytesView plaintext) {
  return maabe::abe_encrypt(params_, pks_, policy_text, plaintext, *rng_);
}

std::pair<std::string, std::string> Workspace::upload(
    const std::string& owner_gid, BytesView ciphertext) {
  const std::string object_id = edge_->put_object(owner_gid, ciphertext);
  const std::string event = ledger_->attach_ehr(owner_gid, object_id);
  return {object_id, event};
}

ledger::AccessOutcome Workspace::request_access(const std::string& caller_gid,
                                                const std::string& owner_gid,
                                                std::int64_t ttl_seconds) {
  if (ttl_seconds <= 0) ttl_seconds = config_.default_ttl_seconds;
  return ledger_->request_access(caller_gid, owner_gid, *edge_, ttl_seconds);
}

std::optional<Bytes> Workspace::fetch(const std::string& url) {
  const std::string marker = "/once/";
  const auto at = url.rfind(marker);
  if (at == std::string::npos || at + marker.size() == url.size()) {
    throw std::invalid_argument("workspace: not a one-time URL");
  }
  return edge_->redeem(url.substr(at + marker.size()));
}

Bytes Workspace::decrypt(const std::string& gid, BytesView ciphertext) {
  auto wallet_it = wallets_.find(gid);
  if (wallet_it == wallets_.end() || wallet_it->second.abe_keys.empty()) {
    throw StateError("workspace: wallet holds no decryption keys for " + gid);
  }
  std::vector<maabe::AbeUserKey> keys;
  for (const auto& [label, fr] : wallet_it->second.abe_keys) {
    keys.push_back({label.first, label.second, gid, fr});
  }
  return maabe::abe_decrypt(params_, ciphertext, keys);
}

std::vector<std::string> Workspace::wallet_signature_labels(
    const std::string& gid) const {
  std::vector<std::string> labels;
  auto it = wallets_.find(gid);
  if (it == wallets_.end()) return labels;
  for (const auto& [key, sig] : it->second.signatures) {
    labels.push_back(key.second + "@" + key.first);
  }
  return labels;
}

// ---- benchmark harness ----

namespace {

struct Stats {
  double mean = 0;
  double stddev = 0;
};

Stats stats_of(const std::vector<double>& xs) {
  Stats s;
  if (xs.empty()) return s;
  double sum = 0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double acc = 0;
    for (double x : xs) acc += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(acc / static_cast<double>(xs.size() - 1));
  }
  return s;
}

std::string random_value(RandomSource& rng, int length) {
  Bytes raw = rng.bytes(static_cast<std::size_t>((length + 1) / 2));
  std::string hex = to_hex(raw);
  hex.resize(static_cast<std::size_t>(length));
  return hex;
}

double flatness_of(const std::vector<BenchPoint>& points, bool verify) {
  double lo = 0, hi = 0;
  for (const BenchPoint& p : points) {
    const double v = verify ? p.verify_mean_ms : p.sign_mean_ms;
    if (lo == 0 || v < lo) lo = v;
    if (v > hi) hi = v;
  }
  return lo > 0 ? hi / lo : 0;
}

using Millis = std::chrono::duration<double, std::milli>;

}  // namespace

double linear_fit_r2(const std::vector<std::pair<double, double>>& xy) {
  if (xy.size() < 2) {
    throw std::invalid_argument("fit needs at least two points");
  }
  double mx = 0, my = 0;
  for (const auto& [x, y] : xy) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(xy.size());
  my /= static_cast<double>(xy.size());
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& [x, y] : xy) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (sxx == 0) throw std::invalid_argument("fit needs distinct x values");
  if (syy == 0) return 1.0;  // perfectly flat data is perfectly linear
  const double b = sxy / sxx;
  const double a = my - b * mx;
  double ss_res = 0;
  for (const auto& [x, y] : xy) {
    const double r = y - (a + b * x);
    ss_res += r * r;
  }
  return 1.0 - ss_res / syy;
}

BenchReport bench_length(const bls::PairingParams& params,
                         std::vector<int> lengths, int trials,
                         RandomSource& rng) {
  if (lengths.empty()) lengths = {10, 100, 1000, 10000};
  if (trials < 30) {
    throw std::invalid_argument("bench: trials must be at least 30");
  }
  BenchReport report;
  report.scenario = "vary_length";
  for (int length : lengths) {
    if (length <= 0) throw std::invalid_argument("bench: bad length");
    bls::BlsKeyPair pair = bls::keygen(params, rng);
    std::vector<double> sign_ms, verify_ms;
    for (int t = 0; t < trials; ++t) {
      const std::string value = random_value(rng, length);
      const Bytes message = to_bytes(value);
      auto t0 = std::chrono::steady_clock::now();
      bls::GroupSignature sig = bls::bls_sign(params, pair.sk, message);
      auto t1 = std::chrono::steady_clock::now();
      bls::VerifyResult ok = bls::bls_verify(params, pair.vk, message, sig);
      auto t2 = std::chrono::steady_clock::now();
      if (ok != bls::VerifyResult::kAccept) {
        throw CryptoError("bench: verification unexpectedly failed");
      }
      sign_ms.push_back(Millis(t1 - t0).count());
      verify_ms.push_back(Millis(t2 - t1).count());
    }
    const Stats sign = stats_of(sign_ms);
    const Stats verify = stats_of(verify_ms);
    report.points.push_back({length, trials, sign.mean, sign.stddev,
                             verify.mean, verify.stddev, sign.mean,
                             verify.mean});
  }
  report.sign_flatness = flatness_of(report.points, false);
  report.verify_flatness = flatness_of(report.points, true);
  return report;
}

BenchReport bench_count(const bls::PairingParams& params,
                        std::vector<int> counts, int trials,
                        RandomSource& rng) {
  if (counts.empty()) counts = {1, 3, 5, 7, 9};
  if (trials < 30) {
    throw std::invalid_argument("bench: trials must be at least 30");
  }
  BenchReport report;
  report.scenario = "vary_count";
  for (int count : counts) {
    if (count <= 0) throw std::invalid_argument("bench: bad count");
    std::vector<bls::BlsKeyPair> pairs;
    for (int i = 0; i < count; ++i) pairs.push_back(bls::keygen(params, rng));
    std::vector<double> total_sign_ms, total_verify_ms;
    for (int t = 0; t < trials; ++t) {
      std::vector<Bytes> messages;
      for (int i = 0; i < count; ++i) {
        messages.push_back(to_bytes(random_value(rng, 16)));
      }
      std::vector<bls::GroupSignature> sigs;
      sigs.reserve(static_cast<std::size_t>(count));
      auto t0 = std::chrono::steady_clock::now();
      for (int i = 0; i < count; ++i) {
        sigs.push_back(bls::bls_sign(params, pairs[static_cast<std::size_t>(i)].sk,
                                     messages[static_cast<std::size_t>(i)]));
      }
      auto t1 = std::chrono::steady_clock::now();
      for (int i = 0; i < count; ++i) {
        if (bls::bls_verify(params, pairs[static_cast<std::size_t>(i)].vk,
                            messages[static_cast<std::size_t>(i)],
                            sigs[static_cast<std::size_t>(i)]) !=
            bls::VerifyResult::kAccept) {
          throw CryptoError("bench: verification unexpectedly failed");
        }
      }
      auto t2 = std::chrono::steady_clock::now();
      total_sign_ms.push_back(Millis(t1 - t0).count());
      total_verify_ms.push_back(Millis(t2 - t1).count());
    }
    const Stats sign = stats_of(total_sign_ms);
    const Stats verify = stats_of(total_verify_ms);
    const double c = static_cast<double>(count);
    report.points.push_back({count, trials, sign.mean / c, sign.stddev / c,
                             verify.mean / c, verify.stddev / c, sign.mean,
                             verify.mean});
  }
  report.sign_flatness = flatness_of(report.points, false);
  report.verify_flatness = flatness_of(report.points, true);
  if (report.points.size() >= 2) {
    std::vector<std::pair<double, double>> sign_xy, verify_xy;
    for (const BenchPoint& p : report.points) {
      sign_xy.emplace_back(p.x, p.total_sign_ms);
      verify_xy.emplace_back(p.x, p.total_verify_ms);
    }
    report.sign_r2 = linear_fit_r2(sign_xy);
    report.verify_r2 = linear_fit_r2(verify_xy);
  }
  return report;
}

// ---- scripted end-to-end scenario ----

ScenarioResult scenario_annie(const WorkspaceConfig& config,
                              std::ostream& out) {
  ScenarioResult result;
  std::unique_ptr<Workspace> ws;
  auto step = [&](const std::string& label, auto&& fn) {
    try {
      fn();
      out << "step ok: " << label << "\n";
    } catch (const std::exception& e) {
      out << "step FAILED: " << label << ": " << e.what() << "\n";
      throw;
    }
  };

  const std::string annie = "annie-foster-gid";
  const std::string lab = "lab-scientist-gid";
  const std::string research = "research-scientist-gid";
  const std::string policy =
      "employee-id@hospital AND drivers-license@dmv AND "
      "policy-number@insurer";

  step("workspace", [&] { ws = Workspace::open_or_create(config); });

  step("authority hospital", [&] {
    ws->add_authority("hospital", "hospital-root-gid",
                      {{"employee-id", "0003231"}});
  });
  step("authority dmv", [&] {
    ws->add_authority("dmv", "dmv-root-gid", {{"drivers-license", "9907184"}});
  });
  step("authority insurer", [&] {
    ws->add_authority("insurer", "insurer-root-gid",
                      {{"policy-number", "552761"}});
  });

  step("patient register annie",
       [&] { ws->register_patient(annie, "Annie Foster"); });

  step("keys extract x3", [&] {
    ws->extract_key("hospital", annie, "employee-id", "0003231");
    ws->extract_key("dmv", annie, "drivers-license", "9907184");
    ws->extract_key("insurer", annie, "policy-number", "552761");
  });

  step("sign x3", [&] {
    ws->sign_attribute(annie, "hospital", "employee-id", "0003231");
    ws->sign_attribute(annie, "dmv", "drivers-license", "9907184");
    ws->sign_attribute(annie, "insurer", "policy-number", "552761");
  });

  step("profile write", [&] { ws->write_profile(annie); });

  Bytes payload;
  step("ehr sample file", [&] {
    payload = ws->rng().bytes(1 << 20);  // 1 MiB stand-in for imaging data
    std::ofstream f(config.data_dir / "sample_ehr.bin",
                    std::ios::binary | std::ios::trunc);
    f.write(reinterpret_cast<const char*>(payload.data()),
            static_cast<std::streamsize>(payload.size()));
    result.ehr_bytes = payload.size();
  });

  Bytes ciphertext;
  step("ehr encrypt", [&] { ciphertext = ws->encrypt(policy, payload); });
  step("ehr upload", [&] { ws->upload(annie, ciphertext); });

  step("provider register lab", [&] {
    ws->register_provider(lab, "Laboratory Scientist", "laboratory-scientist",
                          3, 3);
  });
  step("provider register research", [&] {
    ws->register_provider(research, "Research Scientist", "research-scientist",
                          1, 3);
  });

  step("keys abe-issue x6", [&] {
    for (const std::string& gid : {lab, research}) {
      ws->issue_abe_key("hospital", gid, "employee-id");
      ws->issue_abe_key("dmv", gid, "drivers-license");
      ws->issue_abe_key("insurer", gid, "policy-number");
    }
  });

  step("acl grant", [&] {
    ws->grant_acl(annie, {ledger::AclRule::Kind::kGid, lab, "request_access"});
    ws->grant_acl(annie,
                  {ledger::AclRule::Kind::kGid, research, "request_access"});
  });

  step("access request lab", [&] {
    ledger::AccessOutcome outcome = ws->request_access(lab, annie);
    if (!outcome.granted) {
      throw DeniedError("threshold verification rejected the lab scientist");
    }
    result.lab_url = outcome.url;
    out << "  lab url: " << outcome.url << "\n";
  });
  step("access request research", [&] {
    ledger::AccessOutcome outcome = ws->request_access(research, annie);
    if (!outcome.granted) {
      throw DeniedError(
          "threshold verification rejected the research scientist");
    }
    result.research_url = outcome.url;
    out << "  research url: " << outcome.url << "\n";
  });

  Bytes fetched_lab, fetched_research;
  step("redeem lab url", [&] {
    auto bytes = ws->fetch(result.lab_url);
    if (!bytes) throw StateError("fresh one-time URL reported gone");
    fetched_lab = std::move(*bytes);
  });
  step("redeem lab url again (must be gone)", [&] {
    if (ws->fetch(result.lab_url)) {
      throw StateError("one-time URL redeemed twice");
    }
    out << "  second redemption: gone\n";
  });
  step("redeem research url", [&] {
    auto bytes = ws->fetch(result.research_url);
    if (!bytes) throw StateError("fresh one-time URL reported gone");
    fetched_research = std::move(*bytes);
  });

  step("decrypt lab", [&] {
    if (ws->decrypt(lab, fetched_lab) != payload) {
      throw CryptoError("decrypted payload differs from the original");
    }
  });
  step("decrypt research", [&] {
    if (ws->decrypt(research, fetched_research) != payload) {
      throw CryptoError("decrypted payload differs from the original");
    }
  });

  step("ledger verify", [&] {
    ledger::ChainStatus status = ws->verify_chain();
    if (!status.ok) {
      throw CryptoError("chain broken at seq " +
                        std::to_string(status.break_seq));
    }
  });

  for (const auto& tx : ws->ledger().transactions()) {
    out << "event " << tx.seq << " " << ledger::kind_name(tx.kind) << " "
        << tx.event_id << "\n";
    result.event_ids.push_back(tx.event_id);
  }
  result.ledger_height = ws->ledger().transactions().size();
  return result;
}

}  // namespace ehr::workflow
