#include "ehr/edge_store.hpp"

#include <fstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "ehr/digest.hpp"
#include "ehr/errors.hpp"
#include "ehr/hex.hpp"
#include "ehr/maabe.hpp"

namespace ehr::edge {
namespace {

using Json = nlohmann::json;

constexpr char kJournalFile[] = "tokens.journal";
constexpr std::size_t kTokenBytes = 16;  // 128 bits of entropy

}  // namespace

EdgeStore::EdgeStore(StoreConfig config, Clock& clock, RandomSource& rng)
    : config_(std::move(config)),
      clock_(clock),
      rng_(rng),
      journal_path_(config_.dir / kJournalFile) {
  std::filesystem::create_directories(config_.dir / "objects");
  replay_journal();
}

std::filesystem::path EdgeStore::object_path(
    const std::string& object_id) const {
  return config_.dir / "objects" / object_id;
}

std::string EdgeStore::put_object(const std::string& owner_gid,
                                  BytesView ciphertext) {
  maabe::inspect_ciphertext(ciphertext);  // malformed containers stop here
  const std::string object_id = to_hex(sha256(ciphertext));
  std::lock_guard<std::mutex> lock(mutex_);
  const auto path = object_path(object_id);
  if (!std::filesystem::exists(path)) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw StateError("edge: cannot write object file");
    out.write(reinterpret_cast<const char*>(ciphertext.data()),
              static_cast<std::streamsize>(ciphertext.size()));
    out.flush();
    if (!out) throw StateError("edge: short object write");
    journal_append(Json{{"op", "object"},
                        {"id", object_id},
                        {"owner", owner_gid},
                        {"created_at", clock_.now_unix()}}
                       .dump());
  }
  return object_id;
}

bool EdgeStore::has_object(const std::string& object_id) const {
  return std::filesystem::exists(object_path(object_id));
}

Bytes EdgeStore::get_object(const std::string& object_id) const {
  std::ifstream in(object_path(object_id), std::ios::binary);
  if (!in) throw StateError("edge: unknown object");
  Bytes bytes((std::istreambuf_iterator<char>(in)),
              std::istreambuf_iterator<char>());
  return bytes;
}

std::pair<std::string, std::string> EdgeStore::issue(
    const std::string& object_id, std::int64_t ttl_seconds) {
  if (!has_object(object_id)) throw StateError("edge: unknown object");
  if (ttl_seconds <= 0) ttl_seconds = config_.default_ttl_seconds;
  std::lock_guard<std::mutex> lock(mutex_);
  std::string token;
  do {
    token = to_hex(rng_.bytes(kTokenBytes));
  } while (tokens_.count(token));
  TokenRecord record;
  record.object_id = object_id;
  record.expires_at = clock_.now_unix() + ttl_seconds;
  tokens_.emplace(token, record);
  journal_append(Json{{"op", "issue"},
                      {"token", token},
                      {"id", object_id},
                      {"expires_at", record.expires_at}}
                     .dump());
  return {token, config_.url_base + "/once/" + token};
}

std::optional<Bytes> EdgeStore::redeem(const std::string& token) {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = tokens_.find(token);
  if (it == tokens_.end()) return std::nullopt;
  TokenRecord& record = it->second;
  if (record.state != TokenState::kUnredeemed) return std::nullopt;
  if (record.expires_at < clock_.now_unix()) {
    record.state = TokenState::kExpired;
    journal_append(Json{{"op", "expire"}, {"token", token}}.dump());
    return std::nullopt;
  }
  // Compare-and-set under the lock: flip the state and make it durable
  // before a single ciphertext byte leaves the store.
  record.state = TokenState::kRedeemed;
  journal_append(Json{{"op", "redeem"}, {"token", token}}.dump());
  return get_object(record.object_id);
}

std::size_t EdgeStore::expire_sweep(std::int64_t now) {
  std::lock_guard<std::mutex> lock(mutex_);
  std::size_t expired = 0;
  for (auto& [token, record] : tokens_) {
    if (record.state == TokenState::kUnredeemed && record.expires_at < now) {
      record.state = TokenState::kExpired;
      journal_append(Json{{"op", "expire"}, {"token", token}}.dump());
      ++expired;
    }
  }
  return expired;
}

std::size_t EdgeStore::token_count() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return tokens_.size();
}

void EdgeStore::journal_append(const std::string& line) {
  std::ofstream out(journal_path_, std::ios::binary | std::ios::app);
  if (!out) throw StateError("edge: cannot append to journal");
  out.write(line.data(), static_cast<std::streamsize>(line.size()));
  out.put('\n');
  out.flush();
  if (!out) throw StateError("edge: short journal write");
}

void EdgeStore::replay_journal() {
  std::ifstream in(journal_path_, std::ios::binary);
  if (!in) return;  // fresh store
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Json j = Json::parse(line, nullptr, false);
    if (j.is_discarded()) throw StateError("edge: corrupt journal line");
    const std::string op = j.value("op", "");
    if (op == "object") continue;  // object files carry their own bytes
    if (op == "issue") {
      TokenRecord record;
      record.object_id = j.at("id").get<std::string>();
      record.expires_at = j.at("expires_at").get<std::int64_t>();
      tokens_[j.at("token").get<std::string>()] = record;
    } else if (op == "redeem") {
      tokens_.at(j.at("token").get<std::string>()).state =
          TokenState::kRedeemed;
    } else if (op == "expire") {
      tokens_.at(j.at("token").get<std::string>()).state =
          TokenState::kExpired;
    } else {
      throw StateError("edge: unknown journal op");
    }
  }
}

struct EdgeHttpFacade::Impl {
  Impl(EdgeStore& s, std::string gid) : store(s), owner_gid(std::move(gid)) {}
  EdgeStore& store;
  std::string owner_gid;
  httplib::Server server;
  std::thread thread;
  int port = 0;
};

EdgeHttpFacade::EdgeHttpFacade(EdgeStore& store, const std::string& owner_gid)
    : impl_(std::make_unique<Impl>(store, owner_gid)) {
  impl_->server.Put("/objects", [this](const httplib::Request& req,
                                       httplib::Response& res) {
    try {
      BytesView body(reinterpret_cast<const std::uint8_t*>(req.body.data()),
                     req.body.size());
      const std::string id = impl_->store.put_object(impl_->owner_gid, body);
      res.set_content(nlohmann::json{{"object_id", id}}.dump(),
                      "application/json");
    } catch (const std::exception& e) {
      res.status = 400;
      res.set_content(nlohmann::json{{"error", e.what()}}.dump(),
                      "application/json");
    }
  });
  impl_->server.Post("/tokens", [this](const httplib::Request& req,
                                       httplib::Response& res) {
    try {
      auto j = nlohmann::json::parse(req.body);
      auto [token, url] =
          impl_->store.issue(j.at("object_id").get<std::string>(),
                             j.value("ttl_seconds", std::int64_t(0)));
      res.set_content(nlohmann::json{{"token", token}, {"url", url}}.dump(),
                      "application/json");
    } catch (const std::exception& e) {
      res.status = 400;
      res.set_content(nlohmann::json{{"error", e.what()}}.dump(),
                      "application/json");
    }
  });
  impl_->server.Get("/once/:token", [this](const httplib::Request& req,
                                           httplib::Response& res) {
    auto bytes = impl_->store.redeem(req.path_params.at("token"));
    if (!bytes) {
      // Uniform response: used, expired, and unknown are identical.
      res.status = 410;
      res.set_content("gone", "text/plain");
      return;
    }
    res.set_content(std::string(bytes->begin(), bytes->end()),
                    "application/octet-stream");
  });
}

EdgeHttpFacade::~EdgeHttpFacade() { stop(); }

int EdgeHttpFacade::start() {
  impl_->port = impl_->server.bind_to_any_port("127.0.0.1");
  if (impl_->port <= 0) throw StateError("edge: cannot bind facade port");
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return impl_->port;
}

void EdgeHttpFacade::stop() {
  if (impl_->thread.joinable()) {
    impl_->server.stop();
    impl_->thread.join();
  }
}

}  // namespace ehr::edge
