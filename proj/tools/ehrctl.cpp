// ehrctl: command-line front end for the EHR sharing toolkit. Drives the
// workspace layer (ledger + edge store + authority/wallet key material) and
// the benchmark harness. Every failure path maps to a documented exit code:
//
//   0  success
//   1  unexpected internal error
//   2  usage error
//   3  state error (uninitialized/duplicate/missing state)
//   4  denied (ACL, threshold verification, or policy not satisfied)
//   5  parse error (malformed input)
//   6  integrity failure (broken chain, payload authentication)
//   7  one-time URL already consumed or expired

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ehr/errors.hpp"
#include "ehr/hex.hpp"
#include "ehr/workflow.hpp"

namespace {

using Json = nlohmann::json;
using namespace ehr;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitState = 3;
constexpr int kExitDenied = 4;
constexpr int kExitParse = 5;
constexpr int kExitIntegrity = 6;
constexpr int kExitGone = 7;

constexpr char kMachineSchema[] = "ehrctl/1";

struct GlobalOpts {
  std::string data_dir;
  std::optional<std::string> seed;
  std::optional<std::int64_t> fixed_clock;
  std::string format = "table";

  bool machine() const { return format == "machine"; }
};

// One output record: a human line in table mode, a schema-tagged JSON line
// in machine mode.
void emit(const GlobalOpts& g, const std::string& record, Json fields,
          const std::string& table_line) {
  if (g.machine()) {
    fields["schema"] = kMachineSchema;
    fields["record"] = record;
    std::cout << fields.dump() << "\n";
  } else {
    std::cout << table_line << "\n";
  }
}

workflow::WorkspaceConfig config_from(const GlobalOpts& g) {
  workflow::WorkspaceConfig config;
  config.data_dir = g.data_dir;
  if (g.fixed_clock) {
    config.clock_mode = "fixed";
    config.fixed_clock_start = *g.fixed_clock;
  }
  if (g.seed) {
    config.rng_mode = "seeded";
    config.rng_seed = *g.seed;
  }
  return config;
}

std::unique_ptr<workflow::Workspace> open_ws(const GlobalOpts& g) {
  return workflow::Workspace::open(g.data_dir, g.seed, g.fixed_clock);
}

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StateError("cannot read " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in),
               std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, BytesView bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw StateError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

Json bench_json(const workflow::BenchReport& report) {
  Json points = Json::array();
  for (const auto& p : report.points) {
    points.push_back(Json{{"x", p.x},
                          {"trials", p.trials},
                          {"sign_mean_ms", p.sign_mean_ms},
                          {"sign_stddev_ms", p.sign_stddev_ms},
                          {"verify_mean_ms", p.verify_mean_ms},
                          {"verify_stddev_ms", p.verify_stddev_ms},
                          {"total_sign_ms", p.total_sign_ms},
                          {"total_verify_ms", p.total_verify_ms}});
  }
  Json j{{"scenario", report.scenario},
         {"points", std::move(points)},
         {"sign_flatness", report.sign_flatness},
         {"verify_flatness", report.verify_flatness}};
  if (report.sign_r2) j["sign_r2"] = *report.sign_r2;
  if (report.verify_r2) j["verify_r2"] = *report.verify_r2;
  return j;
}

void print_bench(const GlobalOpts& g, const workflow::BenchReport& report,
                 const std::string& x_label,
                 const std::filesystem::path& out_path) {
  // The machine-readable file is always written; stdout follows --format.
  {
    std::ofstream out(out_path, std::ios::trunc);
    Json j = bench_json(report);
    j["schema"] = kMachineSchema;
    j["record"] = "bench_report";
    out << j.dump() << "\n";
  }
  if (g.machine()) {
    emit(g, "bench_report", bench_json(report), "");
    return;
  }
  std::cout << "scenario: " << report.scenario << "\n";
  std::printf("%10s %8s %14s %16s %14s %16s\n", x_label.c_str(), "trials",
              "sign mean ms", "sign stddev ms", "verify mean ms",
              "verify stddev ms");
  for (const auto& p : report.points) {
    std::printf("%10d %8d %14.3f %16.3f %14.3f %16.3f\n", p.x, p.trials,
                p.sign_mean_ms, p.sign_stddev_ms, p.verify_mean_ms,
                p.verify_stddev_ms);
  }
  std::printf("flatness (max/min mean): sign %.3f  verify %.3f\n",
              report.sign_flatness, report.verify_flatness);
  if (report.sign_r2 && report.verify_r2) {
    std::printf("linear fit R^2 (total vs %s): sign %.4f  verify %.4f\n",
                x_label.c_str(), *report.sign_r2, *report.verify_r2);
  }
  std::cout << "machine report: " << out_path.string() << "\n";
}

int run(int argc, char** argv) {
  CLI::App app{"EHR sharing toolkit: attribute-based multi-signatures, "
               "multi-authority ABE, tamper-evident ledger, one-time URLs"};
  app.require_subcommand(1);

  GlobalOpts g;
  const char* env_dir = std::getenv("EHRCTL_DATA_DIR");
  g.data_dir = env_dir ? env_dir : "ehr-workspace";
  app.add_option("--data-dir", g.data_dir,
                 "Workspace directory (env: EHRCTL_DATA_DIR)")
      ->capture_default_str();
  std::string seed_opt, format_opt = "table";
  std::int64_t fixed_clock_opt = 0;
  auto* seed_flag =
      app.add_option("--seed", seed_opt, "Deterministic RNG seed");
  auto* clock_flag = app.add_option("--fixed-clock", fixed_clock_opt,
                                    "Deterministic clock start (unix seconds)");
  app.add_option("--format", format_opt, "Output format")
      ->check(CLI::IsMember({"table", "machine"}))
      ->capture_default_str();

  std::function<int()> action;

  // ---- setup ----
  auto* setup = app.add_subcommand("setup", "Initialize a fresh workspace");
  {
    auto ttl = std::make_shared<std::int64_t>(24 * 60 * 60);
    auto url_base = std::make_shared<std::string>("https://edge.local");
    setup->add_option("--ttl", *ttl, "Default token lifetime in seconds")
        ->capture_default_str();
    setup->add_option("--url-base", *url_base, "Base of issued one-time URLs")
        ->capture_default_str();
    setup->callback([&, ttl, url_base] {
      action = [&, ttl, url_base] {
        workflow::WorkspaceConfig config = config_from(g);
        config.default_ttl_seconds = *ttl;
        config.url_base = *url_base;
        workflow::Workspace::create(config);
        emit(g, "setup", {{"data_dir", g.data_dir}},
             "workspace initialized at " + g.data_dir);
        return kExitOk;
      };
    });
  }

  // ---- authority add ----
  auto* authority = app.add_subcommand("authority", "Attribute authorities");
  authority->require_subcommand(1);
  {
    auto* add = authority->add_subcommand(
        "add", "Register an authority and its attested attributes");
    auto id = std::make_shared<std::string>();
    auto gid = std::make_shared<std::string>();
    auto attrs = std::make_shared<std::vector<std::string>>();
    add->add_option("--id", *id, "Authority identifier")->required();
    add->add_option("--gid", *gid, "Authority operator gid")->required();
    add->add_option("--attr", *attrs,
                    "Attested attribute as name=value (repeatable)")
        ->required();
    add->callback([&, id, gid, attrs] {
      action = [&, id, gid, attrs] {
        std::vector<std::pair<std::string, std::string>> pairs;
        for (const std::string& a : *attrs) {
          const auto eq = a.find('=');
          if (eq == std::string::npos || eq == 0) {
            throw ParseError("--attr expects name=value, got: " + a);
          }
          pairs.emplace_back(a.substr(0, eq), a.substr(eq + 1));
        }
        auto ws = open_ws(g);
        const std::string event = ws->add_authority(*id, *gid, pairs);
        emit(g, "authority_add",
             {{"authority_id", *id}, {"event_id", event}},
             "authority " + *id + " registered, event " + event);
        return kExitOk;
      };
    });
  }

  // ---- patient register ----
  auto* patient = app.add_subcommand("patient", "Patients");
  patient->require_subcommand(1);
  {
    auto* reg = patient->add_subcommand("register", "Register a patient");
    auto gid = std::make_shared<std::string>();
    auto name = std::make_shared<std::string>();
    reg->add_option("--gid", *gid, "Patient gid")->required();
    reg->add_option("--name", *name, "Display name")->required();
    reg->callback([&, gid, name] {
      action = [&, gid, name] {
        auto ws = open_ws(g);
        const std::string event = ws->register_patient(*gid, *name);
        emit(g, "patient_register", {{"event_id", event}},
             "patient registered, event " + event);
        return kExitOk;
      };
    });
  }

  // ---- provider register ----
  auto* provider = app.add_subcommand("provider", "Care providers");
  provider->require_subcommand(1);
  {
    auto* reg = provider->add_subcommand(
        "register", "Register a provider with its (t, n) policy");
    auto gid = std::make_shared<std::string>();
    auto name = std::make_shared<std::string>();
    auto kind = std::make_shared<std::string>();
    auto t = std::make_shared<int>(0);
    auto n = std::make_shared<int>(0);
    reg->add_option("--gid", *gid, "Provider gid")->required();
    reg->add_option("--name", *name, "Display name")->required();
    reg->add_option("--kind", *kind, "Provider kind, e.g. doctor")->required();
    reg->add_option("-t,--threshold", *t, "Required valid signatures")
        ->required();
    reg->add_option("-n,--total", *n, "Signatures evaluated")->required();
    reg->callback([&, gid, name, kind, t, n] {
      action = [&, gid, name, kind, t, n] {
        auto ws = open_ws(g);
        const std::string event =
            ws->register_provider(*gid, *name, *kind, *t, *n);
        emit(g, "provider_register", {{"event_id", event}},
             "provider registered, event " + event);
        return kExitOk;
      };
    });
  }

  // ---- keys extract / abe-issue ----
  auto* keys = app.add_subcommand("keys", "Key issuance");
  keys->require_subcommand(1);
  {
    auto* extract = keys->add_subcommand(
        "extract", "Extract an attribute signing key into a wallet");
    auto authority = std::make_shared<std::string>();
    auto gid = std::make_shared<std::string>();
    auto name = std::make_shared<std::string>();
    auto value = std::make_shared<std::string>();
    extract->add_option("--authority", *authority, "Issuing authority")
        ->required();
    extract->add_option("--gid", *gid, "Holder gid")->required();
    extract->add_option("--name", *name, "Attribute name")->required();
    extract->add_option("--value", *value, "Attested attribute value")
        ->required();
    extract->callback([&, authority, gid, name, value] {
      action = [&, authority, gid, name, value] {
        auto ws = open_ws(g);
        ws->extract_key(*authority, *gid, *name, *value);
        emit(g, "keys_extract",
             {{"authority_id", *authority}, {"name", *name}},
             "signing key for " + *name + "@" + *authority + " in wallet");
        return kExitOk;
      };
    });

    auto* issue = keys->add_subcommand(
        "abe-issue", "Issue an ABE decryption key into a wallet");
    auto a2 = std::make_shared<std::string>();
    auto g2 = std::make_shared<std::string>();
    auto n2 = std::make_shared<std::string>();
    issue->add_option("--authority", *a2, "Issuing authority")->required();
    issue->add_option("--gid", *g2, "Holder gid")->required();
    issue->add_option("--name", *n2, "Attribute name")->required();
    issue->callback([&, a2, g2, n2] {
      action = [&, a2, g2, n2] {
        auto ws = open_ws(g);
        ws->issue_abe_key(*a2, *g2, *n2);
        emit(g, "keys_abe_issue", {{"authority_id", *a2}, {"name", *n2}},
             "decryption key for " + *n2 + "@" + *a2 + " in wallet");
        return kExitOk;
      };
    });
  }

  // ---- sign ----
  {
    auto* sign = app.add_subcommand(
        "sign", "Sign an attribute value with a wallet key");
    auto gid = std::make_shared<std::string>();
    auto authority = std::make_shared<std::string>();
    auto name = std::make_shared<std::string>();
    auto value = std::make_shared<std::string>();
    sign->add_option("--gid", *gid, "Holder gid")->required();
    sign->add_option("--authority", *authority, "Issuing authority")
        ->required();
    sign->add_option("--name", *name, "Attribute name")->required();
    sign->add_option("--value", *value, "Attribute value to sign")->required();
    sign->callback([&, gid, authority, name, value] {
      action = [&, gid, authority, name, value] {
        auto ws = open_ws(g);
        ws->sign_attribute(*gid, *authority, *name, *value);
        emit(g, "sign", {{"authority_id", *authority}, {"name", *name}},
             "signature for " + *name + "@" + *authority + " in wallet");
        return kExitOk;
      };
    });
  }

  // ---- profile write ----
  auto* profile = app.add_subcommand("profile", "On-ledger profiles");
  profile->require_subcommand(1);
  {
    auto* write = profile->add_subcommand(
        "write", "Publish the wallet's signatures as the on-ledger profile");
    auto gid = std::make_shared<std::string>();
    write->add_option("--gid", *gid, "Profile owner gid")->required();
    write->callback([&, gid] {
      action = [&, gid] {
        auto ws = open_ws(g);
        const std::string event = ws->write_profile(*gid);
        emit(g, "profile_write", {{"event_id", event}},
             "profile written, event " + event);
        return kExitOk;
      };
    });
  }

  // ---- acl grant ----
  auto* acl = app.add_subcommand("acl", "Owner access-control rules");
  acl->require_subcommand(1);
  {
    auto* grant = acl->add_subcommand("grant", "Grant a provider access");
    auto owner = std::make_shared<std::string>();
    auto grantee = std::make_shared<std::string>();
    auto role = std::make_shared<std::string>();
    auto permission = std::make_shared<std::string>("request_access");
    grant->add_option("--owner", *owner, "Profile owner gid")->required();
    auto* by_gid =
        grant->add_option("--grantee-gid", *grantee, "Provider gid to allow");
    auto* by_role = grant->add_option(
        "--role", *role, "Role pattern: provider or provider:<kind>");
    by_gid->excludes(by_role);
    grant->add_option("--permission", *permission,
                      "read_profile or request_access")
        ->capture_default_str();
    grant->callback([&, owner, grantee, role, permission] {
      action = [&, owner, grantee, role, permission] {
        if (grantee->empty() && role->empty()) {
          throw ParseError("acl grant needs --grantee-gid or --role");
        }
        ledger::AclRule rule;
        rule.kind = grantee->empty() ? ledger::AclRule::Kind::kRole
                                     : ledger::AclRule::Kind::kGid;
        rule.subject = grantee->empty() ? *role : *grantee;
        rule.permission = *permission;
        auto ws = open_ws(g);
        const std::string event = ws->grant_acl(*owner, rule);
        emit(g, "acl_grant", {{"event_id", event}},
             "acl rule recorded, event " + event);
        return kExitOk;
      };
    });
  }

  // ---- ehr encrypt | upload | fetch | decrypt ----
  auto* ehr = app.add_subcommand("ehr", "EHR payload operations");
  ehr->require_subcommand(1);
  {
    auto* encrypt = ehr->add_subcommand("encrypt", "ABE-encrypt a file");
    auto policy = std::make_shared<std::string>();
    auto in = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    encrypt->add_option("--policy", *policy,
                        "Access policy, e.g. \"a@x AND b@y\"")
        ->required();
    encrypt->add_option("--in", *in, "Plaintext file")->required();
    encrypt->add_option("--out", *out, "Ciphertext file")->required();
    encrypt->callback([&, policy, in, out] {
      action = [&, policy, in, out] {
        auto ws = open_ws(g);
        const Bytes ct = ws->encrypt(*policy, read_file(*in));
        write_file(*out, ct);
        emit(g, "ehr_encrypt",
             {{"out", *out}, {"bytes", ct.size()}},
             "ciphertext written to " + *out + " (" +
                 std::to_string(ct.size()) + " bytes)");
        return kExitOk;
      };
    });

    auto* upload = ehr->add_subcommand(
        "upload", "Store a ciphertext at the edge and attach it on-ledger");
    auto owner = std::make_shared<std::string>();
    auto in2 = std::make_shared<std::string>();
    upload->add_option("--owner", *owner, "Profile owner gid")->required();
    upload->add_option("--in", *in2, "Ciphertext file")->required();
    upload->callback([&, owner, in2] {
      action = [&, owner, in2] {
        auto ws = open_ws(g);
        const auto [object_id, event] = ws->upload(*owner, read_file(*in2));
        emit(g, "ehr_upload",
             {{"object_id", object_id}, {"event_id", event}},
             "object " + object_id + " attached, event " + event);
        return kExitOk;
      };
    });

    auto* fetch = ehr->add_subcommand(
        "fetch", "Redeem a one-time URL for its ciphertext");
    auto url = std::make_shared<std::string>();
    auto out3 = std::make_shared<std::string>();
    fetch->add_option("--url", *url, "One-time URL")->required();
    fetch->add_option("--out", *out3, "Ciphertext output file")->required();
    fetch->callback([&, url, out3] {
      action = [&, url, out3] {
        auto ws = open_ws(g);
        std::optional<Bytes> ct = ws->fetch(*url);
        if (!ct) {
          emit(g, "ehr_fetch", {{"outcome", "gone"}}, "gone");
          return kExitGone;
        }
        write_file(*out3, *ct);
        emit(g, "ehr_fetch",
             {{"outcome", "ok"}, {"out", *out3}, {"bytes", ct->size()}},
             "ciphertext written to " + *out3 + " (" +
                 std::to_string(ct->size()) + " bytes)");
        return kExitOk;
      };
    });

    auto* decrypt = ehr->add_subcommand(
        "decrypt", "Decrypt a ciphertext with a wallet's ABE keys");
    auto gid = std::make_shared<std::string>();
    auto in4 = std::make_shared<std::string>();
    auto out4 = std::make_shared<std::string>();
    decrypt->add_option("--gid", *gid, "Key holder gid")->required();
    decrypt->add_option("--in", *in4, "Ciphertext file")->required();
    decrypt->add_option("--out", *out4, "Plaintext output file")->required();
    decrypt->callback([&, gid, in4, out4] {
      action = [&, gid, in4, out4] {
        auto ws = open_ws(g);
        const Bytes pt = ws->decrypt(*gid, read_file(*in4));
        write_file(*out4, pt);
        emit(g, "ehr_decrypt",
             {{"out", *out4}, {"bytes", pt.size()}},
             "plaintext written to " + *out4 + " (" +
                 std::to_string(pt.size()) + " bytes)");
        return kExitOk;
      };
    });
  }

  // ---- access request ----
  auto* access = app.add_subcommand("access", "Provider access requests");
  access->require_subcommand(1);
  {
    auto* request = access->add_subcommand(
        "request", "Request one-time access to an owner's EHR");
    auto caller = std::make_shared<std::string>();
    auto owner = std::make_shared<std::string>();
    auto ttl = std::make_shared<std::int64_t>(0);
    request->add_option("--caller", *caller, "Requesting provider gid")
        ->required();
    request->add_option("--owner", *owner, "Profile owner gid")->required();
    request->add_option("--ttl", *ttl,
                        "Token lifetime in seconds (0 = workspace default)");
    request->callback([&, caller, owner, ttl] {
      action = [&, caller, owner, ttl] {
        auto ws = open_ws(g);
        const ledger::AccessOutcome outcome =
            ws->request_access(*caller, *owner, *ttl);
        Json j{{"granted", outcome.granted},
               {"valid_count", outcome.valid_count},
               {"event_id", outcome.event_id}};
        if (outcome.granted) {
          j["url"] = outcome.url;
          j["object_id"] = outcome.object_id;
          emit(g, "access_request", std::move(j),
               "granted (valid signatures: " +
                   std::to_string(outcome.valid_count) + ")\nurl: " +
                   outcome.url);
          return kExitOk;
        }
        emit(g, "access_request", std::move(j),
             "rejected (valid signatures: " +
                 std::to_string(outcome.valid_count) + ")");
        return kExitDenied;
      };
    });
  }

  // ---- ledger verify ----
  auto* ledger_cmd = app.add_subcommand("ledger", "Ledger inspection");
  ledger_cmd->require_subcommand(1);
  {
    auto* verify = ledger_cmd->add_subcommand(
        "verify", "Recompute every hash link in the chain");
    verify->callback([&] {
      action = [&] {
        auto ws = open_ws(g);
        const ledger::ChainStatus status = ws->verify_chain();
        const std::size_t height = ws->ledger().transactions().size();
        if (status.ok) {
          emit(g, "ledger_verify",
               {{"ok", true}, {"height", height}},
               "chain ok, height " + std::to_string(height));
          return kExitOk;
        }
        emit(g, "ledger_verify",
             {{"ok", false}, {"break_seq", status.break_seq}},
             "chain BROKEN at seq " + std::to_string(status.break_seq));
        return kExitIntegrity;
      };
    });
  }

  // ---- bench ----
  auto* bench = app.add_subcommand("bench", "Signing/verification benchmarks");
  bench->require_subcommand(1);
  {
    auto* length = bench->add_subcommand(
        "length", "Vary attribute value length, one signature per trial");
    auto lengths = std::make_shared<std::vector<int>>();
    auto trials = std::make_shared<int>(30);
    auto out = std::make_shared<std::string>();
    length->add_option("--lengths", *lengths, "Value lengths to sweep")
        ->delimiter(',');
    length->add_option("--trials", *trials, "Trials per point")
        ->capture_default_str();
    length->add_option("--out", *out, "Machine report path");
    length->callback([&, lengths, trials, out] {
      action = [&, lengths, trials, out] {
        auto ws = open_ws(g);
        const workflow::BenchReport report = workflow::bench_length(
            ws->params(), *lengths, *trials, ws->rng());
        const std::filesystem::path path =
            out->empty() ? std::filesystem::path(g.data_dir) /
                               "bench_length.jsonl"
                         : std::filesystem::path(*out);
        print_bench(g, report, "length", path);
        return kExitOk;
      };
    });

    auto* count = bench->add_subcommand(
        "count", "Vary attribute count, one signature set per trial");
    auto counts = std::make_shared<std::vector<int>>();
    auto trials2 = std::make_shared<int>(30);
    auto out2 = std::make_shared<std::string>();
    count->add_option("--counts", *counts, "Attribute counts to sweep")
        ->delimiter(',');
    count->add_option("--trials", *trials2, "Trials per point")
        ->capture_default_str();
    count->add_option("--out", *out2, "Machine report path");
    count->callback([&, counts, trials2, out2] {
      action = [&, counts, trials2, out2] {
        auto ws = open_ws(g);
        const workflow::BenchReport report = workflow::bench_count(
            ws->params(), *counts, *trials2, ws->rng());
        const std::filesystem::path path =
            out2->empty() ? std::filesystem::path(g.data_dir) /
                                "bench_count.jsonl"
                          : std::filesystem::path(*out2);
        print_bench(g, report, "count", path);
        return kExitOk;
      };
    });
  }

  // ---- scenario annie ----
  auto* scenario = app.add_subcommand("scenario", "Scripted workflows");
  scenario->require_subcommand(1);
  {
    auto* annie = scenario->add_subcommand(
        "annie", "Full patient-to-provider sharing flow on one workspace");
    annie->callback([&] {
      action = [&] {
        const workflow::ScenarioResult result =
            workflow::scenario_annie(config_from(g), std::cout);
        emit(g, "scenario_annie",
             {{"ledger_height", result.ledger_height},
              {"events", result.event_ids},
              {"ehr_bytes", result.ehr_bytes}},
             "scenario complete: " + std::to_string(result.ledger_height) +
                 " ledger transactions");
        return kExitOk;
      };
    });
  }

  // ---- stress redeem ----
  auto* stress = app.add_subcommand("stress", "Concurrency stress checks");
  stress->require_subcommand(1);
  {
    auto* redeem = stress->add_subcommand(
        "redeem", "Race parallel redeemers over one fresh token");
    auto object = std::make_shared<std::string>();
    auto threads = std::make_shared<int>(128);
    redeem->add_option("--object", *object, "Stored object id")->required();
    redeem->add_option("--threads", *threads, "Parallel redeemers")
        ->capture_default_str();
    redeem->callback([&, object, threads] {
      action = [&, object, threads] {
        if (*threads < 2) throw ParseError("--threads must be at least 2");
        auto ws = open_ws(g);
        const std::string token = ws->edge().issue(*object, 0).first;
        std::atomic<int> successes{0}, gones{0};
        std::vector<std::thread> pool;
        for (int i = 0; i < *threads; ++i) {
          pool.emplace_back([&] {
            if (ws->edge().redeem(token)) {
              successes.fetch_add(1);
            } else {
              gones.fetch_add(1);
            }
          });
        }
        for (auto& th : pool) th.join();
        emit(g, "stress_redeem",
             {{"threads", *threads},
              {"successes", successes.load()},
              {"gone", gones.load()}},
             std::to_string(*threads) + " redeemers: " +
                 std::to_string(successes.load()) + " success, " +
                 std::to_string(gones.load()) + " gone");
        return successes.load() == 1 ? kExitOk : kExitIntegrity;
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (seed_flag->count()) g.seed = seed_opt;
  if (clock_flag->count()) g.fixed_clock = fixed_clock_opt;
  g.format = format_opt;

  try {
    return action();
  } catch (const DeniedError& e) {
    std::cerr << "denied: " << e.what() << "\n";
    return kExitDenied;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const CryptoError& e) {
    std::cerr << "integrity error: " << e.what() << "\n";
    return kExitIntegrity;
  } catch (const StateError& e) {
    std::cerr << "state error: " << e.what() << "\n";
    return kExitState;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
