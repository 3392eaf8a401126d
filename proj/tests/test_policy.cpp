#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "ehr/errors.hpp"
#include "ehr/hex.hpp"
#include "ehr/lsss.hpp"
#include "ehr/policy.hpp"
#include "support/gmp_rank.hpp"
#include "support/policy_corpus.hpp"

using namespace ehr;
using namespace ehr::policy;
using ehr::lsss::Fr;

namespace {

constexpr char kFrModulusHex[] =
    "73eda753299d7d483339d80809a1d80553bda402fffe5bfeffffffff00000001";

std::string fr_hex(const Fr& v) { return to_hex(v.to_bytes_be()); }

std::set<AttributeLabel> subset_of_labels(unsigned mask) {
  std::set<AttributeLabel> held;
  for (std::size_t i = 0; i < corpus::kLabels.size(); ++i) {
    if (mask & (1u << i)) {
      held.emplace(std::string(corpus::kLabels[i].first),
                   std::string(corpus::kLabels[i].second));
    }
  }
  return held;
}

}  // namespace

TEST_CASE("leaf parsing") {
  PolicyNode n = parse_policy("employee-id@hospital");
  CHECK(n.is_leaf());
  CHECK(n.name == "employee-id");
  CHECK(n.authority_id == "hospital");
}

TEST_CASE("AND binds tighter than OR") {
  PolicyNode n = parse_policy("a@x OR b@y AND c@z");
  REQUIRE_FALSE(n.is_leaf());
  CHECK(n.k == 1);  // OR gate at the root
  REQUIRE(n.children.size() == 2);
  CHECK(n.children[0].is_leaf());
  CHECK(n.children[1].k == 2);  // AND below
  CHECK(n.children[1].children.size() == 2);

  PolicyNode m = parse_policy("(a@x OR b@y) AND c@z");
  CHECK(m.k == 2);
  CHECK(m.children[0].k == 1);
}

TEST_CASE("threshold gates parse with nested policies") {
  PolicyNode n = parse_policy("2 of (a@x, b@y AND c@z, d@w OR e@v)");
  CHECK(n.k == 2);
  REQUIRE(n.children.size() == 3);
  CHECK(n.children[1].k == 2);
  CHECK(n.children[2].k == 1);

  // 1 of (x) collapses to x.
  CHECK(parse_policy("1 of (a@x)").is_leaf());
}

TEST_CASE("syntax errors carry a position and are precise") {
  auto fails_at = [](std::string_view text, const char* needle) {
    try {
      parse_policy(text);
      FAIL("expected ParseError for: ", text);
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("position") != std::string::npos);
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  fails_at("", "expected identifier");
  fails_at("a@", "expected identifier");
  fails_at("a hospital", "expected '@'");
  fails_at("a@h AND", "expected identifier");
  fails_at("(a@h", "expected ')'");
  fails_at("a@h)", "unexpected trailing input");
  fails_at("0 of (a@h)", "threshold count out of range");
  fails_at("3 of (a@h, b@d)", "threshold count out of range");
  fails_at("2 from (a@h, b@d)", "expected 'of'");
  // NOT is not an operator; it lexes as an identifier missing its '@'.
  fails_at("NOT a@h", "expected '@'");
}

TEST_CASE("keywords are case sensitive") {
  // Lowercase "and" is an identifier, leaving trailing input after the leaf.
  CHECK_THROWS_AS(parse_policy("a@h and b@d"), ParseError);
  CHECK_THROWS_AS(parse_policy("a@h or b@d"), ParseError);
  CHECK_THROWS_AS(parse_policy("2 OF (a@h, b@d)"), ParseError);
}

TEST_CASE("canonical rendering round trips structurally") {
  for (std::string_view text : corpus::kPolicies) {
    PolicyNode once = parse_policy(text);
    std::string rendered = policy_to_string(once);
    PolicyNode twice = parse_policy(rendered);
    CHECK(once == twice);
    CHECK(policy_to_string(twice) == rendered);
  }
}

TEST_CASE("single-attribute policy compiles to the 1x1 matrix [[1]]") {
  lsss::Matrix m = lsss::policy_to_lsss(parse_policy("employee-id@hospital"));
  CHECK(m.cols == 1);
  REQUIRE(m.rows.size() == 1);
  REQUIRE(m.rows[0].size() == 1);
  CHECK(m.rows[0][0] == Fr::one());
  CHECK(m.row_labels[0] ==
        AttributeLabel{"hospital", "employee-id"});
}

TEST_CASE("duplicate leaves become separate rows") {
  lsss::Matrix m = lsss::policy_to_lsss(
      parse_policy("employee-id@hospital AND "
                   "(employee-id@hospital OR drivers-license@dmv)"));
  CHECK(m.rows.size() == 3);
  CHECK(m.row_labels[0] == m.row_labels[1]);
}

TEST_CASE("LSSS span equals brute-force satisfaction on the whole corpus") {
  for (std::string_view text : corpus::kPolicies) {
    PolicyNode root = parse_policy(text);
    lsss::Matrix m = lsss::policy_to_lsss(root);
    for (unsigned mask = 0; mask < 16; ++mask) {
      std::set<AttributeLabel> held = subset_of_labels(mask);
      bool expected = policy_satisfied(root, held);
      bool spanned = lsss::spans_target(m, held);
      CAPTURE(text);
      CAPTURE(mask);
      CHECK(spanned == expected);
    }
  }
}

TEST_CASE("independent GMP oracle agrees with the span decision") {
  for (std::string_view text : corpus::kPolicies) {
    PolicyNode root = parse_policy(text);
    lsss::Matrix m = lsss::policy_to_lsss(root);

    std::vector<std::string> target(m.cols, "0");
    target[0] = "1";

    for (unsigned mask = 0; mask < 16; ++mask) {
      std::set<AttributeLabel> held = subset_of_labels(mask);
      std::vector<std::vector<std::string>> selected_hex;
      for (std::size_t i = 0; i < m.rows.size(); ++i) {
        if (!held.count(m.row_labels[i])) continue;
        std::vector<std::string> row;
        row.reserve(m.cols);
        for (const Fr& cell : m.rows[i]) row.push_back(fr_hex(cell));
        selected_hex.push_back(std::move(row));
      }
      bool oracle_says =
          oracle::in_row_span(selected_hex, target, kFrModulusHex);
      bool solver_says = lsss::spans_target(m, held);
      CAPTURE(text);
      CAPTURE(mask);
      CHECK(oracle_says == solver_says);
      CHECK(oracle_says == policy_satisfied(root, held));
    }
  }
}

TEST_CASE("shares recombine to the secret exactly when the policy holds") {
  SeededRandom rng("lsss-shares");
  for (std::string_view text : corpus::kPolicies) {
    PolicyNode root = parse_policy(text);
    lsss::Matrix m = lsss::policy_to_lsss(root);
    Fr secret = bls381::fr_from_wide_bytes(rng.bytes(64));
    std::vector<Fr> shares = lsss::share_secret(m, secret, rng);

    for (unsigned mask = 0; mask < 16; ++mask) {
      std::set<AttributeLabel> held = subset_of_labels(mask);
      std::vector<std::size_t> selected;
      for (std::size_t i = 0; i < m.rows.size(); ++i) {
        if (held.count(m.row_labels[i])) selected.push_back(i);
      }
      auto coeffs = lsss::reconstruction_coefficients(m, selected);
      if (policy_satisfied(root, held)) {
        REQUIRE(coeffs.has_value());
        Fr sum = Fr::zero();
        for (std::size_t j = 0; j < selected.size(); ++j) {
          sum = sum + (*coeffs)[j] * shares[selected[j]];
        }
        CAPTURE(text);
        CHECK(sum == secret);
      } else {
        CHECK_FALSE(coeffs.has_value());
      }
    }
  }
}

TEST_CASE("plain k-of-n Vandermonde thresholds behave combinatorially") {
  SeededRandom rng("lsss-vandermonde");
  PolicyNode root = parse_policy(
      "3 of (a@q, b@q, c@q, d@q, e@q)");
  lsss::Matrix m = lsss::policy_to_lsss(root);
  REQUIRE(m.rows.size() == 5);
  Fr secret = bls381::fr_from_wide_bytes(rng.bytes(64));
  std::vector<Fr> shares = lsss::share_secret(m, secret, rng);

  for (unsigned mask = 0; mask < 32; ++mask) {
    std::vector<std::size_t> selected;
    for (std::size_t i = 0; i < 5; ++i) {
      if (mask & (1u << i)) selected.push_back(i);
    }
    auto coeffs = lsss::reconstruction_coefficients(m, selected);
    if (selected.size() >= 3) {
      REQUIRE(coeffs.has_value());
      Fr sum = Fr::zero();
      for (std::size_t j = 0; j < selected.size(); ++j) {
        sum = sum + (*coeffs)[j] * shares[selected[j]];
      }
      CHECK(sum == secret);
    } else {
      CHECK_FALSE(coeffs.has_value());
    }
  }
}
