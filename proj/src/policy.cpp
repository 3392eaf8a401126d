#include "ehr/policy.hpp"

#include <cctype>

#include "ehr/errors.hpp"

namespace ehr::policy {
namespace {

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

struct Parser {
  std::string_view text;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("policy: " + what + " at position " +
                     std::to_string(pos));
  }

  void skip_ws() {
    while (pos < text.size() &&
           std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
    }
  }

  bool at_end() {
    skip_ws();
    return pos >= text.size();
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  bool consume(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }

  std::string_view ident() {
    skip_ws();
    std::size_t start = pos;
    while (pos < text.size() && ident_char(text[pos])) ++pos;
    if (pos == start) fail("expected identifier");
    return text.substr(start, pos - start);
  }

  // Keywords bind only when the next identifier matches exactly.
  bool keyword(std::string_view word) {
    skip_ws();
    if (text.substr(pos, word.size()) != word) return false;
    std::size_t after = pos + word.size();
    if (after < text.size() && ident_char(text[after])) return false;
    pos = after;
    return true;
  }

  PolicyNode parse_or() {
    std::vector<PolicyNode> terms;
    terms.push_back(parse_and());
    while (keyword("OR")) terms.push_back(parse_and());
    if (terms.size() == 1) return std::move(terms[0]);
    return PolicyNode::gate(1, std::move(terms));
  }

  PolicyNode parse_and() {
    std::vector<PolicyNode> terms;
    terms.push_back(parse_primary());
    while (keyword("AND")) terms.push_back(parse_primary());
    if (terms.size() == 1) return std::move(terms[0]);
    const int k = static_cast<int>(terms.size());  // read before the move
    return PolicyNode::gate(k, std::move(terms));
  }

  PolicyNode parse_primary() {
    skip_ws();
    if (consume('(')) {
      PolicyNode inner = parse_or();
      if (!consume(')')) fail("expected ')'");
      return inner;
    }
    if (pos < text.size() &&
        std::isdigit(static_cast<unsigned char>(text[pos]))) {
      return parse_threshold();
    }
    return parse_leaf();
  }

  PolicyNode parse_threshold() {
    std::size_t start = pos;
    long k = 0;
    while (pos < text.size() &&
           std::isdigit(static_cast<unsigned char>(text[pos]))) {
      k = k * 10 + (text[pos] - '0');
      if (k > 1000000) fail("threshold too large");
      ++pos;
    }
    if (!keyword("of")) {
      pos = start;
      fail("expected 'of' after threshold count");
    }
    if (!consume('(')) fail("expected '(' after 'of'");
    std::vector<PolicyNode> children;
    children.push_back(parse_or());
    while (consume(',')) children.push_back(parse_or());
    if (!consume(')')) fail("expected ')' or ',' in threshold list");
    if (k < 1 || k > static_cast<long>(children.size())) {
      pos = start;
      fail("threshold count out of range");
    }
    if (children.size() == 1) return std::move(children[0]);  // 1 of (x) == x
    return PolicyNode::gate(static_cast<int>(k), std::move(children));
  }

  PolicyNode parse_leaf() {
    std::string_view name = ident();
    skip_ws();
    if (pos >= text.size() || text[pos] != '@') fail("expected '@' in leaf");
    ++pos;
    std::string_view authority = ident();
    return PolicyNode::leaf(std::string(authority), std::string(name));
  }
};

void render(const PolicyNode& node, std::string& out) {
  if (node.is_leaf()) {
    out += node.name;
    out += '@';
    out += node.authority_id;
    return;
  }
  const int n = static_cast<int>(node.children.size());
  auto child_text = [&](const PolicyNode& c) {
    if (c.is_leaf()) {
      render(c, out);
    } else {
      out += '(';
      render(c, out);
      out += ')';
    }
  };
  if (node.k == n || node.k == 1) {
    const char* joiner = node.k == 1 ? " OR " : " AND ";
    for (int i = 0; i < n; ++i) {
      if (i) out += joiner;
      child_text(node.children[i]);
    }
    return;
  }
  out += std::to_string(node.k);
  out += " of (";
  for (int i = 0; i < n; ++i) {
    if (i) out += ", ";
    render(node.children[i], out);
  }
  out += ')';
}

}  // namespace

PolicyNode parse_policy(std::string_view text) {
  Parser p{text};
  PolicyNode root = p.parse_or();
  if (!p.at_end()) p.fail("unexpected trailing input");
  return root;
}

std::string policy_to_string(const PolicyNode& node) {
  std::string out;
  render(node, out);
  return out;
}

bool policy_satisfied(const PolicyNode& node,
                      const std::set<AttributeLabel>& held) {
  if (node.is_leaf()) {
    return held.count({node.authority_id, node.name}) > 0;
  }
  int hits = 0;
  for (const PolicyNode& child : node.children) {
    if (policy_satisfied(child, held)) ++hits;
  }
  return hits >= node.k;
}

namespace {

void collect(const PolicyNode& node, std::vector<AttributeLabel>& out) {
  if (node.is_leaf()) {
    out.emplace_back(node.authority_id, node.name);
    return;
  }
  for (const PolicyNode& child : node.children) collect(child, out);
}

}  // namespace

std::vector<AttributeLabel> policy_leaves(const PolicyNode& node) {
  std::vector<AttributeLabel> out;
  collect(node, out);
  return out;
}

}  // namespace ehr::policy
