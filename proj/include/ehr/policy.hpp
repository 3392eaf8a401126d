#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

// Access policy AST and grammar. Concrete syntax:
//
//   policy   := or_expr
//   or_expr  := and_expr ( "OR" and_expr )*
//   and_expr := primary ( "AND" primary )*
//   primary  := "(" policy ")" | INT "of" "(" policy { "," policy } ")" | leaf
//   leaf     := IDENT "@" IDENT          (attribute-name @ authority-id)
//
// AND binds tighter than OR, keywords are case sensitive, identifiers are
// [A-Za-z0-9_-]+, and there is no negation. Everything normalizes to
// threshold gates: AND is k-of-k, OR is 1-of-k.

namespace ehr::policy {

struct PolicyNode {
  int k = 0;                         // threshold over children (gates only)
  std::vector<PolicyNode> children;  // empty for leaves
  std::string authority_id;          // leaf label
  std::string name;                  // leaf label

  bool is_leaf() const { return children.empty(); }

  friend bool operator==(const PolicyNode&, const PolicyNode&) = default;

  static PolicyNode leaf(std::string authority_id, std::string name) {
    PolicyNode n;
    n.authority_id = std::move(authority_id);
    n.name = std::move(name);
    return n;
  }
  static PolicyNode gate(int k, std::vector<PolicyNode> children) {
    PolicyNode n;
    n.k = k;
    n.children = std::move(children);
    return n;
  }
};

// Throws ParseError with a 0-based character position in the message.
PolicyNode parse_policy(std::string_view text);

// Canonical rendering; parse(render(p)) is structurally equal to p.
std::string policy_to_string(const PolicyNode& node);

using AttributeLabel = std::pair<std::string, std::string>;  // authority, name

// Brute-force formula evaluation against a set of held attributes.
bool policy_satisfied(const PolicyNode& node,
                      const std::set<AttributeLabel>& held);

// Leaves in left-to-right order; duplicates preserved (each occurrence
// becomes its own share row downstream).
std::vector<AttributeLabel> policy_leaves(const PolicyNode& node);

}  // namespace ehr::policy
