#pragma once

#include <optional>
#include <vector>

#include "ehr/bls381/fp.hpp"
#include "ehr/policy.hpp"
#include "ehr/rng.hpp"

// Linear secret sharing over the scalar field. Policies compile into a
// share-generating matrix via nested Vandermonde gadgets: a k-of-m gate
// hands child i the parent vector extended by (i, i^2, ..., i^(k-1)) in
// k-1 fresh columns, so any k children interpolate the parent share and
// fewer reveal nothing.

namespace ehr::lsss {

using Fr = bls381::Fr;

struct Matrix {
  std::vector<std::vector<Fr>> rows;          // row i shares to row_labels[i]
  std::vector<policy::AttributeLabel> row_labels;
  std::size_t cols = 0;
};

Matrix policy_to_lsss(const policy::PolicyNode& root);

// Shares of `secret`: row i yields <M_i, (secret, r_2, ..., r_cols)>.
std::vector<Fr> share_secret(const Matrix& m, const Fr& secret,
                             RandomSource& entropy);

// Finds coefficients c over the selected rows with sum_i c_i * M_i = e1,
// i.e. sum_i c_i * share_i = secret. Empty optional when e1 is outside the
// span. `selected` holds row indices into m.rows.
std::optional<std::vector<Fr>> reconstruction_coefficients(
    const Matrix& m, const std::vector<std::size_t>& selected);

// True when the rows labeled by `held` span e1; must agree with brute-force
// policy evaluation.
bool spans_target(const Matrix& m,
                  const std::set<policy::AttributeLabel>& held);

}  // namespace ehr::lsss
