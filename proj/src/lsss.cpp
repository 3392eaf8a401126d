#include "ehr/lsss.hpp"

namespace ehr::lsss {
namespace {

void compile(const policy::PolicyNode& node, std::vector<Fr> vec,
             Matrix& out) {
  if (node.is_leaf()) {
    out.row_labels.emplace_back(node.authority_id, node.name);
    out.rows.push_back(std::move(vec));
    return;
  }
  const int k = node.k;
  const std::size_t base = out.cols;
  out.cols += static_cast<std::size_t>(k) - 1;
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    std::vector<Fr> child = vec;
    child.resize(out.cols, Fr::zero());
    const Fr x = Fr::from_u64(i + 1);
    Fr power = x;
    for (int j = 0; j < k - 1; ++j) {
      child[base + static_cast<std::size_t>(j)] = power;
      power = power * x;
    }
    compile(node.children[i], std::move(child), out);
  }
}

}  // namespace

Matrix policy_to_lsss(const policy::PolicyNode& root) {
  Matrix m;
  m.cols = 1;
  compile(root, {Fr::one()}, m);
  for (auto& row : m.rows) row.resize(m.cols, Fr::zero());
  return m;
}

std::vector<Fr> share_secret(const Matrix& m, const Fr& secret,
                             RandomSource& entropy) {
  std::vector<Fr> v(m.cols);
  v[0] = secret;
  for (std::size_t j = 1; j < m.cols; ++j) {
    Bytes wide = entropy.bytes(64);
    v[j] = bls381::fr_from_wide_bytes(wide);
  }
  std::vector<Fr> shares(m.rows.size(), Fr::zero());
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    Fr acc = Fr::zero();
    for (std::size_t j = 0; j < m.cols; ++j) acc = acc + m.rows[i][j] * v[j];
    shares[i] = acc;
  }
  return shares;
}

std::optional<std::vector<Fr>> reconstruction_coefficients(
    const Matrix& m, const std::vector<std::size_t>& selected) {
  // Solve A^T c = e1 by Gauss-Jordan over the scalar field, where A's rows
  // are the selected matrix rows. Unknowns: one coefficient per selection.
  const std::size_t unknowns = selected.size();
  const std::size_t equations = m.cols;
  if (unknowns == 0) return std::nullopt;

  std::vector<std::vector<Fr>> aug(equations,
                                   std::vector<Fr>(unknowns + 1, Fr::zero()));
  for (std::size_t j = 0; j < unknowns; ++j) {
    const auto& row = m.rows[selected[j]];
    for (std::size_t i = 0; i < equations; ++i) aug[i][j] = row[i];
  }
  aug[0][unknowns] = Fr::one();  // target e1

  std::vector<std::size_t> pivot_col_of_row(equations, SIZE_MAX);
  std::size_t rank = 0;
  for (std::size_t col = 0; col < unknowns && rank < equations; ++col) {
    std::size_t pivot = SIZE_MAX;
    for (std::size_t r = rank; r < equations; ++r) {
      if (!aug[r][col].is_zero()) {
        pivot = r;
        break;
      }
    }
    if (pivot == SIZE_MAX) continue;
    std::swap(aug[rank], aug[pivot]);
    const Fr inv = aug[rank][col].inverse();
    for (std::size_t j = col; j <= unknowns; ++j)
      aug[rank][j] = aug[rank][j] * inv;
    for (std::size_t r = 0; r < equations; ++r) {
      if (r == rank || aug[r][col].is_zero()) continue;
      const Fr factor = aug[r][col];
      for (std::size_t j = col; j <= unknowns; ++j)
        aug[r][j] = aug[r][j] - factor * aug[rank][j];
    }
    pivot_col_of_row[rank] = col;
    ++rank;
  }

  // Inconsistent if any zero row has a nonzero right-hand side.
  for (std::size_t r = rank; r < equations; ++r) {
    if (!aug[r][unknowns].is_zero()) return std::nullopt;
  }

  std::vector<Fr> coeffs(unknowns, Fr::zero());
  for (std::size_t r = 0; r < rank; ++r) {
    coeffs[pivot_col_of_row[r]] = aug[r][unknowns];
  }
  return coeffs;
}

bool spans_target(const Matrix& m,
                  const std::set<policy::AttributeLabel>& held) {
  std::vector<std::size_t> selected;
  for (std::size_t i = 0; i < m.row_labels.size(); ++i) {
    if (held.count(m.row_labels[i])) selected.push_back(i);
  }
  return reconstruction_coefficients(m, selected).has_value();
}

}  // namespace ehr::lsss
