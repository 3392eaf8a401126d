#pragma once

#include <gmp.h>

#include <string>
#include <utility>
#include <vector>

// Independent rank computation over a prime field, done directly with GMP
// integers so the production field arithmetic is not in the loop.

namespace oracle {

class Big {
 public:
  Big() { mpz_init(v_); }
  explicit Big(const std::string& hex) { mpz_init_set_str(v_, hex.c_str(), 16); }
  Big(const Big& o) { mpz_init_set(v_, o.v_); }
  Big& operator=(const Big& o) {
    if (this != &o) mpz_set(v_, o.v_);
    return *this;
  }
  ~Big() { mpz_clear(v_); }

  mpz_ptr get() { return v_; }
  mpz_srcptr get() const { return v_; }

 private:
  mpz_t v_;
};

// Rows are vectors of lowercase hex strings (big-endian, no 0x prefix).
inline int rank_mod_p(const std::vector<std::vector<std::string>>& rows_hex,
                      const std::string& modulus_hex) {
  if (rows_hex.empty()) return 0;
  const std::size_t n_rows = rows_hex.size();
  const std::size_t n_cols = rows_hex[0].size();

  Big p(modulus_hex);
  std::vector<std::vector<Big>> m(n_rows, std::vector<Big>(n_cols));
  for (std::size_t i = 0; i < n_rows; ++i) {
    for (std::size_t j = 0; j < n_cols; ++j) {
      Big cell(rows_hex[i][j]);
      mpz_mod(cell.get(), cell.get(), p.get());
      m[i][j] = cell;
    }
  }

  Big inv, factor, tmp;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n_cols && rank < n_rows; ++col) {
    std::size_t pivot = n_rows;
    for (std::size_t r = rank; r < n_rows; ++r) {
      if (mpz_sgn(m[r][col].get()) != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot == n_rows) continue;
    std::swap(m[rank], m[pivot]);
    mpz_invert(inv.get(), m[rank][col].get(), p.get());
    for (std::size_t r = rank + 1; r < n_rows; ++r) {
      if (mpz_sgn(m[r][col].get()) == 0) continue;
      mpz_mul(factor.get(), m[r][col].get(), inv.get());
      mpz_mod(factor.get(), factor.get(), p.get());
      for (std::size_t j = col; j < n_cols; ++j) {
        mpz_mul(tmp.get(), factor.get(), m[rank][j].get());
        mpz_sub(m[r][j].get(), m[r][j].get(), tmp.get());
        mpz_mod(m[r][j].get(), m[r][j].get(), p.get());
      }
    }
    ++rank;
  }
  return static_cast<int>(rank);
}

// Span membership: the target lies in the row span iff appending it leaves
// the rank unchanged. An empty selection spans only the zero vector.
inline bool in_row_span(const std::vector<std::vector<std::string>>& rows,
                        const std::vector<std::string>& target,
                        const std::string& modulus_hex) {
  if (rows.empty()) {
    Big p(modulus_hex);
    for (const auto& cell_hex : target) {
      Big cell(cell_hex);
      mpz_mod(cell.get(), cell.get(), p.get());
      if (mpz_sgn(cell.get()) != 0) return false;
    }
    return true;
  }
  auto extended = rows;
  extended.push_back(target);
  return rank_mod_p(rows, modulus_hex) == rank_mod_p(extended, modulus_hex);
}

}  // namespace oracle
