#include "p2ode/linalg.hpp"

#include "p2ode/simd/kernels.hpp"

namespace p2ode {

namespace {

// Back-substitution from a row echelon form whose pivot entries are known.
template <class Elem, class SolvePivot>
std::vector<std::vector<Elem>> nullspace_from_echelon(std::size_t cols, const std::vector<std::size_t>& pivot_cols,
                                                      const Elem& zero, const Elem& one, SolvePivot solve) {
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivot_cols) is_pivot[c] = true;
  std::vector<std::vector<Elem>> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Elem> v(cols, zero);
    v[f] = one;
    for (std::size_t r = pivot_cols.size(); r-- > 0;) v[pivot_cols[r]] = solve(r, v);
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace

std::vector<std::vector<mpq_class>> exact_nullspace(const Matrix<Rationals>& m) {
  // Clear denominators row by row, then fraction-free elimination on integers.
  std::vector<std::vector<mpz_class>> a(m.rows, std::vector<mpz_class>(m.cols));
  for (std::size_t i = 0; i < m.rows; ++i) {
    mpz_class den = 1;
    for (std::size_t j = 0; j < m.cols; ++j)
      mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), m.at(i, j).get_den().get_mpz_t());
    for (std::size_t j = 0; j < m.cols; ++j) a[i][j] = m.at(i, j).get_num() * (den / m.at(i, j).get_den());
  }
  std::vector<std::size_t> pivots;
  mpz_class prev = 1;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols && row < m.rows; ++col) {
    std::size_t piv = row;
    while (piv < m.rows && a[piv][col] == 0) ++piv;
    if (piv == m.rows) continue;
    std::swap(a[piv], a[row]);
    for (std::size_t i = row + 1; i < m.rows; ++i) {
      for (std::size_t j = col + 1; j < m.cols; ++j) {
        a[i][j] = a[row][col] * a[i][j] - a[i][col] * a[row][j];
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      a[i][col] = 0;
    }
    prev = a[row][col];
    pivots.push_back(col);
    ++row;
  }
  return nullspace_from_echelon<mpq_class>(m.cols, pivots, mpq_class(0), mpq_class(1),
                                           [&](std::size_t r, const std::vector<mpq_class>& v) {
                                             const std::size_t pc = pivots[r];
                                             mpq_class s = 0;
                                             for (std::size_t j = pc + 1; j < m.cols; ++j)
                                               if (a[r][j] != 0) s += mpq_class(a[r][j]) * v[j];
                                             mpq_class out = -s / mpq_class(a[r][pc]);
                                             out.canonicalize();
                                             return out;
                                           });
}

std::vector<std::vector<std::uint64_t>> exact_nullspace(const Matrix<PrimeField>& m) {
  const PrimeField& F = m.field;
  const std::uint64_t p = F.modulus();
  const bool kernel_ok = p < simd::kMaxKernelModulus;
  const auto& kern = simd::active_kernels();

  std::vector<std::vector<std::uint64_t>> a(m.rows, std::vector<std::uint64_t>(m.cols));
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) a[i][j] = m.at(i, j);
  std::vector<std::vector<std::uint32_t>> a32;
  if (kernel_ok) {
    a32.assign(m.rows, std::vector<std::uint32_t>(m.cols));
    for (std::size_t i = 0; i < m.rows; ++i)
      for (std::size_t j = 0; j < m.cols; ++j) a32[i][j] = static_cast<std::uint32_t>(a[i][j]);
  }
  auto get = [&](std::size_t i, std::size_t j) -> std::uint64_t { return kernel_ok ? a32[i][j] : a[i][j]; };

  // Gauss-Jordan to reduced row echelon form.
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols && row < m.rows; ++col) {
    std::size_t piv = row;
    while (piv < m.rows && get(piv, col) == 0) ++piv;
    if (piv == m.rows) continue;
    if (kernel_ok) std::swap(a32[piv], a32[row]);
    else std::swap(a[piv], a[row]);
    const std::uint64_t inv = F.inv(get(row, col));
    for (std::size_t j = col; j < m.cols; ++j) {
      if (kernel_ok) a32[row][j] = static_cast<std::uint32_t>(F.mul(a32[row][j], inv));
      else a[row][j] = F.mul(a[row][j], inv);
    }
    for (std::size_t i = 0; i < m.rows; ++i) {
      if (i == row) continue;
      const std::uint64_t c = get(i, col);
      if (c == 0) continue;
      const std::uint64_t neg = F.neg(c);
      if (kernel_ok) {
        kern.axpy(a32[i].data() + col, a32[row].data() + col, m.cols - col, static_cast<std::uint32_t>(neg),
                  static_cast<std::uint32_t>(p));
      } else {
        for (std::size_t j = col; j < m.cols; ++j) a[i][j] = F.add(a[i][j], F.mul(neg, a[row][j]));
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return nullspace_from_echelon<std::uint64_t>(m.cols, pivots, 0, 1,
                                               [&](std::size_t r, const std::vector<std::uint64_t>& v) {
                                                 std::uint64_t s = 0;
                                                 for (std::size_t j = pivots[r] + 1; j < m.cols; ++j)
                                                   if (get(r, j)) s = F.add(s, F.mul(get(r, j), v[j]));
                                                 return F.neg(s);
                                               });
}

}  // namespace p2ode
