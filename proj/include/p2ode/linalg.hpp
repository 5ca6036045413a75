#pragma once

// Exact dense linear algebra over Q and F_p.

#include "p2ode/field.hpp"

#include <optional>
#include <vector>

namespace p2ode {

template <class Field>
struct Matrix {
  using Elem = typename Field::Elem;

  Matrix(const Field& f, std::size_t r, std::size_t c) : field(f), rows(r), cols(c), data(r * c, f.zero()) {}

  Elem& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const Elem& at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  Field field;
  std::size_t rows;
  std::size_t cols;
  std::vector<Elem> data;
};

/// Basis of {v : M v = 0}. Each basis vector has a 1 in its own free column
/// and 0 in the other free columns.
std::vector<std::vector<mpq_class>> exact_nullspace(const Matrix<Rationals>& m);
std::vector<std::vector<std::uint64_t>> exact_nullspace(const Matrix<PrimeField>& m);

template <class Field>
std::size_t matrix_rank(const Matrix<Field>& m) {
  return m.cols - exact_nullspace(m).size();
}

/// One solution of M x = b (free variables set to 0), or nullopt.
template <class Field>
std::optional<std::vector<typename Field::Elem>> solve_linear(const Matrix<Field>& m,
                                                              const std::vector<typename Field::Elem>& b) {
  const Field& F = m.field;
  Matrix<Field> aug(F, m.rows, m.cols + 1);
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t j = 0; j < m.cols; ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, m.cols) = b[i];
  }
  for (const auto& v : exact_nullspace(aug)) {
    if (!F.is_one(v[m.cols])) continue;
    std::vector<typename Field::Elem> x(m.cols);
    for (std::size_t j = 0; j < m.cols; ++j) x[j] = F.neg(v[j]);
    return x;
  }
  return std::nullopt;
}

}  // namespace p2ode
