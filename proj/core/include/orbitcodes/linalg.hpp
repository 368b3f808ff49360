#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "orbitcodes/gf.hpp"

namespace orbitcodes {

// Dense matrix over the top field (or any subfield thereof), entries stored
// as Felt codes. Just enough linear algebra for echelon forms and small
// solves; rows and columns are zero-indexed.
class GfMat {
 public:
  GfMat(const FieldTower& tower, unsigned rows, unsigned cols);

  unsigned rows() const { return rows_; }
  unsigned cols() const { return cols_; }
  const FieldTower& tower() const { return *tower_; }

  std::uint32_t& at(unsigned r, unsigned c) { return a_[r * cols_ + c]; }
  std::uint32_t at(unsigned r, unsigned c) const { return a_[r * cols_ + c]; }
  void set(unsigned r, unsigned c, Felt v) { at(r, c) = v.code(); }
  Felt get(unsigned r, unsigned c) const { return felt(at(r, c)); }

  // Reduced row echelon form in place; returns the rank. Pivot columns are
  // recorded in pivot_cols(). Rows beyond the rank are zero.
  unsigned rref();
  const std::vector<unsigned>& pivot_cols() const { return pivots_; }

  // Reduces `vec` (length cols) against the rows of an rref matrix in
  // place. The result is zero iff vec lies in the row space.
  void reduce_in_place(std::vector<std::uint32_t>& vec) const;

  // Solves A x = b for a single solution, or nullopt if inconsistent. Call
  // on a fresh matrix; `*this` is consumed (put into rref augmented form).
  std::optional<std::vector<std::uint32_t>> solve(const std::vector<std::uint32_t>& b);

  // Basis of {x : A x = 0}. Consumes `*this` like solve().
  std::vector<std::vector<std::uint32_t>> null_space();

 private:
  Felt felt(std::uint32_t code) const;

  const FieldTower* tower_;
  unsigned rows_, cols_;
  std::vector<std::uint32_t> a_;
  std::vector<unsigned> pivots_;
};

}  // namespace orbitcodes
