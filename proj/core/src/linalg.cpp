#include "orbitcodes/linalg.hpp"

namespace orbitcodes {

GfMat::GfMat(const FieldTower& tower, unsigned rows, unsigned cols)
    : tower_(&tower), rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, Felt::kZeroCode) {}

Felt GfMat::felt(std::uint32_t code) const {
  return code == Felt::kZeroCode ? tower_->zero() : tower_->from_exponent(code);
}

unsigned GfMat::rref() {
  const FieldTower& t = *tower_;
  pivots_.clear();
  unsigned r = 0;
  for (unsigned c = 0; c < cols_ && r < rows_; ++c) {
    unsigned piv = r;
    while (piv < rows_ && at(piv, c) == Felt::kZeroCode) ++piv;
    if (piv == rows_) continue;
    if (piv != r) {
      for (unsigned j = c; j < cols_; ++j) std::swap(at(piv, j), at(r, j));
    }
    std::uint32_t s = t.inv_code(at(r, c));
    for (unsigned j = c; j < cols_; ++j) at(r, j) = t.mul_code(at(r, j), s);
    for (unsigned i = 0; i < rows_; ++i) {
      if (i == r || at(i, c) == Felt::kZeroCode) continue;
      std::uint32_t f = at(i, c);
      for (unsigned j = c; j < cols_; ++j) {
        at(i, j) = t.sub_code(at(i, j), t.mul_code(f, at(r, j)));
      }
    }
    pivots_.push_back(c);
    ++r;
  }
  return r;
}

void GfMat::reduce_in_place(std::vector<std::uint32_t>& vec) const {
  const FieldTower& t = *tower_;
  for (unsigned r = 0; r < pivots_.size(); ++r) {
    unsigned c = pivots_[r];
    if (vec[c] == Felt::kZeroCode) continue;
    std::uint32_t f = vec[c];
    for (unsigned j = c; j < cols_; ++j) {
      vec[j] = t.sub_code(vec[j], t.mul_code(f, at(r, j)));
    }
  }
}

std::vector<std::vector<std::uint32_t>> GfMat::null_space() {
  const FieldTower& t = *tower_;
  unsigned rank = rref();
  std::vector<bool> is_pivot(cols_, false);
  for (unsigned c : pivots_) is_pivot[c] = true;
  std::vector<std::vector<std::uint32_t>> basis;
  for (unsigned free = 0; free < cols_; ++free) {
    if (is_pivot[free]) continue;
    std::vector<std::uint32_t> v(cols_, Felt::kZeroCode);
    v[free] = 0;  // the element 1
    for (unsigned r = 0; r < rank; ++r) {
      v[pivots_[r]] = t.neg_code(at(r, free));
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<std::vector<std::uint32_t>> GfMat::solve(const std::vector<std::uint32_t>& b) {
  // Augment, eliminate, read a particular solution off the pivots.
  GfMat aug(*tower_, rows_, cols_ + 1);
  for (unsigned r = 0; r < rows_; ++r) {
    for (unsigned c = 0; c < cols_; ++c) aug.at(r, c) = at(r, c);
    aug.at(r, cols_) = b[r];
  }
  unsigned rank = aug.rref();
  for (unsigned r = 0; r < rank; ++r) {
    if (aug.pivot_cols()[r] == cols_) return std::nullopt;  // pivot in the rhs column
  }
  std::vector<std::uint32_t> x(cols_, Felt::kZeroCode);
  for (unsigned r = 0; r < rank; ++r) {
    x[aug.pivot_cols()[r]] = aug.at(r, cols_);
  }
  return x;
}

}  // namespace orbitcodes
