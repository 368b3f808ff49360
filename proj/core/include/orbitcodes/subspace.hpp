#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "orbitcodes/gf.hpp"

namespace orbitcodes {

// An F_q-subspace of F_{q^n}, held as a k x n matrix over F_q in reduced
// row-echelon form with respect to the {1, g, ..., g^(n-1)} coordinate
// basis. The echelon form is unique per subspace, so equality is row-matrix
// equality and the serialization below is canonical. Immutable.
class Subspace {
 public:
  static Subspace zero(const FieldTower& tower);
  // F_q-span of the given elements; duplicates and dependent generators
  // collapse.
  static Subspace span(const FieldTower& tower, std::span<const Felt> gens);
  // From coordinate rows (length n over F_q); echelonizes.
  static Subspace from_coord_rows(const FieldTower& tower,
                                  const std::vector<std::vector<std::uint32_t>>& rows);

  const FieldTower& tower() const { return *tower_; }
  unsigned dim() const { return k_; }
  unsigned ambient() const { return n_; }

  Felt entry(unsigned r, unsigned c) const;
  std::uint32_t entry_code(unsigned r, unsigned c) const { return rows_[r * n_ + c]; }
  // The field element whose coordinate vector is row r.
  Felt row_element(unsigned r) const;

  // Canonical form: the element-integer encodings of the echelon rows in
  // pivot order. Used for equality, hashing, ordering and file output.
  std::vector<std::uint64_t> serialize() const;

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.tower_ == b.tower_ && a.k_ == b.k_ && a.rows_ == b.rows_;
  }

  // All q^k elements (first), or one representative per projective point
  // (second; (q^k-1)/(q-1) of them, deterministic order).
  std::vector<Felt> elements() const;
  std::vector<Felt> projective_points() const;

 private:
  Subspace(const FieldTower* tower, unsigned n) : tower_(tower), k_(0), n_(n) {}

  const FieldTower* tower_;
  unsigned k_, n_;
  std::vector<std::uint32_t> rows_;  // k*n codes, rref
};

Subspace scale(Felt alpha, const Subspace& s);
Subspace aut_image(const Subspace& s, FieldAut sigma);
Subspace sum(const Subspace& a, const Subspace& b);
Subspace intersect(const Subspace& a, const Subspace& b);
bool contains(const Subspace& s, Felt a);
// Subspace metric d(U,V) = dim U + dim V - 2 dim(U cap V); always even.
unsigned distance(const Subspace& u, const Subspace& v);

// F_q-span of all pairwise products of elements of s.
Subspace square_span(const Subspace& s);
// Closure of s under multiplication by F_{q^t}; an F_{q^t}-subspace.
Subspace field_closure(const Subspace& s, unsigned t);

// delta_t: dimension over F_{q^t} of the F_{q^t}-span of s (t | n).
unsigned delta_t(const Subspace& s, unsigned t);
// w_t: dimension over F_{q^t} of the largest F_{q^t}-subspace inside s.
unsigned w_t(const Subspace& s, unsigned t);
// Largest F_{q^t}-subspace contained in s, as an F_q-subspace.
Subspace largest_subfield_submodule(const Subspace& s, unsigned t);

// Largest d | n with lambda*s = s for a generator lambda of F_{q^d};
// controls the orbit size. Rejects the zero subspace.
unsigned linearity_field(const Subspace& s);

// Sidon test: products of pairs of projective points must land in pairwise
// distinct multiplicative cosets of F_q* (diagonal pairs included). For
// k = 3 this is equivalent to dim(s^2) = 6.
bool is_sidon(const Subspace& s);

// For hyperplanes H1, H2 (dim n-1), returns xi with H2 = xi*H1. Such xi
// always exists.
Felt hyperplane_scalar(const Subspace& h1, const Subspace& h2);

struct InvariantProfile {
  unsigned dim_square = 0;
  std::map<unsigned, unsigned> delta;  // t | n -> delta_t
  std::map<unsigned, unsigned> w;      // t | n -> w_t
  unsigned linearity_degree = 0;
  bool sidon = false;

  friend bool operator==(const InvariantProfile&, const InvariantProfile&) = default;
};

// Full profile of a nonzero subspace; every entry is invariant under
// semilinear equivalence.
InvariantProfile invariant_profile(const Subspace& s);

}  // namespace orbitcodes
