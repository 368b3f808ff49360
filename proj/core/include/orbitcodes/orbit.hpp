#pragma once

#include <cstdint>
#include <map>

#include "orbitcodes/subspace.hpp"

namespace orbitcodes {

// Visits one scalar per coset of F_q* in F_{q^n}*, i.e. g^e for
// e < (q^n-1)/(q-1). Since alpha*S depends only on alpha*F_q* this covers
// every distinct orbit member exactly once.
template <typename Fn>
void for_each_projective_scalar(const FieldTower& tower, Fn&& fn) {
  std::uint64_t cosets = (tower.order() - 1) / (tower.q() - 1);
  for (std::uint64_t e = 0; e < cosets; ++e) fn(tower.from_exponent(e));
}

// |Orb(S)| = (q^n-1)/(q^d-1) with d the linearity field of S.
std::uint64_t orbit_size(const Subspace& s);

struct MinDistanceResult {
  unsigned distance = 0;
  unsigned max_intersection = 0;  // max dim(S cap alpha*S) over alpha*S != S
  Felt witness;                   // a maximizing alpha
};

// Minimum distance of Orb(S): 2k - 2*max dim(S cap alpha*S). Errors on an
// orbit of size 1, where the minimum is over an empty set.
MinDistanceResult min_distance_detail(const Subspace& s);
unsigned min_distance(const Subspace& s);

// The orbit member with lexicographically smallest serialization; two
// subspaces lie in the same orbit iff their canonical reps are equal.
Subspace canonical_orbit_rep(const Subspace& s);

// Histogram of d(S, T) over the distinct orbit members T != S. Guarded by
// an orbit-size bound.
std::map<unsigned, std::uint64_t> distance_distribution(const Subspace& s,
                                                        std::uint64_t max_orbit = 1u << 16);

struct OrbitCode {
  Subspace rep;  // canonical orbit representative
  std::uint64_t size = 0;
  unsigned min_distance = 0;
  unsigned k = 0, n = 0;

  static OrbitCode analyze(const Subspace& s);
};

}  // namespace orbitcodes
