#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "orbitcodes/orbit.hpp"
#include "orbitcodes/subspace.hpp"

namespace orbitcodes {

// The five classes of 3-dimensional subspaces, by the shape of a
// representative of the orbit:
//   I   S = mu*F_{q^3}                 (dim S^2 = 3, min distance 6)
//   II  S = mu<1,lambda,lambda^2>, deg(lambda) = 4   (dim S^2 = 4)
//   III S = mu<1,lambda,lambda^2>, deg(lambda) > 4   (dim S^2 = 5, w_2 = 0)
//   IV  S = omega*F_{q^2} + <mu>                     (dim S^2 = 5, w_2 = 1)
//   V   S is a Sidon space             (dim S^2 = 6, min distance 4)
enum class Family { I, II, III, IV, V };

const char* family_name(Family f);

// Polynomial-basis form S = mu * <1, lambda, lambda^2>.
struct PolyBasis {
  Felt mu, lambda;
};

// Line-plus-point form S = omega*F_{q^2} + <mu>.
struct LinePlusPoint {
  Felt omega, mu;
};

struct FamilyLabel {
  Family family = Family::V;
  std::optional<Felt> mu;             // family I
  std::optional<PolyBasis> poly;      // families II, III
  std::optional<LinePlusPoint> line;  // family IV
  unsigned lambda_degree = 0;         // deg of poly->lambda over F_q, when present
  InvariantProfile profile;

  // Re-spans the witness generators and compares with s.
  bool reconstructs(const Subspace& s) const;
};

// Witness of semilinear equivalence: first = alpha * aut_image(second, sigma).
struct EquivWitness {
  Felt alpha;
  FieldAut sigma;
};

bool witness_checks(const EquivWitness& w, const Subspace& first, const Subspace& second);

// Classifies a 3-dimensional subspace into exactly one family, with
// reconstruction witnesses. Decision order: linearity field first, then the
// square-span dimension, then w_2 (families III/IV split; IV needs 2 | n).
FamilyLabel classify3(const Subspace& s);

// Searches for (mu, lambda) with s = mu*<1, lambda, lambda^2>: normalizes
// T = inv(m)*s over projective representatives m of s and scans lambda in T
// with lambda^2 in T. Deterministic first hit.
std::optional<PolyBasis> find_poly_basis(const Subspace& s);

// Brute-force semilinear equivalence: compares canonical orbit reps across
// every automorphism, then recovers alpha by scanning projective
// representatives. Returns a verified witness or nullopt.
std::optional<EquivWitness> equivalent(const Subspace& s1, const Subspace& s2);

// Fast test for polynomial-basis subspaces with deg(lambda) > 4: equivalent
// iff some automorphism sends the second lambda to an F_q-fractional-linear
// image of the first. The returned witness is rebuilt from the fraction's
// denominator and re-verified.
std::optional<EquivWitness> equivalent_poly_fast(const Subspace& s1, const PolyBasis& w1,
                                                 const Subspace& s2, const PolyBasis& w2);

// Fast test for family-IV subspaces omega*F_{q^2} + <mu>: after normalizing
// omega away, equivalent iff mu1 = a + c*mu2^sigma with a in F_{q^2} and c
// in F_{q^2}*.
std::optional<EquivWitness> equivalent_famIV_fast(const Subspace& s1, const LinePlusPoint& w1,
                                                  const Subspace& s2, const LinePlusPoint& w2);

// Gaussian binomial [n choose k]_q: the number of k-dimensional subspaces.
std::uint64_t gaussian_binomial(std::uint64_t q, unsigned n, unsigned k);

// Enumerates every k-dimensional subspace of F_{q^n} exactly once, via
// reduced echelon matrices (pivot sets in lexicographic order, free entries
// in subfield-element order).
void for_each_rref_subspace(const FieldTower& tower, unsigned k,
                            const std::function<void(const Subspace&)>& fn);

struct CensusOptions {
  std::uint64_t enumeration_cap = 2'000'000;  // max subspace count
  unsigned jobs = 1;                          // worker threads for per-class analyses
};

struct CensusClassRow {
  std::vector<std::uint64_t> representative;  // canonical rep serialization
  Family family = Family::V;
  std::uint64_t orbit_size = 0;
  unsigned min_distance = 0;
  std::map<unsigned, unsigned> delta, w;
  std::uint64_t orbit_count = 0;  // orbits merged into this class
};

struct CensusReport {
  TowerSpec tower;
  std::uint64_t subspace_count = 0;  // Gaussian binomial, checked against the walk
  std::uint64_t orbit_count = 0;
  std::map<Family, std::uint64_t> family_orbit_counts;
  std::map<unsigned, std::uint64_t> class_counts_by_distance;
  std::vector<CensusClassRow> classes;  // sorted by representative

  // Bounds on the number of inequivalent minimum-distance-2 classes,
  // evaluated when n is odd.
  bool bounds_apply = false;
  std::uint64_t distance2_class_count = 0;
  double lower_bound = 0, upper_bound = 0;
  bool lower_bound_attained = false;
};

// Exhaustive census of G_q(n,3): enumerates subspaces, buckets them into
// orbits by walking scalar images, merges orbits into semilinear classes by
// applying every automorphism, classifies each class and evaluates the
// class-count bounds. Deterministic for a fixed tower.
CensusReport census(const FieldTower& tower, const CensusOptions& options = {});

std::string census_csv(const CensusReport& report);

}  // namespace orbitcodes
