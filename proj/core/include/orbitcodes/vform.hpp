#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "orbitcodes/subspace.hpp"

namespace orbitcodes {

// A q-polynomial f(x) = a0*x + a1*x^q + a2*x^(q^2) with coefficients in
// F_{q^3}; evaluation is F_q-linear on F_{q^3}.
class QPoly {
 public:
  QPoly(Felt a0, Felt a1, Felt a2);

  Felt a0() const { return a0_; }
  Felt a1() const { return a1_; }
  Felt a2() const { return a2_; }
  const FieldTower& tower() const { return a0_.tower(); }

  Felt eval(Felt u) const;

  static QPoly zero(const FieldTower& t);
  static QPoly x_q(const FieldTower& t);           // f(x) = x^q
  static QPoly trace(const FieldTower& t);         // f(x) = x + x^q + x^(q^2)

 private:
  Felt a0_, a1_, a2_;
};

// V_{f,gamma} = {u + gamma*f(u) : u in F_{q^3}}, a 3-dimensional subspace of
// F_{q^n} with delta_3 <= 2 (equality unless f is a scalar multiple of x).
struct VForm {
  QPoly f;
  Felt gamma;
  Subspace subspace;
};

// Requires 3 | n and gamma outside F_{q^3}.
VForm build_v(const QPoly& f, Felt gamma);

// For S with delta_3(S) = 2: a line representative xi with
// xi*F_{q^3} inside the F_{q^3}-span of S and S cap xi*F_{q^3} = {0}.
// Guaranteed to exist; deterministic first hit over the q^3+1 lines.
Felt find_complement_line(const Subspace& s);

struct VDecomposition {
  Felt rho, lambda;  // span_{F_{q^3}}(S) = rho*F_{q^3} + lambda*F_{q^3}
  QPoly f;
  Felt gamma;        // lambda / rho; build_v(f, gamma) realizes rho^(-1) * S
};

// Writes S = {rho*u + lambda*f(u)} with lambda the complement line; verifies
// the rebuilt subspace before returning.
VDecomposition decompose(const Subspace& s);

// The unique f of q-degree <= 2 with f(u_i) = v_i, for u_i an F_q-basis of
// F_{q^3} (Moore-matrix solve).
QPoly interpolate_qpoly(std::span<const std::pair<Felt, Felt>> pairs, const FieldTower& tower);

// A 3-dimensional F_q-subspace of the pair space F_{q^3} x F_{q^3}, held in
// reduced echelon form over the six F_q-coordinates.
class USpace {
 public:
  static USpace from_pairs(const FieldTower& tower, std::span<const std::pair<Felt, Felt>> pairs);
  static USpace graph(const QPoly& f);  // {(u, f(u))}

  const FieldTower& tower() const { return *tower_; }
  unsigned dim() const { return dim_; }
  std::vector<std::pair<Felt, Felt>> basis_pairs() const;

  friend bool operator==(const USpace& a, const USpace& b) {
    return a.tower_ == b.tower_ && a.dim_ == b.dim_ && a.rows_ == b.rows_;
  }

 private:
  friend USpace uspace_aut_image(const USpace&, FieldAut);
  USpace() = default;
  const FieldTower* tower_ = nullptr;
  unsigned dim_ = 0;
  std::vector<std::uint32_t> rows_;  // dim x 6 codes
};

USpace uspace_aut_image(const USpace& u, FieldAut sigma);
// Right action by A = (c d; a b): (w1, w2) -> (w1*c + w2*a, w1*d + w2*b).
USpace uspace_right_mul(const USpace& u, Felt c, Felt d, Felt a, Felt b);

// N_i = number of F_{q^3}-lines of the pair space meeting U in F_q-dimension
// exactly i; N0+N1+N2+N3 = q^3+1. U is scattered iff N2 = N3 = 0.
struct WeightSpectrum {
  std::array<std::uint64_t, 4> n{};

  friend bool operator==(const WeightSpectrum&, const WeightSpectrum&) = default;
};

WeightSpectrum weight_spectrum(const USpace& u);

enum class VKind { XqClass, TraceClass };

const char* vkind_name(VKind k);

struct VClassification {
  VKind kind;
  VDecomposition decomposition;
  WeightSpectrum spectrum;
};

// Decides whether S (with delta_3 = 2) is equivalent to V_{x^q, gamma} or to
// V_{Tr, gamma}: the graph subspace U_f is scattered exactly in the x^q
// class, and the weight spectrum is an equivalence invariant.
VClassification classify_v(const Subspace& s);

// Sidon criterion for the two template families. Always true for n > 6; for
// n = 6 the x^q class needs N(gamma) != 1 and the trace class
// Tr(gamma) != -2, both down to F_q (with -2 read in the prime field).
bool sidon_v(VKind kind, Felt gamma);

// Witness for V1 = lambda * V2^sigma in the pair-space formulation:
// gamma1 = (a + b*gamma2^sigma) / (c + d*gamma2^sigma),
// lambda = 1 / (c + d*gamma2^sigma), and U2^sigma = U1 * A.
struct PairSpaceWitness {
  Felt c, d, a, b;
  FieldAut sigma;
  Felt lambda;
};

// Searches (sigma, A) for the pair-space equivalence. The first matrix row
// (c, d) is scanned projectively; the ratio condition then pins (a, b), and
// the lost scalar is recovered from the U-space condition, so the search
// covers all of GL(2, q^3) at projective cost. The witness is re-verified on
// the realized subspaces before it is returned.
std::optional<PairSpaceWitness> pair_space_equivalent(const VForm& v1, const VForm& v2);

}  // namespace orbitcodes
