#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "orbitcodes/error.hpp"

namespace orbitcodes {

class FieldTower;

// An automorphism of the top field: x -> x^(p^power). The full automorphism
// group of F_{p^(h*n)} has exactly h*n members; `power` is taken mod h*n.
struct FieldAut {
  unsigned power = 0;

  friend bool operator==(FieldAut, FieldAut) = default;
};

// A field element, stored as a discrete logarithm with respect to the
// primitive root of its tower, or as the distinguished zero value. Cheap to
// copy; the tower must outlive every element drawn from it.
class Felt {
 public:
  Felt() = default;

  bool is_zero() const { return code_ == kZeroCode; }
  const FieldTower& tower() const;

  // Base-p integer encoding of the coordinate vector in the power basis of
  // the modulus (zero -> 0). This is the on-disk element format.
  std::uint64_t encoding() const;

  Felt operator+(Felt rhs) const;
  Felt operator-(Felt rhs) const;
  Felt operator*(Felt rhs) const;
  Felt operator/(Felt rhs) const;
  Felt operator-() const;
  Felt inv() const;
  Felt pow(std::uint64_t e) const;

  Felt& operator+=(Felt rhs) { return *this = *this + rhs; }
  Felt& operator-=(Felt rhs) { return *this = *this - rhs; }
  Felt& operator*=(Felt rhs) { return *this = *this * rhs; }
  Felt& operator/=(Felt rhs) { return *this = *this / rhs; }

  friend bool operator==(Felt a, Felt b) {
    return a.tower_ == b.tower_ && a.code_ == b.code_;
  }

  // Exponent code; kZeroCode for zero. Low-level accessor used by the
  // linear-algebra layer.
  std::uint32_t code() const { return code_; }

  static constexpr std::uint32_t kZeroCode = 0xffffffffu;

 private:
  friend class FieldTower;
  Felt(const FieldTower* tower, std::uint32_t code) : tower_(tower), code_(code) {}

  const FieldTower* tower_ = nullptr;
  std::uint32_t code_ = kZeroCode;
};

// Exact arithmetic in the tower F_p <= F_q = F_{p^h} <= F_{q^t} <= F_{q^n}.
//
// The top field F_{p^(h*n)} is realized as F_p[x]/(modulus) with a primitive
// modulus, so the residue g of x generates the multiplicative group. All
// subfields live inside it as exponent subgroups; F_q is never a separate
// object. Construction builds complete log/antilog tables, which makes
// multiplication and inversion O(1) and addition a table round-trip.
//
// A tower is immutable after construction and safe to share across threads.
class FieldTower {
 public:
  static constexpr std::uint64_t kDefaultSizeCap = std::uint64_t{1} << 24;

  // Builds the tower. When `modulus` is omitted the deterministic default is
  // chosen: the primitive polynomial whose coefficient tuple
  // (c_{hn-1},...,c_0), read as a base-p integer, is smallest. A supplied
  // modulus is given by its coefficients c_0..c_{hn} (monic, c_{hn} = 1) and
  // must be primitive.
  FieldTower(std::uint64_t p, unsigned h, unsigned n,
             std::optional<std::vector<std::uint32_t>> modulus = std::nullopt,
             std::uint64_t size_cap = kDefaultSizeCap);

  FieldTower(const FieldTower&) = delete;
  FieldTower& operator=(const FieldTower&) = delete;

  std::uint64_t p() const { return p_; }
  unsigned h() const { return h_; }
  unsigned n() const { return n_; }
  unsigned top_degree() const { return m_; }       // h*n
  std::uint64_t q() const { return q_; }           // p^h
  std::uint64_t order() const { return order_; }   // p^(h*n)
  std::uint64_t q_pow(unsigned t) const;           // q^t, t <= n
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }
  const std::vector<unsigned>& divisors_of_n() const { return divisors_n_; }
  unsigned aut_count() const { return m_; }

  Felt zero() const { return Felt(this, Felt::kZeroCode); }
  Felt one() const { return Felt(this, 0); }
  Felt generator() const { return from_exponent(1); }
  Felt from_exponent(std::uint64_t e) const { return Felt(this, static_cast<std::uint32_t>(e % (order_ - 1))); }
  Felt from_int(std::uint64_t v) const;  // v mod p embedded in the prime field
  Felt from_encoding(std::uint64_t packed) const;
  std::uint64_t encoding(Felt a) const;

  // Generator of the multiplicative group of the subfield of order p^m
  // (m | h*n), namely g^((p^(hn)-1)/(p^m-1)).
  Felt subfield_generator(unsigned m) const;
  // Generator of F_{q^t} over F_q (t | n); has degree exactly t over F_q.
  Felt subfield_generator_rel(unsigned t) const { return subfield_generator(h_ * t); }

  bool in_subfield(Felt a, unsigned m) const;       // order-p^m subfield, m | h*n
  bool in_subfield_rel(Felt a, unsigned t) const {  // F_{q^t}, t | n
    return in_subfield(a, h_ * t);
  }

  FieldAut compose(FieldAut a, FieldAut b) const { return FieldAut{(a.power + b.power) % m_}; }

  // Smallest t | n with a^(q^t) = a; the degree of F_q(a) over F_q.
  // degree(0) is defined as 1.
  unsigned degree_over_base(Felt a) const;

  Felt frobenius(Felt a, FieldAut s) const;

  // Relative trace / norm from F_{q^from} down to F_{q^to}; requires
  // to | from | n and a in F_{q^from}.
  Felt rel_trace(Felt a, unsigned from, unsigned to) const;
  Felt rel_norm(Felt a, unsigned from, unsigned to) const;

  // Coordinates with respect to the ordered F_q-basis {1, g, ..., g^(n-1)}
  // of F_{q^n}; entries lie in F_q. uncoords is the inverse.
  std::vector<Felt> coords(Felt a) const;
  Felt uncoords(std::span<const Felt> v) const;
  void coords_codes(std::uint32_t code, std::uint32_t* out) const;  // fast path

  // All elements of F_{q^t}: zero first, then powers of the subfield
  // generator in exponent order. Deterministic.
  std::vector<Felt> subfield_elements(unsigned t) const;

  // Code-level arithmetic; codes are exponents or Felt::kZeroCode.
  std::uint32_t add_code(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t sub_code(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t mul_code(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t neg_code(std::uint32_t a) const;
  std::uint32_t inv_code(std::uint32_t a) const;

  bool same_tower(const FieldTower& other) const { return this == &other; }

 private:
  bool try_build_tables(const std::vector<std::uint32_t>& modulus);
  void build_coord_basis();
  std::uint64_t pack(std::span<const std::uint32_t> digits) const;
  void unpack(std::uint64_t v, std::span<std::uint32_t> digits) const;

  std::uint64_t p_ = 0;
  unsigned h_ = 0, n_ = 0, m_ = 0;
  std::uint64_t q_ = 0, order_ = 0;
  std::vector<std::uint32_t> modulus_;          // c_0..c_m, monic
  std::vector<std::uint32_t> antilog_;          // exponent -> packed coords
  std::vector<std::uint32_t> log_;              // packed coords -> exponent
  std::vector<std::uint64_t> p_pow_mod_;        // p^j mod (order-1), j < m
  std::vector<std::uint64_t> q_pows_;           // q^t, t <= n
  std::vector<unsigned> divisors_n_;
  std::vector<std::uint32_t> basis_inverse_;    // m x m over F_p, row-major
  std::vector<std::uint32_t> w_pow_codes_;      // codes of w^a, a < h
};

// Serialized tower description {p, h, n, modulus}; `modulus` lists
// c_0..c_{hn}. Matches the on-disk format bit for bit.
struct TowerSpec {
  std::uint64_t p = 0;
  unsigned h = 0, n = 0;
  std::vector<std::uint32_t> modulus;
};

TowerSpec tower_spec(const FieldTower& tower);

}  // namespace orbitcodes
