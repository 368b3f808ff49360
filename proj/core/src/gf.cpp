#include "orbitcodes/gf.hpp"

#include <algorithm>
#include <cassert>

namespace orbitcodes {

namespace {

bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

// p^e, or nullopt on overflow past `cap`.
std::optional<std::uint64_t> checked_pow(std::uint64_t p, unsigned e, std::uint64_t cap) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (r > cap / p) return std::nullopt;
    r *= p;
  }
  return r;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

}  // namespace

const FieldTower& Felt::tower() const {
  if (tower_ == nullptr) throw ValidationError("element has no tower");
  return *tower_;
}

std::uint64_t Felt::encoding() const { return tower().encoding(*this); }

Felt Felt::operator+(Felt rhs) const {
  const FieldTower& t = tower();
  if (rhs.tower_ != tower_) throw ValidationError("elements from mixed towers");
  return Felt(tower_, t.add_code(code_, rhs.code_));
}

Felt Felt::operator-(Felt rhs) const {
  const FieldTower& t = tower();
  if (rhs.tower_ != tower_) throw ValidationError("elements from mixed towers");
  return Felt(tower_, t.sub_code(code_, rhs.code_));
}

Felt Felt::operator*(Felt rhs) const {
  const FieldTower& t = tower();
  if (rhs.tower_ != tower_) throw ValidationError("elements from mixed towers");
  return Felt(tower_, t.mul_code(code_, rhs.code_));
}

Felt Felt::operator/(Felt rhs) const { return *this * rhs.inv(); }

Felt Felt::operator-() const { return Felt(tower_, tower().neg_code(code_)); }

Felt Felt::inv() const { return Felt(tower_, tower().inv_code(code_)); }

Felt Felt::pow(std::uint64_t e) const {
  const FieldTower& t = tower();
  if (is_zero()) return e == 0 ? t.one() : t.zero();
  return Felt(tower_, static_cast<std::uint32_t>(mulmod(code_, e, t.order() - 1)));
}

FieldTower::FieldTower(std::uint64_t p, unsigned h, unsigned n,
                       std::optional<std::vector<std::uint32_t>> modulus,
                       std::uint64_t size_cap) {
  if (!is_prime(p)) throw ValidationError("characteristic p is not prime");
  if (h == 0 || n == 0) throw ValidationError("extension degrees must be positive");
  p_ = p;
  h_ = h;
  n_ = n;
  m_ = h * n;
  if (size_cap > (std::uint64_t{1} << 31)) size_cap = std::uint64_t{1} << 31;
  auto ord = checked_pow(p, m_, size_cap);
  if (!ord) throw CapError("field order p^(h*n) exceeds the size cap");
  order_ = *ord;
  if (order_ < 2) throw ValidationError("degenerate field order");
  q_ = *checked_pow(p, h, size_cap);

  q_pows_.resize(n_ + 1);
  q_pows_[0] = 1;
  for (unsigned t = 1; t <= n_; ++t) q_pows_[t] = q_pows_[t - 1] * q_;

  for (unsigned d = 1; d <= n_; ++d) {
    if (n_ % d == 0) divisors_n_.push_back(d);
  }

  p_pow_mod_.resize(m_);
  p_pow_mod_[0] = 1 % (order_ - 1);
  for (unsigned j = 1; j < m_; ++j) p_pow_mod_[j] = mulmod(p_pow_mod_[j - 1], p_, order_ - 1);

  if (modulus) {
    if (modulus->size() != m_ + 1) throw ValidationError("modulus degree must equal h*n");
    for (std::uint32_t c : *modulus) {
      if (c >= p_) throw ValidationError("modulus coefficient outside F_p");
    }
    if (modulus->back() != 1) throw ValidationError("modulus must be monic");
    if (!try_build_tables(*modulus)) throw ValidationError("supplied modulus is not primitive");
    modulus_ = std::move(*modulus);
  } else {
    // Default modulus: scan coefficient tuples in base-p order and take the
    // first primitive one. This makes every downstream serialization
    // reproducible across runs and machines.
    std::vector<std::uint32_t> cand(m_ + 1, 0);
    cand[m_] = 1;
    bool found = false;
    for (std::uint64_t v = 0; v < order_; ++v) {
      unpack(v, std::span<std::uint32_t>(cand.data(), m_));
      if (try_build_tables(cand)) {
        modulus_ = cand;
        found = true;
        break;
      }
    }
    if (!found) throw Error("no primitive polynomial found");  // unreachable
  }

  build_coord_basis();
}

// Attempts to build the log/antilog tables for the candidate modulus. The
// residue of x is primitive iff its power sequence visits order-1 distinct
// values and returns to 1 exactly at step order-1; that walk doubles as the
// table fill.
bool FieldTower::try_build_tables(const std::vector<std::uint32_t>& modulus) {
  const std::uint32_t unset = 0xffffffffu;
  antilog_.assign(order_ - 1, 0);
  log_.assign(order_, unset);

  std::vector<std::uint32_t> val(m_, 0);
  val[0] = 1;
  for (std::uint64_t e = 0; e < order_ - 1; ++e) {
    std::uint64_t packed = pack(val);
    if (packed == 0 || log_[packed] != unset) return false;  // hit zero or cycled early
    log_[packed] = static_cast<std::uint32_t>(e);
    antilog_[e] = static_cast<std::uint32_t>(packed);
    // multiply by x and reduce: x^m = -(c_0 + ... + c_{m-1} x^{m-1})
    std::uint32_t carry = val[m_ - 1];
    for (unsigned i = m_ - 1; i > 0; --i) val[i] = val[i - 1];
    val[0] = 0;
    if (carry != 0) {
      for (unsigned i = 0; i < m_; ++i) {
        std::uint64_t sub = (static_cast<std::uint64_t>(carry) * modulus[i]) % p_;
        val[i] = static_cast<std::uint32_t>((val[i] + p_ - sub) % p_);
      }
    }
  }
  return pack(val) == 1;  // x^(order-1) must land back on 1
}

// Inverts the F_p-basis {w^a g^b : a < h, b < n} of the top field, where w
// generates F_q*. coords() runs elements through this inverse to read off
// their F_q-coordinates in the power basis of g.
void FieldTower::build_coord_basis() {
  std::uint64_t w_exp = (order_ - 1) / (q_ - 1);
  w_pow_codes_.resize(h_);
  for (unsigned a = 0; a < h_; ++a) {
    w_pow_codes_[a] = static_cast<std::uint32_t>((w_exp * a) % (order_ - 1));
  }

  // Augmented [B | I] over F_p, columns of B indexed by b*h + a.
  const unsigned m = m_;
  std::vector<std::uint32_t> mat(m * 2 * m, 0);
  auto at = [&](unsigned r, unsigned c) -> std::uint32_t& { return mat[r * 2 * m + c]; };
  std::vector<std::uint32_t> digits(m);
  for (unsigned b = 0; b < n_; ++b) {
    for (unsigned a = 0; a < h_; ++a) {
      std::uint64_t e = (w_exp * a + b) % (order_ - 1);
      unpack(antilog_[e], digits);
      for (unsigned r = 0; r < m; ++r) at(r, b * h_ + a) = digits[r];
    }
  }
  for (unsigned r = 0; r < m; ++r) at(r, m + r) = 1;

  // Gauss-Jordan over F_p.
  auto inv_mod_p = [&](std::uint64_t a) {
    // Fermat; p is prime.
    std::uint64_t r = 1, base = a % p_, e = p_ - 2;
    while (e) {
      if (e & 1) r = r * base % p_;
      base = base * base % p_;
      e >>= 1;
    }
    return r;
  };
  unsigned row = 0;
  for (unsigned col = 0; col < m && row < m; ++col) {
    unsigned piv = row;
    while (piv < m && at(piv, col) == 0) ++piv;
    if (piv == m) continue;
    if (piv != row) {
      for (unsigned c = 0; c < 2 * m; ++c) std::swap(at(piv, c), at(row, c));
    }
    std::uint64_t s = inv_mod_p(at(row, col));
    for (unsigned c = 0; c < 2 * m; ++c) at(row, c) = static_cast<std::uint32_t>(at(row, c) * s % p_);
    for (unsigned r = 0; r < m; ++r) {
      if (r == row || at(r, col) == 0) continue;
      std::uint64_t f = at(r, col);
      for (unsigned c = 0; c < 2 * m; ++c) {
        at(r, c) = static_cast<std::uint32_t>((at(r, c) + (p_ - f) * at(row, c)) % p_);
      }
    }
    ++row;
  }
  if (row != m) throw Error("coordinate basis is singular");  // unreachable

  basis_inverse_.resize(m * m);
  for (unsigned r = 0; r < m; ++r) {
    for (unsigned c = 0; c < m; ++c) basis_inverse_[r * m + c] = at(r, m + c);
  }
}

std::uint64_t FieldTower::pack(std::span<const std::uint32_t> digits) const {
  std::uint64_t v = 0;
  for (unsigned i = m_; i > 0; --i) v = v * p_ + digits[i - 1];
  return v;
}

void FieldTower::unpack(std::uint64_t v, std::span<std::uint32_t> digits) const {
  for (unsigned i = 0; i < m_; ++i) {
    digits[i] = static_cast<std::uint32_t>(v % p_);
    v /= p_;
  }
}

std::uint64_t FieldTower::q_pow(unsigned t) const {
  if (t > n_) throw ValidationError("q_pow exponent exceeds n");
  return q_pows_[t];
}

Felt FieldTower::from_int(std::uint64_t v) const {
  v %= p_;
  if (v == 0) return zero();
  std::uint32_t code = log_[v];  // prime-field elements pack to single digits
  return Felt(this, code);
}

Felt FieldTower::from_encoding(std::uint64_t packed) const {
  if (packed >= order_) throw ValidationError("element encoding out of range");
  if (packed == 0) return zero();
  return Felt(this, log_[packed]);
}

std::uint64_t FieldTower::encoding(Felt a) const {
  if (&a.tower() != this) throw ValidationError("element from another tower");
  if (a.is_zero()) return 0;
  return antilog_[a.code()];
}

Felt FieldTower::subfield_generator(unsigned m) const {
  if (m == 0 || m_ % m != 0) throw PreconditionError("subfield degree does not divide h*n");
  std::uint64_t pm = 1;
  for (unsigned i = 0; i < m; ++i) pm *= p_;
  return from_exponent((order_ - 1) / (pm - 1));
}

bool FieldTower::in_subfield(Felt a, unsigned m) const {
  if (m == 0 || m_ % m != 0) throw PreconditionError("subfield degree does not divide h*n");
  if (a.is_zero()) return true;
  std::uint64_t pm = 1;
  for (unsigned i = 0; i < m; ++i) pm *= p_;
  return a.code() % ((order_ - 1) / (pm - 1)) == 0;
}

unsigned FieldTower::degree_over_base(Felt a) const {
  if (a.is_zero()) return 1;
  for (unsigned t : divisors_n_) {
    if (in_subfield_rel(a, t)) return t;
  }
  return n_;  // unreachable: n is a divisor of itself
}

Felt FieldTower::frobenius(Felt a, FieldAut s) const {
  if (a.is_zero()) return a;
  std::uint64_t e = mulmod(a.code(), p_pow_mod_[s.power % m_], order_ - 1);
  return Felt(this, static_cast<std::uint32_t>(e));
}

Felt FieldTower::rel_trace(Felt a, unsigned from, unsigned to) const {
  if (to == 0 || from == 0 || from % to != 0 || n_ % from != 0)
    throw PreconditionError("trace levels must satisfy to | from | n");
  if (!in_subfield_rel(a, from)) throw PreconditionError("element outside the source subfield");
  Felt acc = zero();
  for (unsigned i = 0; i < from / to; ++i) {
    acc += frobenius(a, FieldAut{(h_ * to * i) % m_});
  }
  return acc;
}

Felt FieldTower::rel_norm(Felt a, unsigned from, unsigned to) const {
  if (to == 0 || from == 0 || from % to != 0 || n_ % from != 0)
    throw PreconditionError("norm levels must satisfy to | from | n");
  if (!in_subfield_rel(a, from)) throw PreconditionError("element outside the source subfield");
  if (a.is_zero()) return zero();
  return a.pow((q_pow(from) - 1) / (q_pow(to) - 1));
}

std::vector<Felt> FieldTower::coords(Felt a) const {
  std::vector<std::uint32_t> codes(n_);
  coords_codes(a.code(), codes.data());
  std::vector<Felt> out;
  out.reserve(n_);
  for (unsigned b = 0; b < n_; ++b) out.push_back(Felt(this, codes[b]));
  return out;
}

void FieldTower::coords_codes(std::uint32_t code, std::uint32_t* out) const {
  if (code == Felt::kZeroCode) {
    for (unsigned b = 0; b < n_; ++b) out[b] = Felt::kZeroCode;
    return;
  }
  std::vector<std::uint32_t> digits(m_), y(m_, 0);
  unpack(antilog_[code], digits);
  for (unsigned r = 0; r < m_; ++r) {
    std::uint64_t acc = 0;
    for (unsigned c = 0; c < m_; ++c) acc += static_cast<std::uint64_t>(basis_inverse_[r * m_ + c]) * digits[c];
    y[r] = static_cast<std::uint32_t>(acc % p_);
  }
  // Block b holds the F_p-digits of the F_q coordinate over {w^a}.
  for (unsigned b = 0; b < n_; ++b) {
    std::uint32_t acc = Felt::kZeroCode;
    for (unsigned a = 0; a < h_; ++a) {
      std::uint32_t d = y[b * h_ + a];
      if (d == 0) continue;
      std::uint32_t term = mul_code(log_[d], w_pow_codes_[a]);
      acc = add_code(acc, term);
    }
    out[b] = acc;
  }
}

Felt FieldTower::uncoords(std::span<const Felt> v) const {
  if (v.size() != n_) throw ValidationError("coordinate vector length must equal n");
  Felt acc = zero();
  Felt g = generator();
  Felt gp = one();
  for (unsigned b = 0; b < n_; ++b) {
    if (&v[b].tower() != this) throw ValidationError("elements from mixed towers");
    if (!in_subfield_rel(v[b], 1)) throw ValidationError("coordinate entry outside F_q");
    acc += v[b] * gp;
    gp *= g;
  }
  return acc;
}

std::vector<Felt> FieldTower::subfield_elements(unsigned t) const {
  if (t == 0 || n_ % t != 0) throw PreconditionError("t must divide n");
  std::uint64_t sz = q_pow(t);
  std::vector<Felt> out;
  out.reserve(sz);
  out.push_back(zero());
  std::uint64_t step = (order_ - 1) / (sz - 1);
  for (std::uint64_t j = 0; j < sz - 1; ++j) out.push_back(from_exponent(step * j));
  return out;
}

std::uint32_t FieldTower::add_code(std::uint32_t a, std::uint32_t b) const {
  if (a == Felt::kZeroCode) return b;
  if (b == Felt::kZeroCode) return a;
  std::uint64_t pa = antilog_[a], pb = antilog_[b];
  std::uint64_t sum;
  if (p_ == 2) {
    sum = pa ^ pb;
  } else {
    sum = 0;
    std::uint64_t place = 1;
    for (unsigned i = 0; i < m_; ++i) {
      sum += ((pa % p_ + pb % p_) % p_) * place;
      pa /= p_;
      pb /= p_;
      place *= p_;
    }
  }
  return sum == 0 ? Felt::kZeroCode : log_[sum];
}

std::uint32_t FieldTower::sub_code(std::uint32_t a, std::uint32_t b) const {
  return add_code(a, neg_code(b));
}

std::uint32_t FieldTower::mul_code(std::uint32_t a, std::uint32_t b) const {
  if (a == Felt::kZeroCode || b == Felt::kZeroCode) return Felt::kZeroCode;
  std::uint64_t e = a + static_cast<std::uint64_t>(b);
  if (e >= order_ - 1) e -= order_ - 1;
  return static_cast<std::uint32_t>(e);
}

std::uint32_t FieldTower::neg_code(std::uint32_t a) const {
  if (a == Felt::kZeroCode || p_ == 2) return a;
  std::uint64_t half = (order_ - 1) / 2;  // exponent of -1
  std::uint64_t e = a + half;
  if (e >= order_ - 1) e -= order_ - 1;
  return static_cast<std::uint32_t>(e);
}

std::uint32_t FieldTower::inv_code(std::uint32_t a) const {
  if (a == Felt::kZeroCode) throw ValidationError("inversion of zero");
  if (a == 0) return 0;
  return static_cast<std::uint32_t>(order_ - 1 - a);
}

TowerSpec tower_spec(const FieldTower& tower) {
  return TowerSpec{tower.p(), tower.h(), tower.n(), tower.modulus()};
}

}  // namespace orbitcodes
