#include "orbitcodes/subspace.hpp"

#include <algorithm>
#include <cassert>

#include "orbitcodes/linalg.hpp"

namespace orbitcodes {

Subspace Subspace::zero(const FieldTower& tower) { return Subspace(&tower, tower.n()); }

Subspace Subspace::from_coord_rows(const FieldTower& tower,
                                   const std::vector<std::vector<std::uint32_t>>& rows) {
  const unsigned n = tower.n();
  GfMat m(tower, static_cast<unsigned>(rows.size()), n);
  for (unsigned r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != n) throw ValidationError("coordinate row length must equal n");
    for (unsigned c = 0; c < n; ++c) m.at(r, c) = rows[r][c];
  }
  unsigned rank = m.rref();
  Subspace s(&tower, n);
  s.k_ = rank;
  s.rows_.resize(static_cast<std::size_t>(rank) * n);
  for (unsigned r = 0; r < rank; ++r) {
    for (unsigned c = 0; c < n; ++c) s.rows_[r * n + c] = m.at(r, c);
  }
  return s;
}

Subspace Subspace::span(const FieldTower& tower, std::span<const Felt> gens) {
  std::vector<std::vector<std::uint32_t>> rows;
  rows.reserve(gens.size());
  for (Felt g : gens) {
    if (!tower.same_tower(g.tower())) throw ValidationError("generators from mixed towers");
    std::vector<std::uint32_t> row(tower.n());
    tower.coords_codes(g.code(), row.data());
    rows.push_back(std::move(row));
  }
  return from_coord_rows(tower, rows);
}

Felt Subspace::entry(unsigned r, unsigned c) const {
  std::uint32_t code = rows_[r * n_ + c];
  return code == Felt::kZeroCode ? tower_->zero() : tower_->from_exponent(code);
}

Felt Subspace::row_element(unsigned r) const {
  std::vector<Felt> v;
  v.reserve(n_);
  for (unsigned c = 0; c < n_; ++c) v.push_back(entry(r, c));
  return tower_->uncoords(v);
}

std::vector<std::uint64_t> Subspace::serialize() const {
  std::vector<std::uint64_t> out;
  out.reserve(k_);
  for (unsigned r = 0; r < k_; ++r) out.push_back(row_element(r).encoding());
  return out;
}

std::vector<Felt> Subspace::elements() const {
  std::vector<Felt> fq = tower_->subfield_elements(1);
  std::vector<Felt> base;
  for (unsigned r = 0; r < k_; ++r) base.push_back(row_element(r));
  std::vector<Felt> out;
  out.reserve(1);
  std::vector<unsigned> idx(k_, 0);
  while (true) {
    Felt acc = tower_->zero();
    for (unsigned r = 0; r < k_; ++r) acc += fq[idx[r]] * base[r];
    out.push_back(acc);
    unsigned pos = 0;
    while (pos < k_ && ++idx[pos] == fq.size()) idx[pos++] = 0;
    if (pos == k_) break;
  }
  return out;
}

std::vector<Felt> Subspace::projective_points() const {
  // Coefficient vectors with first nonzero entry equal to 1, enumerated with
  // the leading position moving from the last row to the first.
  std::vector<Felt> fq = tower_->subfield_elements(1);
  std::vector<Felt> base;
  for (unsigned r = 0; r < k_; ++r) base.push_back(row_element(r));
  std::vector<Felt> out;
  for (unsigned lead = k_; lead > 0; --lead) {
    unsigned l = lead - 1;
    // coefficient of base[l] is 1; rows after l run over all of F_q
    unsigned tail = k_ - lead;
    std::vector<unsigned> idx(tail, 0);
    while (true) {
      Felt acc = base[l];
      for (unsigned r = 0; r < tail; ++r) acc += fq[idx[r]] * base[l + 1 + r];
      out.push_back(acc);
      unsigned pos = 0;
      while (pos < tail && ++idx[pos] == fq.size()) idx[pos++] = 0;
      if (pos == tail) break;
    }
  }
  return out;
}

Subspace scale(Felt alpha, const Subspace& s) {
  if (alpha.is_zero()) throw ValidationError("scaling by zero");
  if (!s.tower().same_tower(alpha.tower())) throw ValidationError("scalar from another tower");
  std::vector<Felt> gens;
  gens.reserve(s.dim());
  for (unsigned r = 0; r < s.dim(); ++r) gens.push_back(alpha * s.row_element(r));
  return Subspace::span(s.tower(), gens);
}

Subspace aut_image(const Subspace& s, FieldAut sigma) {
  std::vector<Felt> gens;
  gens.reserve(s.dim());
  for (unsigned r = 0; r < s.dim(); ++r) gens.push_back(s.tower().frobenius(s.row_element(r), sigma));
  return Subspace::span(s.tower(), gens);
}

Subspace sum(const Subspace& a, const Subspace& b) {
  if (!a.tower().same_tower(b.tower())) throw ValidationError("subspaces from mixed towers");
  const unsigned n = a.ambient();
  std::vector<std::vector<std::uint32_t>> rows;
  rows.reserve(a.dim() + b.dim());
  for (unsigned r = 0; r < a.dim(); ++r) {
    std::vector<std::uint32_t> row(n);
    for (unsigned c = 0; c < n; ++c) row[c] = a.entry_code(r, c);
    rows.push_back(std::move(row));
  }
  for (unsigned r = 0; r < b.dim(); ++r) {
    std::vector<std::uint32_t> row(n);
    for (unsigned c = 0; c < n; ++c) row[c] = b.entry_code(r, c);
    rows.push_back(std::move(row));
  }
  return Subspace::from_coord_rows(a.tower(), rows);
}

Subspace intersect(const Subspace& a, const Subspace& b) {
  if (!a.tower().same_tower(b.tower())) throw ValidationError("subspaces from mixed towers");
  // Zassenhaus: rows (u|u) for u in a, (v|0) for v in b; after elimination
  // the right half of rows with zero left half spans the intersection.
  const FieldTower& t = a.tower();
  const unsigned n = a.ambient();
  GfMat m(t, a.dim() + b.dim(), 2 * n);
  for (unsigned r = 0; r < a.dim(); ++r) {
    for (unsigned c = 0; c < n; ++c) {
      m.at(r, c) = a.entry_code(r, c);
      m.at(r, n + c) = a.entry_code(r, c);
    }
  }
  for (unsigned r = 0; r < b.dim(); ++r) {
    for (unsigned c = 0; c < n; ++c) m.at(a.dim() + r, c) = b.entry_code(r, c);
  }
  unsigned rank = m.rref();
  std::vector<std::vector<std::uint32_t>> rows;
  for (unsigned r = 0; r < rank; ++r) {
    bool left_zero = true;
    for (unsigned c = 0; c < n && left_zero; ++c) left_zero = m.at(r, c) == Felt::kZeroCode;
    if (!left_zero) continue;
    std::vector<std::uint32_t> row(n);
    for (unsigned c = 0; c < n; ++c) row[c] = m.at(r, n + c);
    rows.push_back(std::move(row));
  }
  return Subspace::from_coord_rows(t, rows);
}

bool contains(const Subspace& s, Felt a) {
  if (!s.tower().same_tower(a.tower())) throw ValidationError("element from another tower");
  const FieldTower& t = s.tower();
  const unsigned n = s.ambient();
  std::vector<std::uint32_t> vec(n);
  t.coords_codes(a.code(), vec.data());
  for (unsigned r = 0; r < s.dim(); ++r) {
    // locate the pivot of row r
    unsigned pc = 0;
    while (pc < n && s.entry_code(r, pc) == Felt::kZeroCode) ++pc;
    if (pc == n || vec[pc] == Felt::kZeroCode) continue;
    std::uint32_t f = vec[pc];
    for (unsigned c = pc; c < n; ++c) {
      vec[c] = t.sub_code(vec[c], t.mul_code(f, s.entry_code(r, c)));
    }
  }
  for (unsigned c = 0; c < n; ++c) {
    if (vec[c] != Felt::kZeroCode) return false;
  }
  return true;
}

unsigned distance(const Subspace& u, const Subspace& v) {
  return u.dim() + v.dim() - 2 * intersect(u, v).dim();
}

Subspace square_span(const Subspace& s) {
  std::vector<Felt> base;
  for (unsigned r = 0; r < s.dim(); ++r) base.push_back(s.row_element(r));
  std::vector<Felt> prods;
  for (unsigned i = 0; i < base.size(); ++i) {
    for (unsigned j = i; j < base.size(); ++j) prods.push_back(base[i] * base[j]);
  }
  return Subspace::span(s.tower(), prods);
}

Subspace field_closure(const Subspace& s, unsigned t) {
  const FieldTower& tw = s.tower();
  if (t == 0 || tw.n() % t != 0) throw PreconditionError("t must divide n");
  if (s.dim() == 0) return s;
  Felt c = tw.subfield_generator_rel(t);
  Subspace cur = s;
  while (true) {
    Subspace next = sum(cur, scale(c, cur));
    if (next.dim() == cur.dim()) return cur;
    cur = next;
  }
}

unsigned delta_t(const Subspace& s, unsigned t) {
  if (t == 0 || s.tower().n() % t != 0) throw PreconditionError("t must divide n");
  if (s.dim() == 0) return 0;
  Subspace closure = field_closure(s, t);
  assert(closure.dim() % t == 0);
  return closure.dim() / t;
}

Subspace largest_subfield_submodule(const Subspace& s, unsigned t) {
  const FieldTower& tw = s.tower();
  if (t == 0 || tw.n() % t != 0) throw PreconditionError("t must divide n");
  if (s.dim() == 0 || t == 1) return s;
  // Intersection of c^(-i) s for i < t is stable under c, hence under all of
  // F_q(c) = F_{q^t}, and any F_{q^t}-subspace of s lies in every term.
  Felt cinv = tw.subfield_generator_rel(t).inv();
  Subspace acc = s;
  Subspace shifted = s;
  for (unsigned i = 1; i < t && acc.dim() > 0; ++i) {
    shifted = scale(cinv, shifted);
    acc = intersect(acc, shifted);
  }
  return acc;
}

unsigned w_t(const Subspace& s, unsigned t) {
  Subspace m = largest_subfield_submodule(s, t);
  assert(m.dim() % t == 0);
  return m.dim() / t;
}

unsigned linearity_field(const Subspace& s) {
  if (s.dim() == 0) throw PreconditionError("linearity field of the zero subspace");
  const FieldTower& tw = s.tower();
  const auto& divs = tw.divisors_of_n();
  for (auto it = divs.rbegin(); it != divs.rend(); ++it) {
    unsigned d = *it;
    if (d == 1) return 1;
    if (scale(tw.subfield_generator_rel(d), s) == s) return d;
  }
  return 1;
}

bool is_sidon(const Subspace& s) {
  const FieldTower& tw = s.tower();
  if (s.dim() == 0) return true;
  std::vector<Felt> pts = s.projective_points();
  // Coset of F_q* <-> exponent mod (order-1)/(q-1).
  std::uint64_t cosets = (tw.order() - 1) / (tw.q() - 1);
  std::vector<bool> seen(cosets, false);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i; j < pts.size(); ++j) {
      std::uint64_t id = (static_cast<std::uint64_t>(pts[i].code()) + pts[j].code()) % cosets;
      if (seen[id]) return false;
      seen[id] = true;
    }
  }
  return true;
}

Felt hyperplane_scalar(const Subspace& h1, const Subspace& h2) {
  const FieldTower& tw = h1.tower();
  if (!tw.same_tower(h2.tower())) throw ValidationError("subspaces from mixed towers");
  if (h1.dim() + 1 != tw.n() || h2.dim() + 1 != tw.n())
    throw PreconditionError("hyperplane scalar requires dimension n-1");
  std::uint64_t cosets = (tw.order() - 1) / (tw.q() - 1);
  for (std::uint64_t e = 0; e < cosets; ++e) {
    Felt xi = tw.from_exponent(e);
    if (scale(xi, h1) == h2) return xi;
  }
  throw Error("no hyperplane scalar found");  // unreachable for true hyperplanes
}

InvariantProfile invariant_profile(const Subspace& s) {
  if (s.dim() == 0) throw PreconditionError("profile of the zero subspace");
  InvariantProfile p;
  p.dim_square = square_span(s).dim();
  for (unsigned t : s.tower().divisors_of_n()) {
    p.delta[t] = delta_t(s, t);
    p.w[t] = w_t(s, t);
  }
  p.linearity_degree = linearity_field(s);
  p.sidon = is_sidon(s);
  return p;
}

}  // namespace orbitcodes
