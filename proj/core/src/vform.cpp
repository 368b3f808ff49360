#include "orbitcodes/vform.hpp"

#include <algorithm>
#include <cassert>

#include "orbitcodes/linalg.hpp"

namespace orbitcodes {

namespace {

// Working frame for F_{q^3} inside the tower: the generator c with basis
// {1, c, c^2} over F_q, a coordinate table over that basis indexed by the
// exponent of c, and the deterministic element order used by every scan.
struct CubicFrame {
  const FieldTower* tw;
  Felt c;
  std::uint64_t subfield_size;      // q^3
  std::uint64_t exp_step;           // (order-1)/(q^3-1)
  std::vector<std::array<std::uint32_t, 3>> table;  // c^j -> coords over {1,c,c^2}

  explicit CubicFrame(const FieldTower& tower) : tw(&tower) {
    if (tower.n() % 3 != 0) throw PreconditionError("cubic frame requires 3 | n");
    c = tower.subfield_generator_rel(3);
    subfield_size = tower.q_pow(3);
    exp_step = (tower.order() - 1) / (subfield_size - 1);

    // coordinates of c^3 over {1, c, c^2}
    const unsigned n = tower.n();
    GfMat m(tower, n, 3);
    std::vector<std::uint32_t> col(n);
    for (unsigned j = 0; j < 3; ++j) {
      tower.coords_codes(c.pow(j).code(), col.data());
      for (unsigned r = 0; r < n; ++r) m.at(r, j) = col[r];
    }
    tower.coords_codes(c.pow(3).code(), col.data());
    auto cube = m.solve(col);
    if (!cube) throw Error("c^3 not expressible in the cubic basis");

    table.resize(subfield_size - 1);
    std::array<std::uint32_t, 3> cur{0, Felt::kZeroCode, Felt::kZeroCode};  // the element 1
    for (std::uint64_t j = 0; j < subfield_size - 1; ++j) {
      table[j] = cur;
      std::uint32_t top = cur[2];
      std::array<std::uint32_t, 3> next{Felt::kZeroCode, cur[0], cur[1]};
      if (top != Felt::kZeroCode) {
        for (unsigned i = 0; i < 3; ++i) {
          next[i] = tower.add_code(next[i], tower.mul_code(top, (*cube)[i]));
        }
      }
      cur = next;
    }
  }

  bool in_subfield(Felt a) const { return tw->in_subfield_rel(a, 3); }

  std::array<std::uint32_t, 3> coords3(Felt a) const {
    if (a.is_zero()) return {Felt::kZeroCode, Felt::kZeroCode, Felt::kZeroCode};
    if (!in_subfield(a)) throw PreconditionError("element outside F_{q^3}");
    return table[a.code() / exp_step];
  }

  Felt uncoords3(const std::array<std::uint32_t, 3>& v) const {
    Felt acc = tw->zero();
    for (unsigned i = 0; i < 3; ++i) {
      if (v[i] == Felt::kZeroCode) continue;
      acc += tw->from_exponent(v[i]) * c.pow(i);
    }
    return acc;
  }

  // 0 first, then powers of c in exponent order.
  std::vector<Felt> elements() const { return tw->subfield_elements(3); }
};

std::vector<Felt> cubic_basis(const FieldTower& t) {
  Felt c = t.subfield_generator_rel(3);
  return {t.one(), c, c * c};
}

}  // namespace

QPoly::QPoly(Felt a0, Felt a1, Felt a2) : a0_(a0), a1_(a1), a2_(a2) {
  const FieldTower& t = a0.tower();
  if (&a1.tower() != &t || &a2.tower() != &t) throw ValidationError("coefficients from mixed towers");
  if (t.n() % 3 != 0) throw PreconditionError("q-polynomials over F_{q^3} require 3 | n");
  if (!t.in_subfield_rel(a0, 3) || !t.in_subfield_rel(a1, 3) || !t.in_subfield_rel(a2, 3))
    throw ValidationError("q-polynomial coefficient outside F_{q^3}");
}

Felt QPoly::eval(Felt u) const {
  const FieldTower& t = tower();
  if (!t.in_subfield_rel(u, 3)) throw PreconditionError("q-polynomial argument outside F_{q^3}");
  unsigned h = t.h();
  return a0_ * u + a1_ * t.frobenius(u, FieldAut{h}) + a2_ * t.frobenius(u, FieldAut{2 * h});
}

QPoly QPoly::zero(const FieldTower& t) { return QPoly(t.zero(), t.zero(), t.zero()); }
QPoly QPoly::x_q(const FieldTower& t) { return QPoly(t.zero(), t.one(), t.zero()); }
QPoly QPoly::trace(const FieldTower& t) { return QPoly(t.one(), t.one(), t.one()); }

VForm build_v(const QPoly& f, Felt gamma) {
  const FieldTower& t = f.tower();
  if (&gamma.tower() != &t) throw ValidationError("gamma from another tower");
  if (t.n() % 3 != 0) throw PreconditionError("V_{f,gamma} requires 3 | n");
  if (t.in_subfield_rel(gamma, 3)) throw PreconditionError("gamma must lie outside F_{q^3}");
  std::vector<Felt> gens;
  for (Felt u : cubic_basis(t)) gens.push_back(u + gamma * f.eval(u));
  Subspace s = Subspace::span(t, gens);
  assert(s.dim() == 3);  // u -> u + gamma f(u) is injective for gamma outside F_{q^3}
  return VForm{f, gamma, std::move(s)};
}

namespace {

// Line representatives of the F_{q^3}-span of s (a 2-dimensional
// F_{q^3}-space): e1, then e2 + u*e1 over the deterministic element order.
std::vector<Felt> span_line_reps(const Subspace& s, const CubicFrame& frame) {
  Subspace closure = field_closure(s, 3);
  Felt e1 = closure.row_element(0);
  Felt e2 = s.tower().zero();
  for (unsigned r = 1; r < closure.dim(); ++r) {
    Felt cand = closure.row_element(r);
    if (!frame.in_subfield(cand / e1)) {
      e2 = cand;
      break;
    }
  }
  if (e2.is_zero()) throw Error("F_{q^3}-span has no second line");  // unreachable for delta_3 = 2
  std::vector<Felt> reps{e1};
  for (Felt u : frame.elements()) reps.push_back(e2 + u * e1);
  return reps;
}

Subspace line_subspace(Felt xi, const FieldTower& t) {
  std::vector<Felt> gens;
  for (Felt b : cubic_basis(t)) gens.push_back(xi * b);
  return Subspace::span(t, gens);
}

}  // namespace

Felt find_complement_line(const Subspace& s) {
  const FieldTower& t = s.tower();
  if (s.dim() != 3) throw PreconditionError("complement line requires dimension 3");
  if (t.n() % 3 != 0) throw PreconditionError("complement line requires 3 | n");
  if (delta_t(s, 3) != 2) throw PreconditionError("complement line requires delta_3 = 2");
  CubicFrame frame(t);
  for (Felt xi : span_line_reps(s, frame)) {
    if (intersect(s, line_subspace(xi, t)).dim() == 0) return xi;
  }
  throw Error("no complement line found");  // counting argument rules this out
}

QPoly interpolate_qpoly(std::span<const std::pair<Felt, Felt>> pairs, const FieldTower& tower) {
  if (pairs.size() != 3) throw ValidationError("interpolation needs exactly three pairs");
  std::vector<Felt> us;
  for (auto& [u, v] : pairs) {
    if (!tower.in_subfield_rel(u, 3) || !tower.in_subfield_rel(v, 3))
      throw ValidationError("interpolation data outside F_{q^3}");
    us.push_back(u);
  }
  if (Subspace::span(tower, us).dim() != 3) throw ValidationError("interpolation points are F_q-dependent");

  unsigned h = tower.h();
  GfMat moore(tower, 3, 3);
  std::vector<std::uint32_t> rhs(3);
  for (unsigned i = 0; i < 3; ++i) {
    Felt u = pairs[i].first;
    moore.set(i, 0, u);
    moore.set(i, 1, tower.frobenius(u, FieldAut{h}));
    moore.set(i, 2, tower.frobenius(u, FieldAut{2 * h}));
    rhs[i] = pairs[i].second.code();
  }
  auto sol = moore.solve(rhs);
  if (!sol) throw Error("Moore system singular on independent points");
  auto lift = [&](std::uint32_t code) {
    return code == Felt::kZeroCode ? tower.zero() : tower.from_exponent(code);
  };
  return QPoly(lift((*sol)[0]), lift((*sol)[1]), lift((*sol)[2]));
}

VDecomposition decompose(const Subspace& s) {
  const FieldTower& t = s.tower();
  Felt lambda = find_complement_line(s);  // also validates the preconditions
  CubicFrame frame(t);

  // rho spans the other line: prefer one whose line meets s, otherwise the
  // first independent representative. Any valid choice differs by a group
  // action the pair-space equivalence absorbs.
  Felt rho = t.zero();
  Felt fallback = t.zero();
  for (Felt cand : span_line_reps(s, frame)) {
    if (frame.in_subfield(cand / lambda)) continue;
    if (fallback.is_zero()) fallback = cand;
    if (intersect(s, line_subspace(cand, t)).dim() > 0) {
      rho = cand;
      break;
    }
  }
  if (rho.is_zero()) rho = fallback;
  if (rho.is_zero()) throw Error("no independent line for rho");  // unreachable

  // For each basis point u: the unique v in F_{q^3} with rho*u + lambda*v in
  // s, i.e. lambda*v - (combination of basis rows) = -rho*u.
  const unsigned n = t.n();
  std::vector<Felt> basis = cubic_basis(t);
  GfMat sys(t, n, 3 + s.dim());
  std::vector<std::uint32_t> col(n);
  for (unsigned j = 0; j < 3; ++j) {
    t.coords_codes((lambda * basis[j]).code(), col.data());
    for (unsigned r = 0; r < n; ++r) sys.at(r, j) = col[r];
  }
  for (unsigned j = 0; j < s.dim(); ++j) {
    t.coords_codes(s.row_element(j).code(), col.data());
    for (unsigned r = 0; r < n; ++r) sys.at(r, 3 + j) = t.neg_code(col[r]);
  }
  std::vector<std::pair<Felt, Felt>> graph_pairs;
  for (Felt u : basis) {
    GfMat m = sys;
    t.coords_codes((-(rho * u)).code(), col.data());
    auto sol = m.solve(col);
    if (!sol) throw Error("projection system unsolvable");  // ruled out by the span decomposition
    Felt v = frame.uncoords3({(*sol)[0], (*sol)[1], (*sol)[2]});
    graph_pairs.emplace_back(u, v);
  }
  QPoly f = interpolate_qpoly(graph_pairs, t);
  Felt gamma = lambda / rho;
  if (build_v(f, gamma).subspace != scale(rho.inv(), s))
    throw Error("decomposition failed to rebuild the subspace");
  return VDecomposition{rho, lambda, f, gamma};
}

USpace USpace::from_pairs(const FieldTower& tower, std::span<const std::pair<Felt, Felt>> pairs) {
  CubicFrame frame(tower);
  GfMat m(tower, static_cast<unsigned>(pairs.size()), 6);
  for (unsigned r = 0; r < pairs.size(); ++r) {
    auto left = frame.coords3(pairs[r].first);
    auto right = frame.coords3(pairs[r].second);
    for (unsigned i = 0; i < 3; ++i) {
      m.at(r, i) = left[i];
      m.at(r, 3 + i) = right[i];
    }
  }
  unsigned rank = m.rref();
  USpace u;
  u.tower_ = &tower;
  u.dim_ = rank;
  u.rows_.resize(static_cast<std::size_t>(rank) * 6);
  for (unsigned r = 0; r < rank; ++r) {
    for (unsigned c = 0; c < 6; ++c) u.rows_[r * 6 + c] = m.at(r, c);
  }
  return u;
}

USpace USpace::graph(const QPoly& f) {
  const FieldTower& t = f.tower();
  std::vector<std::pair<Felt, Felt>> pairs;
  for (Felt u : cubic_basis(t)) pairs.emplace_back(u, f.eval(u));
  return from_pairs(t, pairs);
}

std::vector<std::pair<Felt, Felt>> USpace::basis_pairs() const {
  CubicFrame frame(*tower_);
  std::vector<std::pair<Felt, Felt>> out;
  for (unsigned r = 0; r < dim_; ++r) {
    std::array<std::uint32_t, 3> left{rows_[r * 6], rows_[r * 6 + 1], rows_[r * 6 + 2]};
    std::array<std::uint32_t, 3> right{rows_[r * 6 + 3], rows_[r * 6 + 4], rows_[r * 6 + 5]};
    out.emplace_back(frame.uncoords3(left), frame.uncoords3(right));
  }
  return out;
}

USpace uspace_aut_image(const USpace& u, FieldAut sigma) {
  const FieldTower& t = u.tower();
  std::vector<std::pair<Felt, Felt>> pairs;
  for (auto& [w1, w2] : u.basis_pairs()) {
    pairs.emplace_back(t.frobenius(w1, sigma), t.frobenius(w2, sigma));
  }
  return USpace::from_pairs(t, pairs);
}

USpace uspace_right_mul(const USpace& u, Felt c, Felt d, Felt a, Felt b) {
  const FieldTower& t = u.tower();
  std::vector<std::pair<Felt, Felt>> pairs;
  for (auto& [w1, w2] : u.basis_pairs()) {
    pairs.emplace_back(w1 * c + w2 * a, w1 * d + w2 * b);
  }
  return USpace::from_pairs(t, pairs);
}

WeightSpectrum weight_spectrum(const USpace& u) {
  if (u.dim() != 3) throw PreconditionError("weight spectrum requires dimension 3");
  const FieldTower& t = u.tower();
  CubicFrame frame(t);
  std::vector<std::pair<Felt, Felt>> upairs = u.basis_pairs();

  // dim(U cap L) = 6 - rank([U; L]) since both have dimension 3.
  auto line_meet = [&](Felt v1, Felt v2) {
    GfMat m(t, 6, 6);
    for (unsigned r = 0; r < 3; ++r) {
      auto left = frame.coords3(upairs[r].first);
      auto right = frame.coords3(upairs[r].second);
      for (unsigned i = 0; i < 3; ++i) {
        m.at(r, i) = left[i];
        m.at(r, 3 + i) = right[i];
      }
    }
    for (unsigned j = 0; j < 3; ++j) {
      Felt b = frame.c.pow(j);
      auto left = frame.coords3(v1 * b);
      auto right = frame.coords3(v2 * b);
      for (unsigned i = 0; i < 3; ++i) {
        m.at(3 + j, i) = left[i];
        m.at(3 + j, 3 + i) = right[i];
      }
    }
    return 6 - m.rref();
  };

  WeightSpectrum ws;
  for (Felt mline : frame.elements()) ++ws.n[line_meet(t.one(), mline)];
  ++ws.n[line_meet(t.zero(), t.one())];
  assert(ws.n[0] + ws.n[1] + ws.n[2] + ws.n[3] == frame.subfield_size + 1);
  return ws;
}

const char* vkind_name(VKind k) { return k == VKind::XqClass ? "x^q" : "trace"; }

VClassification classify_v(const Subspace& s) {
  VDecomposition dec = decompose(s);
  WeightSpectrum ws = weight_spectrum(USpace::graph(dec.f));
  if (ws.n[3] != 0) throw Error("graph space contains a full line despite delta_3 = 2");
  VKind kind = ws.n[2] == 0 ? VKind::XqClass : VKind::TraceClass;
  return VClassification{kind, std::move(dec), ws};
}

bool sidon_v(VKind kind, Felt gamma) {
  const FieldTower& t = gamma.tower();
  if (t.n() % 3 != 0) throw PreconditionError("Sidon criterion requires 3 | n");
  if (t.in_subfield_rel(gamma, 3)) throw PreconditionError("gamma must lie outside F_{q^3}");
  if (t.n() > 6) return true;
  if (kind == VKind::XqClass) {
    return t.rel_norm(gamma, 6, 1) != t.one();
  }
  Felt minus_two = -(t.one() + t.one());
  return t.rel_trace(gamma, 6, 1) != minus_two;
}

std::optional<PairSpaceWitness> pair_space_equivalent(const VForm& v1, const VForm& v2) {
  const FieldTower& t = v1.gamma.tower();
  if (&v2.gamma.tower() != &t) throw ValidationError("forms from mixed towers");
  if (t.in_subfield_rel(v1.gamma, 3) || t.in_subfield_rel(v2.gamma, 3))
    throw PreconditionError("gamma must lie outside F_{q^3}");  // {1, gamma} independence
  if (delta_t(v1.subspace, 3) != 2 || delta_t(v2.subspace, 3) != 2)
    throw PreconditionError("pair-space equivalence requires delta_3 = 2");
  CubicFrame frame(t);
  const unsigned n = t.n();
  USpace u1 = USpace::graph(v1.f);
  USpace u2 = USpace::graph(v2.f);

  // projective first rows (c : d)
  std::vector<std::pair<Felt, Felt>> first_rows;
  for (Felt d : frame.elements()) first_rows.emplace_back(t.one(), d);
  first_rows.emplace_back(t.zero(), t.one());

  for (unsigned j = 0; j < t.aut_count(); ++j) {
    FieldAut sigma{j};
    Felt g2s = t.frobenius(v2.gamma, sigma);
    USpace u2s = uspace_aut_image(u2, sigma);
    std::vector<std::pair<Felt, Felt>> u2s_pairs = u2s.basis_pairs();

    // decomposition e = a + b*g2s with a, b in F_{q^3}
    GfMat decomp(t, n, 6);
    std::vector<std::uint32_t> col(n);
    for (unsigned i = 0; i < 3; ++i) {
      Felt b = frame.c.pow(i);
      t.coords_codes(b.code(), col.data());
      for (unsigned r = 0; r < n; ++r) decomp.at(r, i) = col[r];
      t.coords_codes((g2s * b).code(), col.data());
      for (unsigned r = 0; r < n; ++r) decomp.at(r, 3 + i) = col[r];
    }

    // residual-against-u2s reducer over the six pair coordinates
    GfMat u2s_mat(t, 3, 6);
    for (unsigned r = 0; r < 3; ++r) {
      auto left = frame.coords3(u2s_pairs[r].first);
      auto right = frame.coords3(u2s_pairs[r].second);
      for (unsigned i = 0; i < 3; ++i) {
        u2s_mat.at(r, i) = left[i];
        u2s_mat.at(r, 3 + i) = right[i];
      }
    }
    u2s_mat.rref();
    auto pair_residual = [&](Felt x, Felt y) {
      auto left = frame.coords3(x);
      auto right = frame.coords3(y);
      std::vector<std::uint32_t> v(6);
      for (unsigned i = 0; i < 3; ++i) {
        v[i] = left[i];
        v[3 + i] = right[i];
      }
      u2s_mat.reduce_in_place(v);
      return v;
    };

    for (auto& [c, d] : first_rows) {
      Felt den = c + d * g2s;  // nonzero: g2s lies outside F_{q^3}
      Felt e = v1.gamma * den;
      GfMat m = decomp;
      t.coords_codes(e.code(), col.data());
      auto sol = m.solve(col);
      if (!sol) continue;  // e outside <1, gamma2^sigma> over F_{q^3} (possible for n > 6)
      Felt a = frame.uncoords3({(*sol)[0], (*sol)[1], (*sol)[2]});
      Felt b = frame.uncoords3({(*sol)[3], (*sol)[4], (*sol)[5]});
      if ((c * b - d * a).is_zero()) continue;  // singular A

      USpace x = uspace_right_mul(u1, c, d, a, b);
      std::vector<std::pair<Felt, Felt>> xpairs = x.basis_pairs();

      // recover the projective scalar: t0*x0 must fall into u2s
      GfMat tsys(t, 6, 3);
      for (unsigned i = 0; i < 3; ++i) {
        Felt bi = frame.c.pow(i);
        auto res = pair_residual(bi * xpairs[0].first, bi * xpairs[0].second);
        for (unsigned r = 0; r < 6; ++r) tsys.at(r, i) = res[r];
      }
      std::vector<std::vector<std::uint32_t>> null_basis = tsys.null_space();
      if (null_basis.empty()) continue;

      // enumerate the (small) solution space over F_q
      std::vector<Felt> fq = t.subfield_elements(1);
      std::vector<unsigned> odo(null_basis.size(), 0);
      while (true) {
        std::array<std::uint32_t, 3> acc{Felt::kZeroCode, Felt::kZeroCode, Felt::kZeroCode};
        for (std::size_t bidx = 0; bidx < null_basis.size(); ++bidx) {
          std::uint32_t f = fq[odo[bidx]].code();
          if (f != Felt::kZeroCode) {
            for (unsigned i = 0; i < 3; ++i) {
              acc[i] = t.add_code(acc[i], t.mul_code(f, null_basis[bidx][i]));
            }
          }
        }
        Felt scalar = frame.uncoords3(acc);
        if (!scalar.is_zero()) {
          std::vector<std::pair<Felt, Felt>> scaled;
          for (auto& [x1, x2] : xpairs) scaled.emplace_back(scalar * x1, scalar * x2);
          if (USpace::from_pairs(t, scaled) == u2s) {
            Felt fc = scalar * c, fd = scalar * d, fa = scalar * a, fb = scalar * b;
            Felt lambda = (fc + fd * g2s).inv();
            PairSpaceWitness w{fc, fd, fa, fb, sigma, lambda};
            if (scale(lambda, aut_image(v2.subspace, sigma)) != v1.subspace)
              throw Error("pair-space witness failed replay");
            return w;
          }
        }
        std::size_t pos = 0;
        while (pos < odo.size() && ++odo[pos] == fq.size()) odo[pos++] = 0;
        if (pos == odo.size()) break;
      }
    }
  }
  return std::nullopt;
}

}  // namespace orbitcodes
