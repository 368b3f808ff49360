#include "orbitcodes/classify.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <sstream>

#include "orbitcodes/parallel.hpp"

namespace orbitcodes {

const char* family_name(Family f) {
  switch (f) {
    case Family::I: return "I";
    case Family::II: return "II";
    case Family::III: return "III";
    case Family::IV: return "IV";
    case Family::V: return "V";
  }
  return "?";
}

bool FamilyLabel::reconstructs(const Subspace& s) const {
  const FieldTower& t = s.tower();
  switch (family) {
    case Family::I: {
      if (!mu) return false;
      Felt c = t.subfield_generator_rel(3);
      std::vector<Felt> gens{*mu, *mu * c, *mu * c * c};
      return Subspace::span(t, gens) == s;
    }
    case Family::II:
    case Family::III: {
      if (!poly) return false;
      Felt l = poly->lambda;
      std::vector<Felt> gens{poly->mu, poly->mu * l, poly->mu * l * l};
      return Subspace::span(t, gens) == s;
    }
    case Family::IV: {
      if (!line) return false;
      Felt c = t.subfield_generator_rel(2);
      std::vector<Felt> gens{line->omega, line->omega * c, line->mu};
      return Subspace::span(t, gens) == s;
    }
    case Family::V:
      return true;  // no witness beyond the Sidon property itself
  }
  return false;
}

bool witness_checks(const EquivWitness& w, const Subspace& first, const Subspace& second) {
  if (w.alpha.is_zero()) return false;
  return scale(w.alpha, aut_image(second, w.sigma)) == first;
}

std::optional<PolyBasis> find_poly_basis(const Subspace& s) {
  if (s.dim() != 3) throw PreconditionError("polynomial basis search requires dimension 3");
  for (Felt m : s.projective_points()) {
    Subspace t = scale(m.inv(), s);
    for (Felt lambda : t.projective_points()) {
      if (s.tower().degree_over_base(lambda) == 1) continue;
      if (!contains(t, lambda * lambda)) continue;
      std::vector<Felt> gens{s.tower().one(), lambda, lambda * lambda};
      if (Subspace::span(s.tower(), gens).dim() != 3) continue;
      // 1, lambda, lambda^2 all lie in t and are independent, so they span it.
      return PolyBasis{m, lambda};
    }
  }
  return std::nullopt;
}

FamilyLabel classify3(const Subspace& s) {
  if (s.dim() != 3) throw PreconditionError("classification requires dimension 3");
  const FieldTower& t = s.tower();
  FamilyLabel label;
  label.profile = invariant_profile(s);

  if (label.profile.linearity_degree == 3) {
    label.family = Family::I;
    label.mu = s.row_element(0);
    return label;
  }
  assert(label.profile.linearity_degree == 1);

  switch (label.profile.dim_square) {
    case 6:
      label.family = Family::V;
      return label;
    case 4:
    case 5: {
      bool n_even = t.n() % 2 == 0;
      bool family_iv = label.profile.dim_square == 5 && n_even && label.profile.w.at(2) != 0;
      if (family_iv) {
        label.family = Family::IV;
        Subspace w2line = largest_subfield_submodule(s, 2);
        if (w2line.dim() != 2) throw Error("family IV without an F_{q^2}-line");
        Felt omega = w2line.row_element(0);
        for (unsigned r = 0; r < s.dim(); ++r) {
          Felt cand = s.row_element(r);
          if (!contains(w2line, cand)) {
            label.line = LinePlusPoint{omega, cand};
            break;
          }
        }
        if (!label.line) throw Error("family IV witness not found");
        return label;
      }
      label.family = label.profile.dim_square == 4 ? Family::II : Family::III;
      auto pb = find_poly_basis(s);
      if (!pb) throw Error("polynomial basis guaranteed by classification not found");
      label.poly = pb;
      label.lambda_degree = t.degree_over_base(pb->lambda);
      if (label.family == Family::II && label.lambda_degree != 4)
        throw Error("family II lambda degree is not 4");
      if (label.family == Family::III && label.lambda_degree <= 4)
        throw Error("family III lambda degree is not above 4");
      return label;
    }
    default:
      // dim 3 together with strict F_q-linearity contradicts the
      // classification theorem.
      throw Error("square-span dimension outside the classified range");
  }
}

std::optional<EquivWitness> equivalent(const Subspace& s1, const Subspace& s2) {
  const FieldTower& t = s1.tower();
  if (!t.same_tower(s2.tower())) throw ValidationError("subspaces from mixed towers");
  if (s1.dim() != s2.dim()) throw PreconditionError("equivalence requires equal dimensions");
  if (s1.dim() == 0) return EquivWitness{t.one(), FieldAut{0}};

  std::vector<std::uint64_t> target = canonical_orbit_rep(s1).serialize();
  for (unsigned j = 0; j < t.aut_count(); ++j) {
    FieldAut sigma{j};
    Subspace img = aut_image(s2, sigma);
    if (canonical_orbit_rep(img).serialize() != target) continue;
    // Same orbit; recover alpha with s1 = alpha * img. alpha * t0 lies in
    // s1, so alpha is s/t0 for some projective point s of s1.
    Felt t0 = img.row_element(0);
    for (Felt s : s1.projective_points()) {
      Felt alpha = s / t0;
      EquivWitness w{alpha, sigma};
      if (witness_checks(w, s1, s2)) return w;
    }
    throw Error("matching orbits but no scalar witness");  // unreachable
  }
  return std::nullopt;
}

std::optional<EquivWitness> equivalent_poly_fast(const Subspace& s1, const PolyBasis& w1,
                                                 const Subspace& s2, const PolyBasis& w2) {
  const FieldTower& t = s1.tower();
  if (!t.same_tower(s2.tower())) throw ValidationError("subspaces from mixed towers");
  auto check_form = [&](const Subspace& s, const PolyBasis& w) {
    if (t.degree_over_base(w.lambda) <= 4)
      throw PreconditionError("polynomial-basis equivalence requires deg(lambda) > 4");
    std::vector<Felt> gens{w.mu, w.mu * w.lambda, w.mu * w.lambda * w.lambda};
    if (Subspace::span(t, gens) != s) throw ValidationError("polynomial basis does not reconstruct the subspace");
  };
  check_form(s1, w1);
  check_form(s2, w2);

  std::vector<Felt> fq = t.subfield_elements(1);
  Felt l1 = w1.lambda;
  for (unsigned j = 0; j < t.aut_count(); ++j) {
    FieldAut sigma{j};
    Felt l2s = t.frobenius(w2.lambda, sigma);
    // lambda2^sigma = (a0 + a1*l1) / (b0 + b1*l1) over F_q?
    for (Felt b0 : fq) {
      for (Felt b1 : fq) {
        Felt den = b0 + b1 * l1;
        if (den.is_zero()) continue;
        for (Felt a0 : fq) {
          for (Felt a1 : fq) {
            if (a1.is_zero() && b1.is_zero()) continue;  // constant image
            if (l2s * den != a0 + a1 * l1) continue;
            // xi = den^2 maps the normalized second form onto the first.
            Felt xi = den * den;
            Felt alpha = w1.mu * xi / t.frobenius(w2.mu, sigma);
            EquivWitness w{alpha, sigma};
            if (!witness_checks(w, s1, s2)) throw Error("fractional witness failed replay");
            return w;
          }
        }
      }
    }
  }
  return std::nullopt;
}

std::optional<EquivWitness> equivalent_famIV_fast(const Subspace& s1, const LinePlusPoint& w1,
                                                  const Subspace& s2, const LinePlusPoint& w2) {
  const FieldTower& t = s1.tower();
  if (!t.same_tower(s2.tower())) throw ValidationError("subspaces from mixed towers");
  if (t.n() % 2 != 0) throw PreconditionError("family IV requires 2 | n");
  Felt c2 = t.subfield_generator_rel(2);
  auto check_form = [&](const Subspace& s, const LinePlusPoint& w) {
    std::vector<Felt> gens{w.omega, w.omega * c2, w.mu};
    if (Subspace::span(t, gens) != s) throw ValidationError("family IV witness does not reconstruct the subspace");
  };
  check_form(s1, w1);
  check_form(s2, w2);

  Felt m1 = w1.mu / w1.omega;
  Felt m2 = w2.mu / w2.omega;
  std::uint64_t q2 = t.q_pow(2);
  for (unsigned j = 0; j < t.aut_count(); ++j) {
    FieldAut sigma{j};
    Felt m2s = t.frobenius(m2, sigma);
    for (std::uint64_t i = 0; i < q2 - 1; ++i) {
      Felt c = c2.pow(i);
      Felt a = m1 - c * m2s;
      if (!t.in_subfield_rel(a, 2)) continue;
      Felt alpha = w1.omega * c / t.frobenius(w2.omega, sigma);
      EquivWitness w{alpha, sigma};
      if (!witness_checks(w, s1, s2)) throw Error("family IV witness failed replay");
      return w;
    }
  }
  return std::nullopt;
}

std::uint64_t gaussian_binomial(std::uint64_t q, unsigned n, unsigned k) {
  if (k > n) return 0;
  unsigned __int128 num = 1, den = 1;
  for (unsigned i = 0; i < k; ++i) {
    unsigned __int128 qn = 1, qk = 1;
    for (unsigned j = 0; j < n - i; ++j) qn *= q;
    for (unsigned j = 0; j < k - i; ++j) qk *= q;
    num *= qn - 1;
    den *= qk - 1;
  }
  return static_cast<std::uint64_t>(num / den);
}

void for_each_rref_subspace(const FieldTower& tower, unsigned k,
                            const std::function<void(const Subspace&)>& fn) {
  const unsigned n = tower.n();
  if (k > n) return;
  if (k == 0) {
    fn(Subspace::zero(tower));
    return;
  }
  std::vector<Felt> fq = tower.subfield_elements(1);
  std::vector<std::uint32_t> fq_codes;
  for (Felt e : fq) fq_codes.push_back(e.code());

  std::vector<unsigned> pivots(k);
  std::iota(pivots.begin(), pivots.end(), 0);
  while (true) {
    // free cells: (r, c) with c > pivots[r] and c not a pivot column
    std::vector<std::pair<unsigned, unsigned>> cells;
    std::vector<bool> is_pivot(n, false);
    for (unsigned p : pivots) is_pivot[p] = true;
    for (unsigned r = 0; r < k; ++r) {
      for (unsigned c = pivots[r] + 1; c < n; ++c) {
        if (!is_pivot[c]) cells.emplace_back(r, c);
      }
    }
    std::vector<std::vector<std::uint32_t>> rows(k, std::vector<std::uint32_t>(n, Felt::kZeroCode));
    for (unsigned r = 0; r < k; ++r) rows[r][pivots[r]] = 0;  // exponent 0 is the element 1
    std::vector<unsigned> odo(cells.size(), 0);
    while (true) {
      for (std::size_t i = 0; i < cells.size(); ++i) rows[cells[i].first][cells[i].second] = fq_codes[odo[i]];
      fn(Subspace::from_coord_rows(tower, rows));
      std::size_t pos = 0;
      while (pos < odo.size() && ++odo[pos] == fq_codes.size()) odo[pos++] = 0;
      if (pos == odo.size()) break;
    }
    // next pivot combination, lexicographic
    int i = static_cast<int>(k) - 1;
    while (i >= 0 && pivots[i] == n - k + i) --i;
    if (i < 0) break;
    ++pivots[i];
    for (unsigned j = i + 1; j < k; ++j) pivots[j] = pivots[j - 1] + 1;
  }
}

namespace {

struct Dsu {
  std::vector<std::size_t> parent;
  explicit Dsu(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

CensusReport census(const FieldTower& tower, const CensusOptions& options) {
  // n = 3 leaves only F_{q^3} itself, whose one-member orbit has no distance
  if (tower.n() < 4) throw PreconditionError("census needs n >= 4");
  CensusReport report;
  report.tower = tower_spec(tower);
  report.subspace_count = gaussian_binomial(tower.q(), tower.n(), 3);
  if (report.subspace_count > options.enumeration_cap)
    throw CapError("subspace count exceeds the enumeration cap");

  // Orbit bucketing: the first enumeration hit of an orbit walks the whole
  // orbit, so every later member is skipped in O(log) lookup instead of a
  // fresh canonicalization.
  struct OrbitRec {
    Subspace rep;
    std::uint64_t size;
  };
  std::vector<OrbitRec> orbits;
  std::map<std::vector<std::uint64_t>, std::uint32_t> orbit_of;
  std::uint64_t walked = 0;
  for_each_rref_subspace(tower, 3, [&](const Subspace& s) {
    std::vector<std::uint64_t> ser = s.serialize();
    ++walked;
    if (orbit_of.count(ser)) return;
    std::uint32_t idx = static_cast<std::uint32_t>(orbits.size());
    Subspace best = s;
    std::vector<std::uint64_t> best_ser = ser;
    std::uint64_t members = 0;
    for_each_projective_scalar(tower, [&](Felt alpha) {
      Subspace img = scale(alpha, s);
      std::vector<std::uint64_t> img_ser = img.serialize();
      if (orbit_of.emplace(img_ser, idx).second) ++members;
      if (img_ser < best_ser) {
        best_ser = std::move(img_ser);
        best = std::move(img);
      }
    });
    orbits.push_back(OrbitRec{std::move(best), members});
  });
  if (walked != report.subspace_count) throw Error("enumeration does not match the Gaussian binomial");
  report.orbit_count = orbits.size();

  // Merge orbits into semilinear classes: alpha is absorbed by the orbit
  // bucketing, so only the h*n automorphism images matter.
  Dsu dsu(orbits.size());
  for (std::size_t i = 0; i < orbits.size(); ++i) {
    for (unsigned j = 1; j < tower.aut_count(); ++j) {
      Subspace img = aut_image(orbits[i].rep, FieldAut{j});
      dsu.unite(i, orbit_of.at(img.serialize()));
    }
  }

  std::map<std::size_t, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < orbits.size(); ++i) members[dsu.find(i)].push_back(i);

  struct ClassWork {
    std::size_t lead;
    std::vector<std::size_t> orbit_ids;
    CensusClassRow row;
  };
  std::vector<ClassWork> work;
  for (auto& [lead, ids] : members) work.push_back(ClassWork{lead, ids, {}});

  parallel_for(0, work.size(), options.jobs, [&](std::size_t i) {
    ClassWork& cw = work[i];
    // class representative: lexicographically smallest canonical rep inside
    std::size_t best = cw.orbit_ids.front();
    std::vector<std::uint64_t> best_ser = orbits[best].rep.serialize();
    for (std::size_t id : cw.orbit_ids) {
      std::vector<std::uint64_t> ser = orbits[id].rep.serialize();
      if (ser < best_ser) {
        best_ser = std::move(ser);
        best = id;
      }
    }
    const Subspace& rep = orbits[best].rep;
    FamilyLabel label = classify3(rep);
    CensusClassRow row;
    row.representative = rep.serialize();
    row.family = label.family;
    row.orbit_size = orbit_size(rep);
    row.min_distance = min_distance(rep);
    for (auto& [t, v] : label.profile.delta) row.delta[t] = v;
    for (auto& [t, v] : label.profile.w) row.w[t] = v;
    row.orbit_count = cw.orbit_ids.size();
    cw.row = std::move(row);
  });

  std::sort(work.begin(), work.end(),
            [](const ClassWork& a, const ClassWork& b) { return a.row.representative < b.row.representative; });
  for (auto& cw : work) {
    report.family_orbit_counts[cw.row.family] += cw.row.orbit_count;
    ++report.class_counts_by_distance[cw.row.min_distance];
    report.classes.push_back(std::move(cw.row));
  }

  if (tower.n() % 2 == 1) {
    report.bounds_apply = true;
    auto it = report.class_counts_by_distance.find(2);
    report.distance2_class_count = it == report.class_counts_by_distance.end() ? 0 : it->second;
    std::uint64_t q = tower.q();
    std::uint64_t numer = tower.q_pow(tower.n() - 1) - 1;
    std::uint64_t lower_den = static_cast<std::uint64_t>(tower.n()) * tower.h() * (q * q - 1);
    report.lower_bound = static_cast<double>(numer) / static_cast<double>(lower_den);
    report.upper_bound = static_cast<double>(numer) / static_cast<double>(q * q - 1);
    report.lower_bound_attained = report.distance2_class_count * lower_den == numer;
  }
  return report;
}

std::string census_csv(const CensusReport& report) {
  std::ostringstream out;
  out << "representative,family,orbit_size,min_distance,delta_profile,w_profile,orbit_count\n";
  auto join_map = [](const std::map<unsigned, unsigned>& m) {
    std::ostringstream s;
    bool first = true;
    for (auto& [t, v] : m) {
      if (!first) s << ' ';
      s << t << ':' << v;
      first = false;
    }
    return s.str();
  };
  for (const CensusClassRow& row : report.classes) {
    bool first = true;
    for (std::uint64_t e : row.representative) {
      out << (first ? "" : " ") << e;
      first = false;
    }
    out << ',' << family_name(row.family) << ',' << row.orbit_size << ',' << row.min_distance << ','
        << join_map(row.delta) << ',' << join_map(row.w) << ',' << row.orbit_count << '\n';
  }
  return out.str();
}

}  // namespace orbitcodes
