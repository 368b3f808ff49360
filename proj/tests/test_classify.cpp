#include "doctest.h"
#include "oracles.hpp"
#include "orbitcodes/classify.hpp"

#include <random>

using namespace orbitcodes;

namespace {

const FieldTower& tower64() {
  static FieldTower t(2, 1, 6);
  return t;
}

Subspace subfield_coset(const FieldTower& t, unsigned d, Felt mu) {
  Felt c = t.subfield_generator_rel(d);
  std::vector<Felt> gens;
  for (unsigned i = 0; i < d; ++i) gens.push_back(mu * c.pow(i));
  return Subspace::span(t, gens);
}

Subspace poly_span(const FieldTower& t, Felt mu, Felt lambda) {
  std::vector<Felt> gens{mu, mu * lambda, mu * lambda * lambda};
  return Subspace::span(t, gens);
}

Subspace line_plus_point(const FieldTower& t, Felt omega, Felt mu) {
  Felt c = t.subfield_generator_rel(2);
  std::vector<Felt> gens{omega, omega * c, mu};
  return Subspace::span(t, gens);
}

// Independent witness check: does some mu in S give S = mu<1,l,l^2> for
// some l? Full double scan over all nonzero pairs.
bool brute_has_poly_basis(const Subspace& s) {
  const FieldTower& t = s.tower();
  for (Felt m : s.elements()) {
    if (m.is_zero()) continue;
    Subspace norm = scale(m.inv(), s);
    for (Felt l : norm.elements()) {
      if (l.is_zero() || t.degree_over_base(l) == 1) continue;
      std::vector<Felt> gens{t.one(), l, l * l};
      if (Subspace::span(t, gens) == norm) return true;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("classify3 recognizes the template families") {
  const FieldTower& t = tower64();
  Felt g = t.generator();

  FamilyLabel f1 = classify3(subfield_coset(t, 3, g.pow(5)));
  CHECK(f1.family == Family::I);
  CHECK(f1.reconstructs(subfield_coset(t, 3, g.pow(5))));

  FamilyLabel f3 = classify3(poly_span(t, t.one(), g));  // deg(g) = 6 > 4
  CHECK(f3.family == Family::III);
  CHECK(f3.lambda_degree == 6);
  CHECK(f3.profile.dim_square == 5);
  CHECK(f3.profile.w.at(2) == 0);
  CHECK(f3.profile.delta.at(2) == 3);

  FamilyLabel f4 = classify3(line_plus_point(t, t.one(), g));
  CHECK(f4.family == Family::IV);
  CHECK(f4.profile.dim_square == 5);
  CHECK(f4.profile.delta.at(2) == 2);
  CHECK(f4.profile.w.at(2) == 1);
  CHECK(f4.reconstructs(line_plus_point(t, t.one(), g)));

  CHECK_THROWS_AS(classify3(subfield_coset(t, 2, g)), PreconditionError);  // k = 2
}

TEST_CASE("classify3 family II on towers with 4 | n") {
  // n = 4: every 3-dimensional subspace is family II
  FieldTower t16(2, 1, 4);
  unsigned count = 0;
  for_each_rref_subspace(t16, 3, [&](const Subspace& s) {
    FamilyLabel l = classify3(s);
    CHECK(l.family == Family::II);
    CHECK(l.lambda_degree == 4);
    CHECK(l.profile.dim_square == 4);
    CHECK(l.profile.delta.at(4) == 1);
    CHECK(l.profile.w.at(2) == 1);
    CHECK(l.reconstructs(s));
    ++count;
  });
  CHECK(count == gaussian_binomial(2, 4, 3));

  // n = 8: a planted deg-4 lambda
  FieldTower t256(2, 1, 8);
  Felt lam = t256.subfield_generator_rel(4);  // degree 4 over F_2
  REQUIRE(t256.degree_over_base(lam) == 4);
  Felt mu = t256.generator();
  FamilyLabel l8 = classify3(poly_span(t256, mu, lam));
  CHECK(l8.family == Family::II);
  CHECK(l8.lambda_degree == 4);
  CHECK(l8.reconstructs(poly_span(t256, mu, lam)));
}

TEST_CASE("classify3 witness reconstruction on random subspaces") {
  for (auto [p, n] : {std::pair<int, int>{2, 6}, {2, 7}, {3, 6}, {2, 8}}) {
    FieldTower t(p, 1, n);
    std::mt19937_64 rng(89);
    for (int i = 0; i < 40; ++i) {
      Subspace s = oracles::random_subspace(t, 3, rng);
      FamilyLabel l = classify3(s);
      CHECK(l.reconstructs(s));
      // the family profile table
      switch (l.family) {
        case Family::I:
          CHECK(l.profile.dim_square == 3);
          break;
        case Family::II:
          CHECK(l.profile.dim_square == 4);
          CHECK(l.lambda_degree == 4);
          CHECK(l.profile.delta.at(4) == 1);
          break;
        case Family::III:
          CHECK(l.profile.dim_square == 5);
          CHECK(l.lambda_degree > 4);
          if (n % 2 == 0) {
            CHECK(l.profile.delta.at(2) == 3);
            CHECK(l.profile.w.at(2) == 0);
          }
          break;
        case Family::IV:
          CHECK(l.profile.dim_square == 5);
          CHECK(l.profile.delta.at(2) == 2);
          CHECK(l.profile.w.at(2) == 1);
          break;
        case Family::V:
          CHECK(l.profile.dim_square == 6);
          CHECK(l.profile.sidon);
          break;
      }
    }
  }
}

TEST_CASE("classify3 is constant on equivalence classes") {
  const FieldTower& t = tower64();
  std::mt19937_64 rng(97);
  for (int i = 0; i < 60; ++i) {
    Subspace s = oracles::random_subspace(t, 3, rng);
    Felt alpha = oracles::random_nonzero(t, rng);
    FieldAut sigma{static_cast<unsigned>(rng() % t.aut_count())};
    CHECK(classify3(s).family == classify3(scale(alpha, aut_image(s, sigma))).family);
  }
}

TEST_CASE("find_poly_basis") {
  const FieldTower& t = tower64();
  Felt g = t.generator();

  auto pb = find_poly_basis(poly_span(t, t.one(), g));
  REQUIRE(pb.has_value());
  CHECK(poly_span(t, pb->mu, pb->lambda) == poly_span(t, t.one(), g));

  // the field itself: closure makes every lambda work
  auto pb_field = find_poly_basis(subfield_coset(t, 3, t.one()));
  REQUIRE(pb_field.has_value());
  CHECK(poly_span(t, pb_field->mu, pb_field->lambda) == subfield_coset(t, 3, t.one()));

  // family IV has no polynomial basis; cross-checked by the full scan
  Subspace fam4 = line_plus_point(t, t.one(), g);
  REQUIRE(classify3(fam4).family == Family::IV);
  CHECK_FALSE(find_poly_basis(fam4).has_value());
  CHECK_FALSE(brute_has_poly_basis(fam4));

  // agreement between the search and the brute scan on random subspaces
  std::mt19937_64 rng(101);
  for (int i = 0; i < 30; ++i) {
    Subspace s = oracles::random_subspace(t, 3, rng);
    auto found = find_poly_basis(s);
    CHECK(found.has_value() == brute_has_poly_basis(s));
    if (found) CHECK(poly_span(t, found->mu, found->lambda) == s);
  }
}

TEST_CASE("structure lemma over the full (2,6) enumeration") {
  const FieldTower& t = tower64();
  std::vector<Felt> lambdas;
  for (std::uint64_t v = 2; v < t.order(); ++v) {
    Felt l = t.from_encoding(v);
    if (t.degree_over_base(l) > 1) lambdas.push_back(l);
  }
  for_each_rref_subspace(t, 3, [&](const Subspace& s) {
    for (Felt l : lambdas) {
      unsigned meet = intersect(s, scale(l, s)).dim();
      unsigned deg = t.degree_over_base(l);
      if (meet == 3) {
        CHECK(scale(l, s) == s);
        CHECK(3 % deg == 0);  // F_q(lambda) stabilizes s, so deg | k
      } else if (meet == 2) {
        if (deg >= 3) {
          // case (b): s = mu<1, l, l^2> for this very lambda
          CHECK(deg != 3);
          bool found = false;
          for (Felt m : s.projective_points()) {
            if (contains(s, m * l) && contains(s, m * l * l)) {
              found = true;
              break;
            }
          }
          CHECK(found);
        } else {
          // case (c): deg = 2, s splits as an F_{q^2}-line plus a point
          CHECK(deg == 2);
          Subspace w2 = largest_subfield_submodule(s, 2);
          CHECK(w2.dim() == 2);
          bool split = false;
          for (unsigned r = 0; r < s.dim(); ++r) {
            Felt mu = s.row_element(r);
            if (!contains(w2, mu)) {
              std::vector<Felt> gens{w2.row_element(0), w2.row_element(1), mu};
              split = Subspace::span(t, gens) == s;
              break;
            }
          }
          CHECK(split);
        }
      }
    }
  });
}

TEST_CASE("equivalent finds planted witnesses") {
  for (auto [p, n] : {std::pair<int, int>{2, 6}, {3, 5}}) {
    FieldTower t(p, 1, n);
    std::mt19937_64 rng(103);
    for (int i = 0; i < 20; ++i) {
      Subspace s2 = oracles::random_subspace(t, 3, rng);
      Felt alpha = oracles::random_nonzero(t, rng);
      FieldAut sigma{static_cast<unsigned>(rng() % t.aut_count())};
      Subspace s1 = scale(alpha, aut_image(s2, sigma));
      auto w = equivalent(s1, s2);
      REQUIRE(w.has_value());
      CHECK(witness_checks(*w, s1, s2));
    }
  }
}

TEST_CASE("equivalent separates family III from family IV") {
  const FieldTower& t = tower64();
  Felt g = t.generator();
  Subspace f3 = poly_span(t, t.one(), g);
  Subspace f4 = line_plus_point(t, t.one(), g);
  REQUIRE(classify3(f3).family == Family::III);
  REQUIRE(classify3(f4).family == Family::IV);
  CHECK_FALSE(equivalent(f3, f4).has_value());
  CHECK_FALSE(equivalent(f4, f3).has_value());
}

TEST_CASE("equivalent input validation") {
  const FieldTower& t = tower64();
  FieldTower other(2, 1, 3);
  std::mt19937_64 rng(107);
  Subspace a = oracles::random_subspace(t, 3, rng);
  Subspace b = oracles::random_subspace(t, 2, rng);
  Subspace c = oracles::random_subspace(other, 2, rng);
  CHECK_THROWS_AS(equivalent(a, b), PreconditionError);
  CHECK_THROWS_AS(equivalent(a, c), ValidationError);
}

TEST_CASE("all family II subspaces are equivalent") {
  // n = 4: the whole Grassmannian is one class
  FieldTower t16(2, 1, 4);
  std::vector<Subspace> all;
  for_each_rref_subspace(t16, 3, [&](const Subspace& s) { all.push_back(s); });
  for (std::size_t i = 1; i < all.size(); ++i) {
    auto w = equivalent(all[0], all[i]);
    REQUIRE(w.has_value());
    CHECK(witness_checks(*w, all[0], all[i]));
  }

  // q = 4 (h = 2): sampled family II pairs; the automorphism group has 8 members
  FieldTower t44(2, 2, 4);
  std::mt19937_64 rng(109);
  for (int i = 0; i < 5; ++i) {
    Subspace s1 = oracles::random_subspace(t44, 3, rng);
    Subspace s2 = oracles::random_subspace(t44, 3, rng);
    REQUIRE(classify3(s1).family == Family::II);
    auto w = equivalent(s1, s2);
    REQUIRE(w.has_value());
    CHECK(witness_checks(*w, s1, s2));
  }
}

TEST_CASE("equivalent_poly_fast") {
  FieldTower t(2, 1, 7);
  Felt g = t.generator();  // degree 7 > 4
  Subspace s = poly_span(t, t.one(), g);
  PolyBasis pb{t.one(), g};

  SUBCASE("identity pair") {
    auto w = equivalent_poly_fast(s, pb, s, pb);
    REQUIRE(w.has_value());
    CHECK(witness_checks(*w, s, s));
  }

  SUBCASE("fractional image (1 + mu)/mu") {
    Felt l2 = (t.one() + g) / g;
    Subspace s2 = poly_span(t, t.one(), l2);
    PolyBasis pb2{t.one(), l2};
    auto w = equivalent_poly_fast(s2, pb2, s, pb);
    REQUIRE(w.has_value());
    CHECK(witness_checks(*w, s2, s));
    // direct span verification of the planted relation
    CHECK(equivalent(s2, s).has_value());
  }

  SUBCASE("degree precondition") {
    FieldTower t64(2, 1, 6);
    Felt lam = t64.subfield_generator_rel(2);
    Subspace bad = line_plus_point(t64, t64.one(), t64.generator());
    (void)bad;
    Subspace s4 = poly_span(t64, t64.one(), t64.generator());
    PolyBasis low{t64.one(), lam};
    CHECK_THROWS_AS(equivalent_poly_fast(s4, PolyBasis{t64.one(), t64.generator()}, s4, low),
                    PreconditionError);
  }

  SUBCASE("malformed witness") {
    CHECK_THROWS_AS(equivalent_poly_fast(s, PolyBasis{g, g}, s, pb), ValidationError);
  }

  SUBCASE("agreement with the brute force on random pairs") {
    std::mt19937_64 rng(113);
    std::vector<std::pair<Subspace, PolyBasis>> pool;
    while (pool.size() < 24) {
      Subspace cand = oracles::random_subspace(t, 3, rng);
      FamilyLabel l = classify3(cand);
      if (l.family == Family::III) pool.emplace_back(cand, *l.poly);
    }
    int trials = 0;
    for (std::size_t i = 0; i < pool.size() && trials < 200; ++i) {
      for (std::size_t j = 0; j < pool.size() && trials < 200; ++j, ++trials) {
        auto fast = equivalent_poly_fast(pool[i].first, pool[i].second, pool[j].first, pool[j].second);
        auto brute = equivalent(pool[i].first, pool[j].first);
        CHECK(fast.has_value() == brute.has_value());
        if (fast) CHECK(witness_checks(*fast, pool[i].first, pool[j].first));
      }
    }
  }
}

TEST_CASE("equivalent_famIV_fast") {
  const FieldTower& t = tower64();
  Felt g = t.generator();
  Felt c2 = t.subfield_generator_rel(2);

  Subspace s = line_plus_point(t, t.one(), g);
  LinePlusPoint w1{t.one(), g};

  SUBCASE("eta = mu") {
    auto w = equivalent_famIV_fast(s, w1, s, w1);
    REQUIRE(w.has_value());
    CHECK(witness_checks(*w, s, s));
  }

  SUBCASE("eta = mu + c shifts") {
    Felt eta = g + c2;
    Subspace s2 = line_plus_point(t, t.one(), eta);
    auto w = equivalent_famIV_fast(s2, LinePlusPoint{t.one(), eta}, s, w1);
    REQUIRE(w.has_value());
    CHECK(witness_checks(*w, s2, s));
  }

  SUBCASE("exhaustive agreement with equivalent on family IV orbit reps") {
    std::vector<std::pair<Subspace, LinePlusPoint>> reps;
    std::set<std::vector<std::uint64_t>> seen;
    for_each_rref_subspace(t, 3, [&](const Subspace& s3) {
      if (delta_t(s3, 2) != 2 || w_t(s3, 2) != 1 || square_span(s3).dim() != 5) return;
      Subspace rep = canonical_orbit_rep(s3);
      if (!seen.insert(rep.serialize()).second) return;
      FamilyLabel l = classify3(rep);
      REQUIRE(l.family == Family::IV);
      reps.emplace_back(rep, *l.line);
    });
    REQUIRE(reps.size() > 1);
    for (auto& [s1, l1] : reps) {
      for (auto& [s2, l2] : reps) {
        auto fast = equivalent_famIV_fast(s1, l1, s2, l2);
        auto brute = equivalent(s1, s2);
        CHECK(fast.has_value() == brute.has_value());
        if (fast) CHECK(witness_checks(*fast, s1, s2));
      }
    }
  }
}

TEST_CASE("gaussian binomial") {
  CHECK(gaussian_binomial(2, 5, 3) == 155);
  CHECK(gaussian_binomial(2, 6, 3) == 1395);
  CHECK(gaussian_binomial(2, 7, 3) == 11811);
  CHECK(gaussian_binomial(3, 6, 3) == 33880);
  CHECK(gaussian_binomial(2, 4, 3) == 15);
  CHECK(gaussian_binomial(4, 4, 3) == 85);
  CHECK(gaussian_binomial(2, 3, 3) == 1);
}

TEST_CASE("rref enumeration hits every subspace once") {
  FieldTower t(3, 1, 4);
  std::set<std::vector<std::uint64_t>> seen;
  std::uint64_t count = 0;
  for_each_rref_subspace(t, 2, [&](const Subspace& s) {
    CHECK(s.dim() == 2);
    CHECK(seen.insert(s.serialize()).second);
    ++count;
  });
  CHECK(count == gaussian_binomial(3, 4, 2));
}

TEST_CASE("census at (2,5): the bound is attained") {
  FieldTower t(2, 1, 5);
  CensusReport r = census(t);
  CHECK(r.subspace_count == 155);
  CHECK(r.orbit_count == 5);
  CHECK(r.bounds_apply);
  CHECK(r.distance2_class_count == 1);
  CHECK(r.lower_bound == doctest::Approx(1.0));
  CHECK(r.lower_bound_attained);
  std::uint64_t orbit_total = 0;
  for (auto& [f, c] : r.family_orbit_counts) orbit_total += c;
  CHECK(orbit_total == r.orbit_count);
  // only families III and V can appear when n = 5
  CHECK(r.family_orbit_counts.count(Family::I) == 0);
  CHECK(r.family_orbit_counts.count(Family::II) == 0);
  CHECK(r.family_orbit_counts.count(Family::IV) == 0);
}

TEST_CASE("census at (2,6): totals and cross-module consistency") {
  const FieldTower& t = tower64();
  CensusReport r = census(t);
  CHECK(r.subspace_count == 1395);
  std::uint64_t orbit_total = 0, class_total = 0;
  for (auto& [f, c] : r.family_orbit_counts) orbit_total += c;
  for (auto& [d, c] : r.class_counts_by_distance) class_total += c;
  CHECK(orbit_total == r.orbit_count);
  CHECK(class_total == r.classes.size());
  CHECK_FALSE(r.bounds_apply);
  // the multiplicative cosets of F_8 form exactly one orbit of size 9
  CHECK(r.family_orbit_counts.at(Family::I) == 1);

  // canonical reps, counted independently, match the orbit count
  std::set<std::vector<std::uint64_t>> reps;
  for_each_rref_subspace(t, 3, [&](const Subspace& s) { reps.insert(canonical_orbit_rep(s).serialize()); });
  CHECK(reps.size() == r.orbit_count);
}

TEST_CASE("census determinism across worker counts") {
  FieldTower t(2, 1, 6);
  CensusOptions one;
  one.jobs = 1;
  CensusOptions four;
  four.jobs = 4;
  CHECK(census_csv(census(t, one)) == census_csv(census(t, four)));
}

TEST_CASE("census cap") {
  FieldTower t(2, 1, 7);
  CensusOptions opts;
  opts.enumeration_cap = 100;
  CHECK_THROWS_AS(census(t, opts), CapError);
}

TEST_CASE("census rejects the degenerate n = 3 Grassmannian") {
  FieldTower t(2, 1, 3);
  CHECK_THROWS_AS(census(t), PreconditionError);
}

TEST_CASE("census at (3,6): structure of the odd-characteristic Grassmannian") {
  FieldTower t(3, 1, 6);
  CensusOptions opts;
  opts.jobs = 2;
  CensusReport r = census(t, opts);
  CHECK(r.subspace_count == 33880);
  // one orbit of F_27 cosets (size 28), the rest strictly F_3-linear (size 364)
  CHECK(r.orbit_count == 94);
  CHECK(r.family_orbit_counts.at(Family::I) == 1);
  std::uint64_t subspaces = 0;
  for (const CensusClassRow& row : r.classes) {
    subspaces += row.orbit_size * row.orbit_count;
    CHECK((row.orbit_size == 364 || row.orbit_size == 28));
  }
  CHECK(subspaces == r.subspace_count);
}

TEST_CASE("census at (2,8): all family II orbits form a single class") {
  FieldTower t(2, 1, 8);
  CensusOptions opts;
  opts.jobs = 2;
  CensusReport r = census(t, opts);
  CHECK(r.subspace_count == 97155);
  CHECK(r.family_orbit_counts.at(Family::II) >= 1);
  std::uint64_t fam2_classes = 0;
  for (const CensusClassRow& row : r.classes) {
    if (row.family == Family::II) ++fam2_classes;
  }
  CHECK(fam2_classes == 1);
}
