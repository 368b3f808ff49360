#include "doctest.h"
#include "oracles.hpp"
#include "orbitcodes/classify.hpp"
#include "orbitcodes/orbit.hpp"

#include <random>

using namespace orbitcodes;

namespace {

const FieldTower& tower64() {
  static FieldTower t(2, 1, 6);
  return t;
}

Subspace f8_in_f64(const FieldTower& t) {
  Felt c = t.subfield_generator_rel(3);
  std::vector<Felt> gens{t.one(), c, c * c};
  return Subspace::span(t, gens);
}

}  // namespace

TEST_CASE("orbit size") {
  const FieldTower& t = tower64();
  CHECK(orbit_size(f8_in_f64(t)) == 9);  // (2^6-1)/(2^3-1)

  std::mt19937_64 rng(61);
  for (int i = 0; i < 20; ++i) {
    Subspace s = oracles::random_subspace(t, 3, rng);
    if (linearity_field(s) == 1) CHECK(orbit_size(s) == 63);
    unsigned d = linearity_field(s);
    CHECK(orbit_size(s) * (t.q_pow(d) - 1) == t.order() - 1);
  }
  CHECK_THROWS_AS(orbit_size(Subspace::zero(t)), PreconditionError);
}

TEST_CASE("orbit size equals the brute scalar walk") {
  for (auto [p, n] : {std::pair<int, int>{2, 6}, {3, 5}, {2, 12}}) {
    FieldTower t(p, 1, n);
    std::mt19937_64 rng(67);
    int trials = n <= 6 ? 10 : 3;
    for (int i = 0; i < trials; ++i) {
      Subspace s = oracles::random_subspace(t, 3, rng);
      CHECK(oracles::brute_orbit(s).size() == orbit_size(s));
    }
    // a subfield-linear example where the orbit shrinks
    if (n % 3 == 0) {
      Felt c = t.subfield_generator_rel(3);
      std::vector<Felt> gens{t.one(), c, c * c};
      Subspace coset = Subspace::span(t, gens);
      CHECK(oracles::brute_orbit(coset).size() == orbit_size(coset));
    }
  }
}

TEST_CASE("minimum distance") {
  const FieldTower& t = tower64();
  CHECK(min_distance(f8_in_f64(t)) == 6);

  std::mt19937_64 rng(71);
  for (int i = 0; i < 25; ++i) {
    Subspace s = oracles::random_subspace(t, 3, rng);
    if (is_sidon(s)) CHECK(min_distance(s) == 4);
    MinDistanceResult r = min_distance_detail(s);
    CHECK(r.distance == 2 * s.dim() - 2 * r.max_intersection);
    Subspace img = scale(r.witness, s);
    CHECK(img != s);
    CHECK(intersect(s, img).dim() == r.max_intersection);
  }

  // full field: orbit of size 1
  std::vector<Felt> all{t.one(), t.generator()};
  Subspace whole = field_closure(Subspace::span(t, all), t.n());
  REQUIRE(whole.dim() == t.n());
  CHECK_THROWS_AS(min_distance(whole), PreconditionError);
}

TEST_CASE("minimum distance agrees with the pairwise brute force") {
  for (auto [p, n] : {std::pair<int, int>{2, 6}, {3, 5}, {2, 9}}) {
    FieldTower t(p, 1, n);
    std::mt19937_64 rng(73);
    int trials = t.order() <= 512 ? 6 : 4;
    for (int i = 0; i < trials; ++i) {
      Subspace s = oracles::random_subspace(t, 3, rng);
      CHECK(min_distance(s) == oracles::brute_min_distance(s));
    }
  }
}

TEST_CASE("trichotomy over exhaustive small towers") {
  // for 3-dim subspaces: distance 6 iff linearity field 3, 4 iff Sidon,
  // otherwise 2
  for (auto [p, n] : {std::pair<int, int>{2, 5}, {3, 5}}) {
    FieldTower t(p, 1, n);
    for_each_rref_subspace(t, 3, [&](const Subspace& s) {
      unsigned d = min_distance(s);
      unsigned lin = linearity_field(s);
      bool sid = is_sidon(s);
      CHECK((d == 2 || d == 4 || d == 6));
      CHECK((d == 6) == (lin == 3));
      CHECK((d == 4) == (sid && lin != 3));
    });
  }
}

TEST_CASE("canonical orbit representative") {
  const FieldTower& t = tower64();
  std::mt19937_64 rng(79);
  for (int i = 0; i < 30; ++i) {
    Subspace s = oracles::random_subspace(t, 3, rng);
    Subspace rep = canonical_orbit_rep(s);
    Felt alpha = oracles::random_nonzero(t, rng);
    CHECK(canonical_orbit_rep(scale(alpha, s)) == rep);
    // the rep serialization is minimal over the orbit
    CHECK(rep.serialize() <= s.serialize());
    // orbit-mates map to orbit-mates under automorphisms
    FieldAut sigma{static_cast<unsigned>(rng() % t.aut_count())};
    CHECK(canonical_orbit_rep(aut_image(s, sigma)) == canonical_orbit_rep(aut_image(scale(alpha, s), sigma)));
  }
}

TEST_CASE("distance distribution") {
  const FieldTower& t = tower64();
  Subspace coset = f8_in_f64(t);
  std::map<unsigned, std::uint64_t> spread = distance_distribution(coset);
  CHECK(spread == std::map<unsigned, std::uint64_t>{{6, 8}});

  std::mt19937_64 rng(83);
  for (int i = 0; i < 10; ++i) {
    Subspace s = oracles::random_subspace(t, 3, rng);
    auto hist = distance_distribution(s);
    CHECK(hist.begin()->first == min_distance(s));
    std::uint64_t total = 0;
    for (auto& [d, c] : hist) total += c;
    CHECK(total == orbit_size(s) - 1);
  }
  CHECK_THROWS_AS(distance_distribution(oracles::random_subspace(t, 3, rng), 8), CapError);
}

TEST_CASE("orbit analyze record") {
  const FieldTower& t = tower64();
  OrbitCode oc = OrbitCode::analyze(f8_in_f64(t));
  CHECK(oc.size == 9);
  CHECK(oc.min_distance == 6);
  CHECK(oc.k == 3);
  CHECK(oc.n == 6);
  CHECK(oc.rep == canonical_orbit_rep(f8_in_f64(t)));
}
