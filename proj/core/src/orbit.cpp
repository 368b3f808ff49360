#include "orbitcodes/orbit.hpp"

#include <set>

namespace orbitcodes {

std::uint64_t orbit_size(const Subspace& s) {
  const FieldTower& t = s.tower();
  unsigned d = linearity_field(s);
  return (t.order() - 1) / (t.q_pow(d) - 1);
}

MinDistanceResult min_distance_detail(const Subspace& s) {
  if (s.dim() == 0) throw PreconditionError("minimum distance of the zero orbit");
  const FieldTower& t = s.tower();
  MinDistanceResult best;
  bool found = false;
  std::uint64_t cosets = (t.order() - 1) / (t.q() - 1);
  for (std::uint64_t e = 1; e < cosets; ++e) {
    Felt alpha = t.from_exponent(e);
    Subspace img = scale(alpha, s);
    if (img == s) continue;
    unsigned m = intersect(s, img).dim();
    if (!found || m > best.max_intersection) {
      best.max_intersection = m;
      best.witness = alpha;
      found = true;
    }
  }
  if (!found) throw PreconditionError("orbit of size 1 has no distance");
  best.distance = 2 * s.dim() - 2 * best.max_intersection;
  return best;
}

unsigned min_distance(const Subspace& s) { return min_distance_detail(s).distance; }

Subspace canonical_orbit_rep(const Subspace& s) {
  if (s.dim() == 0) throw PreconditionError("canonical rep of the zero subspace");
  Subspace best = s;
  std::vector<std::uint64_t> best_ser = s.serialize();
  for_each_projective_scalar(s.tower(), [&](Felt alpha) {
    Subspace img = scale(alpha, s);
    std::vector<std::uint64_t> ser = img.serialize();
    if (ser < best_ser) {
      best_ser = std::move(ser);
      best = std::move(img);
    }
  });
  return best;
}

std::map<unsigned, std::uint64_t> distance_distribution(const Subspace& s, std::uint64_t max_orbit) {
  if (s.dim() == 0) throw PreconditionError("distance distribution of the zero orbit");
  if (orbit_size(s) > max_orbit) throw CapError("orbit size exceeds the configured bound");
  std::vector<std::uint64_t> self = s.serialize();
  std::set<std::vector<std::uint64_t>> seen;
  std::map<unsigned, std::uint64_t> hist;
  for_each_projective_scalar(s.tower(), [&](Felt alpha) {
    Subspace img = scale(alpha, s);
    std::vector<std::uint64_t> ser = img.serialize();
    if (ser == self) return;
    if (!seen.insert(std::move(ser)).second) return;
    ++hist[distance(s, img)];
  });
  return hist;
}

OrbitCode OrbitCode::analyze(const Subspace& s) {
  return OrbitCode{canonical_orbit_rep(s), orbit_size(s), orbitcodes::min_distance(s), s.dim(), s.ambient()};
}

}  // namespace orbitcodes
