#pragma once

#include <vector>

#include "fdbem/kernel.hpp"

namespace fdbem {

// Cone directions of one high-frequency level. Each face of [-1,1]^3 is split
// into 2^j x 2^j squares; a direction is the normalized center of a square and
// its wedge is every unit vector whose central projection lands in the square.
// Index = face * 4^j + row * 2^j + col with faces ordered +x,-x,+y,-y,+z,-z.
class DirectionSet {
 public:
  DirectionSet() = default;
  explicit DirectionSet(int j);

  int j() const { return j_; }
  int side() const { return 1 << j_; }
  int size() const { return 6 * side() * side(); }
  const Vec3& direction(int id) const { return directions_[id]; }
  const std::vector<Vec3>& directions() const { return directions_; }

  // Wedge holding v (need not be normalized); boundary ties go to the lowest index.
  int wedge_of(const Vec3& v) const;
  // Mirror wedge: direction(antipode(i)) == -direction(i) exactly.
  int antipode(int id) const;
  // Wedge of this set's coarser neighbour (j - 1) containing wedge `id`.
  int coarser(int id) const;
  // Largest angle between a direction and any vector of its wedge, over all wedges.
  double angular_radius() const { return angular_radius_; }

 private:
  int j_ = -1;
  std::vector<Vec3> directions_;
  double angular_radius_ = 0.0;
};

// j = max(0, ceil(log2(width / wavelength))); throws when width < wavelength.
int direction_level(double width, const WaveContext& ctx);
DirectionSet make_direction_set(double width, const WaveContext& ctx);

// Wedge of (target - center) in `set`; throws on coincident points.
int direction_index(const DirectionSet& set, const Vec3& center, const Vec3& target);

}  // namespace fdbem
