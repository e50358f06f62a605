#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "drrbfpu/errors.hpp"

namespace drrbfpu {

using Point = Eigen::Vector2d;

/// Scattered points in the closed unit square, pairwise distinct above 1e-12.
struct PointSet {
  Eigen::Matrix2Xd coords;  // one point per column

  int size() const { return int(coords.cols()); }
  Point point(int i) const { return coords.col(i); }
};

/// n x n tensor grid on [0,1]^2 including the boundary, row-major: the first
/// coordinate varies fastest.
PointSet build_uniform_grid(int n_per_side);

/// Halton sequence (bases 2 and 3) for genuinely scattered node sets.
PointSet halton_points(int count, int skip = 1);

/// Rejects points outside the closed unit square or closer than 1e-12.
void validate_point_set(const PointSet& points);

/// Plain-text CSV with header "x,y", one point per row, %.17g.
void write_points_csv(const std::string& path, const PointSet& points);
PointSet read_points_csv(const std::string& path);

/// Overlapping open-ball cover of the unit square.
struct PatchCover {
  Eigen::Matrix2Xd centers;
  Eigen::VectorXd radii;
  double overlap = 0.0;  // overlap factor the cover was built with; 0 when unspecified

  int count() const { return int(centers.cols()); }
  Point center(int l) const { return centers.col(l); }
  double radius(int l) const { return radii(l); }
};

/// m x m grid of patch centers over [0,1]^2 (n_patches = m^2, spacing
/// h_c = 1/(m-1)), all radii overlap * h_c. Coverage is verified on a 200x200
/// probe grid; an uncovered probe point is a hard error naming that point.
PatchCover build_patch_cover(int n_patches, double overlap = 1.0);

/// Per-patch index sets J_l: j is a member of patch l iff ||x_j - x_l|| < rho_l.
struct PatchMembership {
  std::vector<std::vector<int>> members;  // ascending within each patch
  std::vector<int> deficient;             // patches with fewer than 2 members
};

/// Membership via a uniform-bin spatial index, O(N + sum |J_l|). Every point
/// must fall in at least one patch.
PatchMembership assign_members(const PointSet& points, const PatchCover& cover);

/// Indices of all patches whose open ball contains x, ascending. Throws
/// CoverageError when x is outside every ball.
std::vector<int> covering_patches(const Point& x, const PatchCover& cover);

/// Uniform-bin lookup over patch centers (cell size = largest radius); returns
/// the same patch lists as covering_patches, possibly empty.
class PatchIndex {
 public:
  PatchIndex() = default;
  explicit PatchIndex(const PatchCover& cover);

  std::vector<int> covering(const Point& x) const;

 private:
  Eigen::Matrix2Xd centers_;
  Eigen::VectorXd radii_;
  double cell_ = 1.0;
  int grid_ = 1;
  std::vector<std::vector<int>> bins_;
};

}  // namespace drrbfpu
