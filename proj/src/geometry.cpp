#include "drrbfpu/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>

namespace drrbfpu {

namespace {

constexpr double kDistinctTol = 1e-12;

std::string format_point(const Point& p) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "(%.17g, %.17g)", p.x(), p.y());
  return buf;
}

}  // namespace

PointSet build_uniform_grid(int n_per_side) {
  if (n_per_side < 2) throw std::invalid_argument("build_uniform_grid: n_per_side must be >= 2");
  const double h = 1.0 / (n_per_side - 1);
  PointSet out;
  out.coords.resize(2, Eigen::Index(n_per_side) * n_per_side);
  Eigen::Index k = 0;
  for (int iy = 0; iy < n_per_side; ++iy)
    for (int ix = 0; ix < n_per_side; ++ix, ++k) out.coords.col(k) = Point(ix * h, iy * h);
  return out;
}

namespace {

double radical_inverse(long index, int base) {
  double inv = 1.0 / base, result = 0.0, frac = inv;
  while (index > 0) {
    result += (index % base) * frac;
    index /= base;
    frac *= inv;
  }
  return result;
}

}  // namespace

PointSet halton_points(int count, int skip) {
  if (count < 1) throw std::invalid_argument("halton_points: count must be positive");
  if (skip < 0) throw std::invalid_argument("halton_points: skip must be nonnegative");
  PointSet out;
  out.coords.resize(2, count);
  for (int i = 0; i < count; ++i)
    out.coords.col(i) = Point(radical_inverse(skip + i, 2), radical_inverse(skip + i, 3));
  return out;
}

void validate_point_set(const PointSet& points) {
  const int n = points.size();
  for (int i = 0; i < n; ++i) {
    const Point p = points.point(i);
    if (!(p.x() >= 0.0 && p.x() <= 1.0 && p.y() >= 0.0 && p.y() <= 1.0))
      throw std::invalid_argument("point " + format_point(p) + " lies outside [0,1]^2");
  }
  // lexicographic sort; near-duplicates end up adjacent within an x window
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const Point pa = points.point(a), pb = points.point(b);
    return pa.x() != pb.x() ? pa.x() < pb.x() : pa.y() < pb.y();
  });
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Point a = points.point(order[i]), b = points.point(order[j]);
      if (b.x() - a.x() > kDistinctTol) break;
      if ((a - b).norm() < kDistinctTol)
        throw DegenerateNodesError(order[i], order[j], (a - b).norm());
    }
  }
}

void write_points_csv(const std::string& path, const PointSet& points) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open " + path + " for writing");
  out << "x,y\n";
  char buf[80];
  for (int i = 0; i < points.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", points.point(i).x(), points.point(i).y());
    out << buf;
  }
  if (!out) throw FormatError("write failed: " + path);
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& s, const std::string& context) {
  const std::string t = trim(s);
  if (t.empty()) throw FormatError(context + ": empty numeric field");
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size()) throw FormatError(context + ": bad number '" + t + "'");
  return v;
}

}  // namespace

PointSet read_points_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || trim(line) != "x,y")
    throw FormatError(path + ": expected header 'x,y'");
  std::vector<Point> pts;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw FormatError(path + ":" + std::to_string(lineno) + ": expected 'x,y' row");
    const std::string ctx = path + ":" + std::to_string(lineno);
    pts.emplace_back(parse_double(line.substr(0, comma), ctx),
                     parse_double(line.substr(comma + 1), ctx));
  }
  if (pts.empty()) throw FormatError(path + ": no points");
  PointSet out;
  out.coords.resize(2, Eigen::Index(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) out.coords.col(Eigen::Index(i)) = pts[i];
  validate_point_set(out);
  return out;
}

PatchCover build_patch_cover(int n_patches, double overlap) {
  const int m = int(std::lround(std::sqrt(double(n_patches))));
  if (m < 2 || m * m != n_patches)
    throw std::invalid_argument("build_patch_cover: n_patches must be a square of an integer >= 2");
  const double min_overlap = 1.0 / std::sqrt(2.0);
  if (!(overlap >= min_overlap))
    throw std::invalid_argument("build_patch_cover: overlap must be >= 1/sqrt(2)");

  PatchCover cover;
  cover.overlap = overlap;
  const double hc = 1.0 / (m - 1);
  cover.centers.resize(2, Eigen::Index(n_patches));
  cover.radii = Eigen::VectorXd::Constant(n_patches, overlap * hc);
  Eigen::Index k = 0;
  for (int iy = 0; iy < m; ++iy)
    for (int ix = 0; ix < m; ++ix, ++k) cover.centers.col(k) = Point(ix * hc, iy * hc);

  // coverage check on a 200 x 200 probe grid
  const int probe = 200;
  for (int iy = 0; iy < probe; ++iy) {
    for (int ix = 0; ix < probe; ++ix) {
      const Point p(ix / double(probe - 1), iy / double(probe - 1));
      bool covered = false;
      for (int l = 0; l < cover.count() && !covered; ++l)
        covered = (p - cover.center(l)).norm() < cover.radius(l);
      if (!covered) throw CoverageError(p);
    }
  }
  return cover;
}

PatchMembership assign_members(const PointSet& points, const PatchCover& cover) {
  const int n = points.size();
  const int nc = cover.count();
  if (n == 0 || nc == 0) throw std::invalid_argument("assign_members: empty input");

  const double cell = cover.radii.maxCoeff();
  if (!(cell > 0.0)) throw std::invalid_argument("assign_members: radii must be positive");
  const int grid = std::max(1, int(std::ceil(1.0 / cell)));
  auto cell_of = [&](double v) {
    int c = int(std::floor(v / cell));
    return std::clamp(c, 0, grid - 1);
  };

  std::vector<std::vector<int>> bins(std::size_t(grid) * grid);
  for (int i = 0; i < n; ++i)
    bins[std::size_t(cell_of(points.point(i).y())) * grid + cell_of(points.point(i).x())]
        .push_back(i);

  PatchMembership out;
  out.members.resize(nc);
  std::vector<int> touch_count(n, 0);
  for (int l = 0; l < nc; ++l) {
    const Point c = cover.center(l);
    const double rho = cover.radius(l);
    auto& mem = out.members[l];
    const int x0 = cell_of(c.x() - rho), x1 = cell_of(c.x() + rho);
    const int y0 = cell_of(c.y() - rho), y1 = cell_of(c.y() + rho);
    for (int cy = y0; cy <= y1; ++cy) {
      for (int cx = x0; cx <= x1; ++cx) {
        for (int i : bins[std::size_t(cy) * grid + cx]) {
          if ((points.point(i) - c).norm() < rho) mem.push_back(i);
        }
      }
    }
    std::sort(mem.begin(), mem.end());
    for (int i : mem) ++touch_count[i];
    if (int(mem.size()) < 2) out.deficient.push_back(l);
  }
  for (int i = 0; i < n; ++i)
    if (touch_count[i] == 0) throw CoverageError(points.point(i));
  return out;
}

std::vector<int> covering_patches(const Point& x, const PatchCover& cover) {
  std::vector<int> out;
  for (int l = 0; l < cover.count(); ++l)
    if ((x - cover.center(l)).norm() < cover.radius(l)) out.push_back(l);
  if (out.empty()) throw CoverageError(x);
  return out;
}

PatchIndex::PatchIndex(const PatchCover& cover)
    : centers_(cover.centers), radii_(cover.radii) {
  if (cover.count() == 0) throw std::invalid_argument("PatchIndex: empty cover");
  cell_ = radii_.maxCoeff();
  if (!(cell_ > 0.0)) throw std::invalid_argument("PatchIndex: radii must be positive");
  grid_ = std::max(1, int(std::ceil(1.0 / cell_)));
  bins_.assign(std::size_t(grid_) * grid_, {});
  for (int l = 0; l < int(centers_.cols()); ++l) {
    const int cx = std::clamp(int(std::floor(centers_(0, l) / cell_)), 0, grid_ - 1);
    const int cy = std::clamp(int(std::floor(centers_(1, l) / cell_)), 0, grid_ - 1);
    bins_[std::size_t(cy) * grid_ + cx].push_back(l);
  }
}

std::vector<int> PatchIndex::covering(const Point& x) const {
  std::vector<int> out;
  const int cx = std::clamp(int(std::floor(x.x() / cell_)), 0, grid_ - 1);
  const int cy = std::clamp(int(std::floor(x.y() / cell_)), 0, grid_ - 1);
  for (int dy = -1; dy <= 1; ++dy) {
    for (int dx = -1; dx <= 1; ++dx) {
      const int bx = cx + dx, by = cy + dy;
      if (bx < 0 || by < 0 || bx >= grid_ || by >= grid_) continue;
      for (int l : bins_[std::size_t(by) * grid_ + bx])
        if ((x - centers_.col(l)).norm() < radii_(l)) out.push_back(l);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace drrbfpu
