#include "pcsim/degrade.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "pcsim/rng.hpp"
#include "pcsim/sampling.hpp"

namespace pcsim {

void DegradationSpec::validate() const {
  auto fail = [](const std::string &what) {
    throw Error(ErrorCode::InvalidParameter, "degradation spec: " + what);
  };
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    fail("noise_sigma must be >= 0");
  }
  if (imbalance_n < 1) {
    fail("imbalance_n must be >= 1");
  }
  if (!(partial_keep_fraction > 0.0 && partial_keep_fraction <= 1.0)) {
    fail("partial_keep_fraction must lie in (0, 1]");
  }
  if (!(outlier_fraction >= 0.0 && outlier_fraction < 1.0)) {
    fail("outlier_fraction must lie in [0, 1)");
  }
  if (!(outlier_radius >= 0.0) || !std::isfinite(outlier_radius)) {
    fail("outlier_radius must be >= 0");
  }
  if (!(curvature_ratio >= 0.0 && curvature_ratio <= 1.0)) {
    fail("curvature_ratio must lie in [0, 1]");
  }
  if (target_size < 1) {
    fail("target_size must be >= 1");
  }
}

std::string_view to_string(ShapeKind kind) {
  switch (kind) {
  case ShapeKind::sphere:
    return "sphere";
  case ShapeKind::torus:
    return "torus";
  case ShapeKind::box:
    return "box";
  case ShapeKind::lshape:
    return "lshape";
  }
  return "?";
}

ShapeKind shape_from_string(std::string_view name) {
  for (auto k : {ShapeKind::sphere, ShapeKind::torus, ShapeKind::box,
                 ShapeKind::lshape}) {
    if (to_string(k) == name) {
      return k;
    }
  }
  throw Error(ErrorCode::InvalidParameter,
              "unknown shape kind '" + std::string(name) + "'");
}

namespace {

struct Rect {
  Point3 origin, u, v;
  double area() const {
    const Point3 c{u.y * v.z - u.z * v.y, u.z * v.x - u.x * v.z,
                   u.x * v.y - u.y * v.x};
    return norm(c);
  }
};

struct Segment {
  Point3 a, b;
};

double segment_distance(const Point3 &p, const Segment &s) {
  const Point3 ab = s.b - s.a;
  const double len2 = dot(ab, ab);
  const double t = len2 > 0.0 ? std::clamp(dot(p - s.a, ab) / len2, 0.0, 1.0) : 0.0;
  return distance(p, s.a + ab * t);
}

Point3 random_direction(Rng &rng) {
  std::normal_distribution<double> gauss;
  for (;;) {
    const Point3 v{gauss(rng), gauss(rng), gauss(rng)};
    const double len = norm(v);
    if (len > 1e-12) {
      return v * (1.0 / len);
    }
  }
}

// Area-weighted sampling over a set of planar rectangles; the curvature
// proxy is the inverse distance to the nearest feature edge, clipped.
SyntheticShape sample_faces(const std::vector<Rect> &faces,
                            const std::vector<Segment> &edges, std::size_t n,
                            Rng &rng) {
  std::vector<double> cumulative;
  double total = 0.0;
  for (const auto &f : faces) {
    total += f.area();
    cumulative.push_back(total);
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  constexpr double min_edge_distance = 0.02;
  std::vector<Point3> pts;
  std::vector<double> curv;
  pts.reserve(n);
  curv.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double pick = unit(rng) * total;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), pick);
    const auto &f = faces[std::min<std::size_t>(
        static_cast<std::size_t>(it - cumulative.begin()), faces.size() - 1)];
    const double s = unit(rng);
    const double t = unit(rng);
    const Point3 p = f.origin + f.u * s + f.v * t;
    double edge = std::numeric_limits<double>::infinity();
    for (const auto &e : edges) {
      edge = std::min(edge, segment_distance(p, e));
    }
    pts.push_back(p);
    curv.push_back(1.0 / std::max(edge, min_edge_distance));
  }
  return {PointCloud(std::move(pts)), std::move(curv)};
}

// Prism over a closed polygon (counter-clockwise, z in [z0, z1]). Caps are
// given as rectangles covering the polygon.
void add_prism(const std::vector<std::pair<double, double>> &polygon,
               const std::vector<std::array<double, 4>> &cap_rects, double z0,
               double z1, std::vector<Rect> &faces, std::vector<Segment> &edges) {
  for (const auto &r : cap_rects) {
    for (double z : {z0, z1}) {
      faces.push_back({{r[0], r[1], z}, {r[2] - r[0], 0.0, 0.0},
                       {0.0, r[3] - r[1], 0.0}});
    }
  }
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    const auto [x0, y0] = polygon[i];
    const auto [x1, y1] = polygon[(i + 1) % polygon.size()];
    faces.push_back({{x0, y0, z0}, {x1 - x0, y1 - y0, 0.0}, {0.0, 0.0, z1 - z0}});
    edges.push_back({{x0, y0, z0}, {x1, y1, z0}});
    edges.push_back({{x0, y0, z1}, {x1, y1, z1}});
    edges.push_back({{x0, y0, z0}, {x0, y0, z1}});
  }
}

} // namespace

SyntheticShape synth_shapes(ShapeKind kind, std::size_t n, std::uint64_t seed) {
  if (n < 64) {
    throw Error(ErrorCode::InvalidCount, "synthetic shapes need n >= 64");
  }
  Rng rng(derive_seed({seed, static_cast<std::uint64_t>(kind), 0x5ea9e}));
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  switch (kind) {
  case ShapeKind::sphere: {
    constexpr double radius = 0.5;
    std::vector<Point3> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      pts.push_back(random_direction(rng) * radius);
    }
    return {PointCloud(std::move(pts)), std::vector<double>(n, 1.0 / radius)};
  }
  case ShapeKind::torus: {
    constexpr double major = 0.35;
    constexpr double minor = 0.15;
    constexpr double two_pi = 6.283185307179586;
    std::vector<Point3> pts;
    std::vector<double> curv;
    pts.reserve(n);
    curv.reserve(n);
    while (pts.size() < n) {
      const double u = two_pi * unit(rng);
      const double v = two_pi * unit(rng);
      // Area element is proportional to (R + r cos v).
      if (unit(rng) * (major + minor) > major + minor * std::cos(v)) {
        continue;
      }
      const double ring = major + minor * std::cos(v);
      pts.push_back({ring * std::cos(u), ring * std::sin(u), minor * std::sin(v)});
      curv.push_back(1.0 / minor + std::abs(std::cos(v) / ring));
    }
    return {PointCloud(std::move(pts)), std::move(curv)};
  }
  case ShapeKind::box: {
    constexpr double hx = 0.45, hy = 0.35, hz = 0.25;
    std::vector<Rect> faces;
    std::vector<Segment> edges;
    add_prism({{-hx, -hy}, {hx, -hy}, {hx, hy}, {-hx, hy}}, {{-hx, -hy, hx, hy}},
              -hz, hz, faces, edges);
    return sample_faces(faces, edges, n, rng);
  }
  case ShapeKind::lshape: {
    // L-shaped footprint, centred near the origin.
    constexpr double a = 0.9, b = 0.3, h = 0.4, off = 0.35;
    std::vector<Rect> faces;
    std::vector<Segment> edges;
    add_prism({{-off, -off},
               {a - off, -off},
               {a - off, b - off},
               {b - off, b - off},
               {b - off, a - off},
               {-off, a - off}},
              {{-off, -off, a - off, b - off}, {-off, b - off, b - off, a - off}},
              -h / 2, h / 2, faces, edges);
    return sample_faces(faces, edges, n, rng);
  }
  }
  throw Error(ErrorCode::InvalidParameter, "unknown shape kind");
}

double reference_spacing(const PointCloud &gt, std::size_t target_size) {
  return mean_nn_spacing(gt) *
         std::sqrt(static_cast<double>(gt.size()) /
                   static_cast<double>(std::max<std::size_t>(target_size, 1)));
}

PointCloud mix_noise_imbalance(const PointCloud &gt, const DegradationSpec &spec) {
  return mix_noise_imbalance(gt, spec, reference_spacing(gt, spec.target_size));
}

PointCloud mix_noise_imbalance(const PointCloud &gt, const DegradationSpec &spec,
                               double spacing) {
  spec.validate();
  const std::size_t n = gt.size();
  if (n < spec.target_size) {
    throw Error(ErrorCode::InsufficientPoints,
                "ground truth has " + std::to_string(n) + " points, need " +
                    std::to_string(spec.target_size));
  }
  Rng rng(derive_seed({spec.seed, 0x6d6978}));
  std::normal_distribution<double> gauss(0.0, 1.0);

  // (a) complete but noisy component.
  std::vector<std::size_t> ids(n);
  std::iota(ids.begin(), ids.end(), std::size_t{0});
  std::vector<Point3> mixed;
  mixed.reserve(spec.imbalance_n + spec.target_size);
  const double sigma = spec.noise_sigma * spacing;
  if (spec.imbalance_n <= n) {
    for (std::size_t i = 0; i < spec.imbalance_n; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, n - 1);
      std::swap(ids[i], ids[pick(rng)]);
    }
  }
  std::uniform_int_distribution<std::size_t> any(0, n - 1);
  for (std::size_t i = 0; i < spec.imbalance_n; ++i) {
    const std::size_t id = spec.imbalance_n <= n ? ids[i] : any(rng);
    const Point3 noise{gauss(rng), gauss(rng), gauss(rng)};
    mixed.push_back(gt[id] + noise * sigma);
  }

  // (b) clean partial component: the half-space side facing a seeded
  // direction, keeping partial_keep_fraction of gt.
  const Point3 dir = random_direction(rng);
  const Point3 c = gt.centroid();
  std::vector<double> proj(n);
  for (std::size_t i = 0; i < n; ++i) {
    proj[i] = dot(gt[i] - c, dir);
  }
  std::iota(ids.begin(), ids.end(), std::size_t{0});
  std::sort(ids.begin(), ids.end(), [&](std::size_t a, std::size_t b) {
    return proj[a] > proj[b] || (proj[a] == proj[b] && a < b);
  });
  const auto keep = static_cast<std::size_t>(
      std::ceil(spec.partial_keep_fraction * static_cast<double>(n)));
  if (keep < spec.target_size) {
    throw Error(ErrorCode::InsufficientPoints,
                "partial region keeps " + std::to_string(keep) +
                    " points, fewer than target_size");
  }
  ids.resize(keep);
  std::sort(ids.begin(), ids.end());
  const PointCloud kept = select(gt, ids);
  const PointCloud partial = fps(kept, spec.target_size, 0);
  mixed.insert(mixed.end(), partial.begin(), partial.end());

  // (c) merge and reduce.
  PointCloud out = fps(PointCloud(std::move(mixed)), spec.target_size, 0);
  if (spec.outlier_fraction > 0.0) {
    out = inject_outliers(out, spec.outlier_fraction, spec.outlier_radius,
                          derive_seed({spec.seed, 0x6f7574}));
  }
  return out;
}

PointCloud inject_outliers(const PointCloud &cloud, double fraction, double radius,
                           std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction < 1.0)) {
    throw Error(ErrorCode::InvalidParameter, "outlier fraction must lie in [0, 1)");
  }
  const std::size_t n = cloud.size();
  const auto count = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
  if (count == 0) {
    return cloud;
  }
  Rng rng(derive_seed({seed, 0x6f75746c}));
  std::uniform_real_distribution<double> shell(0.95, 1.05);
  std::vector<std::size_t> ids(n);
  std::iota(ids.begin(), ids.end(), std::size_t{0});
  for (std::size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(ids[i], ids[pick(rng)]);
  }
  const Point3 c = cloud.centroid();
  std::vector<Point3> pts(cloud.begin(), cloud.end());
  for (std::size_t i = 0; i < count; ++i) {
    pts[ids[i]] = c + random_direction(rng) * (radius * shell(rng));
  }
  return PointCloud(std::move(pts));
}

PointCloud curvature_mix_sample(const PointCloud &gt_dense,
                                std::span<const double> curvatures, double r_c,
                                std::size_t m, std::uint64_t seed) {
  const std::size_t n = gt_dense.size();
  if (curvatures.size() != n) {
    throw Error(ErrorCode::ShapeMismatch,
                "curvature vector has " + std::to_string(curvatures.size()) +
                    " entries for " + std::to_string(n) + " points");
  }
  if (!(r_c >= 0.0 && r_c <= 1.0)) {
    throw Error(ErrorCode::InvalidParameter, "R_c must lie in [0, 1]");
  }
  if (m < 1 || m > n) {
    throw Error(ErrorCode::InvalidCount, "sample size out of range");
  }
  double total = 0.0;
  for (double w : curvatures) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::InvalidParameter, "curvatures must be finite and >= 0");
    }
    total += w;
  }

  const auto k = static_cast<std::size_t>(std::floor(r_c * static_cast<double>(m)));
  std::vector<std::size_t> picked;
  picked.reserve(m);
  if (k > 0) {
    // Weighted sampling without replacement via keys log(u) / w: the k
    // largest keys form the sample. Equal weights keep the order of u.
    const std::uint64_t stream = derive_seed({seed, 0x63757276});
    std::vector<double> key(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double u = counter_uniform(stream, i);
      const double w = total > 0.0 ? curvatures[i] : 1.0;
      key[i] = w > 0.0 ? std::log(u) / w : -std::numeric_limits<double>::infinity();
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k),
                      order.end(), [&](std::size_t a, std::size_t b) {
                        return key[a] > key[b] || (key[a] == key[b] && a < b);
                      });
    picked.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
  }

  if (picked.size() < m) {
    std::vector<char> taken(n, 0);
    for (auto id : picked) {
      taken[id] = 1;
    }
    std::vector<std::size_t> rest;
    rest.reserve(n - picked.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (!taken[i]) {
        rest.push_back(i);
      }
    }
    const PointCloud remaining = select(gt_dense, rest);
    for (auto id : fps_indices(remaining, m - picked.size(), 0)) {
      picked.push_back(rest[id]);
    }
  }
  return select(gt_dense, picked);
}

} // namespace pcsim
