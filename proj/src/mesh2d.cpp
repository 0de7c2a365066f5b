#include "lcerod/mesh2d.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace lcerod {

namespace {

double tri_area2(const Vec2& a, const Vec2& b, const Vec2& c) {
  return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

// Stitch two concentric node rings ordered by increasing angle into a
// triangle strip. Handles a degenerate inner ring (single center node).
void zipper(const std::vector<int>& inner, const std::vector<double>& th_in,
            const std::vector<int>& outer, const std::vector<double>& th_out,
            std::vector<std::array<int, 3>>& tris) {
  size_t ia = 0, ib = 0;
  while (ia + 1 < inner.size() || ib + 1 < outer.size()) {
    bool advance_outer = false;
    if (ib + 1 < outer.size()) {
      if (ia + 1 >= inner.size() || th_out[ib + 1] <= th_in[ia + 1] + 1e-14)
        advance_outer = true;
    }
    if (advance_outer) {
      tris.push_back({inner[ia], outer[ib], outer[ib + 1]});
      ++ib;
    } else {
      tris.push_back({inner[ia], outer[ib], inner[ia + 1]});
      ++ia;
    }
  }
}

} // namespace

CrossSectionMesh CrossSectionMesh::disc_halfplane(int refine) {
  if (refine < 0 || refine > 6)
    throw std::invalid_argument("disc_halfplane: refine must be in [0,6]");
  const int R = 15 << refine; // rings in the quarter
  const double rho = 1.0 / std::sqrt(std::numbers::pi);

  CrossSectionMesh m;
  // quarter disc, theta in [0, pi/2], ring i has i angular intervals
  std::vector<std::vector<int>> ring_ids(R + 1);
  std::vector<std::vector<double>> ring_th(R + 1);
  m.vertices.emplace_back(0.0, 0.0);
  ring_ids[0] = {0};
  ring_th[0] = {0.0};
  for (int i = 1; i <= R; ++i) {
    const double r = rho * i / R;
    for (int j = 0; j <= i; ++j) {
      const double th = 0.5 * std::numbers::pi * j / i;
      ring_ids[i].push_back(m.n_vertices());
      ring_th[i].push_back(th);
      m.vertices.emplace_back(r * std::cos(th), r * std::sin(th));
    }
  }
  for (int i = 1; i <= R; ++i)
    zipper(ring_ids[i - 1], ring_th[i - 1], ring_ids[i], ring_th[i], m.triangles);

  // mirror across x2 = 0 (quarter -> upper half), then across x3 = 0
  auto mirror = [&m](int axis) {
    std::vector<int> image(m.vertices.size());
    const size_t nv = m.vertices.size();
    for (size_t v = 0; v < nv; ++v) {
      Vec2 p = m.vertices[v];
      if (std::abs(p[axis]) < 1e-14) {
        image[v] = static_cast<int>(v);
      } else {
        image[v] = static_cast<int>(m.vertices.size());
        p[axis] = -p[axis];
        m.vertices.push_back(p);
      }
    }
    const size_t nt = m.triangles.size();
    for (size_t t = 0; t < nt; ++t) {
      const auto& tr = m.triangles[t];
      m.triangles.push_back({image[tr[0]], image[tr[2]], image[tr[1]]});
    }
  };
  mirror(0);
  const size_t upper_count = m.triangles.size();
  mirror(1);
  m.in_lce.assign(m.triangles.size(), 0);
  for (size_t t = 0; t < upper_count; ++t) m.in_lce[t] = 1;

  // boundary vertices sit on the exact circle; rescale so the polygon has
  // unit area (the effective-coefficient formulas assume |S| = 1)
  double area = 0.0;
  for (const auto& tr : m.triangles)
    area += 0.5 * std::abs(tri_area2(m.vertices[tr[0]], m.vertices[tr[1]], m.vertices[tr[2]]));
  const double s = 1.0 / std::sqrt(area);
  for (auto& v : m.vertices) v *= s;

  m.finalize();
  return m;
}

CrossSectionMesh CrossSectionMesh::rectangle(int nx, int ny, double w, double h) {
  if (nx < 1 || ny < 2 || ny % 2 != 0)
    throw std::invalid_argument("rectangle: need nx >= 1 and even ny >= 2");
  CrossSectionMesh m;
  auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      m.vertices.emplace_back(-0.5 * w + w * i / nx, -0.5 * h + h * j / ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const uint8_t flag = (j >= ny / 2) ? 1 : 0;
      // alternate the diagonal so the mesh is symmetric under both reflections
      if ((i + j) % 2 == 0) {
        m.triangles.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
        m.triangles.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
      } else {
        m.triangles.push_back({vid(i, j), vid(i + 1, j), vid(i, j + 1)});
        m.triangles.push_back({vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)});
      }
      m.in_lce.push_back(flag);
      m.in_lce.push_back(flag);
    }
  }
  m.finalize();
  return m;
}

void CrossSectionMesh::finalize(double moment_tol) {
  if (vertices.empty() || triangles.empty())
    throw std::invalid_argument("mesh: empty");
  if (in_lce.size() != triangles.size())
    throw std::invalid_argument("mesh: flag count does not match triangle count");

  areas_.resize(triangles.size());
  total_area_ = 0.0;
  lce_area_ = 0.0;
  max_edge_ = 0.0;
  Vec2 first_moment = Vec2::Zero();
  for (size_t t = 0; t < triangles.size(); ++t) {
    auto& tr = triangles[t];
    for (int k : tr)
      if (k < 0 || k >= n_vertices()) throw std::invalid_argument("mesh: vertex index out of range");
    double a2 = tri_area2(vertices[tr[0]], vertices[tr[1]], vertices[tr[2]]);
    if (a2 < 0) { // enforce positive orientation
      std::swap(tr[1], tr[2]);
      a2 = -a2;
    }
    if (a2 < 1e-16) throw std::invalid_argument("mesh: degenerate triangle");
    areas_[t] = 0.5 * a2;
    total_area_ += areas_[t];
    if (in_lce[t]) lce_area_ += areas_[t];
    const Vec2 centroid = (vertices[tr[0]] + vertices[tr[1]] + vertices[tr[2]]) / 3.0;
    first_moment += areas_[t] * centroid;
    for (int e = 0; e < 3; ++e)
      max_edge_ = std::max(max_edge_, (vertices[tr[e]] - vertices[tr[(e + 1) % 3]]).norm());
  }

  // center the first moments by translation
  const Vec2 shift = first_moment / total_area_;
  if (shift.norm() > 1e-15)
    for (auto& v : vertices) v -= shift;

  // int x2 x3 must vanish (principal axes); exact midpoint quadrature
  double xy = 0.0;
  for (size_t t = 0; t < triangles.size(); ++t) {
    const auto& tr = triangles[t];
    for (int e = 0; e < 3; ++e) {
      const Vec2 mid = 0.5 * (vertices[tr[e]] + vertices[tr[(e + 1) % 3]]);
      xy += areas_[t] / 3.0 * mid.x() * mid.y();
    }
  }
  if (std::abs(xy) > moment_tol * total_area_)
    throw std::invalid_argument("mesh: cross-section is not aligned with its principal axes (int x2*x3 != 0)");
}

CrossSectionMesh CrossSectionMesh::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("mesh: cannot open '" + path + "'");
  CrossSectionMesh m;
  std::string line, keyword;
  auto next_data_line = [&in, &line]() {
    while (std::getline(in, line)) {
      const auto pos = line.find_first_not_of(" \t\r");
      if (pos == std::string::npos || line[pos] == '#') continue;
      return true;
    }
    return false;
  };
  if (!next_data_line()) throw std::runtime_error("mesh: missing vertices header");
  std::istringstream hv(line);
  size_t nv = 0;
  hv >> keyword >> nv;
  if (keyword != "vertices" || nv == 0) throw std::runtime_error("mesh: expected 'vertices <count>'");
  m.vertices.reserve(nv);
  for (size_t i = 0; i < nv; ++i) {
    if (!next_data_line()) throw std::runtime_error("mesh: truncated vertex block");
    std::istringstream ls(line);
    double x, y;
    if (!(ls >> x >> y)) throw std::runtime_error("mesh: bad vertex line");
    m.vertices.emplace_back(x, y);
  }
  if (!next_data_line()) throw std::runtime_error("mesh: missing triangles header");
  std::istringstream ht(line);
  size_t nt = 0;
  ht >> keyword >> nt;
  if (keyword != "triangles" || nt == 0) throw std::runtime_error("mesh: expected 'triangles <count>'");
  for (size_t t = 0; t < nt; ++t) {
    if (!next_data_line()) throw std::runtime_error("mesh: truncated triangle block");
    std::istringstream ls(line);
    int a, b, c, flag;
    if (!(ls >> a >> b >> c >> flag)) throw std::runtime_error("mesh: bad triangle line");
    m.triangles.push_back({a, b, c});
    m.in_lce.push_back(flag ? 1 : 0);
  }
  m.finalize();
  return m;
}

void CrossSectionMesh::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("mesh: cannot write '" + path + "'");
  out << "# cross-section mesh: vertex block (x2 x3), triangle block (v0 v1 v2 lce_flag)\n";
  out << "vertices " << n_vertices() << "\n";
  char buf[80];
  for (const auto& v : vertices) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g\n", v.x(), v.y());
    out << buf;
  }
  out << "triangles " << n_triangles() << "\n";
  for (size_t t = 0; t < triangles.size(); ++t)
    out << triangles[t][0] << " " << triangles[t][1] << " " << triangles[t][2] << " "
        << int(in_lce[t]) << "\n";
}

} // namespace lcerod
