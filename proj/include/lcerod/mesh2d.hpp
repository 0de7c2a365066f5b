#ifndef LCEROD_MESH2D_HPP
#define LCEROD_MESH2D_HPP

#include "lcerod/types.hpp"

#include <array>
#include <string>
#include <vector>

namespace lcerod {

// Triangulated cross-section S with a subdomain S0 resolved by per-triangle
// flags (the mesh must conform to the S0 boundary; the flag is the only
// place where material data jumps).
class CrossSectionMesh {
 public:
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<uint8_t> in_lce; // 1 = triangle belongs to S0

  /// Unit-area disc with S0 = upper half, symmetric under both axis
  /// reflections and conforming to the diameter. refine = 0,1,2,... gives
  /// 4*(20*2^refine)^2 triangles (1600, 6400, 25600, 102400).
  static CrossSectionMesh disc_halfplane(int refine);

  /// Axis-aligned rectangle [-w/2,w/2] x [-h/2,h/2], ny even so the mesh
  /// conforms to the x3 = 0 line; S0 = upper half.
  static CrossSectionMesh rectangle(int nx, int ny, double w = 1.0, double h = 1.0);

  static CrossSectionMesh load(const std::string& path);
  void save(const std::string& path) const;

  /// Recomputes areas, orientation, centroid shift. Centers the first
  /// moments exactly (translation); throws if the product moment
  /// int x2 x3 exceeds tolerance or the mesh is degenerate.
  void finalize(double moment_tol = 1e-8);

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_triangles() const { return static_cast<int>(triangles.size()); }
  double area() const { return total_area_; }
  double lce_area() const { return lce_area_; }
  double max_edge() const { return max_edge_; }
  const std::vector<double>& triangle_areas() const { return areas_; }

 private:
  std::vector<double> areas_;
  double total_area_ = 0.0;
  double lce_area_ = 0.0;
  double max_edge_ = 0.0;
};

} // namespace lcerod

#endif
