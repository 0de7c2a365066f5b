#ifndef LCEROD_CROSS_SECTION_HPP
#define LCEROD_CROSS_SECTION_HPP

#include "lcerod/mesh2d.hpp"
#include "lcerod/tensor_bases.hpp"
#include "lcerod/types.hpp"

#include <Eigen/SparseLU>

#include <array>
#include <memory>
#include <string>
#include <vector>

namespace lcerod {

/// Homogeneous isotropic quadratic stored-energy law
/// Q(G) = (lambda/2) tr(G)^2 + mu |sym G|^2.
struct IsotropicLaw {
  double lambda = 0.0;
  double mu = 1.0;
  void validate() const; // mu > 0, lambda >= 0, 3*lambda + 2*mu > 0
};

enum class ElementOrder { P1, P2 };

/// Symmetric 3x3 strain values at the three midpoint quadrature points of
/// each triangle, Voigt order (11,22,33,23,13,12).
struct StrainField {
  int n_elems = 0;
  std::vector<Vec6> v; // element-major, 3 per element

  explicit StrainField(int elems = 0) : n_elems(elems), v(3 * elems, Vec6::Zero()) {}
  Vec6& at(int e, int q) { return v[3 * e + q]; }
  const Vec6& at(int e, int q) const { return v[3 * e + q]; }
};

Vec6 voigt(const Mat3& sym_matrix);

struct CorrectorSolution {
  double a = 0.0;      // axial stretch scalar
  VecX phi;            // displacement dofs, component-major (c * n + i)
  StrainField strain;  // sym(a e1, grad phi) at quadrature points
  double objective;    // fint_S Q(F + strain)
  double residual;     // relative residual of the saddle solve
};

// Quadratic cell problem on the cross-section: minimize
//   fint_S Q(F + sym(a e1, grad phi))
// over a in R and phi in H^1(S;R^3) normalized by zero mean and zero mean
// rotation. The factorized saddle system is reused across right-hand sides.
class CorrectorSpace {
 public:
  CorrectorSpace(const CrossSectionMesh& mesh, const IsotropicLaw& law,
                 ElementOrder order = ElementOrder::P2);
  ~CorrectorSpace();
  CorrectorSpace(CorrectorSpace&&) noexcept;

  CorrectorSolution solve(const StrainField& F) const;

  /// 1_{S0} U as a strain field (U constant symmetric).
  StrainField indicator_field(const Mat3& U) const;
  /// sym((K xbar) (x) e1) for a skew matrix K, evaluated at quadrature points.
  StrainField frame_strain(const Mat3& K) const;

  /// (A,B)_Q = (1/|S|) int_S [ (lambda/2) tr A tr B + mu sym A : sym B ].
  double inner(const StrainField& A, const StrainField& B) const;

  const CrossSectionMesh& mesh() const { return *mesh_; }
  const IsotropicLaw& law() const { return law_; }
  int n_scalar_dofs() const;

 private:
  const CrossSectionMesh* mesh_;
  IsotropicLaw law_;
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct WarpingSolution {
  VecX alpha;      // scalar dofs of the warping function
  double cS;       // minimum value (area-averaged torsion constant)
  double alpha_l2; // fint alpha^2, square-rooted
};

/// Saint-Venant-type warping problem: minimize
///   fint_S |grad alpha + (x3,-x2)/sqrt(2)|^2
/// with zero mean value and zero mean gradient.
WarpingSolution solve_warping(const CrossSectionMesh& mesh,
                              ElementOrder order = ElementOrder::P2);

struct MeshStats {
  int n_vertices = 0;
  int n_triangles = 0;
  double max_edge = 0.0;
  double area = 0.0;
  double lce_area = 0.0;
  double alpha_l2 = 0.0;
};

/// 1D moduli, spontaneous-curvature map and residual quadratic form obtained
/// from the cross-section.
struct EffectiveCoefficients {
  double lambda = 0.0, mu = 0.0;
  double q1 = 0.0, q2 = 0.0, q3 = 0.0;
  Mat35 M = Mat35::Zero();   // skew coordinates of K_pre: k-coords = M * u
  Mat5 Eres = Mat5::Zero();  // residual form in dev coordinates
  double cS = 0.0;
  Mat3 Qmat = Mat3::Zero();  // assembled bending/twist form (diagnostic)
  MeshStats mesh_stats;

  std::string to_json() const;
  static EffectiveCoefficients from_json(const std::string& text);
  void save(const std::string& path) const;
  static EffectiveCoefficients load(const std::string& path);
};

/// Disc with S0 = upper half: q1 = mu/(8 pi), q2 = q3 = mu(3l+2m)/(16 pi (l+m)),
/// M(0,1) = 8/(3 sqrt(pi)), M(2,3) = 16/(3 sqrt(3 pi)), everything else zero.
EffectiveCoefficients closed_form_disc(const IsotropicLaw& law);

/// q1 = (mu/2) cS from the warping solve; q2, q3 from second moments.
std::array<double, 3> qbar_general_isotropic(const CrossSectionMesh& mesh, const IsotropicLaw& law,
                                             ElementOrder order = ElementOrder::P2);

/// Full corrector-based assembly of the effective coefficients.
EffectiveCoefficients assemble_coefficients(const CrossSectionMesh& mesh, const IsotropicLaw& law,
                                            ElementOrder order = ElementOrder::P2);

/// One-shot constrained minimization of the cell energy
///   min_chi fint_S Q(sym(K xbar (x) e1) + (rbar/2) 1_{S0} U + chi);
/// independent route to Qbar(K + rbar K_pre(U)) + rbar^2 E_res(U).
double relaxed_cell_energy(const CorrectorSpace& space, const Mat3& K, const Mat3& U, double rbar);

} // namespace lcerod

#endif
