#include "lcerod/cross_section.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace lcerod {

using json = nlohmann::json;

void IsotropicLaw::validate() const {
  if (!(mu > 0.0)) throw std::invalid_argument("law: shear modulus mu must be positive");
  if (lambda < 0.0) throw std::invalid_argument("law: lambda must be nonnegative");
  if (!(3.0 * lambda + 2.0 * mu > 0.0)) throw std::invalid_argument("law: bulk modulus must be positive");
}

Vec6 voigt(const Mat3& m) {
  Vec6 v;
  v << m(0, 0), m(1, 1), m(2, 2), m(1, 2), m(0, 2), m(0, 1);
  return v;
}

namespace {

double qpair(const IsotropicLaw& law, const Vec6& A, const Vec6& B) {
  const double trA = A[0] + A[1] + A[2];
  const double trB = B[0] + B[1] + B[2];
  return 0.5 * law.lambda * trA * trB +
         law.mu * (A[0] * B[0] + A[1] * B[1] + A[2] * B[2] +
                   2.0 * (A[3] * B[3] + A[4] * B[4] + A[5] * B[5]));
}

// Scalar finite element space (P1 or P2) with values/gradients tabulated at
// the three edge-midpoint quadrature points of each triangle.
struct ScalarSpace {
  int n_dofs = 0;
  int n_local = 0;
  std::vector<int> dofmap;    // n_elems * n_local
  std::vector<double> val;    // n_elems * 3 * n_local
  std::vector<Vec2> grad;     // n_elems * 3 * n_local
  std::vector<double> weight; // n_elems (area/3 per qp)
  std::vector<Vec2> qp;       // n_elems * 3

  int dof(int e, int l) const { return dofmap[e * n_local + l]; }
  double N(int e, int q, int l) const { return val[(e * 3 + q) * n_local + l]; }
  const Vec2& dN(int e, int q, int l) const { return grad[(e * 3 + q) * n_local + l]; }
};

ScalarSpace build_scalar_space(const CrossSectionMesh& mesh, ElementOrder order) {
  ScalarSpace s;
  const int ne = mesh.n_triangles();
  s.n_local = (order == ElementOrder::P1) ? 3 : 6;
  s.dofmap.resize(ne * s.n_local);
  s.val.resize(ne * 3 * s.n_local);
  s.grad.resize(ne * 3 * s.n_local);
  s.weight.resize(ne);
  s.qp.resize(ne * 3);

  std::unordered_map<long long, int> edge_ids;
  int n_edges = 0;
  const int nv = mesh.n_vertices();
  for (int e = 0; e < ne; ++e) {
    const auto& tr = mesh.triangles[e];
    for (int l = 0; l < 3; ++l) s.dofmap[e * s.n_local + l] = tr[l];
    if (order == ElementOrder::P2) {
      const int pairs[3][2] = {{0, 1}, {1, 2}, {2, 0}};
      for (int k = 0; k < 3; ++k) {
        const int a = tr[pairs[k][0]], b = tr[pairs[k][1]];
        const long long key = (long long)std::min(a, b) * nv + std::max(a, b);
        auto it = edge_ids.find(key);
        if (it == edge_ids.end()) it = edge_ids.emplace(key, n_edges++).first;
        s.dofmap[e * s.n_local + 3 + k] = nv + it->second;
      }
    }
  }
  s.n_dofs = (order == ElementOrder::P1) ? nv : nv + n_edges;

  // midpoint rule: barycentric (1/2,1/2,0),(0,1/2,1/2),(1/2,0,1/2)
  const double bary[3][3] = {{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}};
  for (int e = 0; e < ne; ++e) {
    const auto& tr = mesh.triangles[e];
    const Vec2 p0 = mesh.vertices[tr[0]], p1 = mesh.vertices[tr[1]], p2 = mesh.vertices[tr[2]];
    Eigen::Matrix2d J;
    J.col(0) = p1 - p0;
    J.col(1) = p2 - p0;
    const Eigen::Matrix2d JinvT = J.inverse().transpose();
    // gradients of barycentric coordinates
    Vec2 dlam[3];
    dlam[1] = JinvT * Vec2(1, 0);
    dlam[2] = JinvT * Vec2(0, 1);
    dlam[0] = -dlam[1] - dlam[2];
    s.weight[e] = mesh.triangle_areas()[e] / 3.0;
    for (int q = 0; q < 3; ++q) {
      const double* lam = bary[q];
      s.qp[e * 3 + q] = lam[0] * p0 + lam[1] * p1 + lam[2] * p2;
      double* N = &s.val[(e * 3 + q) * s.n_local];
      Vec2* dN = &s.grad[(e * 3 + q) * s.n_local];
      if (order == ElementOrder::P1) {
        for (int l = 0; l < 3; ++l) {
          N[l] = lam[l];
          dN[l] = dlam[l];
        }
      } else {
        for (int l = 0; l < 3; ++l) {
          N[l] = lam[l] * (2.0 * lam[l] - 1.0);
          dN[l] = (4.0 * lam[l] - 1.0) * dlam[l];
        }
        const int pairs[3][2] = {{0, 1}, {1, 2}, {2, 0}};
        for (int k = 0; k < 3; ++k) {
          const int i = pairs[k][0], j = pairs[k][1];
          N[3 + k] = 4.0 * lam[i] * lam[j];
          dN[3 + k] = 4.0 * (lam[i] * dlam[j] + lam[j] * dlam[i]);
        }
      }
    }
  }
  return s;
}

} // namespace

struct CorrectorSpace::Impl {
  ScalarSpace space;
  Eigen::SparseLU<SparseMat> lu;
  SparseMat kkt;
  int ndof = 0; // 3 * n_scalar + 1 (a) ; + 4 multipliers in the saddle system
};

CorrectorSpace::~CorrectorSpace() = default;
CorrectorSpace::CorrectorSpace(CorrectorSpace&&) noexcept = default;

CorrectorSpace::CorrectorSpace(const CrossSectionMesh& mesh, const IsotropicLaw& law, ElementOrder order)
    : mesh_(&mesh), law_(law), impl_(std::make_unique<Impl>()) {
  law.validate();
  impl_->space = build_scalar_space(mesh, order);
  const ScalarSpace& s = impl_->space;
  const int n = s.n_dofs;
  const int ndof = 3 * n + 1;
  impl_->ndof = ndof;
  const int nsys = ndof + 4;

  // local strain of (component c, local dof l): see qform Voigt order
  auto local_strain = [](const Vec2& g, int c) {
    Vec6 v = Vec6::Zero();
    switch (c) {
      case 0: v[4] = 0.5 * g.y(); v[5] = 0.5 * g.x(); break;
      case 1: v[1] = g.x(); v[3] = 0.5 * g.y(); break;
      case 2: v[2] = g.y(); v[3] = 0.5 * g.x(); break;
    }
    return v;
  };
  const Vec6 Ea = (Vec6() << 1, 0, 0, 0, 0, 0).finished();

  std::vector<Triplet> trip;
  trip.reserve(mesh.n_triangles() * 3 * (3 * s.n_local + 1) * (3 * s.n_local + 1) / 2);
  const int nl = s.n_local;
  std::vector<Vec6> B(3 * nl);
  std::vector<int> gd(3 * nl);
  for (int e = 0; e < mesh.n_triangles(); ++e) {
    for (int c = 0; c < 3; ++c)
      for (int l = 0; l < nl; ++l) gd[c * nl + l] = c * n + s.dof(e, l);
    for (int q = 0; q < 3; ++q) {
      const double w = s.weight[e];
      for (int c = 0; c < 3; ++c)
        for (int l = 0; l < nl; ++l) B[c * nl + l] = local_strain(s.dN(e, q, l), c);
      for (int i = 0; i < 3 * nl; ++i) {
        for (int j = 0; j < 3 * nl; ++j) {
          const double v = w * qpair(law, B[i], B[j]);
          if (v != 0.0) trip.emplace_back(gd[i], gd[j], v);
        }
        const double va = w * qpair(law, B[i], Ea);
        if (va != 0.0) {
          trip.emplace_back(gd[i], 3 * n, va);
          trip.emplace_back(3 * n, gd[i], va);
        }
      }
      trip.emplace_back(3 * n, 3 * n, w * qpair(law, Ea, Ea));
      // constraints: mean value per component, mean rotation d3 phi2 - d2 phi3
      for (int l = 0; l < nl; ++l) {
        const double nv = w * s.N(e, q, l);
        const Vec2 g = s.dN(e, q, l);
        for (int c = 0; c < 3; ++c) {
          trip.emplace_back(ndof + c, c * n + s.dof(e, l), nv);
          trip.emplace_back(c * n + s.dof(e, l), ndof + c, nv);
        }
        trip.emplace_back(ndof + 3, 1 * n + s.dof(e, l), w * g.y());
        trip.emplace_back(1 * n + s.dof(e, l), ndof + 3, w * g.y());
        trip.emplace_back(ndof + 3, 2 * n + s.dof(e, l), -w * g.x());
        trip.emplace_back(2 * n + s.dof(e, l), ndof + 3, -w * g.x());
      }
    }
  }
  impl_->kkt.resize(nsys, nsys);
  impl_->kkt.setFromTriplets(trip.begin(), trip.end());
  impl_->lu.compute(impl_->kkt);
  if (impl_->lu.info() != Eigen::Success)
    throw std::runtime_error("corrector: saddle system factorization failed (degenerate mesh or law)");
}

int CorrectorSpace::n_scalar_dofs() const { return impl_->space.n_dofs; }

StrainField CorrectorSpace::indicator_field(const Mat3& U) const {
  StrainField F(mesh_->n_triangles());
  const Vec6 u = voigt(0.5 * (U + U.transpose()));
  for (int e = 0; e < F.n_elems; ++e)
    if (mesh_->in_lce[e])
      for (int q = 0; q < 3; ++q) F.at(e, q) = u;
  return F;
}

StrainField CorrectorSpace::frame_strain(const Mat3& K) const {
  StrainField F(mesh_->n_triangles());
  const ScalarSpace& s = impl_->space;
  for (int e = 0; e < F.n_elems; ++e) {
    for (int q = 0; q < 3; ++q) {
      const Vec2& x = s.qp[e * 3 + q];
      const Vec3 v = x.x() * K.col(1) + x.y() * K.col(2); // K (0,x2,x3)^T
      Vec6 f = Vec6::Zero();
      f[0] = v[0];
      f[4] = 0.5 * v[2];
      f[5] = 0.5 * v[1];
      F.at(e, q) = f;
    }
  }
  return F;
}

double CorrectorSpace::inner(const StrainField& A, const StrainField& B) const {
  const ScalarSpace& s = impl_->space;
  double tot = 0.0;
  for (int e = 0; e < A.n_elems; ++e)
    for (int q = 0; q < 3; ++q) tot += s.weight[e] * qpair(law_, A.at(e, q), B.at(e, q));
  return tot / mesh_->area();
}

CorrectorSolution CorrectorSpace::solve(const StrainField& F) const {
  const ScalarSpace& s = impl_->space;
  const int n = s.n_dofs;
  const int nl = s.n_local;
  if (F.n_elems != mesh_->n_triangles())
    throw std::invalid_argument("corrector: strain field does not match the mesh");

  auto local_strain = [](const Vec2& g, int c) {
    Vec6 v = Vec6::Zero();
    switch (c) {
      case 0: v[4] = 0.5 * g.y(); v[5] = 0.5 * g.x(); break;
      case 1: v[1] = g.x(); v[3] = 0.5 * g.y(); break;
      case 2: v[2] = g.y(); v[3] = 0.5 * g.x(); break;
    }
    return v;
  };
  const Vec6 Ea = (Vec6() << 1, 0, 0, 0, 0, 0).finished();

  VecX rhs = VecX::Zero(impl_->ndof + 4);
  for (int e = 0; e < F.n_elems; ++e) {
    const double w = s.weight[e];
    for (int q = 0; q < 3; ++q) {
      const Vec6& f = F.at(e, q);
      for (int c = 0; c < 3; ++c)
        for (int l = 0; l < nl; ++l)
          rhs[c * n + s.dof(e, l)] -= w * qpair(law_, f, local_strain(s.dN(e, q, l), c));
      rhs[3 * n] -= w * qpair(law_, f, Ea);
    }
  }

  VecX x = impl_->lu.solve(rhs);
  const double rnorm = (impl_->kkt * x - rhs).norm() / std::max(1.0, rhs.norm());

  CorrectorSolution sol;
  sol.a = x[3 * n];
  sol.phi = x.head(3 * n);
  sol.residual = rnorm;
  sol.strain = StrainField(F.n_elems);
  for (int e = 0; e < F.n_elems; ++e)
    for (int q = 0; q < 3; ++q) {
      Vec6 E = sol.a * Ea;
      for (int c = 0; c < 3; ++c)
        for (int l = 0; l < nl; ++l)
          E += x[c * n + s.dof(e, l)] * local_strain(s.dN(e, q, l), c);
      sol.strain.at(e, q) = E;
    }
  // objective = (F+E, F+E)_Q
  double obj = 0.0;
  for (int e = 0; e < F.n_elems; ++e)
    for (int q = 0; q < 3; ++q) {
      const Vec6 t = F.at(e, q) + sol.strain.at(e, q);
      obj += s.weight[e] * qpair(law_, t, t);
    }
  sol.objective = obj / mesh_->area();
  if (sol.residual > 1e-8)
    throw std::runtime_error("corrector: saddle solve residual too large (" + std::to_string(sol.residual) + ")");
  return sol;
}

WarpingSolution solve_warping(const CrossSectionMesh& mesh, ElementOrder order) {
  const ScalarSpace s = build_scalar_space(mesh, order);
  const int n = s.n_dofs;
  const int nl = s.n_local;
  const int nsys = n + 3;
  std::vector<Triplet> trip;
  VecX rhs = VecX::Zero(nsys);
  const double is2 = 1.0 / std::sqrt(2.0);
  for (int e = 0; e < mesh.n_triangles(); ++e) {
    const double w = s.weight[e];
    for (int q = 0; q < 3; ++q) {
      const Vec2& x = s.qp[e * 3 + q];
      const Vec2 wvec(is2 * x.y(), -is2 * x.x());
      for (int l = 0; l < nl; ++l) {
        const Vec2 gl = s.dN(e, q, l);
        for (int m = 0; m < nl; ++m)
          trip.emplace_back(s.dof(e, l), s.dof(e, m), w * gl.dot(s.dN(e, q, m)));
        rhs[s.dof(e, l)] -= w * gl.dot(wvec);
        // constraints: mean alpha, mean d2 alpha, mean d3 alpha
        trip.emplace_back(n, s.dof(e, l), w * s.N(e, q, l));
        trip.emplace_back(s.dof(e, l), n, w * s.N(e, q, l));
        trip.emplace_back(n + 1, s.dof(e, l), w * gl.x());
        trip.emplace_back(s.dof(e, l), n + 1, w * gl.x());
        trip.emplace_back(n + 2, s.dof(e, l), w * gl.y());
        trip.emplace_back(s.dof(e, l), n + 2, w * gl.y());
      }
    }
  }
  SparseMat kkt(nsys, nsys);
  kkt.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<SparseMat> lu(kkt);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("warping: singular constrained system (degenerate mesh)");
  const VecX x = lu.solve(rhs);
  if ((kkt * x - rhs).norm() > 1e-8 * std::max(1.0, rhs.norm()))
    throw std::runtime_error("warping: solve residual too large");

  WarpingSolution sol;
  sol.alpha = x.head(n);
  double val = 0.0, l2 = 0.0;
  for (int e = 0; e < mesh.n_triangles(); ++e) {
    const double w = s.weight[e];
    for (int q = 0; q < 3; ++q) {
      const Vec2& xq = s.qp[e * 3 + q];
      Vec2 g(is2 * xq.y(), -is2 * xq.x());
      double av = 0.0;
      for (int l = 0; l < nl; ++l) {
        g += sol.alpha[s.dof(e, l)] * s.dN(e, q, l);
        av += sol.alpha[s.dof(e, l)] * s.N(e, q, l);
      }
      val += w * g.squaredNorm();
      l2 += w * av * av;
    }
  }
  sol.cS = val / mesh.area();
  sol.alpha_l2 = std::sqrt(l2 / mesh.area());
  return sol;
}

EffectiveCoefficients closed_form_disc(const IsotropicLaw& law) {
  law.validate();
  EffectiveCoefficients c;
  c.lambda = law.lambda;
  c.mu = law.mu;
  const double pi = std::numbers::pi;
  c.q1 = law.mu / (8.0 * pi);
  c.q2 = c.q3 = law.mu * (3.0 * law.lambda + 2.0 * law.mu) / (16.0 * pi * (law.lambda + law.mu));
  c.M.setZero();
  c.M(0, 1) = 8.0 / (3.0 * std::sqrt(pi));
  c.M(2, 3) = 16.0 / (3.0 * std::sqrt(3.0 * pi));
  c.cS = 1.0 / (4.0 * pi);
  c.Qmat = Vec3(c.q1, c.q2, c.q3).asDiagonal();
  return c;
}

std::array<double, 3> qbar_general_isotropic(const CrossSectionMesh& mesh, const IsotropicLaw& law,
                                             ElementOrder order) {
  law.validate();
  const WarpingSolution w = solve_warping(mesh, order);
  // second moments by exact midpoint quadrature
  double m2 = 0.0, m3 = 0.0;
  for (int e = 0; e < mesh.n_triangles(); ++e) {
    const auto& tr = mesh.triangles[e];
    for (int k = 0; k < 3; ++k) {
      const Vec2 mid = 0.5 * (mesh.vertices[tr[k]] + mesh.vertices[tr[(k + 1) % 3]]);
      m2 += mesh.triangle_areas()[e] / 3.0 * mid.x() * mid.x();
      m3 += mesh.triangle_areas()[e] / 3.0 * mid.y() * mid.y();
    }
  }
  m2 /= mesh.area();
  m3 /= mesh.area();
  const double plane = law.mu * (3.0 * law.lambda + 2.0 * law.mu) / (law.lambda + law.mu);
  return {0.5 * law.mu * w.cS, plane * m2 / 4.0, plane * m3 / 4.0};
}

EffectiveCoefficients assemble_coefficients(const CrossSectionMesh& mesh, const IsotropicLaw& law,
                                            ElementOrder order) {
  CorrectorSpace space(mesh, law, order);
  const auto& K = skew_basis();
  const auto& U = dev_basis();

  std::array<StrainField, 3> Psi = {StrainField(0), StrainField(0), StrainField(0)};
  for (int i = 0; i < 3; ++i) {
    const StrainField F = space.frame_strain(K[i]);
    const CorrectorSolution sol = space.solve(F);
    Psi[i] = F;
    for (size_t k = 0; k < Psi[i].v.size(); ++k) Psi[i].v[k] += sol.strain.v[k];
  }
  Mat3 Qm;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) Qm(i, j) = space.inner(Psi[i], Psi[j]);
  Qm = 0.5 * (Qm + Qm.transpose()).eval();
  Eigen::LLT<Mat3> llt(Qm);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("coefficients: assembled bending/twist form is not positive definite");

  Mat35 Umat;
  std::array<StrainField, 5> Phi = {StrainField(0), StrainField(0), StrainField(0), StrainField(0), StrainField(0)};
  for (int j = 0; j < 5; ++j) {
    Phi[j] = space.indicator_field(U[j]);
    for (int i = 0; i < 3; ++i) Umat(i, j) = space.inner(Phi[j], Psi[i]);
  }
  const Mat35 M = llt.solve(Umat);
  for (int j = 0; j < 5; ++j) {
    const CorrectorSolution sol = space.solve(Phi[j]);
    for (size_t k = 0; k < Phi[j].v.size(); ++k) {
      Phi[j].v[k] += sol.strain.v[k];
      for (int i = 0; i < 3; ++i) Phi[j].v[k] -= M(i, j) * Psi[i].v[k];
    }
  }
  Mat5 Eres;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) Eres(i, j) = space.inner(Phi[i], Phi[j]);
  Eres = 0.5 * (Eres + Eres.transpose()).eval();

  EffectiveCoefficients c;
  c.lambda = law.lambda;
  c.mu = law.mu;
  const auto q = qbar_general_isotropic(mesh, law, order);
  c.q1 = q[0];
  c.q2 = q[1];
  c.q3 = q[2];
  c.M = M;
  c.Eres = Eres;
  const WarpingSolution w = solve_warping(mesh, order);
  c.cS = w.cS;
  c.Qmat = Qm;
  c.mesh_stats = {mesh.n_vertices(), mesh.n_triangles(), mesh.max_edge(),
                  mesh.area(),       mesh.lce_area(),    w.alpha_l2};
  return c;
}

double relaxed_cell_energy(const CorrectorSpace& space, const Mat3& K, const Mat3& U, double rbar) {
  StrainField F = space.frame_strain(K);
  const StrainField FU = space.indicator_field(U);
  for (size_t k = 0; k < F.v.size(); ++k) F.v[k] += 0.5 * rbar * FU.v[k];
  return space.solve(F).objective;
}

std::string EffectiveCoefficients::to_json() const {
  json j;
  j["lambda"] = lambda;
  j["mu"] = mu;
  j["q1"] = q1;
  j["q2"] = q2;
  j["q3"] = q3;
  std::vector<double> m(15), e(25);
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 5; ++k) m[i * 5 + k] = M(i, k);
  for (int i = 0; i < 5; ++i)
    for (int k = 0; k < 5; ++k) e[i * 5 + k] = Eres(i, k);
  j["M"] = m;
  j["Eres"] = e;
  j["cS"] = cS;
  j["mesh_stats"] = {{"n_vertices", mesh_stats.n_vertices}, {"n_triangles", mesh_stats.n_triangles},
                     {"max_edge", mesh_stats.max_edge},     {"area", mesh_stats.area},
                     {"lce_area", mesh_stats.lce_area},     {"alpha_l2", mesh_stats.alpha_l2}};
  return j.dump(2);
}

EffectiveCoefficients EffectiveCoefficients::from_json(const std::string& text) {
  const json j = json::parse(text);
  EffectiveCoefficients c;
  c.lambda = j.at("lambda").get<double>();
  c.mu = j.at("mu").get<double>();
  c.q1 = j.at("q1").get<double>();
  c.q2 = j.at("q2").get<double>();
  c.q3 = j.at("q3").get<double>();
  const auto m = j.at("M").get<std::vector<double>>();
  const auto e = j.at("Eres").get<std::vector<double>>();
  if (m.size() != 15 || e.size() != 25) throw std::runtime_error("coefficients: bad matrix size in JSON");
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 5; ++k) c.M(i, k) = m[i * 5 + k];
  for (int i = 0; i < 5; ++i)
    for (int k = 0; k < 5; ++k) c.Eres(i, k) = e[i * 5 + k];
  c.cS = j.at("cS").get<double>();
  c.Qmat = Vec3(c.q1, c.q2, c.q3).asDiagonal();
  if (j.contains("mesh_stats")) {
    const auto& s = j["mesh_stats"];
    c.mesh_stats.n_vertices = s.value("n_vertices", 0);
    c.mesh_stats.n_triangles = s.value("n_triangles", 0);
    c.mesh_stats.max_edge = s.value("max_edge", 0.0);
    c.mesh_stats.area = s.value("area", 0.0);
    c.mesh_stats.lce_area = s.value("lce_area", 0.0);
    c.mesh_stats.alpha_l2 = s.value("alpha_l2", 0.0);
  }
  return c;
}

void EffectiveCoefficients::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("coefficients: cannot write '" + path + "'");
  out << to_json() << "\n";
}

EffectiveCoefficients EffectiveCoefficients::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("coefficients: cannot open '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_json(text);
}

} // namespace lcerod
