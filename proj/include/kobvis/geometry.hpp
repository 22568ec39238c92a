#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "kobvis/domain.hpp"
#include "kobvis/polynomial.hpp"
#include "kobvis/types.hpp"

namespace kobvis {

struct Projection {
  CVec point;    // nearest boundary point
  double delta;  // Euclidean distance |z - point|
};

// Nearest-point projection onto {rho = 0}: damped Newton on the stationarity
// system  x - x0 = mu * grad rho(x),  rho(x) = 0,  seeded by one gradient-flow
// step.  Residual tolerance 1e-10, cap 100 iterations.
inline Projection boundary_project(const DomainSpec& d, const CVec& z) {
  const auto& rho = *d.rho;
  const int n = d.dim();
  const int m = 2 * n;

  RVec x0 = to_real(z);
  CVec gc = real_gradient_c(rho, z);
  double g2 = gc.squaredNorm();
  if (g2 < 1e-24) throw DegenerateGradient("boundary_project: zero gradient at seed");
  double rho0 = rho.eval(z);

  // seed: first-order step onto the zero set
  RVec x = x0 - (rho0 / g2) * to_real(gc);
  double mu = -rho0 / g2;

  double scale = std::max(1.0, std::sqrt(x0.squaredNorm()));
  const double tol = 1e-10 * scale;

  auto residual = [&](const RVec& xx, double mm, RVec& F) {
    CVec zz = to_complex(xx);
    RVec g = to_real(real_gradient_c(rho, zz));
    F.resize(m + 1);
    F.head(m) = xx - x0 - mm * g;
    F[m] = rho.eval(zz);
  };

  RVec F;
  residual(x, mu, F);
  double fn = F.norm();
  bool converged = fn < tol;

  for (int it = 0; it < 100 && !converged; ++it) {
    CVec zz = to_complex(x);
    RVec g = to_real(real_gradient_c(rho, zz));
    RMat H = real_hessian(rho, zz);

    RMat J = RMat::Zero(m + 1, m + 1);
    J.topLeftCorner(m, m) = RMat::Identity(m, m) - mu * H;
    J.block(0, m, m, 1) = -g;
    J.block(m, 0, 1, m) = g.transpose();

    RVec step = J.partialPivLu().solve(-F);

    // backtracking on the residual norm
    double t = 1.0;
    bool accepted = false;
    for (int bt = 0; bt < 30; ++bt) {
      RVec xt = x + t * step.head(m);
      double mt = mu + t * step[m];
      RVec Ft;
      residual(xt, mt, Ft);
      if (Ft.norm() < fn * (1.0 - 1e-4 * t)) {
        x = xt;
        mu = mt;
        F = Ft;
        fn = F.norm();
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
    if (fn < tol) converged = true;
  }
  if (!converged) throw NoConvergence("boundary_project: residual " + std::to_string(fn));

  Projection out;
  out.point = to_complex(x);
  out.delta = (x - x0).norm();

  // a posteriori contract checks
  if (std::abs(rho.eval(out.point)) > 1e-8 * scale)
    throw NoConvergence("boundary_project: |rho| at result too large");
  if (out.delta >= d.collar_eta0)
    throw OutsideCollar("boundary_project: delta " + std::to_string(out.delta) +
                        " >= collar " + std::to_string(d.collar_eta0));
  if (out.delta > 1e-12) {
    RVec g = to_real(real_gradient_c(rho, out.point));
    RVec diff = x0 - to_real(out.point);
    double cosang = std::abs(g.dot(diff)) / (g.norm() * diff.norm());
    if (cosang < 1.0 - 1e-8)
      throw NoConvergence("boundary_project: offset not aligned with normal");
  }
  return out;
}

// Signed distance: -delta inside, +delta outside.
inline double signed_distance(const DomainSpec& d, const CVec& z) {
  Projection p = boundary_project(d, z);
  return d.rho->eval(z) < 0.0 ? -p.delta : p.delta;
}

// Inner unit normal at a boundary point: -conj(grad rho) normalized.  The
// defining-function convention makes rho decrease along it automatically.
inline CVec inner_normal(const DomainSpec& d, const CVec& p) {
  if (std::abs(d.rho->eval(p)) > 1e-8)
    throw PreconditionError("inner_normal: point not on boundary");
  CVec g = d.rho->grad(p);
  double gn = std::sqrt(g.squaredNorm());
  if (gn < 1e-12) throw DegenerateGradient("inner_normal: |grad rho| < 1e-12");
  return (-g.conjugate() / gn).eval();
}

struct HNSplit {
  CVec v_h;
  CVec v_n;
  CVec base;    // projection of z used for the split
  CVec normal;  // inner unit normal at base
};

// v = v_H + v_N with v_N = <v, nu> nu taken at the boundary projection of z.
inline HNSplit split_hn(const DomainSpec& d, const CVec& z, const CVec& v) {
  Projection p = boundary_project(d, z);
  CVec nu = inner_normal(d, p.point);
  HNSplit s;
  s.base = p.point;
  s.normal = nu;
  s.v_n = hdot(v, nu) * nu;
  s.v_h = v - s.v_n;
  return s;
}

// Levi form L_rho(v, v) = sum_jk (d2 rho / dz_j dzbar_k) v_j conj(v_k).
inline double levi_form(const DomainSpec& d, const CVec& p, const CVec& v) {
  CMat B = d.rho->levi(p);
  cd acc = 0.0;
  for (int j = 0; j < d.dim(); ++j)
    for (int k = 0; k < d.dim(); ++k) acc += B(j, k) * v[j] * std::conj(v[k]);
  return acc.real();
}

enum class LeviClass { Pseudoconvex, Marginal, NonPseudoconvex };

struct TangentLeviSpectrum {
  std::vector<double> eigenvalues;  // ascending
  std::vector<CVec> eigenvectors;   // unit, complex-tangent
  LeviClass cls = LeviClass::Pseudoconvex;
};

inline const char* levi_class_name(LeviClass c) {
  switch (c) {
    case LeviClass::Pseudoconvex: return "pseudoconvex";
    case LeviClass::Marginal: return "marginal";
    default: return "non-pseudoconvex";
  }
}

// Orthonormal basis of the complex tangent space {v : sum_j d_j rho v_j = 0}
// at p, i.e. the Hermitian orthogonal complement of conj(grad rho).
inline std::vector<CVec> complex_tangent_basis(const DomainSpec& d, const CVec& p) {
  CVec g = d.rho->grad(p);
  double gn = std::sqrt(g.squaredNorm());
  if (gn < 1e-12) throw DegenerateGradient("complex_tangent_basis: degenerate gradient");
  CVec nu = (g.conjugate() / gn).eval();

  int n = d.dim();
  std::vector<CVec> basis;
  for (int j = 0; j < n && static_cast<int>(basis.size()) < n - 1; ++j) {
    CVec e = CVec::Zero(n);
    e[j] = 1.0;
    CVec w = e - hdot(e, nu) * nu;
    for (const auto& b : basis) w -= hdot(w, b) * b;
    double wn = std::sqrt(w.squaredNorm());
    if (wn > 1e-8) basis.push_back((w / wn).eval());
  }
  if (static_cast<int>(basis.size()) != n - 1)
    throw NumericFailure("complex_tangent_basis: failed to complete basis");
  return basis;
}

// Spectrum of the Levi form restricted to the complex tangent space at p.
// Smallest eigenvalue < -tol classifies the point as non-pseudoconvex;
// eigenvalues within [-tol, tol] report "marginal".
inline TangentLeviSpectrum tangent_levi_spectrum(const DomainSpec& d, const CVec& p,
                                                 double tol_levi = 1e-8) {
  if (std::abs(d.rho->eval(p)) > 1e-8)
    throw PreconditionError("tangent_levi_spectrum: point not on boundary");
  auto basis = complex_tangent_basis(d, p);
  int m = static_cast<int>(basis.size());
  CMat B = d.rho->levi(p);

  auto form = [&](const CVec& a, const CVec& b) {
    cd acc = 0.0;
    for (int j = 0; j < d.dim(); ++j)
      for (int k = 0; k < d.dim(); ++k) acc += B(j, k) * a[j] * std::conj(b[k]);
    return acc;
  };

  CMat M(m, m);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) M(r, c) = form(basis[c], basis[r]);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Eigen::MatrixXcd(M));
  if (es.info() != Eigen::Success)
    throw NumericFailure("tangent_levi_spectrum: eigensolver failed");

  TangentLeviSpectrum out;
  for (int i = 0; i < m; ++i) {
    out.eigenvalues.push_back(es.eigenvalues()[i]);
    CVec v = CVec::Zero(d.dim());
    for (int b = 0; b < m; ++b) v += es.eigenvectors()(b, i) * basis[b];
    v /= std::sqrt(v.squaredNorm());
    // canonical phase: largest-modulus entry made real positive
    int arg = 0;
    for (int j = 1; j < d.dim(); ++j)
      if (std::abs(v[j]) > std::abs(v[arg])) arg = j;
    if (std::abs(v[arg]) > 0) v *= std::conj(v[arg]) / std::abs(v[arg]);
    out.eigenvectors.push_back(v);
  }
  double smallest = out.eigenvalues.front();
  if (smallest < -tol_levi)
    out.cls = LeviClass::NonPseudoconvex;
  else if (smallest <= tol_levi)
    out.cls = LeviClass::Marginal;
  else
    out.cls = LeviClass::Pseudoconvex;
  return out;
}

// Frame of a 2D slice: w -> base + w1 * e_normal + w2 * tangent.
struct SliceFrame {
  CVec base;
  CVec e_normal;  // outward complex normal direction (-nu)
  CVec tangent;   // unit complex tangent direction of the slice
  CMat matrix() const {
    CMat M(base.size(), 2);
    M.col(0) = e_normal;
    M.col(1) = tangent;
    return M;
  }
};

struct SliceResult {
  DomainSpec domain;  // 2D slice domain
  SliceFrame frame;
};

// 2D slice through a boundary point p spanned by the complex normal line and
// a unit tangent vector v.  The slice origin sits on the slice boundary with
// inner normal (-1, 0).
inline SliceResult slice_domain(const DomainSpec& d, const CVec& p, const CVec& v,
                                double radius) {
  if (d.dim() < 2) throw PreconditionError("slice_domain: ambient dimension < 2");
  if (std::abs(std::sqrt(v.squaredNorm()) - 1.0) > 1e-8)
    throw PreconditionError("slice_domain: v not unit");
  CVec g = d.rho->grad(p);
  if (std::abs(hdot(v, g.conjugate())) > 1e-6 * std::sqrt(g.squaredNorm()))
    throw PreconditionError("slice_domain: v not complex-tangent at p");

  SliceFrame fr;
  fr.base = p;
  fr.e_normal = (-inner_normal(d, p)).eval();
  fr.tangent = v;

  auto slice_rho = std::make_shared<AffineSliceRho>(d.rho, fr.base, fr.matrix());
  CVec origin = CVec::Zero(2);
  if (std::sqrt(slice_rho->grad(origin).squaredNorm()) < 1e-10)
    throw SliceNotNondegenerate("slice_domain: grad rho' vanishes at slice origin");

  DomainSpec s;
  s.name = d.name + "_slice";
  s.rho = slice_rho;
  s.bbox = cube_box(2, radius);
  s.collar_eta0 = std::min(d.collar_eta0, 0.1 * 2.0 * radius);
  s.diameter = std::min(d.diameter, 4.0 * radius);  // diam of the slice bbox
  s.anchor = make_cvec({cd(-std::min(0.25 * radius, 0.5 * d.collar_eta0), 0.0), cd(0.0, 0.0)});
  SliceResult out{std::move(s), fr};
  if (!out.domain.contains(out.domain.anchor))
    throw SliceNotNondegenerate("slice_domain: no interior near slice origin");
  return out;
}

}  // namespace kobvis
