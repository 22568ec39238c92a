#pragma once

#include <algorithm>
#include <memory>
#include <vector>

#include "kobvis/types.hpp"

namespace kobvis {

// One term  coeff * prod_j z_j^{pz_j} * prod_j conj(z_j)^{pzb_j}.
struct Monomial {
  std::vector<int> powers_z;
  std::vector<int> powers_zbar;
  cd coeff;
};

// Defining-function interface: a real-valued rho with exact first and
// second complex derivatives.  levi(z) is the mixed Hessian d2rho/dz_j dzbar_k,
// hess(z) the holomorphic Hessian d2rho/dz_j dz_k.
class IDefiningFunction {
 public:
  virtual ~IDefiningFunction() = default;
  virtual int dim() const = 0;
  virtual double eval(const CVec& z) const = 0;
  virtual CVec grad(const CVec& z) const = 0;
  virtual CMat hess(const CVec& z) const = 0;
  virtual CMat levi(const CVec& z) const = 0;
};

using RhoPtr = std::shared_ptr<const IDefiningFunction>;

// Polynomial in (z, zbar) given by a monomial table.  Derivatives are exact
// (falling-factorial calculus on the powers).
class PolyRho final : public IDefiningFunction {
 public:
  PolyRho(int n, std::vector<Monomial> terms) : n_(n), terms_(std::move(terms)) {
    max_pow_.assign(n_, 0);
    for (const auto& m : terms_) {
      if (static_cast<int>(m.powers_z.size()) != n_ ||
          static_cast<int>(m.powers_zbar.size()) != n_)
        throw PreconditionError("PolyRho: monomial power list length != dimension");
      for (int j = 0; j < n_; ++j) {
        if (m.powers_z[j] < 0 || m.powers_zbar[j] < 0)
          throw PreconditionError("PolyRho: negative power");
        max_pow_[j] = std::max({max_pow_[j], m.powers_z[j], m.powers_zbar[j]});
      }
    }
  }

  int dim() const override { return n_; }

  double eval(const CVec& z) const override { return eval_complex(z).real(); }

  // Full complex value; construction-time validation checks Im ~ 0.
  cd eval_complex(const CVec& z) const {
    cd acc = 0.0;
    for (const auto& m : terms_) acc += term_value(m, z, -1, -1);
    return acc;
  }

  CVec grad(const CVec& z) const override {
    CVec g = CVec::Zero(n_);
    for (const auto& m : terms_)
      for (int j = 0; j < n_; ++j)
        if (m.powers_z[j] > 0) g[j] += term_value(m, z, j, -1);
    return g;
  }

  CMat hess(const CVec& z) const override {
    CMat h = CMat::Zero(n_, n_);
    for (const auto& m : terms_)
      for (int j = 0; j < n_; ++j) {
        if (m.powers_z[j] == 0) continue;
        for (int k = 0; k < n_; ++k) {
          int need = (j == k) ? 2 : 1;
          if (m.powers_z[k] < need) continue;
          h(j, k) += term_value_zz(m, z, j, k);
        }
      }
    return h;
  }

  CMat levi(const CVec& z) const override {
    CMat h = CMat::Zero(n_, n_);
    for (const auto& m : terms_)
      for (int j = 0; j < n_; ++j) {
        if (m.powers_z[j] == 0) continue;
        for (int k = 0; k < n_; ++k) {
          if (m.powers_zbar[k] == 0) continue;
          h(j, k) += term_value(m, z, j, k);
        }
      }
    return h;
  }

  const std::vector<Monomial>& terms() const { return terms_; }

 private:
  // Term derivative with at most one d/dz_(dj) and one d/dzbar_(dk); -1 = none.
  cd term_value(const Monomial& m, const CVec& z, int dj, int dk) const {
    double factor = 1.0;
    cd prod = m.coeff;
    for (int j = 0; j < n_; ++j) {
      int pz = m.powers_z[j];
      int pzb = m.powers_zbar[j];
      if (j == dj) {
        if (pz == 0) return 0.0;
        factor *= pz;
        --pz;
      }
      if (j == dk) {
        if (pzb == 0) return 0.0;
        factor *= pzb;
        --pzb;
      }
      if (pz > 0) prod *= ipow(z[j], pz);
      if (pzb > 0) prod *= ipow(std::conj(z[j]), pzb);
    }
    return factor * prod;
  }

  // d^2/dz_j dz_k (j == k allowed).
  cd term_value_zz(const Monomial& m, const CVec& z, int dj, int dk) const {
    double factor = 1.0;
    cd prod = m.coeff;
    for (int j = 0; j < n_; ++j) {
      int pz = m.powers_z[j];
      if (j == dj) {
        if (pz == 0) return 0.0;
        factor *= pz;
        --pz;
      }
      if (j == dk) {
        if (pz == 0) return 0.0;
        factor *= pz;
        --pz;
      }
      if (pz > 0) prod *= ipow(z[j], pz);
      if (m.powers_zbar[j] > 0) prod *= ipow(std::conj(z[j]), m.powers_zbar[j]);
    }
    return factor * prod;
  }

  static cd ipow(cd base, int e) {
    cd r = 1.0;
    while (e > 0) {
      if (e & 1) r *= base;
      base *= base;
      e >>= 1;
    }
    return r;
  }

  int n_;
  std::vector<Monomial> terms_;
  std::vector<int> max_pow_;
};

// rho'(w) = rho(p + M w) for a holomorphic-affine frame (columns of M span
// the slice plane).  Chain rule keeps all derivatives exact.
class AffineSliceRho final : public IDefiningFunction {
 public:
  AffineSliceRho(RhoPtr parent, CVec base, CMat frame)
      : parent_(std::move(parent)), base_(std::move(base)), frame_(std::move(frame)) {}

  int dim() const override { return static_cast<int>(frame_.cols()); }

  double eval(const CVec& w) const override { return parent_->eval(ambient(w)); }

  CVec grad(const CVec& w) const override {
    CVec g = parent_->grad(ambient(w));
    CVec out = CVec::Zero(dim());
    for (int a = 0; a < dim(); ++a)
      for (int j = 0; j < parent_->dim(); ++j) out[a] += g[j] * frame_(j, a);
    return out;
  }

  CMat hess(const CVec& w) const override {
    CMat h = parent_->hess(ambient(w));
    int m = dim();
    CMat out = CMat::Zero(m, m);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        cd acc = 0.0;
        for (int j = 0; j < parent_->dim(); ++j)
          for (int k = 0; k < parent_->dim(); ++k)
            acc += h(j, k) * frame_(j, a) * frame_(k, b);
        out(a, b) = acc;
      }
    return out;
  }

  CMat levi(const CVec& w) const override {
    CMat h = parent_->levi(ambient(w));
    int m = dim();
    CMat out = CMat::Zero(m, m);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        cd acc = 0.0;
        for (int j = 0; j < parent_->dim(); ++j)
          for (int k = 0; k < parent_->dim(); ++k)
            acc += h(j, k) * frame_(j, a) * std::conj(frame_(k, b));
        out(a, b) = acc;
      }
    return out;
  }

  CVec ambient(const CVec& w) const {
    CVec z = base_;
    for (int a = 0; a < dim(); ++a) z += frame_.col(a) * w[a];
    return z;
  }

 private:
  RhoPtr parent_;
  CVec base_;
  CMat frame_;  // n x m, holomorphic in w
};

// Real Hessian of rho in (Re z_1, Im z_1, ...) coordinates, assembled from
// the holomorphic Hessian A and the mixed Hessian B:
//   d2/dx_j dx_k = 2 Re(A_jk + B_jk)
//   d2/dy_j dy_k = 2 Re(B_jk - A_jk)
//   d2/dx_j dy_k = 2 (Im B_jk - Im A_jk)
//   d2/dy_j dx_k = -2 (Im A_jk + Im B_jk)
inline RMat real_hessian(const IDefiningFunction& rho, const CVec& z) {
  int n = rho.dim();
  CMat A = rho.hess(z);
  CMat B = rho.levi(z);
  RMat H(2 * n, 2 * n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      cd a = A(j, k), b = B(j, k);
      H(2 * j, 2 * k) = 2.0 * (a.real() + b.real());
      H(2 * j + 1, 2 * k + 1) = 2.0 * (b.real() - a.real());
      H(2 * j, 2 * k + 1) = 2.0 * (b.imag() - a.imag());
      H(2 * j + 1, 2 * k) = -2.0 * (a.imag() + b.imag());
    }
  return H;
}

// Real gradient as a complex vector: grad_x + i grad_y = 2 conj(d rho / dz).
inline CVec real_gradient_c(const IDefiningFunction& rho, const CVec& z) {
  return 2.0 * rho.grad(z).conjugate();
}

}  // namespace kobvis
