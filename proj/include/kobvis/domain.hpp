#pragma once

#include <cmath>
#include <fstream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "kobvis/polynomial.hpp"
#include "kobvis/types.hpp"

namespace kobvis {

// Axis-aligned box in the 2n real coordinates (Re z_1, Im z_1, ...).
struct Box {
  RVec lo;
  RVec hi;

  bool contains(const CVec& z) const {
    for (Eigen::Index j = 0; j < z.size(); ++j) {
      if (z[j].real() < lo[2 * j] || z[j].real() > hi[2 * j]) return false;
      if (z[j].imag() < lo[2 * j + 1] || z[j].imag() > hi[2 * j + 1]) return false;
    }
    return true;
  }
  double min_side() const { return (hi - lo).minCoeff(); }
};

// A bounded domain {rho < 0} inside bbox, with a validated collar width for
// boundary projection and a certified Euclidean diameter bound.
struct DomainSpec {
  std::string name;
  RhoPtr rho;
  Box bbox;
  double collar_eta0 = 0.0;
  double diameter = 0.0;
  CVec anchor;  // a point well inside the domain, used to seed boundary sampling

  int dim() const { return rho->dim(); }
  bool contains(const CVec& z) const { return rho->eval(z) < 0.0 && bbox.contains(z); }
};

inline Box make_box(std::initializer_list<double> lo, std::initializer_list<double> hi) {
  Box b;
  b.lo = RVec(static_cast<Eigen::Index>(lo.size()));
  b.hi = RVec(static_cast<Eigen::Index>(hi.size()));
  Eigen::Index i = 0;
  for (double v : lo) b.lo[i++] = v;
  i = 0;
  for (double v : hi) b.hi[i++] = v;
  return b;
}

inline Box cube_box(int n, double half_side) {
  Box b;
  b.lo = RVec::Constant(2 * n, -half_side);
  b.hi = RVec::Constant(2 * n, half_side);
  return b;
}

// ---------------------------------------------------------------------------
// Built-in domains
// ---------------------------------------------------------------------------

// |z|^2 - 1 in C^n (n = 1 gives the unit disc used in slice testing mode).
inline DomainSpec make_ball(int n) {
  std::vector<Monomial> terms;
  for (int j = 0; j < n; ++j) {
    Monomial m;
    m.powers_z.assign(n, 0);
    m.powers_zbar.assign(n, 0);
    m.powers_z[j] = 1;
    m.powers_zbar[j] = 1;
    m.coeff = 1.0;
    terms.push_back(m);
  }
  Monomial c;
  c.powers_z.assign(n, 0);
  c.powers_zbar.assign(n, 0);
  c.coeff = -1.0;
  terms.push_back(c);

  DomainSpec d;
  d.name = (n == 1) ? "disc" : (n == 2 ? "ball" : "ball" + std::to_string(n));
  d.rho = std::make_shared<PolyRho>(n, std::move(terms));
  d.bbox = cube_box(n, 1.1);
  d.collar_eta0 = 0.2;
  d.diameter = 2.0;
  d.anchor = CVec::Zero(n);
  return d;
}

// Ball of radius R about the origin (nested-ball monotonicity tests).
inline DomainSpec make_ball_radius(int n, double R) {
  std::vector<Monomial> terms;
  for (int j = 0; j < n; ++j) {
    Monomial m;
    m.powers_z.assign(n, 0);
    m.powers_zbar.assign(n, 0);
    m.powers_z[j] = 1;
    m.powers_zbar[j] = 1;
    m.coeff = 1.0;
    terms.push_back(m);
  }
  Monomial c;
  c.powers_z.assign(n, 0);
  c.powers_zbar.assign(n, 0);
  c.coeff = -R * R;
  terms.push_back(c);

  DomainSpec d;
  d.name = "ball_r" + std::to_string(R);
  d.rho = std::make_shared<PolyRho>(n, std::move(terms));
  d.bbox = cube_box(n, 1.1 * R);
  d.collar_eta0 = 0.2 * R;
  d.diameter = 2.0 * R;
  d.anchor = CVec::Zero(n);
  return d;
}

inline DomainSpec make_disc() { return make_ball(1); }

// Smooth complete Reinhardt approximation of the bidisc:
//   |z1|^8 + |z2|^8 - 1 < 0.
inline DomainSpec make_polydisc_smooth() {
  auto mono = [](int pz1, int pb1, int pz2, int pb2, cd c) {
    Monomial m;
    m.powers_z = {pz1, pz2};
    m.powers_zbar = {pb1, pb2};
    m.coeff = c;
    return m;
  };
  std::vector<Monomial> terms = {
      mono(4, 4, 0, 0, 1.0),
      mono(0, 0, 4, 4, 1.0),
      mono(0, 0, 0, 0, -1.0),
  };
  DomainSpec d;
  d.name = "polydisc_smooth";
  d.rho = std::make_shared<PolyRho>(2, std::move(terms));
  d.bbox = cube_box(2, 1.05);
  d.collar_eta0 = 0.05;  // curvature near the corner ring limits the collar
  d.diameter = 2.60;     // 2 * sqrt(2) * 2^(-1/8) = 2.5937..., rounded up
  d.anchor = CVec::Zero(2);
  return d;
}

// Bounded non-pseudoconvex model:
//   rho = Re z1 + |z1|^2 - |z2|^2 + |z2|^4.
// The origin is a boundary point whose tangential Levi form is -1 on (0,1).
inline DomainSpec make_model_nonpsc() {
  auto mono = [](int pz1, int pb1, int pz2, int pb2, cd c) {
    Monomial m;
    m.powers_z = {pz1, pz2};
    m.powers_zbar = {pb1, pb2};
    m.coeff = c;
    return m;
  };
  std::vector<Monomial> terms = {
      mono(1, 0, 0, 0, 0.5), mono(0, 1, 0, 0, 0.5),  // Re z1
      mono(1, 1, 0, 0, 1.0),                         // |z1|^2
      mono(0, 0, 1, 1, -1.0),                        // -|z2|^2
      mono(0, 0, 2, 2, 1.0),                         // |z2|^4
  };
  DomainSpec d;
  d.name = "model_nonpsc";
  d.rho = std::make_shared<PolyRho>(2, std::move(terms));
  // z1 lies in the disc |z1 + 1/2| < 1/sqrt(2); |z2| < 1.099.
  d.bbox = make_box({-1.25, -0.75, -1.15, -1.15}, {0.25, 0.75, 1.15, 1.15});
  d.collar_eta0 = 0.12;
  d.diameter = 2.62;  // product-hull bound sqrt(2 + (2*1.0987)^2) = 2.614
  d.anchor = make_cvec({cd(-0.45, 0.0), cd(0.0, 0.0)});
  return d;
}

inline DomainSpec make_builtin(const std::string& name) {
  if (name == "disc") return make_disc();
  if (name == "ball") return make_ball(2);
  if (name == "ball3") return make_ball(3);
  if (name == "polydisc_smooth") return make_polydisc_smooth();
  if (name == "model_nonpsc") return make_model_nonpsc();
  throw PreconditionError("unknown builtin domain: " + name);
}

// ---------------------------------------------------------------------------
// JSON interchange
// ---------------------------------------------------------------------------

inline nlohmann::json domain_to_json(const DomainSpec& d) {
  const auto* poly = dynamic_cast<const PolyRho*>(d.rho.get());
  if (!poly) throw PreconditionError("only polynomial defining functions serialize");
  nlohmann::json j;
  j["name"] = d.name;
  j["dimension"] = d.dim();
  nlohmann::json monos = nlohmann::json::array();
  for (const auto& m : poly->terms()) {
    monos.push_back({{"powers_z", m.powers_z},
                     {"powers_zbar", m.powers_zbar},
                     {"coeff_re", m.coeff.real()},
                     {"coeff_im", m.coeff.imag()}});
  }
  j["monomials"] = monos;
  j["bbox"] = {{"min", std::vector<double>(d.bbox.lo.data(), d.bbox.lo.data() + d.bbox.lo.size())},
               {"max", std::vector<double>(d.bbox.hi.data(), d.bbox.hi.data() + d.bbox.hi.size())}};
  j["collar_eta0"] = d.collar_eta0;
  if (d.diameter > 0) j["diameter"] = d.diameter;
  j["anchor"] = [&] {
    std::vector<double> a;
    for (Eigen::Index k = 0; k < d.anchor.size(); ++k) {
      a.push_back(d.anchor[k].real());
      a.push_back(d.anchor[k].imag());
    }
    return a;
  }();
  return j;
}

DomainSpec validate_domain(DomainSpec d);  // defined after the helpers below

inline DomainSpec domain_from_json(const nlohmann::json& j) {
  int n = j.at("dimension").get<int>();
  if (n < 1 || n > kMaxDim)
    throw PreconditionError("dimension out of supported range [1, 8]");
  std::vector<Monomial> terms;
  for (const auto& jm : j.at("monomials")) {
    Monomial m;
    m.powers_z = jm.at("powers_z").get<std::vector<int>>();
    m.powers_zbar = jm.at("powers_zbar").get<std::vector<int>>();
    m.coeff = cd(jm.at("coeff_re").get<double>(),
                 jm.value("coeff_im", 0.0));
    terms.push_back(std::move(m));
  }
  DomainSpec d;
  d.name = j.at("name").get<std::string>();
  d.rho = std::make_shared<PolyRho>(n, std::move(terms));
  auto lo = j.at("bbox").at("min").get<std::vector<double>>();
  auto hi = j.at("bbox").at("max").get<std::vector<double>>();
  if (static_cast<int>(lo.size()) != 2 * n || static_cast<int>(hi.size()) != 2 * n)
    throw PreconditionError("bbox length != 2 * dimension");
  d.bbox.lo = Eigen::Map<const Eigen::VectorXd>(lo.data(), lo.size());
  d.bbox.hi = Eigen::Map<const Eigen::VectorXd>(hi.data(), hi.size());
  d.collar_eta0 = j.at("collar_eta0").get<double>();
  d.diameter = j.value("diameter", 0.0);
  if (j.contains("anchor")) {
    auto a = j.at("anchor").get<std::vector<double>>();
    RVec av = Eigen::Map<const Eigen::VectorXd>(a.data(), a.size());
    d.anchor = to_complex(av);
  }
  return validate_domain(std::move(d));
}

inline DomainSpec load_domain(const std::string& name_or_path) {
  if (name_or_path == "disc" || name_or_path == "ball" || name_or_path == "ball3" ||
      name_or_path == "polydisc_smooth" || name_or_path == "model_nonpsc")
    return make_builtin(name_or_path);
  std::ifstream in(name_or_path);
  if (!in) throw PreconditionError("cannot open domain file: " + name_or_path);
  nlohmann::json j;
  try {
    in >> j;
    return domain_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("malformed domain file: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Sampling helpers (deterministic given the seed)
// ---------------------------------------------------------------------------

// First crossing of {rho = 0} from the anchor along `dir`, bisected to
// abs tol 1e-12.  Returns false when the ray leaves bbox while still inside.
inline bool boundary_ray_hit(const DomainSpec& d, const CVec& dir, CVec& hit) {
  // distance from anchor to bbox boundary along dir
  RVec x0 = to_real(d.anchor);
  RVec u = to_real(dir);
  double tmax = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < x0.size(); ++i) {
    if (u[i] > 1e-15) tmax = std::min(tmax, (d.bbox.hi[i] - x0[i]) / u[i]);
    if (u[i] < -1e-15) tmax = std::min(tmax, (d.bbox.lo[i] - x0[i]) / u[i]);
  }
  if (!std::isfinite(tmax) || tmax <= 0) return false;

  const int kScan = 128;
  double prev_t = 0.0;
  double prev_rho = d.rho->eval(d.anchor);
  if (prev_rho >= 0) return false;
  for (int k = 1; k <= kScan; ++k) {
    double t = tmax * k / kScan;
    CVec z = d.anchor + t * dir;
    double r = d.rho->eval(z);
    if (r >= 0.0) {
      double a = prev_t, b = t;
      for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (a + b);
        if (d.rho->eval(d.anchor + mid * dir) < 0)
          a = mid;
        else
          b = mid;
        if (b - a < 1e-13) break;
      }
      hit = d.anchor + 0.5 * (a + b) * dir;
      return true;
    }
    prev_t = t;
    prev_rho = r;
  }
  return false;
}

// Boundary points visible from the anchor, in deterministic seeded order.
inline std::vector<CVec> sample_boundary(const DomainSpec& d, int count, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<CVec> pts;
  int guard = 0;
  while (static_cast<int>(pts.size()) < count && guard < 100 * count + 1000) {
    ++guard;
    CVec dir(d.dim());
    for (int j = 0; j < d.dim(); ++j) dir[j] = cd(gauss(rng), gauss(rng));
    double nn = std::sqrt(dir.squaredNorm());
    if (nn < 1e-12) continue;
    dir /= nn;
    CVec hit(d.dim());
    if (boundary_ray_hit(d, dir, hit)) pts.push_back(hit);
  }
  if (static_cast<int>(pts.size()) < count)
    throw NumericFailure("boundary sampling exhausted its budget for " + d.name);
  return pts;
}

// Sampled diameter, inflated by 5% so 1/diameter stays a valid metric
// lower-bound constant.
inline double estimate_diameter(const DomainSpec& d, int samples = 2048, uint64_t seed = 42) {
  auto pts = sample_boundary(d, samples, seed);
  double best = 0.0;
  // max pairwise distance over a thinned pair set; full O(N^2) at 2048 is fine
  for (size_t a = 0; a < pts.size(); ++a)
    for (size_t b = a + 1; b < pts.size(); ++b)
      best = std::max(best, std::sqrt((pts[a] - pts[b]).squaredNorm()));
  return 1.05 * best;
}

inline DomainSpec validate_domain(DomainSpec d) {
  const auto* poly = dynamic_cast<const PolyRho*>(d.rho.get());
  // real-valuedness probe
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int probe = 0; probe < 64; ++probe) {
    CVec z(d.dim());
    for (int j = 0; j < d.dim(); ++j) {
      double re = d.bbox.lo[2 * j] + uni(rng) * (d.bbox.hi[2 * j] - d.bbox.lo[2 * j]);
      double im = d.bbox.lo[2 * j + 1] + uni(rng) * (d.bbox.hi[2 * j + 1] - d.bbox.lo[2 * j + 1]);
      z[j] = cd(re, im);
    }
    if (poly) {
      cd val = poly->eval_complex(z);
      double scale = std::max(1.0, std::abs(val));
      if (std::abs(val.imag()) > 1e-10 * scale)
        throw PreconditionError("defining function is not real-valued");
    }
    CMat L = d.rho->levi(z);
    double asym = (L - L.adjoint()).cwiseAbs().maxCoeff();
    double scale = std::max(1.0, L.cwiseAbs().maxCoeff());
    if (asym > 1e-10 * scale)
      throw PreconditionError("Levi matrix is not Hermitian");
  }
  if (d.anchor.size() == 0) {
    // search bbox corners/center grid for a deeply interior point
    CVec best(d.dim());
    double best_rho = std::numeric_limits<double>::infinity();
    std::mt19937_64 rng2(11);
    for (int probe = 0; probe < 4096; ++probe) {
      CVec z(d.dim());
      for (int j = 0; j < d.dim(); ++j) {
        double re = d.bbox.lo[2 * j] + uni(rng2) * (d.bbox.hi[2 * j] - d.bbox.lo[2 * j]);
        double im = d.bbox.lo[2 * j + 1] + uni(rng2) * (d.bbox.hi[2 * j + 1] - d.bbox.lo[2 * j + 1]);
        z[j] = cd(re, im);
      }
      double r = d.rho->eval(z);
      if (r < best_rho) {
        best_rho = r;
        best = z;
      }
    }
    if (best_rho >= 0)
      throw PreconditionError("domain appears empty inside bbox");
    d.anchor = best;
  }
  if (d.collar_eta0 <= 0) d.collar_eta0 = 0.1 * d.bbox.min_side();
  if (d.diameter <= 0) d.diameter = estimate_diameter(d);
  // gradient nonvanishing on sampled boundary
  for (const auto& p : sample_boundary(d, 64, 13)) {
    if (std::sqrt(d.rho->grad(p).squaredNorm()) < 1e-10)
      throw PreconditionError("gradient of rho vanishes on sampled boundary");
  }
  return d;
}

}  // namespace kobvis
