#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace kobvis {

using cd = std::complex<double>;

// Ambient dimension is small (n <= 8); fixed-capacity vectors avoid heap
// traffic in the evaluation loops.
constexpr int kMaxDim = 8;

using CVec = Eigen::Matrix<cd, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using CMat = Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;
using RVec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 2 * kMaxDim + 1, 1>;
using RMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor,
                           2 * kMaxDim + 1, 2 * kMaxDim + 1>;

// <v,w> = sum_j v_j conj(w_j).  Eigen's dot() conjugates its *object*, so
// the argument order below is deliberate.
inline cd hdot(const CVec& v, const CVec& w) { return w.dot(v); }

inline CVec make_cvec(std::initializer_list<cd> entries) {
  CVec v(static_cast<Eigen::Index>(entries.size()));
  Eigen::Index i = 0;
  for (const cd& e : entries) v[i++] = e;
  return v;
}

// Real <-> complex coordinate packing: slot 2j = Re z_j, slot 2j+1 = Im z_j.
inline RVec to_real(const CVec& z) {
  RVec x(2 * z.size());
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    x[2 * j] = z[j].real();
    x[2 * j + 1] = z[j].imag();
  }
  return x;
}

inline CVec to_complex(const RVec& x) {
  CVec z(x.size() / 2);
  for (Eigen::Index j = 0; j < z.size(); ++j) z[j] = cd(x[2 * j], x[2 * j + 1]);
  return z;
}

// Precondition violations map to CLI exit code 4, numeric failures to 3.
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoConvergence : NumericFailure {
  using NumericFailure::NumericFailure;
};
struct OutsideCollar : PreconditionError {
  using PreconditionError::PreconditionError;
};
struct DegenerateGradient : NumericFailure {
  using NumericFailure::NumericFailure;
};
struct SliceNotNondegenerate : NumericFailure {
  using NumericFailure::NumericFailure;
};
struct CenterOutside : PreconditionError {
  using PreconditionError::PreconditionError;
};
struct OutsideModelDomain : PreconditionError {
  using PreconditionError::PreconditionError;
};
struct NodeOutsideDomain : PreconditionError {
  using PreconditionError::PreconditionError;
};
struct Disconnected : NumericFailure {
  using NumericFailure::NumericFailure;
};
struct EtaTooLarge : PreconditionError {
  using PreconditionError::PreconditionError;
};
struct ShootingFailed : NumericFailure {
  using NumericFailure::NumericFailure;
};
struct SelectionDegenerate : NumericFailure {
  using NumericFailure::NumericFailure;
};
struct LeftNeighborhood : NumericFailure {
  using NumericFailure::NumericFailure;
};
struct StepRejection : NumericFailure {
  using NumericFailure::NumericFailure;
};
struct ClassificationMismatch : PreconditionError {
  using PreconditionError::PreconditionError;
};
struct FitMissing : PreconditionError {
  using PreconditionError::PreconditionError;
};

}  // namespace kobvis
