#pragma once

// Density matrices and the unconstrained state parametrization.
//
// A state is parametrized through a lower-triangular factor A with rho = A A^dagger.
// The d(d+1)/2 moduli of the lower-triangular entries are hyperspherical
// coordinates of a point on the unit sphere (nt = d(d+1)/2 - 1 angles theta), so
// tr(A A^dagger) = 1 by construction. The d(d-1)/2 strictly-lower entries carry
// phases e^{i phi} (nf phases); diagonal entries are real.
//
// Modulus ordering: the d diagonal entries (0,0), (1,1), ... first, then the
// strictly-lower entries in row-major order (1,0), (2,0), (2,1), (3,0), ...
// Phases follow the strictly-lower ordering. The flat parameter vector is
// [theta..., phi...].

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "qsample/errors.hpp"
#include "qsample/types.hpp"

namespace qsample {

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;

inline int theta_count(int d) { return d * (d + 1) / 2 - 1; }
inline int phi_count(int d) { return d * (d - 1) / 2; }
inline int param_count(int d) { return d * d - 1; }

/// (row, col) of every lower-triangular entry in modulus order.
inline std::vector<std::pair<int, int>> lower_entries(int d) {
  std::vector<std::pair<int, int>> out;
  out.reserve(static_cast<std::size_t>(d * (d + 1) / 2));
  for (int i = 0; i < d; ++i) out.emplace_back(i, i);
  for (int i = 1; i < d; ++i)
    for (int j = 0; j < i; ++j) out.emplace_back(i, j);
  return out;
}

template <typename Scalar>
struct BasicStateParams {
  int d = 0;
  RealVector<Scalar> theta;
  RealVector<Scalar> phi;

  BasicStateParams() = default;
  BasicStateParams(int dim, RealVector<Scalar> angles, RealVector<Scalar> phases)
      : d(dim), theta(std::move(angles)), phi(std::move(phases)) {
    check();
  }

  void check() const {
    if (d < 1) throw DimensionError("state dimension must be >= 1");
    if (theta.size() != theta_count(d) || phi.size() != phi_count(d)) {
      throw DimensionError("d=" + std::to_string(d) + " needs " + std::to_string(theta_count(d)) +
                           " angles and " + std::to_string(phi_count(d)) + " phases, got " +
                           std::to_string(theta.size()) + " and " + std::to_string(phi.size()));
    }
  }

  int size() const { return param_count(d); }

  RealVector<Scalar> flat() const {
    RealVector<Scalar> x(theta.size() + phi.size());
    x << theta, phi;
    return x;
  }

  static BasicStateParams from_flat(int dim, const RealVector<Scalar>& x) {
    if (x.size() != param_count(dim))
      throw DimensionError("flat parameter vector has wrong length for d=" + std::to_string(dim));
    const int nt = theta_count(dim);
    return BasicStateParams(dim, x.head(nt), x.tail(x.size() - nt));
  }
};

using StateParams = BasicStateParams<double>;

struct DensityCheck {
  double hermitian_error = 0;
  double trace_error = 0;
  double min_eigenvalue = 0;

  bool ok() const {
    return hermitian_error <= kHermitianTol && trace_error <= kTraceTol &&
           min_eigenvalue >= -kPsdTol;
  }
};

template <typename Scalar>
DensityCheck check_density(const ComplexMatrix<Scalar>& m) {
  DensityCheck c;
  if (m.rows() != m.cols() || m.rows() == 0) {
    c.hermitian_error = c.trace_error = INFINITY;
    c.min_eigenvalue = -INFINITY;
    return c;
  }
  c.hermitian_error = static_cast<double>((m - m.adjoint()).cwiseAbs().maxCoeff());
  c.trace_error = static_cast<double>(std::abs(m.trace() - std::complex<Scalar>(1)));
  const ComplexMatrix<Scalar> herm = (m + m.adjoint()) / Scalar(2);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix<Scalar>> es(herm, Eigen::EigenvaluesOnly);
  c.min_eigenvalue = static_cast<double>(es.eigenvalues().minCoeff());
  if (!std::isfinite(c.hermitian_error) || !std::isfinite(c.trace_error) ||
      !std::isfinite(c.min_eigenvalue)) {
    c.min_eigenvalue = -INFINITY;
  }
  return c;
}

/// Hermitian, unit-trace, positive semidefinite d x d matrix.
template <typename Scalar>
class BasicDensityMatrix {
 public:
  BasicDensityMatrix() = default;

  /// Validates `m` and throws ValidationError if it is not a density matrix.
  explicit BasicDensityMatrix(ComplexMatrix<Scalar> m) : matrix_(std::move(m)) {
    const DensityCheck c = check_density(matrix_);
    if (!c.ok()) {
      throw ValidationError("not a density matrix: hermitian error " +
                            std::to_string(c.hermitian_error) + ", trace error " +
                            std::to_string(c.trace_error) + ", min eigenvalue " +
                            std::to_string(c.min_eigenvalue));
    }
  }

  static BasicDensityMatrix maximally_mixed(int d) {
    BasicDensityMatrix r;
    r.matrix_ = ComplexMatrix<Scalar>::Identity(d, d) / Scalar(d);
    return r;
  }

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const ComplexMatrix<Scalar>& matrix() const { return matrix_; }
  std::complex<Scalar> operator()(int r, int c) const { return matrix_(r, c); }

  template <typename S>
  friend BasicDensityMatrix<S> density_from_trusted(ComplexMatrix<S> m);

 private:
  ComplexMatrix<Scalar> matrix_;
};

using DensityMatrix = BasicDensityMatrix<double>;

/// Wraps a matrix that is Hermitian PSD with unit trace by construction.
template <typename Scalar>
BasicDensityMatrix<Scalar> density_from_trusted(ComplexMatrix<Scalar> m) {
  BasicDensityMatrix<Scalar> r;
  r.matrix_ = std::move(m);
  return r;
}

/// Moduli r_0..r_{n-1} on the unit sphere from n-1 hyperspherical angles.
template <typename Derived>
RealVector<typename Derived::Scalar> hyperspherical_point(const Eigen::MatrixBase<Derived>& angles) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = angles.size() + 1;
  RealVector<Scalar> r(n);
  Scalar s = 1;
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    r(k) = s * std::cos(angles(k));
    s *= std::sin(angles(k));
  }
  r(n - 1) = s;
  return r;
}

/// d r_e / d theta_k, an n x (n-1) matrix. Evaluated without dividing by sin, so it
/// stays finite at the poles.
template <typename Derived>
RealMatrix<typename Derived::Scalar> hyperspherical_jacobian(const Eigen::MatrixBase<Derived>& angles) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index na = angles.size();
  const Eigen::Index n = na + 1;
  RealMatrix<Scalar> jac = RealMatrix<Scalar>::Zero(n, na);
  Scalar prefix = 1;  // prod_{i<k} sin(theta_i)
  for (Eigen::Index k = 0; k < na; ++k) {
    const Scalar sk = std::sin(angles(k));
    const Scalar ck = std::cos(angles(k));
    jac(k, k) = -prefix * sk;
    Scalar run = prefix * ck;  // prod_{i<e, i!=k} sin * cos(theta_k)
    for (Eigen::Index e = k + 1; e < n; ++e) {
      jac(e, k) = (e < na) ? run * std::cos(angles(e)) : run;
      if (e < na) run *= std::sin(angles(e));
    }
    prefix *= sk;
  }
  return jac;
}

/// Inverse of hyperspherical_point for a unit vector of moduli.
template <typename Derived>
RealVector<typename Derived::Scalar> hyperspherical_angles(const Eigen::MatrixBase<Derived>& r) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = r.size();
  RealVector<Scalar> angles(n - 1);
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    const Scalar tail = r.tail(n - k - 1).norm();
    angles(k) = std::atan2(tail, r(k));
  }
  if (n >= 2 && r(n - 1) < 0) angles(n - 2) = -angles(n - 2);
  return angles;
}

/// Lower-triangular factor A of the state described by `params`.
template <typename Scalar>
ComplexMatrix<Scalar> params_to_factor(const BasicStateParams<Scalar>& params) {
  params.check();
  const int d = params.d;
  ComplexMatrix<Scalar> a = ComplexMatrix<Scalar>::Zero(d, d);
  if (d == 1) {
    a(0, 0) = 1;
    return a;
  }
  const RealVector<Scalar> r = hyperspherical_point(params.theta);
  const auto entries = lower_entries(d);
  for (int i = 0; i < d; ++i) a(i, i) = r(i);
  for (std::size_t e = static_cast<std::size_t>(d); e < entries.size(); ++e) {
    const auto [row, col] = entries[e];
    a(row, col) = std::polar(r(static_cast<Eigen::Index>(e)), params.phi(static_cast<Eigen::Index>(e) - d));
  }
  return a;
}

/// Hermitian part of A A^dagger divided by its trace.
template <typename Derived>
ComplexMatrix<typename Derived::RealScalar> gram_state(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::RealScalar;
  ComplexMatrix<Scalar> rho = a * a.adjoint();
  rho = (rho + rho.adjoint()).eval() / Scalar(2);
  const Scalar tr = rho.trace().real();
  rho /= tr;
  return rho;
}

template <typename Scalar>
BasicDensityMatrix<Scalar> params_to_state(const BasicStateParams<Scalar>& params) {
  return density_from_trusted<Scalar>(gram_state(params_to_factor(params)));
}

/// Parameters that reproduce a given lower-triangular factor with unit Frobenius
/// norm. Diagonal entries must be real.
template <typename Scalar>
BasicStateParams<Scalar> factor_to_params(const ComplexMatrix<Scalar>& a) {
  const int d = static_cast<int>(a.rows());
  const auto entries = lower_entries(d);
  RealVector<Scalar> r(static_cast<Eigen::Index>(entries.size()));
  RealVector<Scalar> phi(phi_count(d));
  for (std::size_t e = 0; e < entries.size(); ++e) {
    const auto [row, col] = entries[e];
    if (row == col) {
      r(static_cast<Eigen::Index>(e)) = a(row, col).real();
    } else {
      r(static_cast<Eigen::Index>(e)) = std::abs(a(row, col));
      phi(static_cast<Eigen::Index>(e) - d) = std::arg(a(row, col));
    }
  }
  r /= r.norm();
  return BasicStateParams<Scalar>(d, hyperspherical_angles(r), phi);
}

template <typename Scalar>
Scalar purity(const BasicDensityMatrix<Scalar>& rho) {
  // tr(rho^2) = sum |rho_jk|^2 for Hermitian rho
  return rho.matrix().squaredNorm();
}

struct BlochVector {
  double x = 0;
  double y = 0;
  double z = 0;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

inline CMatrix pauli_x() {
  CMatrix s(2, 2);
  s << 0, 1, 1, 0;
  return s;
}

inline CMatrix pauli_y() {
  CMatrix s(2, 2);
  s << 0, Complex(0, -1), Complex(0, 1), 0;
  return s;
}

inline CMatrix pauli_z() {
  CMatrix s(2, 2);
  s << 1, 0, 0, -1;
  return s;
}

inline BlochVector qubit_to_bloch(const DensityMatrix& rho) {
  if (rho.dim() != 2) throw DimensionError("Bloch vector needs a qubit state (d=2)");
  const CMatrix& m = rho.matrix();
  return {2 * m(1, 0).real(), 2 * m(1, 0).imag(), (m(0, 0) - m(1, 1)).real()};
}

/// rho = (1 + x sigma_x + y sigma_y + z sigma_z) / 2; throws if |r| > 1.
inline DensityMatrix bloch_to_state(const BlochVector& b) {
  if (b.x * b.x + b.y * b.y + b.z * b.z > 1 + 1e-12)
    throw ValidationError("Bloch vector outside the unit ball");
  CMatrix m = (CMatrix::Identity(2, 2) + b.x * pauli_x() + b.y * pauli_y() + b.z * pauli_z()) / 2.0;
  return density_from_trusted(std::move(m));
}

/// Partial derivatives d rho / d x_j, in flat parameter order (angles, then phases).
template <typename Scalar>
std::vector<ComplexMatrix<Scalar>> state_gradient(const BasicStateParams<Scalar>& params) {
  params.check();
  const int d = params.d;
  const int nt = theta_count(d);
  std::vector<ComplexMatrix<Scalar>> out;
  out.reserve(static_cast<std::size_t>(param_count(d)));
  if (d == 1) return out;

  const ComplexMatrix<Scalar> a = params_to_factor(params);
  const RealMatrix<Scalar> dr = hyperspherical_jacobian(params.theta);
  const auto entries = lower_entries(d);
  auto unit_phase = [&](std::size_t e) -> std::complex<Scalar> {
    if (static_cast<int>(e) < d) return 1;
    return std::polar(Scalar(1), params.phi(static_cast<Eigen::Index>(e) - d));
  };

  for (int k = 0; k < nt; ++k) {
    ComplexMatrix<Scalar> da = ComplexMatrix<Scalar>::Zero(d, d);
    for (std::size_t e = static_cast<std::size_t>(k); e < entries.size(); ++e) {
      const Scalar v = dr(static_cast<Eigen::Index>(e), k);
      if (v == Scalar(0)) continue;
      const auto [row, col] = entries[e];
      da(row, col) = v * unit_phase(e);
    }
    const ComplexMatrix<Scalar> m = da * a.adjoint();
    out.push_back(m + m.adjoint());
  }
  for (std::size_t e = static_cast<std::size_t>(d); e < entries.size(); ++e) {
    const auto [row, col] = entries[e];
    // d rho = dA A^dagger + h.c. with dA = i A_e at (row, col): a rank-one update.
    ComplexMatrix<Scalar> m = ComplexMatrix<Scalar>::Zero(d, d);
    const std::complex<Scalar> da = std::complex<Scalar>(0, 1) * a(row, col);
    m.row(row) = da * a.col(col).adjoint();
    out.push_back(m + m.adjoint());
  }
  return out;
}

/// Log of the state-space volume density of the parametrization, up to an
/// additive constant: the Hilbert-Schmidt (primitive) measure on trace-one states
/// pulled back to (theta, phi). Combines the complex Cholesky Jacobian
/// prod_i |A_ii|^{2(d-i)-1} (i 1-based), the polar factors |A_e| of the
/// strictly-lower entries and the sphere element prod_k |sin theta_k|^{n-2-k}.
/// Returns -inf on the parametrization's singular set.
template <typename Scalar>
Scalar log_state_volume(const BasicStateParams<Scalar>& params) {
  params.check();
  const int d = params.d;
  if (d == 1) return 0;
  const RealVector<Scalar> r = hyperspherical_point(params.theta);
  const Eigen::Index n = r.size();
  Scalar acc = 0;
  for (int i = 0; i < d; ++i) acc += Scalar(2 * (d - 1 - i) + 1) * std::log(std::abs(r(i)));
  for (Eigen::Index e = d; e < n; ++e) acc += std::log(std::abs(r(e)));
  for (Eigen::Index k = 0; k + 2 < n; ++k)
    acc += Scalar(n - 2 - k) * std::log(std::abs(std::sin(params.theta(k))));
  if (std::isnan(acc)) return -INFINITY;
  return acc;
}

/// Gradient of log_state_volume in flat parameter order. Phases do not enter.
template <typename Scalar>
RealVector<Scalar> grad_log_state_volume(const BasicStateParams<Scalar>& params) {
  params.check();
  const int d = params.d;
  RealVector<Scalar> g = RealVector<Scalar>::Zero(param_count(d));
  if (d == 1) return g;
  const RealVector<Scalar> r = hyperspherical_point(params.theta);
  const RealMatrix<Scalar> dr = hyperspherical_jacobian(params.theta);
  const Eigen::Index n = r.size();
  RealVector<Scalar> weight(n);
  for (int i = 0; i < d; ++i) weight(i) = Scalar(2 * (d - 1 - i) + 1) / r(i);
  for (Eigen::Index e = d; e < n; ++e) weight(e) = Scalar(1) / r(e);
  g.head(n - 1) = dr.transpose() * weight;
  for (Eigen::Index k = 0; k + 2 < n; ++k)
    g(k) += Scalar(n - 2 - k) * std::cos(params.theta(k)) / std::sin(params.theta(k));
  return g;
}

/// Orthonormal (Hilbert-Schmidt) basis of the traceless Hermitian d x d matrices:
/// symmetric and antisymmetric off-diagonal generators, then the d-1 diagonal
/// generalized Gell-Mann matrices.
inline std::vector<CMatrix> traceless_hermitian_basis(int d) {
  std::vector<CMatrix> basis;
  basis.reserve(static_cast<std::size_t>(param_count(d)));
  const double s = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      CMatrix sym = CMatrix::Zero(d, d);
      sym(j, k) = sym(k, j) = s;
      CMatrix anti = CMatrix::Zero(d, d);
      anti(j, k) = Complex(0, -s);
      anti(k, j) = Complex(0, s);
      basis.push_back(std::move(sym));
      basis.push_back(std::move(anti));
    }
  }
  for (int l = 1; l < d; ++l) {
    CMatrix diag = CMatrix::Zero(d, d);
    const double c = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
    for (int j = 0; j < l; ++j) diag(j, j) = c;
    diag(l, l) = -l * c;
    basis.push_back(std::move(diag));
  }
  return basis;
}

}  // namespace qsample
