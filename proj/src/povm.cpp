#include "qsample/povm.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace qsample {

namespace {

CMatrix identity2() { return CMatrix::Identity(2, 2); }

/// (1 + a . sigma) * scale
CMatrix qubit_operator(double scale, double ax, double ay, double az) {
  return scale * (identity2() + ax * pauli_x() + ay * pauli_y() + az * pauli_z());
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

void add_if(std::vector<Violation>& out, bool violated, std::string label, double magnitude) {
  if (violated) out.push_back({std::move(label), magnitude});
}

void check_eta(std::vector<Violation>& out, double value, const std::string& label) {
  add_if(out, value < -kAuditTol, label, -value);
}

void check_delta(std::vector<Violation>& out, double value, const std::string& label) {
  add_if(out, std::abs(value) > kAuditTol, label, std::abs(value));
}

void check_positive(std::vector<Violation>& out, const ProbVector& p) {
  for (Eigen::Index k = 0; k < p.size(); ++k)
    check_eta(out, p(k), "eta(p" + std::to_string(k + 1) + ")");
}

void check_unit_sum(std::vector<Violation>& out, const ProbVector& p) {
  check_delta(out, p.sum() - 1.0, "delta(sum p - 1)");
}

}  // namespace

Povm::Povm(std::string name, std::vector<CMatrix> outcomes, ConstraintRule rule)
    : name_(std::move(name)), outcomes_(std::move(outcomes)), rule_(rule) {
  if (outcomes_.empty()) throw DimensionError("POVM " + name_ + " has no outcomes");
  d_ = static_cast<int>(outcomes_.front().rows());
  const int k_count = static_cast<int>(outcomes_.size());
  CMatrix total = CMatrix::Zero(d_, d_);
  for (const CMatrix& pi : outcomes_) {
    if (pi.rows() != d_ || pi.cols() != d_)
      throw DimensionError("POVM " + name_ + " mixes outcome dimensions");
    if ((pi - pi.adjoint()).cwiseAbs().maxCoeff() > kPovmTol)
      throw ValidationError("POVM " + name_ + " has a non-Hermitian outcome");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(pi, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kPovmTol)
      throw ValidationError("POVM " + name_ + " has a non-positive outcome");
    total += pi;
  }
  if ((total - CMatrix::Identity(d_, d_)).cwiseAbs().maxCoeff() > kPovmTol)
    throw ValidationError("POVM " + name_ + " outcomes do not sum to the identity");

  flat_.resize(static_cast<Eigen::Index>(d_) * d_, k_count);
  for (int k = 0; k < k_count; ++k)
    flat_.col(k) = Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, 1>>(
        outcomes_[static_cast<std::size_t>(k)].data(), static_cast<Eigen::Index>(d_) * d_);

  center_ = apply(CMatrix::Identity(d_, d_) / static_cast<double>(d_));

  const std::vector<CMatrix> basis = traceless_hermitian_basis(d_);
  Matrix born(k_count, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t j = 0; j < basis.size(); ++j) born.col(static_cast<Eigen::Index>(j)) = apply(basis[j]);
  if (basis.empty()) {
    hull_basis_ = Matrix::Zero(k_count, 0);
    singular_values_ = Vector::Zero(0);
  } else {
    Eigen::JacobiSVD<Matrix> svd(born, Eigen::ComputeThinU);
    const Vector& sv = svd.singularValues();
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv(rank) > 1e-10 * sv(0)) ++rank;
    hull_basis_ = svd.matrixU().leftCols(rank);
    singular_values_ = sv.head(rank);
  }
  completeness_ = (indep_dim() == param_count(d_)) ? Completeness::IC : Completeness::NIC;
}

Vector Povm::apply(const CMatrix& m) const {
  if (m.rows() != d_ || m.cols() != d_)
    throw DimensionError("operator dimension does not match POVM " + name_);
  const Eigen::Map<const Eigen::Matrix<Complex, Eigen::Dynamic, 1>> v(m.data(), m.size());
  // tr(Pi m) = <Pi, m>_HS because Pi is Hermitian
  return (flat_.adjoint() * v).real();
}

CMatrix Povm::combine(const Vector& coeffs) const {
  CMatrix out = CMatrix::Zero(d_, d_);
  for (std::size_t k = 0; k < outcomes_.size(); ++k) out += coeffs(static_cast<Eigen::Index>(k)) * outcomes_[k];
  return out;
}

Vector Povm::coordinates(const ProbVector& p) const {
  return hull_basis_.transpose() * (p - center_);
}

double Povm::completeness_residual() const {
  CMatrix total = CMatrix::Zero(d_, d_);
  for (const CMatrix& pi : outcomes_) total += pi;
  return (total - CMatrix::Identity(d_, d_)).cwiseAbs().maxCoeff();
}

ProbVector born_probabilities(const Povm& povm, const DensityMatrix& rho) {
  if (rho.dim() != povm.dim())
    throw DimensionError("state dimension " + std::to_string(rho.dim()) + " does not match POVM " +
                         povm.name() + " (d=" + std::to_string(povm.dim()) + ")");
  return povm.apply(rho.matrix());
}

Povm make_tetrahedron() {
  const double c = 1.0 / std::sqrt(3.0);
  std::vector<CMatrix> out{
      qubit_operator(0.25, c, -c, -c),
      qubit_operator(0.25, -c, c, -c),
      qubit_operator(0.25, -c, -c, c),
      qubit_operator(0.25, c, c, c),
  };
  return Povm("tetrahedron", std::move(out), ConstraintRule::tetrahedron);
}

Povm make_pauli() {
  const double s = 1.0 / 6.0;
  std::vector<CMatrix> out{
      qubit_operator(s, 1, 0, 0),  qubit_operator(s, 0, 1, 0),  qubit_operator(s, 0, 0, 1),
      qubit_operator(s, -1, 0, 0), qubit_operator(s, 0, -1, 0), qubit_operator(s, 0, 0, -1),
  };
  return Povm("pauli", std::move(out), ConstraintRule::pauli);
}

Povm make_trine() {
  const double h = std::sqrt(3.0) / 2.0;
  const double s = 1.0 / 3.0;
  std::vector<CMatrix> out{
      qubit_operator(s, 0, 0, 1),
      qubit_operator(s, h, 0, -0.5),
      qubit_operator(s, -h, 0, -0.5),
  };
  return Povm("trine", std::move(out), ConstraintRule::trine);
}

Povm make_anti_trine() {
  const double h = std::sqrt(3.0) / 2.0;
  const double s = 1.0 / 3.0;
  std::vector<CMatrix> out{
      qubit_operator(s, 0, 0, -1),
      qubit_operator(s, -h, 0, 0.5),
      qubit_operator(s, h, 0, 0.5),
  };
  return Povm("anti-trine", std::move(out), ConstraintRule::trine);
}

Povm make_crosshair() {
  const double s = 0.25;
  std::vector<CMatrix> out{
      qubit_operator(s, 0, 0, 1),
      qubit_operator(s, 1, 0, 0),
      qubit_operator(s, 0, 0, -1),
      qubit_operator(s, -1, 0, 0),
  };
  return Povm("crosshair", std::move(out), ConstraintRule::crosshair);
}

Povm make_qutrit_sic() {
  const Complex w = std::polar(1.0, 2.0 * M_PI / 3.0);
  const Complex wc = std::conj(w);
  Eigen::Matrix<Complex, 3, 9> cols;
  cols << 1, 1, 1, 0, 0, 0, w, wc, 1,
          w, wc, 1, 1, 1, 1, 0, 0, 0,
          0, 0, 0, w, wc, 1, 1, 1, 1;
  std::vector<CMatrix> out;
  out.reserve(9);
  for (int k = 0; k < 9; ++k) {
    const Eigen::Matrix<Complex, 3, 1> c = cols.col(k);
    out.push_back(c * c.adjoint() / 6.0);
  }
  return Povm("qutrit-sic", std::move(out), ConstraintRule::affine_hull);
}

Povm tensor_povm(const Povm& a, const Povm& b, std::string name) {
  std::vector<CMatrix> out;
  out.reserve(static_cast<std::size_t>(a.outcome_count() * b.outcome_count()));
  for (const CMatrix& pa : a.outcomes())
    for (const CMatrix& pb : b.outcomes()) out.push_back(kron(pa, pb));
  if (name.empty()) name = a.name() + "*" + b.name();
  return Povm(std::move(name), std::move(out), ConstraintRule::affine_hull);
}

const std::vector<std::string>& povm_names() {
  static const std::vector<std::string> names{"tetrahedron", "pauli",      "trine",
                                              "anti-trine",  "crosshair",  "qutrit-sic",
                                              "2tthd",       "tat",        "bb84"};
  return names;
}

Povm make_povm(const std::string& name) {
  if (name == "tetrahedron") return make_tetrahedron();
  if (name == "pauli") return make_pauli();
  if (name == "trine") return make_trine();
  if (name == "anti-trine") return make_anti_trine();
  if (name == "crosshair") return make_crosshair();
  if (name == "qutrit-sic") return make_qutrit_sic();
  if (name == "2tthd") return tensor_povm(make_tetrahedron(), make_tetrahedron(), "2tthd");
  if (name == "tat") return tensor_povm(make_trine(), make_anti_trine(), "tat");
  if (name == "bb84") return tensor_povm(make_crosshair(), make_crosshair(), "bb84");
  throw std::invalid_argument("unknown POVM '" + name + "'");
}

ConstraintReport audit_probabilities(const Povm& povm, const ProbVector& p) {
  if (p.size() != povm.outcome_count())
    throw DimensionError("probability vector has " + std::to_string(p.size()) + " entries, POVM " +
                         povm.name() + " has " + std::to_string(povm.outcome_count()) + " outcomes");
  std::vector<Violation> v;
  if (!p.allFinite()) {
    v.push_back({"finite(p)", INFINITY});
    return {false, std::move(v)};
  }
  check_positive(v, p);
  switch (povm.rule()) {
    case ConstraintRule::tetrahedron:
      check_unit_sum(v, p);
      check_eta(v, 1.0 / 3.0 - p.squaredNorm(), "eta(1/3 - sum p^2)");
      break;
    case ConstraintRule::pauli: {
      double dev = 0;
      for (int k = 0; k < 3; ++k) {
        check_delta(v, p(k) + p(k + 3) - 1.0 / 3.0,
                    "delta(p" + std::to_string(k + 1) + " + p" + std::to_string(k + 4) + " - 1/3)");
        dev += (p(k) - p(k + 3)) * (p(k) - p(k + 3));
      }
      check_eta(v, 1.0 / 9.0 - dev, "eta(1/9 - sum (p_l - p_{l+3})^2)");
      break;
    }
    case ConstraintRule::trine:
      check_unit_sum(v, p);
      check_eta(v, 0.5 - p.squaredNorm(), "eta(1/2 - sum p^2)");
      break;
    case ConstraintRule::crosshair: {
      for (int k = 0; k < 2; ++k)
        check_delta(v, p(k) + p(k + 2) - 0.5,
                    "delta(p" + std::to_string(k + 1) + " + p" + std::to_string(k + 3) + " - 1/2)");
      const double a = p(0) - p(2);
      const double b = p(1) - p(3);
      check_eta(v, 0.25 - a * a - b * b, "eta(1/4 - (p1 - p3)^2 - (p2 - p4)^2)");
      break;
    }
    case ConstraintRule::affine_hull: {
      check_unit_sum(v, p);
      const Vector offset = p - povm.center();
      const Matrix& u = povm.hull_basis();
      const double dist = (offset - u * (u.transpose() * offset)).norm();
      add_if(v, dist > kAuditTol, "affine hull distance", dist);
      break;
    }
  }
  const bool ok = v.empty();
  return {ok, std::move(v)};
}

}  // namespace qsample
