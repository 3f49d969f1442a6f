#pragma once

#include <string>
#include <vector>

#include "qsample/quantum_core.hpp"
#include "qsample/types.hpp"

namespace qsample {

enum class Completeness { IC, NIC };

/// Which explicit constraint factor the audit evaluates.
enum class ConstraintRule { tetrahedron, pauli, trine, crosshair, affine_hull };

inline constexpr double kPovmTol = 1e-12;
inline constexpr double kAuditTol = 1e-10;

/// A measurement: K Hermitian PSD outcome operators summing to the identity.
/// Construction verifies completeness and positivity and factorizes the Born map
/// over a traceless Hermitian basis to find the independent probability
/// coordinates.
class Povm {
 public:
  Povm(std::string name, std::vector<CMatrix> outcomes, ConstraintRule rule);

  const std::string& name() const { return name_; }
  int dim() const { return d_; }
  int outcome_count() const { return static_cast<int>(outcomes_.size()); }
  const std::vector<CMatrix>& outcomes() const { return outcomes_; }
  const CMatrix& outcome(int k) const { return outcomes_[static_cast<std::size_t>(k)]; }
  Completeness completeness() const { return completeness_; }
  bool is_ic() const { return completeness_ == Completeness::IC; }
  /// Number of independent probability coordinates (rank of the Born map on
  /// traceless operators).
  int indep_dim() const { return static_cast<int>(hull_basis_.cols()); }
  ConstraintRule rule() const { return rule_; }

  /// Born probabilities of I/d; a point of the permissible region's affine hull.
  const Vector& center() const { return center_; }
  /// K x m orthonormal basis of the directions spanned by the Born image.
  const Matrix& hull_basis() const { return hull_basis_; }
  /// Nonzero singular values of the Born map over the traceless basis.
  const Vector& born_singular_values() const { return singular_values_; }

  /// Re tr(Pi_k M) for every outcome; linear in M (no trace or PSD assumption).
  Vector apply(const CMatrix& m) const;
  /// sum_k c_k Pi_k.
  CMatrix combine(const Vector& coeffs) const;
  /// Independent coordinates U^T (p - center).
  Vector coordinates(const ProbVector& p) const;
  /// Max entrywise deviation of sum_k Pi_k from the identity.
  double completeness_residual() const;

 private:
  std::string name_;
  int d_;
  std::vector<CMatrix> outcomes_;
  ConstraintRule rule_;
  Completeness completeness_;
  Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic> flat_;  // d^2 x K, vec(Pi_k)
  Vector center_;
  Matrix hull_basis_;
  Vector singular_values_;
};

ProbVector born_probabilities(const Povm& povm, const DensityMatrix& rho);

Povm make_tetrahedron();
Povm make_pauli();
Povm make_trine();
Povm make_anti_trine();
Povm make_crosshair();
Povm make_qutrit_sic();
/// Outcomes Pi_j (x) Pi_k, j outer and k inner.
Povm tensor_povm(const Povm& a, const Povm& b, std::string name = {});

/// Catalog names: tetrahedron, pauli, trine, anti-trine, crosshair, qutrit-sic,
/// 2tthd, tat, bb84.
const std::vector<std::string>& povm_names();
/// Throws std::invalid_argument for unknown names.
Povm make_povm(const std::string& name);

struct Violation {
  std::string label;
  double magnitude;
};

struct ConstraintReport {
  bool satisfied = true;
  std::vector<Violation> violations;
};

/// Evaluates the constraint factor w_cstr at p. Eta terms must hold to within
/// kAuditTol; delta terms are checked as |.| <= kAuditTol. Rules without an
/// explicit factor check positivity, unit sum and distance to the affine hull
/// of the Born image.
ConstraintReport audit_probabilities(const Povm& povm, const ProbVector& p);

}  // namespace qsample
