#pragma once

// Symbols of the standard pseudogroups, in Darboux / flat model coordinates:
//   symplectic: omega = sum dx_i ^ dx_{n+i} on R^{2n}
//   contact:    alpha = du - sum p_i dq^i on R^{2n+1}, coordinates (q, u, p)
//   complex:    (x_1..x_n, y_1..y_n) with J e_{x_i} = e_{y_i}
//   isometry:   the Euclidean metric on R^n

#include <cstddef>
#include <map>
#include <string>

#include "spencer/exactla.hpp"
#include "spencer/symbolic.hpp"

namespace spencer::catalog {

enum class GroupKind { General, Volume, Complex, Symplectic, Contact, Isometry, PointLie, ContactLie };

struct PseudogroupSpec {
  GroupKind kind = GroupKind::General;
  std::map<std::string, int> params;

  /// "kind:key=val,...", e.g. "symplectic:2n=4", "point_lie:n=1,r=2,k=1".
  static PseudogroupSpec parse(const std::string& text);
  std::string to_string() const;
  void validate() const;

  int param(const std::string& key) const;
  /// dim M for the materializable kinds, dim J^k for the jet-space kinds.
  int ambient_dim() const;
  bool materializable() const { return kind != GroupKind::PointLie && kind != GroupKind::ContactLie; }
};

std::string kind_name(GroupKind kind);

/// Materialization cap on ambient dimensions; SPENCER_CAP overrides 5000.
std::size_t default_cap();

/// g^l inside S^l V* (x) V. Throws UnsupportedDegree above the cap.
Subspace symbol(const PseudogroupSpec& spec, int l, std::size_t cap = default_cap());
/// Grades 1..l_max materialized, grade 0 full, higher grades by prolongation.
SymbolicSystem system(const PseudogroupSpec& spec, int l_max, std::size_t cap = default_cap());

/// Exact dimension of g^l for every kind, from closed formulas.
std::size_t symbol_dim(const PseudogroupSpec& spec, int l);
/// The dimension as usually quoted; differs from
/// symbol_dim only for the volume pseudogroup at l >= 2.
std::size_t claimed_symbol_dim(const PseudogroupSpec& spec, int l);

struct PointLieDim {
  std::size_t horizontal = 0;
  std::size_t vertical = 0;
  std::size_t total() const { return horizontal + vertical; }
};

PointLieDim point_lie_dim(int n, int r, int k, int l, bool allow_r1 = false);
std::size_t contact_lie_dim(int n, int k, int l);

/// The degree-l parts of prolonged point fields at the origin of J^k.
Subspace point_lie_embed(int n, int r, int k, int l, std::size_t cap = default_cap(), bool allow_r1 = false);

}  // namespace spencer::catalog
