#pragma once

// Submanifold jets under a pseudogroup: for tau = T_aN inside V = T_aM and
// nu = V / tau, the map
//   lambda : S^l V* (x) V -> S^l tau* (x) nu
// restricts symmetric arguments to tau and projects values to nu. Its kernel
// is Sigma, the stationary part of g^l is g^l cap Sigma, and the covariants
// are O^l = h^l / lambda(g^l) for an equation symbol h.
//
// The equation symbol h is a SymbolicSystem over tau (base_dim = dim tau,
// value_dim = codim), full by default.

#include <optional>
#include <string>
#include <vector>

#include "spencer/catalog.hpp"
#include "spencer/exactla.hpp"
#include "spencer/symbolic.hpp"

namespace spencer::cov {

class FlagContext {
 public:
  /// Throws InvalidFlag unless tau has independent rows and codimension >= 1.
  FlagContext(int m, VectorList tau_basis);

  int m() const { return m_; }
  int n() const { return n_; }
  int r() const { return m_ - n_; }
  const VectorList& tau_basis() const { return tau_; }
  /// Coordinates of V whose images form the basis of nu.
  const std::vector<int>& nu_columns() const { return nu_cols_; }
  /// Coordinates in nu of the class of v.
  std::vector<Rational> project(const SparseVec& v) const;
  /// Ann(tau) as rows of coefficients on the dual basis of V.
  VectorList annihilator() const;

 private:
  int m_, n_;
  VectorList tau_;
  Subspace span_;
  std::vector<int> nu_cols_;
};

/// Named strata in the fixed model coordinates of catalog.hpp:
///   coordinate, omega-nondegenerate, lagrangian, totally-real, j-line,
///   transversal-to-contact-plane, inside-contact-plane.
/// dim_tau < 0 picks the natural dimension of the stratum.
FlagContext named_flag(const catalog::PseudogroupSpec& spec, const std::string& stratum, int dim_tau = -1);

/// Codomain shape S^l tau* (x) nu.
TensorShape lambda_codomain(const FlagContext& ctx, int l);
LinearMap lambda_map(const FlagContext& ctx, int l);
/// Ann(tau) o S^{l-1} V* (x) V + S^l V* (x) tau.
Subspace sigma(const FlagContext& ctx, int l);
/// g^l cap ker(lambda).
Subspace stationary(const FlagContext& ctx, const Subspace& gl);

struct CovariantReport {
  int l = 0;
  std::size_t dim_g = 0;
  std::size_t dim_h = 0;
  std::size_t dim_stationary = 0;
  std::size_t dim_lambda_image = 0;
  std::size_t dim_O = 0;
  bool transversal = false;
  bool dim_necessary_ok = false;
  std::string caveat;
};

/// Throws EquationNotInvariant when lambda(g_l) is not inside h_l.
CovariantReport covariants(const FlagContext& ctx, const Subspace& gl, const Subspace& hl);

bool dim_necessary(const Subspace& gl, const Subspace& hl);

struct DimTrans {
  std::size_t lhs = 0;
  std::size_t rhs = 0;
  bool holds() const { return lhs >= rhs; }
};
/// dim g^l against dim S^l tau* (x) nu for codimension r.
DimTrans dim_trans(const catalog::PseudogroupSpec& spec, int r, int l);

/// The row-1 space g^{l-s} (x) (Ann tau ^ L^{s-1}) + h^{l-s} (x) L^s.
Subspace h_row_space(const FlagContext& ctx, const SymbolicSystem& g, int l, int s);
/// H^{l-s,s}(h, g): cohomology of row 1 at h^{l-s,s}.
std::size_t h_g_cohomology(const FlagContext& ctx, const SymbolicSystem& g, int l, int s);
/// H^{i,j}(h): cohomology of h^i (x) L^j tau* under delta' (the complex on tau).
std::size_t h_tau_cohomology(const FlagContext& ctx, const SymbolicSystem& g, int i, int j);
/// H^{l-s,s}(O): cohomology of the covariant row.
std::size_t O_cohomology(const FlagContext& ctx, const SymbolicSystem& g, const SymbolicSystem& h, int l, int s);

SymbolicSystem full_equation(const FlagContext& ctx);

struct TauComparison {
  bool applicable = false;
  bool strongly_noncharacteristic = false;
  int order = 0;
  int window = 0;
  int c = 0;
  std::size_t lhs = 0;
  std::size_t rhs = 0;
};

/// Compares H^{l,s}(h, g) with H^{l,s}(h over tau). window_top bounds the
/// degrees used to measure the acyclicity window of g.
TauComparison compare_over_tau(const FlagContext& ctx, const SymbolicSystem& g, int l, int s, int window_top);

struct RowComparison {
  bool hypotheses = false;
  std::size_t lhs = 0;  // H^{l-s,s}(O)
  std::size_t rhs = 0;  // H^{l-s-2,s+2}(h, g)
};
RowComparison compare_covariant_rows(const FlagContext& ctx, const SymbolicSystem& g, const SymbolicSystem& h, int l, int s);

struct ScanResult {
  std::vector<CovariantReport> reports;
  /// Per degree: H^{l,2}(h over tau) == 0 and H^{l,1}(g, delta') == 0.
  std::vector<std::pair<bool, bool>> vanishing_flags;
  std::optional<int> l0;
  bool consequence_holds = true;
};

ScanResult transversality_scan(const FlagContext& ctx, const SymbolicSystem& g, const SymbolicSystem& h, int l_max);

}  // namespace spencer::cov
