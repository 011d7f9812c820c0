#pragma once

// Jet-coordinate calculus on J^k(pi), pi : R^{n+r} -> R^n.
//
// Variables are interned as integers:
//   x^i            -> i                                  (0 <= i < n)
//   p^j_sigma      -> n + r*N(<|sigma|) + j*C(n+|sigma|-1, |sigma|) + rank(sigma)
// where N(<d) counts multi-indices of degree < d and rank is the graded-lex
// rank used by sym_basis. So the coordinates of J^k are exactly the ids
// below JetSpace::dim(k), ordered x's, then p's by (order, j, sigma).
// u^j is p^j with the empty multi-index.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spencer/exactla.hpp"

namespace spencer::jet {

using VarId = std::uint32_t;

class JetSpace {
 public:
  JetSpace(int n, int r);

  int n() const { return n_; }
  int r() const { return r_; }

  VarId x(int i) const;
  VarId p(int j, const MultiIndex& sigma) const;
  VarId u(int j) const { return p(j, MultiIndex(n_, 0)); }

  bool is_x(VarId v) const { return v < static_cast<VarId>(n_); }
  /// Jet order of a variable (0 for x and u).
  int order(VarId v) const;
  /// For p-variables: fiber index j and multi-index sigma.
  std::pair<int, MultiIndex> decode(VarId v) const;
  /// p^j_{sigma + 1_i}.
  VarId raise(VarId v, int i) const;
  /// Number of coordinates on J^k.
  std::size_t dim(int k) const;
  std::string name(VarId v) const;

  friend bool operator==(const JetSpace&, const JetSpace&) = default;

 private:
  int n_;
  int r_;
};

using Monomial = std::vector<std::pair<VarId, std::uint32_t>>;

class JetPolynomial;

struct JetPoint {
  JetSpace space{1, 1};
  int order = 0;
  std::map<VarId, Rational> values;

  const Rational& at(VarId v) const;
  /// Seeded LCG point; numerators in [-9, 9], denominators in [1, 9].
  static JetPoint random(const JetSpace& space, int order, std::uint64_t seed);
};

class JetPolynomial {
 public:
  explicit JetPolynomial(JetSpace space) : space_(space) {}
  static JetPolynomial constant(JetSpace space, const Rational& c);
  static JetPolynomial variable(JetSpace space, VarId v);
  static JetPolynomial monomial(JetSpace space, Monomial m, const Rational& c = 1);

  const JetSpace& space() const { return space_; }
  const std::map<Monomial, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Highest jet order among the variables present (-1 for constants).
  int max_order() const;
  int degree() const;
  std::vector<VarId> variables() const;

  JetPolynomial derivative(VarId v) const;
  Rational evaluate(const JetPoint& pt) const;

  JetPolynomial& operator+=(const JetPolynomial& o);
  JetPolynomial& operator-=(const JetPolynomial& o);
  JetPolynomial& operator*=(const Rational& c);
  friend JetPolynomial operator+(JetPolynomial a, const JetPolynomial& b) { return a += b; }
  friend JetPolynomial operator-(JetPolynomial a, const JetPolynomial& b) { return a -= b; }
  friend JetPolynomial operator*(const JetPolynomial& a, const JetPolynomial& b);
  friend JetPolynomial operator*(JetPolynomial a, const Rational& c) { return a *= c; }
  friend bool operator==(const JetPolynomial& a, const JetPolynomial& b) {
    return a.space_ == b.space_ && a.terms_ == b.terms_;
  }

  void add_term(const Monomial& m, const Rational& c);

 private:
  JetSpace space_;
  std::map<Monomial, Rational> terms_;
};

/// Polynomial grammar:
///   poly   := ['-'] term (('+'|'-') term)*
///   term   := factor ('*' factor)*
///   factor := rational | var ['^' int]
///   var    := 'x'<i> | 'u'<j> | 'p[' j ',' ('0' | '(' s_1,...,s_n ')') ']'
/// Indices i, j are 1-based; p[j,0] is u<j>.
JetPolynomial parse_polynomial(const JetSpace& space, const std::string& text);
VarId parse_variable(const JetSpace& space, const std::string& text);
std::string to_string(const JetPolynomial& f);

/// D_i = d/dx^i + sum p^j_{sigma+1_i} d/dp^j_sigma (i is 0-based).
JetPolynomial total_derivative(const JetPolynomial& f, int i);
std::vector<JetPolynomial> horizontal_diff(const JetPolynomial& f);
JetPolynomial total_derivative(const JetPolynomial& f, const MultiIndex& sigma);

/// Vector field on J^k with one coefficient per coordinate id < dim(k).
struct LieField {
  JetSpace space{1, 1};
  int k = 0;
  std::vector<JetPolynomial> coefficients;

  /// Restriction to the coordinates of J^{k-1}.
  LieField drop_top() const;
  /// X(f) = sum_v X^v d_v f.
  JetPolynomial apply(const JetPolynomial& f) const;
  friend bool operator==(const LieField& a, const LieField& b) {
    return a.k == b.k && a.space == b.space && a.coefficients == b.coefficients;
  }
};

LieField bracket(const LieField& a, const LieField& b);

/// Prolongation of X = a^i d_{x^i} + b^j d_{u^j} to J^k. r = 1 needs allow_r1.
LieField prolong_point(const JetSpace& space, const std::vector<JetPolynomial>& a,
                       const std::vector<JetPolynomial>& b, int k, bool allow_r1 = false);

/// Prolongation of the contact field with generating function phi (r = 1).
LieField prolong_contact(const JetSpace& space, const JetPolynomial& phi, int k);

bool cartan_preservation_check(const LieField& field, int trials, std::uint64_t seed);

class TresseFrame {
 public:
  /// Throws SingularJacobian when det D_a(f_i) vanishes at the point.
  TresseFrame(std::vector<JetPolynomial> invariants, JetPoint point);

  const std::vector<JetPolynomial>& invariants() const { return fs_; }
  const JetPoint& point() const { return point_; }
  /// jacobian()[a][i] = D_a(f_i) at the point.
  const std::vector<std::vector<Rational>>& jacobian() const { return jac_; }

 private:
  std::vector<JetPolynomial> fs_;
  JetPoint point_;
  std::vector<std::vector<Rational>> jac_;
};

/// Values of the Tresse derivatives d^f/d^f_i at the frame's point.
std::vector<Rational> tresse(const JetPolynomial& f, const TresseFrame& frame);

/// n = 1 only: d^f/d^f_1 = D(f) / D(f_1) as numerator and denominator.
std::pair<JetPolynomial, JetPolynomial> tresse_symbolic(const JetPolynomial& f, const JetPolynomial& f1);

enum class LiftKind { Point, Contact };

/// Degree-l parts of the fields vanishing to order l at the origin of J^k,
/// as a subspace of S^l T*(J^k) (x) T(J^k).
Subspace filtered_symbol(const JetSpace& space, int k, int l, const std::vector<LieField>& fields);
std::size_t filtered_symbol_dim(const JetSpace& space, int k, int l, const std::vector<LieField>& fields);

/// Prolonged fields from all monomial generating data of degree <= cutoff.
std::vector<LieField> generating_fields(LiftKind kind, const JetSpace& space, int k, int cutoff,
                                        bool allow_r1 = false);

struct OracleResult {
  std::size_t dim = 0;
  int cutoff = 0;
};

/// Brute-force symbol dimension; the cutoff is raised until the rank is stable.
OracleResult symbol_oracle(LiftKind kind, int n, int r, int k, int l, bool allow_r1 = false);

}  // namespace spencer::jet
