#pragma once

// Exact rational linear algebra over the graded tensor spaces
// S^d A* (x) L^e B* (x) W.
//
// Basis order (frozen, used by every golden file and external format):
//   * S^d over n variables: multi-indices of degree d in lexicographically
//     descending order, e.g. n=2, d=3: (3,0), (2,1), (1,2), (0,3).
//   * L^e over k variables: strictly increasing index tuples, ascending lex.
//   * W: 0 .. dim W - 1.
//   A tensor basis element (alpha, I, w) has flat index
//     (rank(alpha) * C(k, e) + rank(I)) * dim W + w.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "spencer/error.hpp"

namespace spencer {

using Rational = mpq_class;
using Integer = mpz_class;

using MultiIndex = std::vector<int>;
using WedgeIndex = std::vector<int>;

std::size_t binomial(long n, long k);

std::vector<MultiIndex> sym_basis(int n, int d);
std::size_t sym_dim(int n, int d);
std::size_t sym_rank(const MultiIndex& alpha);

std::vector<WedgeIndex> wedge_basis(int k, int e);
std::size_t wedge_dim(int k, int e);
std::size_t wedge_rank(const WedgeIndex& tuple, int k);

/// Shape of S^{sym_degree} (R^base_dim)* (x) L^{ext_degree} (R^wedge_base)* (x) R^value_dim.
/// wedge_base defaults to base_dim; it differs only for the tau-restricted complexes.
struct TensorShape {
  int base_dim = 1;
  int sym_degree = 0;
  int ext_degree = 0;
  int value_dim = 1;
  int wedge_base = -1;

  TensorShape() = default;
  TensorShape(int n, int d, int e, int w, int wedge = -1);

  /// A plain coordinate space R^dim.
  static TensorShape plain(int dim) { return TensorShape(1, 0, 0, dim); }

  int wedge_vars() const { return wedge_base; }
  std::size_t sym_count() const { return sym_dim(base_dim, sym_degree); }
  std::size_t wedge_count() const { return wedge_dim(wedge_base, ext_degree); }
  std::size_t dim() const { return sym_count() * wedge_count() * static_cast<std::size_t>(value_dim); }
  std::size_t index(std::size_t sym, std::size_t wedge, int value) const {
    return (sym * wedge_count() + wedge) * value_dim + value;
  }

  friend bool operator==(const TensorShape&, const TensorShape&) = default;
};

using SparseVec = std::vector<std::pair<std::uint32_t, Rational>>;

/// Sums a list of (index, value) contributions into a sorted sparse vector
/// without zeros.
SparseVec combine(std::vector<std::pair<std::uint32_t, Rational>> terms);
SparseVec axpy(const SparseVec& y, const Rational& a, const SparseVec& x);
SparseVec scaled(const SparseVec& x, const Rational& a);
Rational dot(const SparseVec& a, const SparseVec& b);
SparseVec from_dense(std::span<const Rational> v);
std::vector<Rational> to_dense(const SparseVec& v, std::size_t n);

struct Echelon {
  std::vector<SparseVec> rows;        // reduced rows, pivot entry 1
  std::vector<std::uint32_t> pivots;  // strictly increasing
  std::size_t rank() const { return rows.size(); }
};

/// Canonical reduced row-echelon form. Elimination is fraction-free on
/// integer-cleared primitive rows; the column loop runs the row updates
/// with OpenMP.
Echelon rref(const std::vector<SparseVec>& rows, std::size_t ncols);
/// Same algorithm without any threading; kept as the reference.
Echelon rref_serial(const std::vector<SparseVec>& rows, std::size_t ncols);
/// Rank by forward elimination only.
std::size_t rank(const std::vector<SparseVec>& rows, std::size_t ncols);

class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(TensorShape ambient) : ambient_(ambient) {}

  static Subspace zero(TensorShape ambient) { return Subspace(ambient); }
  static Subspace full(TensorShape ambient);
  static Subspace span(TensorShape ambient, const std::vector<SparseVec>& generators);
  /// Wraps an already canonical echelon form (not re-checked).
  static Subspace from_echelon(TensorShape ambient, Echelon e);

  const TensorShape& ambient() const { return ambient_; }
  std::size_t ambient_dim() const { return ambient_.dim(); }
  std::size_t dim() const { return echelon_.rows.size(); }
  bool is_zero() const { return echelon_.rows.empty(); }
  const std::vector<SparseVec>& basis() const { return echelon_.rows; }
  const std::vector<std::uint32_t>& pivots() const { return echelon_.pivots; }

  /// Residual of v modulo the subspace (zero iff v is contained).
  SparseVec reduce(const SparseVec& v) const;
  bool contains(const SparseVec& v) const { return reduce(v).empty(); }
  bool contains(const Subspace& other) const;

  friend bool operator==(const Subspace& a, const Subspace& b);

 private:
  TensorShape ambient_;
  Echelon echelon_;
};

/// Matrix stored by columns: column j is the image of the j-th domain basis vector.
struct LinearMap {
  TensorShape domain;
  TensorShape codomain;
  std::vector<SparseVec> columns;

  LinearMap() = default;
  LinearMap(TensorShape dom, TensorShape cod)
      : domain(dom), codomain(cod), columns(dom.dim()) {}

  SparseVec apply(const SparseVec& v) const;
  /// Row-major copy (codomain.dim() rows).
  std::vector<SparseVec> rows() const;
};

LinearMap compose(const LinearMap& outer, const LinearMap& inner);
bool is_zero_map(const LinearMap& f);

Subspace subspace_sum(const Subspace& a, const Subspace& b);
Subspace subspace_intersect(const Subspace& a, const Subspace& b);
Subspace image(const LinearMap& f, const Subspace& s);
std::size_t image_rank(const LinearMap& f, const Subspace& s);
Subspace preimage(const LinearMap& f, const Subspace& s);
Subspace kernel(const LinearMap& f);
/// s intersected with ker f.
Subspace kernel_within(const LinearMap& f, const Subspace& s);
std::size_t quotient_dim(const Subspace& big, const Subspace& small);

/// Tensor product of u in S^d (x) W (ext_degree 0) with z in L^e over k
/// variables (shape (1,0,e,1) with wedge_base k, or base_dim k).
Subspace tensor_with_forms(const Subspace& u, const Subspace& forms);

}  // namespace spencer
