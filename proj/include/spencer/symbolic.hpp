#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "spencer/exactla.hpp"

namespace spencer {

/// A basis of a subspace tau of R^m, one row per vector.
using VectorList = std::vector<std::vector<Rational>>;

/// Spencer differential S^d (x) L^e (x) W -> S^{d-1} (x) L^{e+1} (x) W,
/// p (x) w  |->  sum_i d_i p (x) e^i ^ w.
LinearMap delta_map(const TensorShape& shape);

/// Induced differential on S^d A* (x) L^e tau* (x) W. The shape's wedge_base
/// must equal tau.size(); tau rows live in A = R^{shape.base_dim}.
LinearMap restrict_delta(const VectorList& tau, const TensorShape& shape);

/// 1 (x) L^e rho : S^d A* (x) L^e A* (x) W -> S^d A* (x) L^e tau* (x) W.
LinearMap restriction_map(const VectorList& tau, const TensorShape& shape);

/// First prolongation {p in S^{k+1} (x) W : d_v p in g_k for all v}.
Subspace prolong(const Subspace& gk);

/// Ann(tau) o S^{k-1} A* (x) W inside S^k A* (x) W.
Subspace ann_generated(const VectorList& tau, int m, int k, int value_dim);

/// {w in W : v^k (x) w in g_k}.
Subspace char_fiber(const std::vector<Rational>& v, const Subspace& gk);

bool strongly_noncharacteristic(const VectorList& tau, const Subspace& gk);

/// Graded family g_l inside S^l A* (x) W.
///
/// Grades below 0 are zero, an unlisted grade 0 is all of W and grades above
/// the highest listed one are prolongations (computed on demand and cached).
class SymbolicSystem {
 public:
  SymbolicSystem(int base_dim, int value_dim, std::map<int, Subspace> grades = {});

  static SymbolicSystem full(int base_dim, int value_dim) { return SymbolicSystem(base_dim, value_dim); }
  static SymbolicSystem zero(int base_dim, int value_dim);

  int base_dim() const { return n_; }
  int value_dim() const { return w_; }
  int top_listed() const { return grades_.empty() ? 0 : grades_.rbegin()->first; }

  TensorShape shape(int l, int e = 0) const { return TensorShape(n_, l, e, w_); }
  Subspace grade(int l) const;
  /// Smallest k >= 1 with g_l = prolong(g_{l-1}) for every listed l > k.
  int order() const;

 private:
  int n_;
  int w_;
  std::map<int, Subspace> grades_;
  bool zero_ = false;
  struct Cache {
    std::mutex mu;
    std::map<int, Subspace> prolonged;
  };
  std::shared_ptr<Cache> cache_;
};

/// Bi-graded dimension table; cells keyed by (i, j) = (symmetric degree, form degree).
struct CohomologyTable {
  std::string source;
  std::map<std::pair<int, int>, std::size_t> cells;
};

/// dim H^{i,j} of the Spencer complex g_* (x) L^* A*.
std::size_t spencer_H(const SymbolicSystem& g, int i, int j);
/// dim H^{i,j} of g_* (x) L^* tau* with the induced differential.
std::size_t delta_prime_H(const SymbolicSystem& g, const VectorList& tau, int i, int j);

CohomologyTable spencer_table(const SymbolicSystem& g, int i_min, int i_max);

/// Largest q <= base_dim such that H^{i,j}(g) = 0 for i_min <= i <= i_max and
/// 0 <= j <= q; -1 when some H^{i,0} is already nonzero.
int acyclicity_window(const SymbolicSystem& g, int i_min, int i_max);

}  // namespace spencer
