#include "spencer/symbolic.hpp"

#include <algorithm>
#include <numeric>

namespace spencer {
namespace {

// Inserts i into the sorted tuple; returns the sign of e^i ^ e^I, 0 if i is in I.
int wedge_insert(const WedgeIndex& tuple, int i, WedgeIndex& out) {
  int before = 0;
  for (int t : tuple) {
    if (t == i) return 0;
    if (t < i) ++before;
  }
  out = tuple;
  out.insert(out.begin() + before, i);
  return before % 2 == 0 ? 1 : -1;
}

Rational determinant(std::vector<std::vector<Rational>> a) {
  const std::size_t n = a.size();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(a[p][c]) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (sgn(a[r][c]) == 0) continue;
      Rational f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return det;
}

Subspace all_forms(int k, int e) { return Subspace::full(TensorShape(std::max(k, 1), 0, e, 1, k)); }

// Directional derivative along t of x^alpha: sum_i t_i alpha_i x^{alpha - e_i}.
void directional_terms(const MultiIndex& alpha, const std::vector<Rational>& t,
                       std::vector<std::pair<std::size_t, Rational>>& out) {
  out.clear();
  MultiIndex beta = alpha;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    if (alpha[i] == 0 || sgn(t[i]) == 0) continue;
    --beta[i];
    out.emplace_back(sym_rank(beta), t[i] * alpha[i]);
    ++beta[i];
  }
}

std::vector<Rational> unit(int m, int i) {
  std::vector<Rational> v(m);
  v[i] = 1;
  return v;
}

}  // namespace

LinearMap delta_map(const TensorShape& s) {
  if (s.sym_degree < 1) throw Error(ErrorCode::DegreeUnderflow, "delta needs symmetric degree >= 1");
  if (s.wedge_base != s.base_dim) throw Error(ErrorCode::ShapeMismatch, "delta needs forms over the base space");
  VectorList frame;
  for (int i = 0; i < s.base_dim; ++i) frame.push_back(unit(s.base_dim, i));
  return restrict_delta(frame, s);
}

LinearMap restrict_delta(const VectorList& tau, const TensorShape& s) {
  if (s.sym_degree < 1) throw Error(ErrorCode::DegreeUnderflow, "delta needs symmetric degree >= 1");
  const int nt = static_cast<int>(tau.size());
  if (s.wedge_base != nt) throw Error(ErrorCode::ShapeMismatch, "form factor must be built on tau");
  for (const auto& t : tau)
    if (static_cast<int>(t.size()) != s.base_dim) throw Error(ErrorCode::ShapeMismatch, "tau vector length");
  TensorShape cod(s.base_dim, s.sym_degree - 1, s.ext_degree + 1, s.value_dim, nt);
  LinearMap f(s, cod);
  const auto syms = sym_basis(s.base_dim, s.sym_degree);
  const auto wedges = wedge_basis(nt, s.ext_degree);
  std::vector<std::pair<std::size_t, Rational>> terms;
  WedgeIndex merged;
  for (std::size_t sa = 0; sa < syms.size(); ++sa) {
    for (std::size_t wi = 0; wi < wedges.size(); ++wi) {
      std::vector<std::pair<std::uint32_t, Rational>> col;
      for (int a = 0; a < nt; ++a) {
        int sign = wedge_insert(wedges[wi], a, merged);
        if (sign == 0) continue;
        std::size_t wr = wedge_rank(merged, nt);
        directional_terms(syms[sa], tau[a], terms);
        for (const auto& [sb, c] : terms)
          col.emplace_back(static_cast<std::uint32_t>(cod.index(sb, wr, 0)), sign > 0 ? c : Rational(-c));
      }
      SparseVec base = combine(std::move(col));
      for (int v = 0; v < s.value_dim; ++v) {
        SparseVec shifted = base;
        for (auto& e : shifted) e.first += v;
        f.columns[s.index(sa, wi, v)] = std::move(shifted);
      }
    }
  }
  return f;
}

LinearMap restriction_map(const VectorList& tau, const TensorShape& s) {
  if (s.wedge_base != s.base_dim) throw Error(ErrorCode::ShapeMismatch, "restriction starts from forms on A");
  const int nt = static_cast<int>(tau.size());
  TensorShape cod(s.base_dim, s.sym_degree, s.ext_degree, s.value_dim, nt);
  LinearMap f(s, cod);
  const auto src = wedge_basis(s.base_dim, s.ext_degree);
  const auto dst = wedge_basis(nt, s.ext_degree);
  const int e = s.ext_degree;
  // coefficient of eps^A in rho(e^{i_1}) ^ ... ^ rho(e^{i_e}) is det[t_{A_l, i_k}]
  std::vector<std::vector<std::pair<std::size_t, Rational>>> wedge_image(src.size());
  for (std::size_t a = 0; a < src.size(); ++a) {
    for (std::size_t b = 0; b < dst.size(); ++b) {
      std::vector<std::vector<Rational>> mat(e, std::vector<Rational>(e));
      for (int k = 0; k < e; ++k)
        for (int l = 0; l < e; ++l) mat[k][l] = tau[dst[b][l]][src[a][k]];
      Rational d = determinant(std::move(mat));
      if (sgn(d) != 0) wedge_image[a].emplace_back(b, d);
    }
  }
  const std::size_t nsym = s.sym_count();
  for (std::size_t sa = 0; sa < nsym; ++sa)
    for (std::size_t a = 0; a < src.size(); ++a)
      for (int v = 0; v < s.value_dim; ++v) {
        SparseVec col;
        for (const auto& [b, d] : wedge_image[a]) col.emplace_back(static_cast<std::uint32_t>(cod.index(sa, b, v)), d);
        f.columns[s.index(sa, a, v)] = std::move(col);
      }
  return f;
}

Subspace prolong(const Subspace& gk) {
  const TensorShape& s = gk.ambient();
  if (s.ext_degree != 0 || s.sym_degree < 0) throw Error(ErrorCode::ShapeMismatch, "prolong needs a pure symmetric shape");
  TensorShape up(s.base_dim, s.sym_degree + 1, 0, s.value_dim);
  if (gk.dim() == gk.ambient_dim()) return Subspace::full(up);
  if (gk.is_zero()) return Subspace::zero(up);
  LinearMap d = delta_map(up);
  return preimage(d, tensor_with_forms(gk, all_forms(s.base_dim, 1)));
}

static Subspace annihilator(const VectorList& tau, int m) {
  LinearMap f(TensorShape::plain(m), TensorShape::plain(static_cast<int>(tau.size())));
  for (int j = 0; j < m; ++j) {
    SparseVec col;
    for (std::size_t a = 0; a < tau.size(); ++a)
      if (sgn(tau[a][j]) != 0) col.emplace_back(static_cast<std::uint32_t>(a), tau[a][j]);
    f.columns[j] = std::move(col);
  }
  return kernel(f);
}

Subspace ann_generated(const VectorList& tau, int m, int k, int value_dim) {
  TensorShape shape(m, k, 0, value_dim);
  if (k < 1) return Subspace::zero(shape);
  Subspace ann = annihilator(tau, m);
  const auto lower = sym_basis(m, k - 1);
  std::vector<SparseVec> gens;
  for (const auto& alpha : ann.basis()) {
    for (const auto& beta : lower) {
      std::vector<std::pair<std::uint32_t, Rational>> poly;
      for (const auto& [i, c] : alpha) {
        MultiIndex g = beta;
        ++g[i];
        poly.emplace_back(static_cast<std::uint32_t>(sym_rank(g)), c);
      }
      SparseVec p = combine(std::move(poly));
      for (int v = 0; v < value_dim; ++v) {
        SparseVec q;
        for (const auto& [sr, c] : p) q.emplace_back(static_cast<std::uint32_t>(shape.index(sr, 0, v)), c);
        gens.push_back(std::move(q));
      }
    }
  }
  return Subspace::span(shape, gens);
}

Subspace char_fiber(const std::vector<Rational>& v, const Subspace& gk) {
  const TensorShape& s = gk.ambient();
  if (std::all_of(v.begin(), v.end(), [](const Rational& x) { return sgn(x) == 0; }))
    throw Error(ErrorCode::ZeroVector, "characteristic test needs v != 0");
  if (s.ext_degree != 0 || static_cast<int>(v.size()) != s.base_dim)
    throw Error(ErrorCode::ShapeMismatch, "char_fiber shape");
  // v^k = sum_alpha k!/alpha! v^alpha x^alpha
  SparseVec power;
  const int k = s.sym_degree;
  for (const auto& alpha : sym_basis(s.base_dim, k)) {
    Integer coef = 1;
    mpz_fac_ui(coef.get_mpz_t(), k);
    Rational val(coef);
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      Integer f;
      mpz_fac_ui(f.get_mpz_t(), alpha[i]);
      val /= f;
      Rational p = 1;
      for (int t = 0; t < alpha[i]; ++t) p *= v[i];
      val *= p;
    }
    if (sgn(val) != 0) power.emplace_back(static_cast<std::uint32_t>(sym_rank(alpha)), val);
  }
  LinearMap f(TensorShape::plain(s.value_dim), s);
  for (int w = 0; w < s.value_dim; ++w) {
    SparseVec col;
    for (const auto& [sr, c] : power) col.emplace_back(static_cast<std::uint32_t>(s.index(sr, 0, w)), c);
    std::sort(col.begin(), col.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    f.columns[w] = std::move(col);
  }
  return preimage(f, gk);
}

bool strongly_noncharacteristic(const VectorList& tau, const Subspace& gk) {
  const TensorShape& s = gk.ambient();
  if (gk.is_zero() || s.sym_degree < 1) return true;
  return subspace_intersect(ann_generated(tau, s.base_dim, s.sym_degree, s.value_dim), gk).is_zero();
}

SymbolicSystem::SymbolicSystem(int base_dim, int value_dim, std::map<int, Subspace> grades)
    : n_(base_dim), w_(value_dim), grades_(std::move(grades)), cache_(std::make_shared<Cache>()) {
  if (n_ < 1 || w_ < 1) throw Error(ErrorCode::ParamOutOfRange, "symbolic system dimensions");
  for (const auto& [l, g] : grades_) {
    if (l < 0 || !(g.ambient() == shape(l))) throw Error(ErrorCode::ShapeMismatch, "grade " + std::to_string(l));
  }
  for (int l = 1; l <= top_listed(); ++l)
    if (!grades_.count(l)) throw Error(ErrorCode::MissingGrade, "grade " + std::to_string(l) + " not listed");
  for (const auto& [l, g] : grades_) {
    if (l == 0) continue;
    if (!prolong(grade(l - 1)).contains(g))
      throw Error(ErrorCode::NotASubcomplex, "grade " + std::to_string(l) + " is not closed under lowering");
  }
}

SymbolicSystem SymbolicSystem::zero(int base_dim, int value_dim) {
  SymbolicSystem s(base_dim, value_dim);
  s.zero_ = true;
  return s;
}

Subspace SymbolicSystem::grade(int l) const {
  if (l < 0 || zero_) return Subspace::zero(shape(std::max(l, 0)));
  if (auto it = grades_.find(l); it != grades_.end()) return it->second;
  if (l == 0) return Subspace::full(shape(0));
  std::lock_guard<std::mutex> lock(cache_->mu);
  auto& pro = cache_->prolonged;
  if (auto it = pro.find(l); it != pro.end()) return it->second;
  int start = top_listed();
  Subspace cur = start == 0 ? Subspace::full(shape(0)) : grades_.at(start);
  for (int d = start + 1; d <= l; ++d) {
    if (auto it = pro.find(d); it != pro.end()) {
      cur = it->second;
      continue;
    }
    cur = prolong(cur);
    pro.emplace(d, cur);
  }
  return cur;
}

int SymbolicSystem::order() const {
  int k = 1;
  for (auto it = grades_.rbegin(); it != grades_.rend(); ++it) {
    if (it->first <= 1) break;
    if (!(prolong(grade(it->first - 1)) == it->second)) {
      k = it->first;
      break;
    }
  }
  return k;
}

namespace {

std::size_t complex_H(const Subspace& here, const Subspace& above, const LinearMap* out_map, const LinearMap* in_map) {
  std::size_t out_rank = out_map ? image_rank(*out_map, here) : 0;
  std::size_t in_rank = in_map ? image_rank(*in_map, above) : 0;
  return here.dim() - out_rank - in_rank;
}

}  // namespace

std::size_t spencer_H(const SymbolicSystem& g, int i, int j) {
  const int n = g.base_dim();
  if (i < 0 || j < 0 || j > n) return 0;
  Subspace here = tensor_with_forms(g.grade(i), all_forms(n, j));
  if (here.is_zero()) return 0;
  Subspace above = j >= 1 ? tensor_with_forms(g.grade(i + 1), all_forms(n, j - 1)) : Subspace();
  LinearMap out_map, in_map;
  if (i >= 1) out_map = delta_map(here.ambient());
  if (j >= 1) in_map = delta_map(above.ambient());
  return complex_H(here, above, i >= 1 ? &out_map : nullptr, j >= 1 ? &in_map : nullptr);
}

std::size_t delta_prime_H(const SymbolicSystem& g, const VectorList& tau, int i, int j) {
  const int nt = static_cast<int>(tau.size());
  if (i < 0 || j < 0 || j > nt) return 0;
  Subspace here = tensor_with_forms(g.grade(i), all_forms(nt, j));
  if (here.is_zero()) return 0;
  Subspace above = j >= 1 ? tensor_with_forms(g.grade(i + 1), all_forms(nt, j - 1)) : Subspace();
  LinearMap out_map, in_map;
  if (i >= 1) out_map = restrict_delta(tau, here.ambient());
  if (j >= 1) in_map = restrict_delta(tau, above.ambient());
  return complex_H(here, above, i >= 1 ? &out_map : nullptr, j >= 1 ? &in_map : nullptr);
}

CohomologyTable spencer_table(const SymbolicSystem& g, int i_min, int i_max) {
  std::vector<std::pair<int, int>> cells;
  for (int i = i_min; i <= i_max; ++i)
    for (int j = 0; j <= g.base_dim(); ++j) cells.emplace_back(i, j);
  std::vector<std::size_t> dims(cells.size());
  const long nc = static_cast<long>(cells.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long c = 0; c < nc; ++c) dims[c] = spencer_H(g, cells[c].first, cells[c].second);
  CohomologyTable t{"spencer", {}};
  for (std::size_t c = 0; c < cells.size(); ++c) t.cells[cells[c]] = dims[c];
  return t;
}

int acyclicity_window(const SymbolicSystem& g, int i_min, int i_max) {
  int q = -1;
  for (int j = 0; j <= g.base_dim(); ++j) {
    for (int i = i_min; i <= i_max; ++i)
      if (spencer_H(g, i, j) != 0) return q;
    q = j;
  }
  return q;
}

}  // namespace spencer
