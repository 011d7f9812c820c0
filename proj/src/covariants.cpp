#include "spencer/covariants.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace spencer::cov {
namespace {

using catalog::GroupKind;

std::vector<Rational> unit(int m, int i) {
  std::vector<Rational> v(m);
  v[i] = 1;
  return v;
}

Subspace forms(int base, int e, int wedge) { return Subspace::full(TensorShape(base, 0, e, 1, wedge)); }

// Image of x^alpha under x_i -> sum_a t_{a,i} y_a, over sym_basis(n, |alpha|).
SparseVec restrict_monomial(const VectorList& tau, const MultiIndex& alpha) {
  const int n = static_cast<int>(tau.size());
  std::map<MultiIndex, Rational> poly{{MultiIndex(n, 0), Rational(1)}};
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    for (int t = 0; t < alpha[i]; ++t) {
      std::map<MultiIndex, Rational> next;
      for (const auto& [m, c] : poly) {
        for (int a = 0; a < n; ++a) {
          if (sgn(tau[a][i]) == 0) continue;
          MultiIndex up = m;
          ++up[a];
          next[up] += c * tau[a][i];
        }
      }
      poly = std::move(next);
    }
  }
  std::vector<std::pair<std::uint32_t, Rational>> out;
  for (const auto& [m, c] : poly) out.emplace_back(static_cast<std::uint32_t>(sym_rank(m)), c);
  return combine(std::move(out));
}

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

// Ann(tau) ^ L^{s-1} V* inside L^s V*.
Subspace ann_wedge(const FlagContext& ctx, int s) {
  const int m = ctx.m();
  TensorShape shape(m, 0, s, 1);
  if (s < 1) return Subspace::zero(shape);
  std::vector<SparseVec> gens;
  WedgeIndex merged;
  for (const auto& alpha : ctx.annihilator()) {
    for (const auto& beta : wedge_basis(m, s - 1)) {
      std::vector<std::pair<std::uint32_t, Rational>> t;
      for (int k = 0; k < m; ++k) {
        if (sgn(alpha[k]) == 0) continue;
        int sign = wedge_insert(beta, k, merged);
        if (sign == 0) continue;
        t.emplace_back(static_cast<std::uint32_t>(wedge_rank(merged, m)), sign > 0 ? alpha[k] : Rational(-alpha[k]));
      }
      gens.push_back(combine(std::move(t)));
    }
  }
  return Subspace::span(shape, gens);
}

Subspace stationary_grade(const FlagContext& ctx, const SymbolicSystem& g, int i) {
  return stationary(ctx, g.grade(i));
}

Subspace lambda_image(const FlagContext& ctx, const SymbolicSystem& g, const SymbolicSystem& h, int i) {
  Subspace img = image(lambda_map(ctx, i), g.grade(i));
  if (!h.grade(i).contains(img))
    throw Error(ErrorCode::EquationNotInvariant, "lambda(g^" + std::to_string(i) + ") is not inside h^" + std::to_string(i));
  return img;
}

void require_inside(const Subspace& big, const Subspace& small, const std::string& what) {
  if (!big.contains(small)) throw Error(ErrorCode::NotASubcomplex, what);
}

}  // namespace

FlagContext::FlagContext(int m, VectorList tau_basis) : m_(m), n_(static_cast<int>(tau_basis.size())), tau_(std::move(tau_basis)) {
  if (m < 2) throw Error(ErrorCode::InvalidFlag, "ambient dimension must be >= 2");
  std::vector<SparseVec> rows;
  for (const auto& t : tau_) {
    if (static_cast<int>(t.size()) != m) throw Error(ErrorCode::InvalidFlag, "tau vector has the wrong length");
    rows.push_back(from_dense(t));
  }
  span_ = Subspace::span(TensorShape::plain(m), rows);
  if (n_ < 1 || static_cast<int>(span_.dim()) != n_) throw Error(ErrorCode::InvalidFlag, "tau basis must be nonempty and independent");
  if (n_ >= m) throw Error(ErrorCode::InvalidFlag, "tau must have codimension >= 1");
  std::vector<bool> pivot(m, false);
  for (auto p : span_.pivots()) pivot[p] = true;
  for (int i = 0; i < m; ++i)
    if (!pivot[i]) nu_cols_.push_back(i);
}

std::vector<Rational> FlagContext::project(const SparseVec& v) const {
  SparseVec res = span_.reduce(v);
  std::vector<Rational> out(nu_cols_.size());
  for (const auto& [i, x] : res) {
    auto it = std::lower_bound(nu_cols_.begin(), nu_cols_.end(), static_cast<int>(i));
    out[it - nu_cols_.begin()] = x;
  }
  return out;
}

VectorList FlagContext::annihilator() const {
  LinearMap f(TensorShape::plain(m_), TensorShape::plain(n_));
  for (int j = 0; j < m_; ++j) {
    SparseVec col;
    for (int a = 0; a < n_; ++a)
      if (sgn(tau_[a][j]) != 0) col.emplace_back(static_cast<std::uint32_t>(a), tau_[a][j]);
    f.columns[j] = std::move(col);
  }
  VectorList out;
  Subspace ker = kernel(f);
  for (const auto& v : ker.basis()) out.push_back(to_dense(v, m_));
  return out;
}

FlagContext named_flag(const catalog::PseudogroupSpec& spec, const std::string& stratum, int d) {
  const int m = spec.ambient_dim();
  auto fail = [&](const std::string& why) -> FlagContext {
    throw Error(ErrorCode::InvalidFlag, "stratum '" + stratum + "' for " + spec.to_string() + ": " + why);
  };
  auto basis = [&](const std::vector<int>& idx) {
    VectorList t;
    for (int i : idx) t.push_back(unit(m, i));
    return FlagContext(m, t);
  };
  std::vector<int> idx;
  if (stratum == "coordinate") {
    if (d < 0) d = m - 1;
    for (int i = 0; i < d; ++i) idx.push_back(i);
    return basis(idx);
  }
  if (stratum == "omega-nondegenerate" || stratum == "lagrangian") {
    if (spec.kind != GroupKind::Symplectic) return fail("needs a symplectic group");
    const int N = m / 2;
    if (d < 0) d = N;
    if (stratum == "lagrangian") {
      if (d > N) return fail("isotropic subspaces have dimension <= n");
      for (int i = 0; i < d; ++i) idx.push_back(i);
      return basis(idx);
    }
    if (d >= m) return fail("dimension must be < 2n");
    for (int i = 0; i < d / 2; ++i) {
      idx.push_back(i);
      idx.push_back(N + i);
    }
    if (d % 2) idx.push_back(d / 2);
    return basis(idx);
  }
  if (stratum == "totally-real" || stratum == "j-line") {
    if (spec.kind != GroupKind::Complex) return fail("needs a complex group");
    const int N = m / 2;
    if (stratum == "totally-real") {
      if (d < 0) d = N;
      if (d > N) return fail("totally real subspaces have dimension <= n");
      for (int i = 0; i < d; ++i) idx.push_back(i);
      return basis(idx);
    }
    if (d < 0) d = 2;
    if (d < 2 || d >= m) return fail("a J-line needs 2 <= dim < 2n");
    idx = {0, N};
    for (int i = 1; static_cast<int>(idx.size()) < d; ++i)
      if (i != N) idx.push_back(i);
    return basis(idx);
  }
  if (stratum == "transversal-to-contact-plane" || stratum == "inside-contact-plane") {
    if (spec.kind != GroupKind::Contact) return fail("needs a contact group");
    const int n = (m - 1) / 2;  // coordinates q_0..q_{n-1}, u = n, p_i = n+1+i
    if (d < 0) d = n;
    if (stratum == "inside-contact-plane") {
      if (d > n) return fail("Legendrian-type strata have dimension <= n");
      for (int i = 0; i < d; ++i) idx.push_back(i);
      return basis(idx);
    }
    if (d < 1 || d >= m) return fail("dimension must be in [1, 2n]");
    idx.push_back(n);
    const int rest = d - 1;
    for (int i = 0; i < rest / 2; ++i) {
      idx.push_back(i);
      idx.push_back(n + 1 + i);
    }
    if (rest % 2) idx.push_back(rest / 2);
    return basis(idx);
  }
  return fail("unknown stratum");
}

TensorShape lambda_codomain(const FlagContext& ctx, int l) { return TensorShape(ctx.n(), l, 0, ctx.r()); }

LinearMap lambda_map(const FlagContext& ctx, int l) {
  if (l < 0) throw Error(ErrorCode::DegreeUnderflow, "lambda needs l >= 0");
  const int m = ctx.m(), r = ctx.r();
  TensorShape dom(m, l, 0, m), cod = lambda_codomain(ctx, l);
  LinearMap f(dom, cod);
  std::vector<std::vector<Rational>> proj;
  for (int w = 0; w < m; ++w) proj.push_back(ctx.project({{static_cast<std::uint32_t>(w), Rational(1)}}));
  const auto syms = sym_basis(m, l);
  for (std::size_t a = 0; a < syms.size(); ++a) {
    SparseVec rs = restrict_monomial(ctx.tau_basis(), syms[a]);
    for (int w = 0; w < m; ++w) {
      std::vector<std::pair<std::uint32_t, Rational>> col;
      for (const auto& [sr, c] : rs)
        for (int v = 0; v < r; ++v)
          if (sgn(proj[w][v]) != 0) col.emplace_back(static_cast<std::uint32_t>(cod.index(sr, 0, v)), c * proj[w][v]);
      f.columns[dom.index(a, 0, w)] = combine(std::move(col));
    }
  }
  return f;
}

Subspace sigma(const FlagContext& ctx, int l) {
  if (l < 1) throw Error(ErrorCode::DegreeUnderflow, "Sigma needs l >= 1");
  const int m = ctx.m();
  Subspace ann = ann_generated(ctx.tau_basis(), m, l, m);
  TensorShape shape(m, l, 0, m);
  std::vector<SparseVec> gens = ann.basis();
  for (std::size_t a = 0; a < shape.sym_count(); ++a) {
    for (const auto& t : ctx.tau_basis()) {
      SparseVec v;
      for (int w = 0; w < m; ++w)
        if (sgn(t[w]) != 0) v.emplace_back(static_cast<std::uint32_t>(shape.index(a, 0, w)), t[w]);
      gens.push_back(std::move(v));
    }
  }
  return Subspace::span(shape, gens);
}

Subspace stationary(const FlagContext& ctx, const Subspace& gl) {
  return kernel_within(lambda_map(ctx, gl.ambient().sym_degree), gl);
}

CovariantReport covariants(const FlagContext& ctx, const Subspace& gl, const Subspace& hl) {
  const int l = gl.ambient().sym_degree;
  if (!(gl.ambient() == TensorShape(ctx.m(), l, 0, ctx.m())) || !(hl.ambient() == lambda_codomain(ctx, l)))
    throw Error(ErrorCode::ShapeMismatch, "covariants: g^l or h^l has the wrong ambient");
  LinearMap lam = lambda_map(ctx, l);
  Subspace img = image(lam, gl);
  if (!hl.contains(img)) throw Error(ErrorCode::EquationNotInvariant, "lambda(g^l) is not inside h^l");
  CovariantReport rep;
  rep.l = l;
  rep.dim_g = gl.dim();
  rep.dim_h = hl.dim();
  rep.dim_stationary = kernel_within(lam, gl).dim();
  rep.dim_lambda_image = img.dim();
  rep.dim_O = hl.dim() - img.dim();
  rep.transversal = rep.dim_O == 0;
  rep.dim_necessary_ok = dim_necessary(gl, hl);
  if (l >= 1) {
    bool via_preimage = subspace_sum(sigma(ctx, l), gl) == preimage(lam, hl);
    if (via_preimage != rep.transversal)
      throw std::logic_error("transversality tests disagree at l = " + std::to_string(l));
  }
  if (l == 1) rep.caveat = "l = 1: statement holds at the Lie algebra level only";
  return rep;
}

bool dim_necessary(const Subspace& gl, const Subspace& hl) { return gl.dim() >= hl.dim(); }

DimTrans dim_trans(const catalog::PseudogroupSpec& spec, int r, int l) {
  const int m = spec.ambient_dim();
  if (r < 1 || r >= m) throw Error(ErrorCode::ParamOutOfRange, "codimension must satisfy 1 <= r < m");
  return {catalog::symbol_dim(spec, l), sym_dim(m - r, l) * static_cast<std::size_t>(r)};
}

Subspace h_row_space(const FlagContext& ctx, const SymbolicSystem& g, int l, int s) {
  const int m = ctx.m(), i = l - s;
  if (g.base_dim() != m || g.value_dim() != m) throw Error(ErrorCode::ShapeMismatch, "g must live in S V* (x) V");
  if (s < 0 || s > m || i < 0) return Subspace::zero(TensorShape(m, std::max(i, 0), std::clamp(s, 0, m), m));
  Subspace gi = g.grade(i);
  Subspace out = tensor_with_forms(stationary(ctx, gi), forms(m, s, m));
  if (s >= 1) out = subspace_sum(out, tensor_with_forms(gi, ann_wedge(ctx, s)));
  return out;
}

std::size_t h_g_cohomology(const FlagContext& ctx, const SymbolicSystem& g, int l, int s) {
  const int m = ctx.m(), i = l - s;
  if (s < 0 || s > m || i < 0) return 0;
  Subspace here = h_row_space(ctx, g, l, s);
  std::size_t out_rank = 0, in_rank = 0;
  if (i >= 1 && s + 1 <= m) {
    Subspace img = image(delta_map(here.ambient()), here);
    require_inside(h_row_space(ctx, g, l, s + 1), img, "delta leaves the row-1 complex");
    out_rank = img.dim();
  }
  if (s >= 1) {
    Subspace above = h_row_space(ctx, g, l, s - 1);
    Subspace img = image(delta_map(above.ambient()), above);
    require_inside(here, img, "delta leaves the row-1 complex");
    in_rank = img.dim();
  }
  return here.dim() - out_rank - in_rank;
}

std::size_t h_tau_cohomology(const FlagContext& ctx, const SymbolicSystem& g, int i, int j) {
  const int m = ctx.m(), n = ctx.n();
  if (i < 0 || j < 0 || j > n) return 0;
  auto term = [&](int a, int b) { return tensor_with_forms(stationary_grade(ctx, g, a), forms(m, b, n)); };
  Subspace here = term(i, j);
  std::size_t out_rank = i >= 1 ? image_rank(restrict_delta(ctx.tau_basis(), here.ambient()), here) : 0;
  std::size_t in_rank = 0;
  if (j >= 1) {
    Subspace above = term(i + 1, j - 1);
    Subspace img = image(restrict_delta(ctx.tau_basis(), above.ambient()), above);
    require_inside(here, img, "delta' leaves the stationary complex");
    in_rank = img.dim();
  }
  return here.dim() - out_rank - in_rank;
}

std::size_t O_cohomology(const FlagContext& ctx, const SymbolicSystem& g, const SymbolicSystem& h, int l, int s) {
  const int n = ctx.n(), i = l - s, j = s;
  if (h.base_dim() != n || h.value_dim() != ctx.r()) throw Error(ErrorCode::ShapeMismatch, "h must live in S tau* (x) nu");
  if (i < 0 || j < 0 || j > n) return 0;
  auto Q = [&](int a, int b) { return tensor_with_forms(h.grade(a), forms(n, b, n)); };
  auto I = [&](int a, int b) { return tensor_with_forms(lambda_image(ctx, g, h, a), forms(n, b, n)); };
  Subspace q = Q(i, j), inv = I(i, j);
  Subspace z = q;
  if (i >= 1 && j + 1 <= n) {
    LinearMap d = delta_map(q.ambient());
    Subspace inv_next = I(i - 1, j + 1);
    require_inside(Q(i - 1, j + 1), image(d, q), "delta leaves the equation complex");
    require_inside(inv_next, image(d, inv), "delta does not preserve the lambda image");
    z = subspace_intersect(preimage(d, inv_next), q);
  }
  Subspace b = inv;
  if (j >= 1) {
    Subspace prev = Q(i + 1, j - 1);
    b = subspace_sum(b, image(delta_map(prev.ambient()), prev));
  }
  return z.dim() - b.dim();
}

SymbolicSystem full_equation(const FlagContext& ctx) { return SymbolicSystem::full(ctx.n(), ctx.r()); }

TauComparison compare_over_tau(const FlagContext& ctx, const SymbolicSystem& g, int l, int s, int window_top) {
  TauComparison res;
  res.order = g.order();
  res.strongly_noncharacteristic = strongly_noncharacteristic(ctx.tau_basis(), g.grade(res.order));
  res.window = acyclicity_window(g, res.order, std::max(window_top, res.order));
  res.c = std::min(l - res.order, res.window);
  res.applicable = res.strongly_noncharacteristic && s >= 0 && s < res.c;
  res.lhs = h_g_cohomology(ctx, g, l + s, s);
  res.rhs = h_tau_cohomology(ctx, g, l, s);
  return res;
}

RowComparison compare_covariant_rows(const FlagContext& ctx, const SymbolicSystem& g, const SymbolicSystem& h, int l, int s) {
  RowComparison res;
  res.hypotheses = spencer_H(g, l - s - 1, s + 1) == 0 && spencer_H(g, l - s - 2, s + 2) == 0 &&
                   spencer_H(h, l - s, s) == 0 && spencer_H(h, l - s - 1, s + 1) == 0;
  res.lhs = O_cohomology(ctx, g, h, l, s);
  res.rhs = h_g_cohomology(ctx, g, l, s + 2);
  return res;
}

ScanResult transversality_scan(const FlagContext& ctx, const SymbolicSystem& g, const SymbolicSystem& h, int l_max) {
  ScanResult res;
  for (int l = 1; l <= l_max; ++l) {
    res.reports.push_back(covariants(ctx, g.grade(l), h.grade(l)));
    res.vanishing_flags.emplace_back(h_tau_cohomology(ctx, g, l, 2) == 0, delta_prime_H(g, ctx.tau_basis(), l, 1) == 0);
  }
  const int k = g.order();
  bool two_acyclic = true;
  for (int l = k; l <= l_max; ++l) two_acyclic = two_acyclic && spencer_H(g, l, 2) == 0;
  if (!two_acyclic) return res;
  for (int l0 = k + 1; l0 <= l_max; ++l0) {
    if (res.reports[l0 - 1].dim_O != 0) continue;
    bool flags = true;
    for (int l = l0 + 1; l <= l_max; ++l) flags = flags && res.vanishing_flags[l - 1].first && res.vanishing_flags[l - 1].second;
    if (!flags) continue;
    res.l0 = l0;
    for (int l = l0 + 1; l <= l_max; ++l) res.consequence_holds = res.consequence_holds && res.reports[l - 1].dim_O == 0;
    break;
  }
  return res;
}

}  // namespace spencer::cov
