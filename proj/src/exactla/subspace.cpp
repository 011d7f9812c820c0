#include <algorithm>
#include <numeric>

#include "spencer/exactla.hpp"

namespace spencer {
namespace {

void require_same(const TensorShape& a, const TensorShape& b, const char* what) {
  if (!(a == b)) throw Error(ErrorCode::AmbientMismatch, what);
}

SparseVec shifted(const SparseVec& v, std::uint32_t offset) {
  SparseVec out = v;
  for (auto& e : out) e.first += offset;
  return out;
}

// Rows are [first_i | second_i]. Returns the second blocks of the echelon rows
// whose first block vanished, i.e. a basis of { sum c_i second_i : sum c_i first_i = 0 }.
std::vector<SparseVec> relations(const std::vector<SparseVec>& first, const std::vector<SparseVec>& second,
                                 std::size_t first_dim, std::size_t second_dim) {
  const auto off = static_cast<std::uint32_t>(first_dim);
  std::vector<SparseVec> rows(first.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    rows[i] = first[i];
    SparseVec s = shifted(second[i], off);
    rows[i].insert(rows[i].end(), s.begin(), s.end());
  }
  Echelon e = rref(rows, first_dim + second_dim);
  std::vector<SparseVec> out;
  for (std::size_t k = 0; k < e.rows.size(); ++k) {
    if (e.pivots[k] < off) continue;
    SparseVec v = e.rows[k];
    for (auto& x : v) x.first -= off;
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

Subspace Subspace::full(TensorShape ambient) {
  Subspace s(ambient);
  const std::size_t n = ambient.dim();
  s.echelon_.rows.resize(n);
  s.echelon_.pivots.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    s.echelon_.rows[i] = {{static_cast<std::uint32_t>(i), Rational(1)}};
    s.echelon_.pivots[i] = static_cast<std::uint32_t>(i);
  }
  return s;
}

Subspace Subspace::span(TensorShape ambient, const std::vector<SparseVec>& generators) {
  Subspace s(ambient);
  s.echelon_ = rref(generators, ambient.dim());
  return s;
}

Subspace Subspace::from_echelon(TensorShape ambient, Echelon e) {
  Subspace s(ambient);
  s.echelon_ = std::move(e);
  return s;
}

SparseVec Subspace::reduce(const SparseVec& v) const {
  std::vector<std::pair<std::uint32_t, Rational>> terms(v.begin(), v.end());
  std::size_t k = 0;
  for (const auto& [col, val] : v) {
    while (k < echelon_.pivots.size() && echelon_.pivots[k] < col) ++k;
    if (k == echelon_.pivots.size()) break;
    if (echelon_.pivots[k] != col) continue;
    for (const auto& [c, x] : echelon_.rows[k]) terms.emplace_back(c, -val * x);
  }
  return combine(std::move(terms));
}

bool Subspace::contains(const Subspace& other) const {
  require_same(ambient_, other.ambient_, "containment test across ambients");
  if (other.dim() > dim()) return false;
  return std::all_of(other.basis().begin(), other.basis().end(),
                     [&](const SparseVec& v) { return contains(v); });
}

bool operator==(const Subspace& a, const Subspace& b) {
  return a.ambient_ == b.ambient_ && a.echelon_.pivots == b.echelon_.pivots && a.echelon_.rows == b.echelon_.rows;
}

SparseVec LinearMap::apply(const SparseVec& v) const {
  std::vector<std::pair<std::uint32_t, Rational>> terms;
  for (const auto& [j, a] : v)
    for (const auto& [i, x] : columns.at(j)) terms.emplace_back(i, a * x);
  return combine(std::move(terms));
}

std::vector<SparseVec> LinearMap::rows() const {
  std::vector<SparseVec> out(codomain.dim());
  for (std::size_t j = 0; j < columns.size(); ++j)
    for (const auto& [i, x] : columns[j]) out[i].emplace_back(static_cast<std::uint32_t>(j), x);
  return out;
}

LinearMap compose(const LinearMap& outer, const LinearMap& inner) {
  require_same(outer.domain, inner.codomain, "composition of incompatible maps");
  LinearMap out(inner.domain, outer.codomain);
  for (std::size_t j = 0; j < inner.columns.size(); ++j) out.columns[j] = outer.apply(inner.columns[j]);
  return out;
}

bool is_zero_map(const LinearMap& f) {
  return std::all_of(f.columns.begin(), f.columns.end(), [](const SparseVec& c) { return c.empty(); });
}

Subspace subspace_sum(const Subspace& a, const Subspace& b) {
  require_same(a.ambient(), b.ambient(), "sum of subspaces");
  std::vector<SparseVec> gens = a.basis();
  gens.insert(gens.end(), b.basis().begin(), b.basis().end());
  return Subspace::span(a.ambient(), gens);
}

Subspace subspace_intersect(const Subspace& a, const Subspace& b) {
  require_same(a.ambient(), b.ambient(), "intersection of subspaces");
  if (a.is_zero() || b.is_zero()) return Subspace::zero(a.ambient());
  if (b.dim() == b.ambient_dim()) return a;
  if (a.dim() == a.ambient_dim()) return b;
  std::vector<SparseVec> first;
  first.reserve(a.dim());
  for (const auto& v : a.basis()) first.push_back(b.reduce(v));
  const std::size_t n = a.ambient_dim();
  return Subspace::span(a.ambient(), relations(first, a.basis(), n, n));
}

Subspace image(const LinearMap& f, const Subspace& s) {
  require_same(f.domain, s.ambient(), "image of a subspace outside the domain");
  std::vector<SparseVec> gens;
  gens.reserve(s.dim());
  for (const auto& v : s.basis()) gens.push_back(f.apply(v));
  return Subspace::span(f.codomain, gens);
}

std::size_t image_rank(const LinearMap& f, const Subspace& s) {
  require_same(f.domain, s.ambient(), "image of a subspace outside the domain");
  std::vector<SparseVec> gens;
  gens.reserve(s.dim());
  for (const auto& v : s.basis()) gens.push_back(f.apply(v));
  return rank(gens, f.codomain.dim());
}

Subspace preimage(const LinearMap& f, const Subspace& s) {
  require_same(f.codomain, s.ambient(), "preimage of a subspace outside the codomain");
  const std::size_t n = f.domain.dim();
  if (s.dim() == s.ambient_dim()) return Subspace::full(f.domain);
  std::vector<SparseVec> first(n), second(n);
  for (std::size_t j = 0; j < n; ++j) {
    first[j] = s.reduce(f.columns[j]);
    second[j] = {{static_cast<std::uint32_t>(j), Rational(1)}};
  }
  return Subspace::span(f.domain, relations(first, second, f.codomain.dim(), n));
}

Subspace kernel(const LinearMap& f) { return preimage(f, Subspace::zero(f.codomain)); }

Subspace kernel_within(const LinearMap& f, const Subspace& s) {
  require_same(f.domain, s.ambient(), "kernel on a subspace outside the domain");
  std::vector<SparseVec> first;
  first.reserve(s.dim());
  for (const auto& v : s.basis()) first.push_back(f.apply(v));
  return Subspace::span(f.domain, relations(first, s.basis(), f.codomain.dim(), f.domain.dim()));
}

std::size_t quotient_dim(const Subspace& big, const Subspace& small) {
  require_same(big.ambient(), small.ambient(), "quotient of subspaces");
  if (!big.contains(small)) throw Error(ErrorCode::NotASubspace, "quotient needs small inside big");
  return big.dim() - small.dim();
}

Subspace tensor_with_forms(const Subspace& u, const Subspace& forms) {
  const TensorShape& us = u.ambient();
  const TensorShape& fs = forms.ambient();
  if (us.ext_degree != 0 || fs.sym_degree != 0 || fs.value_dim != 1)
    throw Error(ErrorCode::ShapeMismatch, "tensor_with_forms expects S^d(x)W and a pure exterior power");
  TensorShape out(us.base_dim, us.sym_degree, fs.ext_degree, us.value_dim, fs.wedge_base);
  const int w = us.value_dim;
  Echelon e;
  // Products of two reduced bases are reduced; only the row order needs fixing.
  for (const auto& a : u.basis()) {
    for (const auto& z : forms.basis()) {
      SparseVec v;
      v.reserve(a.size() * z.size());
      for (const auto& [ia, xa] : a) {
        std::size_t sym = ia / w;
        int val = static_cast<int>(ia % w);
        for (const auto& [iz, xz] : z) v.emplace_back(static_cast<std::uint32_t>(out.index(sym, iz, val)), xa * xz);
      }
      std::sort(v.begin(), v.end(), [](const auto& p, const auto& q) { return p.first < q.first; });
      e.rows.push_back(std::move(v));
    }
  }
  std::sort(e.rows.begin(), e.rows.end(),
            [](const SparseVec& p, const SparseVec& q) { return p.front().first < q.front().first; });
  for (const auto& r : e.rows) e.pivots.push_back(r.front().first);
  return Subspace::from_echelon(out, std::move(e));
}

}  // namespace spencer
