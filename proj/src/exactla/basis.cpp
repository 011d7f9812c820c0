#include <algorithm>
#include <map>

#include "spencer/exactla.hpp"

namespace spencer {

std::size_t binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (long i = 1; i <= k; ++i) r = r * static_cast<unsigned long>(n - k + i) / static_cast<unsigned long>(i);
  return static_cast<std::size_t>(r);
}

std::size_t sym_dim(int n, int d) {
  if (d < 0 || n < 0) return 0;
  if (n == 0) return d == 0 ? 1 : 0;
  return binomial(n + d - 1, d);
}

static void sym_rec(int n, int d, int pos, MultiIndex& cur, std::vector<MultiIndex>& out) {
  if (pos == n - 1) {
    cur[pos] = d;
    out.push_back(cur);
    return;
  }
  for (int t = d; t >= 0; --t) {
    cur[pos] = t;
    sym_rec(n, d - t, pos + 1, cur, out);
  }
}

std::vector<MultiIndex> sym_basis(int n, int d) {
  if (n < 1) throw Error(ErrorCode::ParamOutOfRange, "sym_basis needs n >= 1");
  std::vector<MultiIndex> out;
  if (d < 0) return out;
  out.reserve(sym_dim(n, d));
  MultiIndex cur(n, 0);
  sym_rec(n, d, 0, cur, out);
  return out;
}

std::size_t sym_rank(const MultiIndex& alpha) {
  int n = static_cast<int>(alpha.size());
  int d = 0;
  for (int a : alpha) d += a;
  std::size_t r = 0;
  for (int pos = 0; pos + 1 < n; ++pos) {
    // tuples with a larger exponent at pos precede
    for (int t = d; t > alpha[pos]; --t) r += sym_dim(n - pos - 1, d - t);
    d -= alpha[pos];
  }
  return r;
}

std::size_t wedge_dim(int k, int e) { return binomial(k, e); }

std::vector<WedgeIndex> wedge_basis(int k, int e) {
  std::vector<WedgeIndex> out;
  if (e < 0 || e > k) return out;
  WedgeIndex cur(e);
  for (int i = 0; i < e; ++i) cur[i] = i;
  while (true) {
    out.push_back(cur);
    int i = e - 1;
    while (i >= 0 && cur[i] == k - e + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < e; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

std::size_t wedge_rank(const WedgeIndex& t, int k) {
  int e = static_cast<int>(t.size());
  std::size_t r = 0;
  int prev = -1;
  for (int i = 0; i < e; ++i) {
    for (int v = prev + 1; v < t[i]; ++v) r += binomial(k - v - 1, e - i - 1);
    prev = t[i];
  }
  return r;
}

TensorShape::TensorShape(int n, int d, int e, int w, int wedge)
    : base_dim(n), sym_degree(d), ext_degree(e), value_dim(w), wedge_base(wedge < 0 ? n : wedge) {
  if (n < 1 || w < 0) throw Error(ErrorCode::ShapeMismatch, "tensor shape needs base_dim >= 1");
}

SparseVec combine(std::vector<std::pair<std::uint32_t, Rational>> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseVec out;
  out.reserve(terms.size());
  for (auto& [idx, val] : terms) {
    if (!out.empty() && out.back().first == idx) {
      out.back().second += val;
    } else {
      if (!out.empty() && sgn(out.back().second) == 0) out.pop_back();
      out.emplace_back(idx, std::move(val));
    }
  }
  if (!out.empty() && sgn(out.back().second) == 0) out.pop_back();
  return out;
}

SparseVec axpy(const SparseVec& y, const Rational& a, const SparseVec& x) {
  SparseVec out;
  out.reserve(y.size() + x.size());
  std::size_t i = 0, j = 0;
  while (i < y.size() || j < x.size()) {
    if (j == x.size() || (i < y.size() && y[i].first < x[j].first)) {
      out.push_back(y[i++]);
    } else if (i == y.size() || x[j].first < y[i].first) {
      Rational v = a * x[j].second;
      if (sgn(v) != 0) out.emplace_back(x[j].first, std::move(v));
      ++j;
    } else {
      Rational v = y[i].second + a * x[j].second;
      if (sgn(v) != 0) out.emplace_back(x[j].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

SparseVec scaled(const SparseVec& x, const Rational& a) {
  if (sgn(a) == 0) return {};
  SparseVec out = x;
  for (auto& e : out) e.second *= a;
  return out;
}

Rational dot(const SparseVec& a, const SparseVec& b) {
  Rational s = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first < b[j].first) ++i;
    else if (b[j].first < a[i].first) ++j;
    else s += a[i++].second * b[j++].second;
  }
  return s;
}

SparseVec from_dense(std::span<const Rational> v) {
  SparseVec out;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (sgn(v[i]) != 0) out.emplace_back(static_cast<std::uint32_t>(i), v[i]);
  return out;
}

std::vector<Rational> to_dense(const SparseVec& v, std::size_t n) {
  std::vector<Rational> out(n);
  for (const auto& [i, x] : v) out.at(i) = x;
  return out;
}

}  // namespace spencer
