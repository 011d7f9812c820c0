#include <map>

#include "spencer/jetcalc.hpp"

namespace spencer::jet {
namespace {

int monomial_degree(const Monomial& m) {
  int d = 0;
  for (const auto& t : m) d += static_cast<int>(t.second);
  return d;
}

Monomial to_monomial(const MultiIndex& alpha) {
  Monomial m;
  for (std::size_t v = 0; v < alpha.size(); ++v)
    if (alpha[v]) m.emplace_back(static_cast<VarId>(v), static_cast<std::uint32_t>(alpha[v]));
  return m;
}

}  // namespace

Subspace filtered_symbol(const JetSpace& space, int k, int l, const std::vector<LieField>& fields) {
  const std::size_t N = space.dim(k);
  const TensorShape amb(static_cast<int>(N), l, 0, static_cast<int>(N));

  // Columns of degree < l go first, so echelon rows pivoting in the degree-l
  // block are exactly the fields whose lower-order jet vanishes.
  std::map<std::pair<Monomial, std::uint32_t>, std::uint32_t> low;
  for (const auto& X : fields) {
    if (X.k != k || !(X.space == space)) throw Error(ErrorCode::AmbientMismatch, "field on the wrong jet space");
    for (std::uint32_t c = 0; c < N; ++c)
      for (const auto& [m, x] : X.coefficients[c].terms())
        if (monomial_degree(m) < l) low.emplace(std::make_pair(m, c), 0);
  }
  std::uint32_t next = 0;
  for (auto& [key, col] : low) col = next++;
  const std::uint32_t off = next;

  std::vector<SparseVec> rows;
  rows.reserve(fields.size());
  for (const auto& X : fields) {
    std::vector<std::pair<std::uint32_t, Rational>> terms;
    for (std::uint32_t c = 0; c < N; ++c) {
      for (const auto& [m, x] : X.coefficients[c].terms()) {
        int d = monomial_degree(m);
        if (d < l) {
          terms.emplace_back(low.at({m, c}), x);
        } else if (d == l) {
          MultiIndex alpha(N, 0);
          for (const auto& [v, e] : m) alpha[v] = static_cast<int>(e);
          terms.emplace_back(off + static_cast<std::uint32_t>(amb.index(sym_rank(alpha), 0, static_cast<int>(c))), x);
        }
      }
    }
    rows.push_back(combine(std::move(terms)));
  }
  Echelon e = rref(rows, off + amb.dim());
  Echelon top;
  for (std::size_t i = 0; i < e.rows.size(); ++i) {
    if (e.pivots[i] < off) continue;
    SparseVec v = std::move(e.rows[i]);
    for (auto& t : v) t.first -= off;
    top.pivots.push_back(e.pivots[i] - off);
    top.rows.push_back(std::move(v));
  }
  return Subspace::from_echelon(amb, std::move(top));
}

std::size_t filtered_symbol_dim(const JetSpace& space, int k, int l, const std::vector<LieField>& fields) {
  return filtered_symbol(space, k, l, fields).dim();
}

std::vector<LieField> generating_fields(LiftKind kind, const JetSpace& space, int k, int cutoff, bool allow_r1) {
  std::vector<LieField> out;
  const int n = space.n(), r = space.r();
  if (kind == LiftKind::Point) {
    const int vars = n + r;
    for (int d = 0; d <= cutoff; ++d) {
      for (const auto& alpha : sym_basis(vars, d)) {
        JetPolynomial mono = JetPolynomial::monomial(space, to_monomial(alpha));
        for (int t = 0; t < vars; ++t) {
          std::vector<JetPolynomial> a(n, JetPolynomial(space)), b(r, JetPolynomial(space));
          (t < n ? a[t] : b[t - n]) = mono;
          out.push_back(prolong_point(space, a, b, k, allow_r1));
        }
      }
    }
  } else {
    const int vars = static_cast<int>(space.dim(1));
    for (int d = 0; d <= cutoff; ++d)
      for (const auto& alpha : sym_basis(vars, d))
        out.push_back(prolong_contact(space, JetPolynomial::monomial(space, to_monomial(alpha)), k));
  }
  return out;
}

OracleResult symbol_oracle(LiftKind kind, int n, int r, int k, int l, bool allow_r1) {
  if (l < 0) throw Error(ErrorCode::DegreeUnderflow, "negative symbol degree");
  JetSpace space(n, r);
  const int first = l + k + 1;
  std::size_t prev = filtered_symbol_dim(space, k, l, generating_fields(kind, space, k, first, allow_r1));
  for (int cutoff = first + 1; cutoff <= first + 4; ++cutoff) {
    std::size_t cur = filtered_symbol_dim(space, k, l, generating_fields(kind, space, k, cutoff, allow_r1));
    if (cur == prev) return {cur, cutoff - 1};
    prev = cur;
  }
  throw Error(ErrorCode::CapExceeded, "symbol oracle did not saturate");
}

}  // namespace spencer::jet
