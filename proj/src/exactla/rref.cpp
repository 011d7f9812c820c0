#include <algorithm>
#include <cstdint>
#include <numeric>

#include "spencer/exactla.hpp"

namespace spencer {
namespace {

using IntRow = std::vector<std::pair<std::uint32_t, Integer>>;

// Divides out the content and makes the leading entry positive.
void make_primitive(IntRow& row) {
  if (row.empty()) return;
  Integer g = 0;
  for (const auto& e : row) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e.second.get_mpz_t());
    if (g == 1) break;
  }
  if (sgn(row.front().second) < 0) g = -g;
  if (g != 1)
    for (auto& e : row) mpz_divexact(e.second.get_mpz_t(), e.second.get_mpz_t(), g.get_mpz_t());
}

IntRow to_integer_row(const SparseVec& v) {
  IntRow row;
  row.reserve(v.size());
  Integer l = 1;
  for (const auto& e : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), e.second.get_den_mpz_t());
  for (const auto& e : v) {
    if (sgn(e.second) == 0) continue;
    Integer x = e.second.get_num() * (l / e.second.get_den());
    row.emplace_back(e.first, std::move(x));
  }
  make_primitive(row);
  return row;
}

const Integer* entry_at(const IntRow& row, std::uint32_t col) {
  auto it = std::lower_bound(row.begin(), row.end(), col,
                             [](const auto& e, std::uint32_t c) { return e.first < c; });
  if (it == row.end() || it->first != col) return nullptr;
  return &it->second;
}

// target <- (a/g) target - (b/g) pivot, where a = pivot[col], b = target[col].
void eliminate(IntRow& target, const IntRow& pivot, std::uint32_t col) {
  const Integer* bp = entry_at(target, col);
  if (!bp) return;
  const Integer* ap = entry_at(pivot, col);
  Integer g;
  mpz_gcd(g.get_mpz_t(), ap->get_mpz_t(), bp->get_mpz_t());
  Integer sa = *ap / g;
  Integer sb = *bp / g;
  IntRow out;
  out.reserve(target.size() + pivot.size());
  std::size_t i = 0, j = 0;
  Integer v;
  while (i < target.size() || j < pivot.size()) {
    if (j == pivot.size() || (i < target.size() && target[i].first < pivot[j].first)) {
      out.emplace_back(target[i].first, sa * target[i].second);
      ++i;
    } else if (i == target.size() || pivot[j].first < target[i].first) {
      out.emplace_back(pivot[j].first, -sb * pivot[j].second);
      ++j;
    } else {
      v = sa * target[i].second - sb * pivot[j].second;
      if (sgn(v) != 0) out.emplace_back(target[i].first, v);
      ++i;
      ++j;
    }
  }
  make_primitive(out);
  target = std::move(out);
}

template <bool Parallel>
void eliminate_all(std::vector<IntRow>& rows, const std::vector<std::size_t>& targets, const IntRow& pivot,
                   std::uint32_t col) {
  const long nt = static_cast<long>(targets.size());
  if constexpr (Parallel) {
#pragma omp parallel for schedule(dynamic, 4) if (nt > 8)
    for (long t = 0; t < nt; ++t) eliminate(rows[targets[t]], pivot, col);
  } else {
    for (long t = 0; t < nt; ++t) eliminate(rows[targets[t]], pivot, col);
  }
}

// Forward elimination. Returns the pivot rows ordered by pivot column.
template <bool Parallel>
std::vector<IntRow> forward(const std::vector<SparseVec>& input, std::size_t ncols) {
  std::vector<IntRow> rows;
  rows.reserve(input.size());
  for (const auto& v : input) {
    for (const auto& e : v)
      if (e.first >= ncols) throw Error(ErrorCode::ShapeMismatch, "row entry beyond column count");
    IntRow r = to_integer_row(v);
    if (!r.empty()) rows.push_back(std::move(r));
  }
  std::vector<std::size_t> active(rows.size());
  std::iota(active.begin(), active.end(), 0);
  std::vector<IntRow> pivots;
  std::vector<std::size_t> candidates;
  while (!active.empty()) {
    std::uint32_t lead = rows[active.front()].front().first;
    for (std::size_t idx : active) lead = std::min(lead, rows[idx].front().first);
    candidates.clear();
    std::size_t best = rows.size();
    for (std::size_t idx : active) {
      if (rows[idx].front().first != lead) continue;
      if (best == rows.size() || rows[idx].size() < rows[best].size()) best = idx;
      candidates.push_back(idx);
    }
    candidates.erase(std::find(candidates.begin(), candidates.end(), best));
    eliminate_all<Parallel>(rows, candidates, rows[best], lead);
    pivots.push_back(std::move(rows[best]));
    std::erase_if(active, [&](std::size_t idx) { return idx == best || rows[idx].empty(); });
  }
  return pivots;
}

template <bool Parallel>
Echelon rref_impl(const std::vector<SparseVec>& input, std::size_t ncols) {
  std::vector<IntRow> piv = forward<Parallel>(input, ncols);
  const std::size_t r = piv.size();
  std::vector<std::size_t> above;
  for (std::size_t k = r; k-- > 0;) {
    std::uint32_t col = piv[k].front().first;
    above.clear();
    for (std::size_t i = 0; i < k; ++i)
      if (entry_at(piv[i], col)) above.push_back(i);
    eliminate_all<Parallel>(piv, above, piv[k], col);
  }
  Echelon out;
  out.rows.resize(r);
  out.pivots.resize(r);
  for (std::size_t k = 0; k < r; ++k) {
    const Integer lead = piv[k].front().second;
    out.pivots[k] = piv[k].front().first;
    SparseVec& dst = out.rows[k];
    dst.reserve(piv[k].size());
    for (auto& [c, x] : piv[k]) {
      Rational q(x, lead);
      q.canonicalize();
      dst.emplace_back(c, std::move(q));
    }
  }
  return out;
}

}  // namespace

Echelon rref(const std::vector<SparseVec>& rows, std::size_t ncols) { return rref_impl<true>(rows, ncols); }

Echelon rref_serial(const std::vector<SparseVec>& rows, std::size_t ncols) {
  return rref_impl<false>(rows, ncols);
}

std::size_t rank(const std::vector<SparseVec>& rows, std::size_t ncols) {
  return forward<true>(rows, ncols).size();
}

}  // namespace spencer
