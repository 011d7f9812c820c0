#include <doctest.h>

#include <algorithm>
#include <random>

#include "spencer/exactla.hpp"

using namespace spencer;

namespace {

using Dense = std::vector<std::vector<Rational>>;

// Textbook Gauss-Jordan on dense rationals.
Dense naive_rref(Dense a, std::size_t ncols) {
  std::size_t row = 0;
  for (std::size_t c = 0; c < ncols && row < a.size(); ++c) {
    std::size_t p = row;
    while (p < a.size() && a[p][c] == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[row]);
    Rational inv = 1 / a[row][c];
    for (auto& x : a[row]) x *= inv;
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (r == row || a[r][c] == 0) continue;
      Rational f = a[r][c];
      for (std::size_t k = 0; k < ncols; ++k) a[r][k] -= f * a[row][k];
    }
    ++row;
  }
  a.resize(row);
  return a;
}

std::vector<SparseVec> random_rows(std::mt19937& gen, std::size_t nrows, std::size_t ncols, double density) {
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<int> num(-7, 7), den(1, 5);
  std::vector<SparseVec> rows(nrows);
  for (auto& r : rows)
    for (std::size_t c = 0; c < ncols; ++c)
      if (u(gen) < density) {
        Rational q(num(gen), den(gen));
        q.canonicalize();
        if (q != 0) r.emplace_back(static_cast<std::uint32_t>(c), q);
      }
  return rows;
}

Subspace random_subspace(std::mt19937& gen, std::size_t n, std::size_t k) {
  return Subspace::span(TensorShape::plain(static_cast<int>(n)), random_rows(gen, k, n, 0.3));
}

}  // namespace

TEST_CASE("symmetric basis order") {
  auto b = sym_basis(2, 3);
  REQUIRE(b.size() == 4);
  CHECK(b[0] == MultiIndex{3, 0});
  CHECK(b[1] == MultiIndex{2, 1});
  CHECK(b[2] == MultiIndex{1, 2});
  CHECK(b[3] == MultiIndex{0, 3});
  CHECK(sym_basis(1, 5) == std::vector<MultiIndex>{{5}});
  CHECK(sym_basis(3, 2).size() == 6);
  for (int n = 1; n <= 4; ++n)
    for (int d = 0; d <= 5; ++d) {
      auto basis = sym_basis(n, d);
      CHECK(basis.size() == sym_dim(n, d));
      for (std::size_t i = 0; i < basis.size(); ++i) CHECK(sym_rank(basis[i]) == i);
      CHECK(std::is_sorted(basis.begin(), basis.end(), std::greater<>()));
    }
}

TEST_CASE("wedge basis order") {
  auto w = wedge_basis(4, 2);
  REQUIRE(w.size() == 6);
  CHECK(w.front() == WedgeIndex{0, 1});
  CHECK(w.back() == WedgeIndex{2, 3});
  CHECK(wedge_basis(3, 0).size() == 1);
  CHECK(wedge_basis(2, 3).empty());
  for (int k = 0; k <= 5; ++k)
    for (int e = 0; e <= k; ++e) {
      auto basis = wedge_basis(k, e);
      CHECK(std::is_sorted(basis.begin(), basis.end()));
      for (std::size_t i = 0; i < basis.size(); ++i) CHECK(wedge_rank(basis[i], k) == i);
    }
}

TEST_CASE("tensor shape indexing") {
  TensorShape s(3, 2, 1, 2);
  CHECK(s.dim() == 6 * 3 * 2);
  CHECK(s.index(0, 0, 0) == 0);
  CHECK(s.index(0, 0, 1) == 1);
  CHECK(s.index(0, 1, 0) == 2);
  CHECK(s.index(1, 0, 0) == 6);
  TensorShape t(4, 1, 2, 1, 2);
  CHECK(t.dim() == 4 * 1 * 1);
}

TEST_CASE("rref small examples") {
  auto id = rref({{{0, 1}}, {{1, 1}}, {{2, 1}}}, 3);
  CHECK(id.rank() == 3);
  CHECK(rref({{}, {}}, 2).rank() == 0);
  auto e = rref({{{0, 1}, {1, 2}}, {{0, 2}, {1, 4}}}, 2);
  REQUIRE(e.rank() == 1);
  CHECK(e.rows[0] == SparseVec{{0, 1}, {1, 2}});
}

TEST_CASE("rref matches dense Gauss-Jordan and the serial reference") {
  std::mt19937 gen(7);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t nr = 1 + gen() % 30, nc = 1 + gen() % 30;
    auto rows = random_rows(gen, nr, nc, 0.25 + 0.5 * (trial % 2));
    Echelon par = rref(rows, nc);
    Echelon ser = rref_serial(rows, nc);
    CHECK(par.rows == ser.rows);
    CHECK(par.pivots == ser.pivots);
    Dense dense;
    for (const auto& r : rows) dense.push_back(to_dense(r, nc));
    Dense expect = naive_rref(dense, nc);
    REQUIRE(expect.size() == par.rank());
    for (std::size_t i = 0; i < expect.size(); ++i) CHECK(to_dense(par.rows[i], nc) == expect[i]);
    CHECK(rank(rows, nc) == expect.size());
    for (std::size_t i = 0; i < par.rank(); ++i) {
      CHECK(par.rows[i].front().first == par.pivots[i]);
      CHECK(par.rows[i].front().second == 1);
      for (std::size_t j = 0; j < par.rank(); ++j) {
        if (i == j) continue;
        auto it = std::find_if(par.rows[j].begin(), par.rows[j].end(), [&](const auto& t) { return t.first == par.pivots[i]; });
        CHECK(it == par.rows[j].end());
      }
    }
  }
}

TEST_CASE("large parallel elimination is bit-identical to serial") {
  std::mt19937 gen(11);
  auto rows = random_rows(gen, 300, 200, 0.05);
  Echelon a = rref(rows, 200), b = rref_serial(rows, 200);
  CHECK(a.rows == b.rows);
  CHECK(a.pivots == b.pivots);
}

TEST_CASE("canonical form ignores generator order") {
  std::mt19937 gen(3);
  auto rows = random_rows(gen, 12, 20, 0.3);
  auto shuffled = rows;
  std::shuffle(shuffled.begin(), shuffled.end(), gen);
  TensorShape s = TensorShape::plain(20);
  CHECK(Subspace::span(s, rows) == Subspace::span(s, shuffled));
}

TEST_CASE("rows are reproduced by the echelon basis") {
  std::mt19937 gen(5);
  auto rows = random_rows(gen, 15, 25, 0.3);
  Subspace s = Subspace::span(TensorShape::plain(25), rows);
  for (const auto& r : rows) CHECK(s.reduce(r).empty());
}

TEST_CASE("subspace operations") {
  const TensorShape plane = TensorShape::plain(2);
  Subspace x = Subspace::span(plane, {{{0, 1}}});
  Subspace y = Subspace::span(plane, {{{1, 1}}});
  CHECK(subspace_sum(x, y).dim() == 2);
  CHECK(subspace_intersect(x, y).dim() == 0);
  CHECK(subspace_intersect(x, Subspace::full(plane)) == x);

  LinearMap f(TensorShape::plain(3), plane);
  f.columns[0] = {{0, 1}};
  f.columns[1] = {{0, 1}, {1, 1}};
  CHECK(preimage(f, Subspace::full(plane)) == Subspace::full(TensorShape::plain(3)));
  CHECK(kernel(f).dim() == 1);
  CHECK(kernel(f).contains(SparseVec{{2, 1}}));
  CHECK(preimage(f, x).dim() == 2);
  CHECK(image(f, Subspace::full(TensorShape::plain(3))).dim() == 2);
  CHECK(quotient_dim(Subspace::full(plane), x) == 1);
  CHECK_THROWS_AS(quotient_dim(x, y), Error);
  CHECK_THROWS_AS(subspace_sum(x, Subspace::zero(TensorShape::plain(3))), Error);
}

TEST_CASE("Grassmann identity on random subspaces") {
  std::mt19937 gen(2024);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = 2 + gen() % 39;
    Subspace a = random_subspace(gen, n, gen() % (n + 1));
    Subspace b = random_subspace(gen, n, gen() % (n + 1));
    Subspace i = subspace_intersect(a, b);
    CHECK(subspace_sum(a, b).dim() + i.dim() == a.dim() + b.dim());
    CHECK(a.contains(i));
    CHECK(b.contains(i));
  }
}

TEST_CASE("kernel_within and preimage agree with definitions") {
  std::mt19937 gen(99);
  for (int trial = 0; trial < 15; ++trial) {
    int n = 3 + gen() % 10, m = 2 + gen() % 10;
    LinearMap f(TensorShape::plain(n), TensorShape::plain(m));
    auto cols = random_rows(gen, n, m, 0.4);
    f.columns = cols;
    Subspace s = random_subspace(gen, n, gen() % (n + 1));
    Subspace k = kernel_within(f, s);
    CHECK(k == subspace_intersect(kernel(f), s));
    for (const auto& v : k.basis()) CHECK(f.apply(v).empty());
    Subspace t = random_subspace(gen, m, gen() % (m + 1));
    Subspace p = preimage(f, t);
    for (const auto& v : p.basis()) CHECK(t.contains(f.apply(v)));
    CHECK(p.dim() == kernel(f).dim() + subspace_intersect(image(f, Subspace::full(f.domain)), t).dim());
  }
}

TEST_CASE("tensor with forms") {
  Subspace u = Subspace::span(TensorShape(2, 1, 0, 1), {{{0, 1}, {1, 1}}});
  Subspace w = Subspace::full(TensorShape(2, 0, 1, 1));
  Subspace t = tensor_with_forms(u, w);
  CHECK(t.ambient() == TensorShape(2, 1, 1, 1));
  CHECK(t.dim() == 2);
  CHECK(t == Subspace::span(t.ambient(), t.basis()));
}
