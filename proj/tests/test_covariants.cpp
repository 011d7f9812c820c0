#include <doctest.h>

#include <random>
#include <string>

#include "spencer/covariants.hpp"

using namespace spencer;
using namespace spencer::cov;
using catalog::PseudogroupSpec;

namespace {

std::size_t C(long n, long k) {
  if (k < 0 || k > n) return 0;
  std::size_t r = 1;
  for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::size_t P(int v, int d) { return d < 0 ? 0 : C(v + d - 1, d); }

VectorList random_tau(int m, int n, unsigned seed) {
  std::mt19937 gen(seed);
  for (;;) {
    VectorList t(n, std::vector<Rational>(m));
    for (auto& row : t)
      for (auto& x : row) x = static_cast<long>(gen() % 7) - 3;
    std::vector<SparseVec> rows;
    for (auto& row : t) rows.push_back(from_dense(row));
    if (rank(rows, m) == static_cast<std::size_t>(n)) return t;
  }
}

FlagContext coordinate(int m, int n) {
  VectorList t(n, std::vector<Rational>(m));
  for (int i = 0; i < n; ++i) t[i][i] = 1;
  return FlagContext(m, t);
}

}  // namespace

TEST_CASE("sigma is the kernel of lambda") {
  CHECK(sigma(coordinate(2, 1), 1).dim() == 3);
  CHECK(sigma(coordinate(3, 2), 2).dim() == 15);
  for (int m = 2; m <= 5; ++m)
    for (int n = 1; n < m; ++n)
      for (int l = 1; l <= (m <= 3 ? 4 : 2); ++l) {
        for (unsigned seed : {0u, 1u}) {
          FlagContext ctx = seed == 0 ? coordinate(m, n) : FlagContext(m, random_tau(m, n, seed + m * 10 + n));
          INFO("m=" << m << " n=" << n << " l=" << l << " seed=" << seed);
          LinearMap lam = lambda_map(ctx, l);
          Subspace sig = sigma(ctx, l);
          CHECK(sig.dim() == m * P(m, l) - (m - n) * P(n, l));
          CHECK(kernel(lam) == sig);
          CHECK(image_rank(lam, Subspace::full(lam.domain)) == lambda_codomain(ctx, l).dim());
        }
      }
}

TEST_CASE("lambda kills values tangent to tau") {
  FlagContext ctx(3, {{1, 1, 0}});
  LinearMap lam = lambda_map(ctx, 2);
  TensorShape s = lam.domain;
  for (std::size_t a = 0; a < s.sym_count(); ++a) {
    SparseVec v = combine({{static_cast<std::uint32_t>(s.index(a, 0, 0)), Rational(1)},
                           {static_cast<std::uint32_t>(s.index(a, 0, 1)), Rational(1)}});
    CHECK(lam.apply(v).empty());
  }
}

TEST_CASE("flag context") {
  CHECK_THROWS_AS(FlagContext(3, {{1, 0, 0}, {2, 0, 0}}), Error);
  CHECK_THROWS_AS(FlagContext(2, {{1, 0}, {0, 1}}), Error);
  CHECK_THROWS_AS(FlagContext(2, {}), Error);
  FlagContext ctx(3, {{1, 2, 0}});
  CHECK(ctx.annihilator().size() == 2);
  for (const auto& a : ctx.annihilator()) CHECK(a[0] + 2 * a[1] == 0);
  CHECK(ctx.nu_columns().size() == 2);
  CHECK(ctx.project({{0, 1}, {1, 2}}) == std::vector<Rational>{0, 0});

  auto symp = PseudogroupSpec::parse("symplectic:2n=4");
  CHECK(named_flag(symp, "omega-nondegenerate").n() == 2);
  CHECK(named_flag(symp, "lagrangian").n() == 2);
  CHECK_THROWS_AS(named_flag(symp, "lagrangian", 3), Error);
  CHECK_THROWS_AS(named_flag(symp, "no-such-stratum"), Error);
  CHECK(named_flag(PseudogroupSpec::parse("general:m=4"), "coordinate").n() == 3);
}

TEST_CASE("covariant reports") {
  auto spec = PseudogroupSpec::parse("general:m=3");
  for (int n = 1; n <= 2; ++n) {
    FlagContext ctx = coordinate(3, n);
    SymbolicSystem h = full_equation(ctx);
    for (int l = 1; l <= 3; ++l) {
      Subspace gl = catalog::symbol(spec, l);
      CovariantReport rep = covariants(ctx, gl, h.grade(l));
      CHECK(rep.dim_O == 0);
      CHECK(rep.transversal);
      CHECK(rep.dim_g == rep.dim_stationary + rep.dim_lambda_image);
      CHECK(rep.dim_h == rep.dim_lambda_image + rep.dim_O);
      CHECK(rep.dim_necessary_ok);
      CHECK(rep.dim_stationary == stationary(ctx, gl).dim());
    }
  }
  FlagContext ctx = coordinate(3, 2);
  SymbolicSystem zero = SymbolicSystem::zero(2, 1);
  try {
    covariants(ctx, catalog::symbol(spec, 2), zero.grade(2));
    FAIL("expected EquationNotInvariant");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EquationNotInvariant);
  }
}

TEST_CASE("isometry covariants are the full jet space") {
  auto spec = PseudogroupSpec::parse("isometry:n=3");
  for (int n = 1; n <= 2; ++n) {
    FlagContext ctx = coordinate(3, n);
    SymbolicSystem h = full_equation(ctx);
    for (int l = 2; l <= 4; ++l) {
      CovariantReport rep = covariants(ctx, catalog::symbol(spec, l), h.grade(l));
      CHECK(rep.dim_O == (3 - n) * P(n, l));
    }
    CHECK(covariants(ctx, catalog::symbol(spec, 1), h.grade(1)).dim_O == 0);
  }
}

TEST_CASE("dimensional tests") {
  for (int m = 2; m <= 4; ++m)
    for (int r = 1; r < m; ++r)
      for (int l = 1; l <= 5; ++l) {
        DimTrans d = dim_trans(PseudogroupSpec::parse("general:m=" + std::to_string(m)), r, l);
        CHECK(d.lhs == m * P(m, l));
        CHECK(d.rhs == r * P(m - r, l));
        CHECK(d.holds());
      }
  DimTrans c = dim_trans(PseudogroupSpec::parse("complex:n=2"), 1, 10);
  CHECK(c.lhs == 44);
  CHECK(c.rhs == 66);
  CHECK_FALSE(c.holds());
  TensorShape s(2, 1, 0, 1);
  CHECK(dim_necessary(Subspace::full(s), Subspace::full(s)));
  CHECK_FALSE(dim_necessary(Subspace::zero(s), Subspace::full(s)));
}

TEST_CASE("row complexes") {
  auto spec = PseudogroupSpec::parse("general:m=3");
  FlagContext ctx = coordinate(3, 2);
  SymbolicSystem g = catalog::system(spec, 3);
  SymbolicSystem h = full_equation(ctx);
  for (int l = 1; l <= 3; ++l) CHECK(h_row_space(ctx, g, l, 0) == stationary(ctx, g.grade(l)));
  for (int l = 1; l <= 3; ++l)
    for (int s = 0; s <= std::min(l, 2); ++s) {
      CHECK(h_g_cohomology(ctx, g, l, s) == 0);
      if (l - s >= 1) CHECK(O_cohomology(ctx, g, h, l, s) == 0);
    }
  SymbolicSystem gz = SymbolicSystem::zero(3, 3);
  for (int l = 1; l <= 3; ++l) CHECK(h_row_space(ctx, gz, l, 1).dim() == 0);
  for (int i = 1; i <= 3; ++i)
    for (int j = 0; j <= 2; ++j) {
      INFO("i=" << i << " j=" << j);
      // Only the tau-constant part S^i(Ann) (x) V survives, in form degree 0.
      CHECK(h_tau_cohomology(ctx, g, i, j) == (j == 0 ? 3 * P(1, i) : 0));
    }
}

TEST_CASE("transversality scan of the general pseudogroup") {
  auto spec = PseudogroupSpec::parse("general:m=3");
  FlagContext ctx = coordinate(3, 1);
  ScanResult sr = transversality_scan(ctx, catalog::system(spec, 3), full_equation(ctx), 3);
  REQUIRE(sr.reports.size() == 3);
  for (const auto& r : sr.reports) CHECK(r.transversal);
  CHECK(sr.consequence_holds);
}
