// Acceptance suite. One PASS/FAIL line per criterion; exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "spencer/catalog.hpp"
#include "spencer/covariants.hpp"
#include "spencer/jetcalc.hpp"
#include "spencer/symbolic.hpp"

using namespace spencer;
using catalog::PseudogroupSpec;
using cov::FlagContext;

namespace {

std::size_t C(long n, long k) {
  if (k < 0 || k > n) return 0;
  std::size_t r = 1;
  for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::size_t P(int v, int d) { return d < 0 ? 0 : C(v + d - 1, d); }

struct Outcome {
  bool ok = true;
  std::ostringstream detail;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail << "first failure: " << what << "; ";
    ok = ok && cond;
  }
};

int failures = 0;

void criterion(int id, const std::string& name, const std::function<void(Outcome&)>& body) {
  Outcome out;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.ok = false;
    out.detail << "exception: " << e.what();
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!out.ok) ++failures;
  std::printf("[%s] C%d %s (%.1fs) %s\n", out.ok ? "PASS" : "FAIL", id, name.c_str(), secs, out.detail.str().c_str());
  std::fflush(stdout);
}

VectorList random_tau(int m, int n, std::mt19937& gen) {
  for (;;) {
    VectorList t(n, std::vector<Rational>(m));
    std::vector<SparseVec> rows;
    for (auto& row : t) {
      for (auto& x : row) x = static_cast<long>(gen() % 7) - 3;
      rows.push_back(from_dense(row));
    }
    if (rank(rows, m) == static_cast<std::size_t>(n)) return t;
  }
}

FlagContext coordinate(int m, int n) {
  VectorList t(n, std::vector<Rational>(m));
  for (int i = 0; i < n; ++i) t[i][i] = 1;
  return FlagContext(m, t);
}

std::string tag(const std::string& g, int l) { return g + " l=" + std::to_string(l); }

std::size_t covariant_dim(const FlagContext& ctx, const PseudogroupSpec& spec, int l) {
  cov::CovariantReport r = cov::covariants(ctx, catalog::symbol(spec, l), cov::full_equation(ctx).grade(l));
  return r.dim_O;
}

void delta_lemma(Outcome& o) {
  int cells = 0;
  for (int m = 1; m <= 4; ++m)
    for (int w = 1; w <= 4; ++w) {
      SymbolicSystem g = SymbolicSystem::full(m, w);
      for (int i = 1; i <= 5; ++i)
        for (int j = 0; j <= m; ++j, ++cells)
          o.require(spencer_H(g, i, j) == 0,
                    "m=" + std::to_string(m) + " W=" + std::to_string(w) + " i=" + std::to_string(i) + " j=" + std::to_string(j));
    }
  o.detail << cells << " cells zero";
}

void general_group(Outcome& o) {
  std::mt19937 gen(2024);
  int flags = 0;
  for (int m = 2; m <= 4; ++m) {
    auto spec = PseudogroupSpec::parse("general:m=" + std::to_string(m));
    SymbolicSystem g = catalog::system(spec, 5);
    for (int n = 1; n < m; ++n)
      for (int variant = 0; variant < 2; ++variant, ++flags) {
        FlagContext ctx = variant == 0 ? coordinate(m, n) : FlagContext(m, random_tau(m, n, gen));
        SymbolicSystem h = cov::full_equation(ctx);
        for (int l = 1; l <= 5; ++l) {
          o.require(covariant_dim(ctx, spec, l) == 0, tag(spec.to_string(), l) + " O != 0");
          for (int s = 0; s <= n && s < l; ++s)
            o.require(cov::O_cohomology(ctx, g, h, l, s) == 0, tag(spec.to_string(), l) + " O-row s=" + std::to_string(s));
        }
      }
  }
  o.detail << flags << " flags, l <= 5";
}

void symplectic_group(Outcome& o) {
  for (int n2 : {2, 4, 6}) {
    auto spec = PseudogroupSpec::parse("symplectic:2n=" + std::to_string(n2));
    for (int d = 1; d < n2; ++d) {
      FlagContext ctx = cov::named_flag(spec, "omega-nondegenerate", d);
      for (int l = 1; l <= 4; ++l)
        o.require(covariant_dim(ctx, spec, l) == 0, tag(spec.to_string(), l) + " dim tau=" + std::to_string(d));
    }
  }
  auto spec = PseudogroupSpec::parse("symplectic:2n=4");
  std::size_t lag = covariant_dim(cov::named_flag(spec, "lagrangian", 2), spec, 1);
  o.require(lag >= 1, "lagrangian O^1 = 0");
  o.detail << "lagrangian 2n=4 O^1=" << lag;
}

void contact_group(Outcome& o) {
  for (int m : {3, 5}) {
    auto spec = PseudogroupSpec::parse("contact:m=" + std::to_string(m));
    for (int d = 1; d < m; ++d) {
      FlagContext ctx = cov::named_flag(spec, "transversal-to-contact-plane", d);
      for (int l = 1; l <= 3; ++l)
        o.require(covariant_dim(ctx, spec, l) == 0, tag(spec.to_string(), l) + " dim tau=" + std::to_string(d));
    }
  }
  auto spec = PseudogroupSpec::parse("contact:m=3");
  std::size_t inside = covariant_dim(cov::named_flag(spec, "inside-contact-plane", 1), spec, 1);
  o.require(inside >= 1, "inside-contact-plane O^1 = 0");
  o.detail << "inside-contact-plane m=3 O^1=" << inside;
}

void isometry_group(Outcome& o) {
  std::mt19937 gen(7);
  int flags = 0;
  for (int m : {2, 3}) {
    auto spec = PseudogroupSpec::parse("isometry:n=" + std::to_string(m));
    for (int n = 1; n < m; ++n)
      for (int variant = 0; variant < 2; ++variant, ++flags) {
        FlagContext ctx = variant == 0 ? coordinate(m, n) : FlagContext(m, random_tau(m, n, gen));
        o.require(covariant_dim(ctx, spec, 1) == 0, tag(spec.to_string(), 1));
        for (int l = 2; l <= 4; ++l)
          o.require(covariant_dim(ctx, spec, l) == (m - n) * P(n, l), tag(spec.to_string(), l));
      }
  }
  o.detail << flags << " flags, l <= 4";
}

void complex_group(Outcome& o) {
  auto spec = PseudogroupSpec::parse("complex:n=2");
  FlagContext real = cov::named_flag(spec, "totally-real");
  for (int l = 1; l <= 3; ++l) o.require(covariant_dim(real, spec, l) == 0, "totally-real " + tag("", l));
  FlagContext jline = cov::named_flag(spec, "j-line");
  std::size_t o1 = covariant_dim(jline, spec, 1), o2 = covariant_dim(jline, spec, 2);
  o.require(o1 + o2 > 0, "j-line O vanishes for l <= 2");
  o.detail << "j-line O^1=" << o1 << " O^2=" << o2;
}

void dim_trans_tables(Outcome& o) {
  int rows = 0;
  for (int n = 1; n <= 3; ++n) {
    auto symp = PseudogroupSpec::parse("symplectic:2n=" + std::to_string(2 * n));
    auto cont = PseudogroupSpec::parse("contact:m=" + std::to_string(2 * n + 1));
    for (int l = 1; l <= 10; ++l) {
      for (int r = 1; r < 2 * n; ++r, ++rows) {
        cov::DimTrans d = cov::dim_trans(symp, r, l);
        o.require(d.lhs == P(2 * n, l + 1) && d.rhs == r * P(2 * n - r, l), "symplectic values");
        o.require(d.holds(), "symplectic inequality");
      }
      for (int r = 1; r < 2 * n + 1; ++r, ++rows) {
        cov::DimTrans d = cov::dim_trans(cont, r, l);
        o.require(d.lhs == P(2 * n + 1, l + 1) && d.rhs == r * P(2 * n + 1 - r, l), "contact values");
        o.require(d.holds(), "contact inequality");
      }
    }
  }
  cov::DimTrans c = cov::dim_trans(PseudogroupSpec::parse("complex:n=2"), 1, 10);
  o.require(c.lhs == 44 && c.rhs == 66 && !c.holds(), "complex (2,1,10)");
  o.detail << rows << " rows; complex (2,1,10): " << c.lhs << " vs " << c.rhs;
}

void oracle_grid(Outcome& o) {
  int cells = 0;
  for (int n = 1; n <= 2; ++n)
    for (int r = 1; r <= 2; ++r)
      for (int k = 0; k <= 2; ++k)
        for (int l = 1; l <= 3; ++l, ++cells) {
          std::size_t f = catalog::point_lie_dim(n, r, k, l, true).total();
          std::size_t d = jet::symbol_oracle(jet::LiftKind::Point, n, r, k, l, true).dim;
          std::ostringstream w;
          w << "point (" << n << "," << r << "," << k << "," << l << ") " << f << " vs " << d;
          o.require(f == d, w.str());
        }
  for (int k = 1; k <= 2; ++k)
    for (int l = 1; l <= 3; ++l, ++cells) {
      std::size_t f = catalog::contact_lie_dim(1, k, l);
      std::size_t d = jet::symbol_oracle(jet::LiftKind::Contact, 1, 1, k, l).dim;
      o.require(f == d, "contact k=" + std::to_string(k) + " l=" + std::to_string(l));
    }
  o.detail << cells << " cells";
}

// Ratio must approach 1 monotonically on [10, 25] and sit in [0.8, 1.2] at 25.
bool asymptotic(const std::function<double(int)>& ratio, std::ostringstream& detail, const std::string& label) {
  bool mono = true;
  for (int l = 10; l < 25; ++l) mono = mono && std::abs(ratio(l + 1) - 1) < std::abs(ratio(l) - 1);
  double end = ratio(25);
  bool band = end >= 0.8 && end <= 1.2;
  detail << label << " ratio(10)=" << ratio(10) << " ratio(25)=" << end << (mono ? " monotone" : " not monotone")
         << (band ? "" : " outside [0.8,1.2]") << "; ";
  return mono && band;
}

void asymptotics(Outcome& o) {
  // Point transformations on J^0 with n + r = 3; contact transformations on J^1 with n = 1.
  auto point = [](int l) { return catalog::point_lie_dim(1, 2, 0, l).total() / (3.0 * l * l / 2.0); };
  auto contact = [](int l) { return catalog::contact_lie_dim(1, 1, l) / (1.0 * l * l / 2.0); };
  o.detail.precision(5);
  bool a = asymptotic(point, o.detail, "point n0=3");
  bool b = asymptotic(contact, o.detail, "contact n1=3");
  o.require(a, "point");
  o.require(b, "contact");
}

struct Instance {
  const char* group;
  const char* stratum;
  int dim;
};

void covariant_rows(Outcome& o) {
  int verified = 0, nontrivial = 0;
  for (Instance in : {Instance{"isometry:n=3", "coordinate", 2}, Instance{"general:m=3", "coordinate", 2},
                      Instance{"symplectic:2n=4", "lagrangian", 2}, Instance{"complex:n=2", "j-line", 2},
                      Instance{"complex:n=2", "totally-real", 2}}) {
    auto spec = PseudogroupSpec::parse(in.group);
    FlagContext ctx = cov::named_flag(spec, in.stratum, in.dim);
    SymbolicSystem g = catalog::system(spec, 2);
    SymbolicSystem h = cov::full_equation(ctx);
    for (int l = 2; l <= 5; ++l)
      for (int s = 0; s + 2 <= ctx.n() && l - s - 2 >= 0; ++s) {
        cov::RowComparison c = cov::compare_covariant_rows(ctx, g, h, l, s);
        if (!c.hypotheses) continue;
        ++verified;
        if (c.lhs) ++nontrivial;
        o.require(c.lhs == c.rhs, std::string(in.group) + " " + in.stratum + " l=" + std::to_string(l));
      }
  }
  o.require(verified >= 5, "fewer than 5 instances");
  o.detail << verified << " instances with hypotheses verified, " << nontrivial << " nonzero";
}

void over_tau(Outcome& o) {
  int applicable = 0;
  std::mt19937 gen(3);
  auto spec = PseudogroupSpec::parse("complex:n=2");
  SymbolicSystem g = catalog::system(spec, 2);
  std::vector<FlagContext> flags = {cov::named_flag(spec, "totally-real")};
  // A generic 2-plane in C^2 is totally real.
  flags.emplace_back(4, random_tau(4, 2, gen));
  for (const auto& ctx : flags)
    for (int l = 1; l <= 4; ++l)
      for (int s = 0; s <= 2; ++s) {
        cov::TauComparison t = cov::compare_over_tau(ctx, g, l, s, 4);
        if (!t.applicable) continue;
        ++applicable;
        o.require(t.lhs == t.rhs, "l=" + std::to_string(l) + " s=" + std::to_string(s));
      }
  o.require(applicable >= 3, "fewer than 3 applicable instances");
  o.detail << applicable << " applicable instances";
}

jet::JetPolynomial random_poly(const jet::JetSpace& s, int order, std::mt19937& gen) {
  jet::JetPolynomial f(s);
  const auto N = static_cast<jet::VarId>(s.dim(order));
  f.add_term({}, Rational(static_cast<long>(gen() % 5) - 2));
  for (jet::VarId a = 0; a < N; ++a) {
    if (gen() % 2) f.add_term({{a, 1}}, Rational(static_cast<long>(gen() % 7) - 3));
    for (jet::VarId b = a; b < N; ++b) {
      if (gen() % 4) continue;
      jet::Monomial m = a == b ? jet::Monomial{{a, 2}} : jet::Monomial{{a, 1}, {b, 1}};
      f.add_term(m, Rational(static_cast<long>(gen() % 7) - 3));
    }
  }
  return f;
}

void jet_suite(Outcome& o) {
  std::mt19937 gen(12);
  // Total derivatives commute.
  for (auto [n, r] : {std::pair{2, 1}, std::pair{2, 2}, std::pair{3, 1}}) {
    jet::JetSpace s(n, r);
    for (int t = 0; t < 5; ++t) {
      jet::JetPolynomial f = random_poly(s, 2, gen);
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          o.require(jet::total_derivative(jet::total_derivative(f, i), j) ==
                        jet::total_derivative(jet::total_derivative(f, j), i),
                    "[D_i,D_j] != 0");
    }
  }
  // Cartan preservation and projectability for 20 fields.
  int fields = 0;
  for (int t = 0; t < 20; ++t, ++fields) {
    jet::LieField X, Xlow;
    if (t % 2 == 0) {
      jet::JetSpace s(1 + t % 4 / 2, 2);
      std::vector<jet::JetPolynomial> a, b;
      for (int i = 0; i < s.n(); ++i) a.push_back(random_poly(s, 0, gen));
      for (int j = 0; j < s.r(); ++j) b.push_back(random_poly(s, 0, gen));
      X = jet::prolong_point(s, a, b, 2);
      Xlow = jet::prolong_point(s, a, b, 1);
    } else {
      jet::JetSpace s(1 + t % 4 / 2, 1);
      jet::JetPolynomial phi = random_poly(s, 1, gen);
      X = jet::prolong_contact(s, phi, 2);
      Xlow = jet::prolong_contact(s, phi, 1);
    }
    o.require(X.drop_top() == Xlow, "projectability of field " + std::to_string(t));
    o.require(jet::cartan_preservation_check(X, 100, 1000 * t), "Cartan forms not preserved by field " + std::to_string(t));
  }
  // Tresse identities.
  jet::JetSpace s(2, 1);
  std::vector<jet::JetPolynomial> frame_fs = {jet::parse_polynomial(s, "x1 + u1^2"),
                                              jet::parse_polynomial(s, "x2*u1 + p[1,(1,0)]")};
  std::vector<jet::JetPolynomial> xs = {jet::JetPolynomial::variable(s, s.x(0)), jet::JetPolynomial::variable(s, s.x(1))};
  jet::JetPolynomial f = jet::parse_polynomial(s, "u1*p[1,(0,1)] - x1*x2^2");
  int points = 0;
  for (std::uint64_t seed = 1; points < 50; ++seed) {
    jet::JetPoint pt = jet::JetPoint::random(s, 3, seed);
    try {
      jet::TresseFrame frame(frame_fs, pt);
      for (int i = 0; i < 2; ++i) {
        auto d = jet::tresse(frame_fs[i], frame);
        o.require(d[i] == 1 && d[1 - i] == 0, "Tresse delta identity");
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SingularJacobian) throw;
      continue;
    }
    jet::TresseFrame xframe(xs, pt);
    auto d = jet::tresse(f, xframe);
    for (int i = 0; i < 2; ++i) o.require(d[i] == jet::total_derivative(f, i).evaluate(pt), "x-frame reduction");
    ++points;
  }
  o.detail << fields << " fields x 100 points, " << points << " Tresse points";
}

struct Run {
  int code = -1;
  std::string bytes;
};

Run run_cli(const std::string& args, const std::filesystem::path& out) {
  std::string cmd = std::string(SPENCER_CLI) + " " + args + " --out " + out.string() + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out, std::ios::binary);
  r.bytes.assign(std::istreambuf_iterator<char>(in), {});
  return r;
}

void determinism(Outcome& o) {
  auto dir = std::filesystem::temp_directory_path() / "spencer_acceptance";
  std::filesystem::create_directories(dir);
  auto polys = dir / "polys.json";
  std::ofstream(polys) << R"({"n":2,"r":1,"invariants":["x1 + u1^2","x2*u1 + p[1,(1,0)]"],"functions":["u1*p[1,(0,1)]"]})";
  std::vector<std::string> commands = {
      "symbols --group symplectic:2n=4 --l 1..4",
      "symbols --group contact:m=5 --l 1..3 --format csv",
      "cohomology --group isometry:n=3 --complex spencer --l 1..3",
      "cohomology --group complex:n=2 --flag totally-real --complex O-row --l 1..3",
      "covariants --group symplectic:2n=4 --flag lagrangian --l 1..3",
      "transversality --group contact:m=3 --flag transversal-to-contact-plane --l 1..3",
      "oracle --group point_lie:n=1,r=2,k=1 --l 1..3",
      "tresse --poly-file " + polys.string() + " --seed 17",
  };
  int idx = 0;
  for (const auto& c : commands) {
    Run a = run_cli(c, dir / ("a" + std::to_string(idx) + ".out"));
    Run b = run_cli(c, dir / ("b" + std::to_string(idx) + ".out"));
    o.require(a.code == 0 && b.code == 0, "exit code for: " + c);
    o.require(!a.bytes.empty() && a.bytes == b.bytes, "bytes differ for: " + c);
    ++idx;
  }
  o.detail << commands.size() << " commands run twice";
}

}  // namespace

int main() {
  criterion(1, "delta-lemma for full symbols", delta_lemma);
  criterion(2, "general pseudogroup: O = 0 and O-row acyclic", general_group);
  criterion(3, "symplectic covariants", symplectic_group);
  criterion(4, "contact covariants", contact_group);
  criterion(5, "isometry covariants", isometry_group);
  criterion(6, "complex covariants", complex_group);
  criterion(7, "dimensional necessary condition tables", dim_trans_tables);
  criterion(8, "jet-space symbol formulas against the oracle", oracle_grid);
  criterion(9, "symbol growth asymptotics", asymptotics);
  criterion(10, "covariant row cohomology against the (h, g) row", covariant_rows);
  criterion(11, "(h, g) row against the complex over tau", over_tau);
  criterion(12, "jet calculus identities", jet_suite);
  criterion(13, "CLI determinism", determinism);
  std::printf("%d of 13 criteria failed\n", failures);
  return failures ? 1 : 0;
}
