#include <map>

#include "spencer/jetcalc.hpp"

namespace spencer::jet {
namespace {

void require_order(const JetPolynomial& f, int k, const char* what) {
  if (f.max_order() > k) throw Error(ErrorCode::ParamOutOfRange, what);
}

// D_sigma f, memoised over sigma.
class TotalDerivatives {
 public:
  explicit TotalDerivatives(JetPolynomial f) { memo_.emplace(MultiIndex(f.space().n(), 0), std::move(f)); }

  const JetPolynomial& get(const MultiIndex& sigma) {
    auto it = memo_.find(sigma);
    if (it != memo_.end()) return it->second;
    std::size_t i = 0;
    while (sigma[i] == 0) ++i;
    MultiIndex lower = sigma;
    --lower[i];
    JetPolynomial d = total_derivative(get(lower), static_cast<int>(i));
    return memo_.emplace(sigma, std::move(d)).first->second;
  }

 private:
  std::map<MultiIndex, JetPolynomial> memo_;
};

void check_cancellation(const LieField& X) {
  for (std::size_t v = 0; v < X.coefficients.size(); ++v)
    if (X.coefficients[v].max_order() > X.k)
      throw Error(ErrorCode::CancellationFailure,
                  "coefficient of d/d" + X.space.name(static_cast<VarId>(v)) + " involves order " +
                      std::to_string(X.coefficients[v].max_order()) + " > " + std::to_string(X.k));
}

}  // namespace

LieField LieField::drop_top() const {
  if (k == 0) throw Error(ErrorCode::DegreeUnderflow, "cannot drop below J^0");
  LieField out{space, k - 1, {}};
  out.coefficients.assign(coefficients.begin(), coefficients.begin() + space.dim(k - 1));
  return out;
}

JetPolynomial LieField::apply(const JetPolynomial& f) const {
  JetPolynomial out(space);
  for (VarId v : f.variables()) {
    if (v >= coefficients.size()) throw Error(ErrorCode::ShapeMismatch, "field does not act on " + space.name(v));
    out += coefficients[v] * f.derivative(v);
  }
  return out;
}

LieField bracket(const LieField& a, const LieField& b) {
  if (!(a.space == b.space) || a.k != b.k) throw Error(ErrorCode::AmbientMismatch, "bracket of fields on different jet spaces");
  LieField out{a.space, a.k, {}};
  for (std::size_t v = 0; v < a.coefficients.size(); ++v)
    out.coefficients.push_back(a.apply(b.coefficients[v]) - b.apply(a.coefficients[v]));
  return out;
}

LieField prolong_point(const JetSpace& space, const std::vector<JetPolynomial>& a,
                       const std::vector<JetPolynomial>& b, int k, bool allow_r1) {
  const int n = space.n(), r = space.r();
  if (k < 0) throw Error(ErrorCode::DegreeUnderflow, "negative jet order");
  if (r == 1 && !allow_r1)
    throw Error(ErrorCode::ParamOutOfRange, "point lift with r = 1 needs allow_r1 (contact lift is the natural one)");
  if (static_cast<int>(a.size()) != n || static_cast<int>(b.size()) != r)
    throw Error(ErrorCode::ShapeMismatch, "point field needs n horizontal and r vertical coefficients");
  for (const auto& f : a) require_order(f, 0, "point field coefficients must live on J^0");
  for (const auto& f : b) require_order(f, 0, "point field coefficients must live on J^0");

  std::vector<TotalDerivatives> dphi;
  for (int j = 0; j < r; ++j) {
    JetPolynomial phi = b[j];
    MultiIndex one(n, 0);
    for (int i = 0; i < n; ++i) {
      one.assign(n, 0);
      one[i] = 1;
      phi -= a[i] * JetPolynomial::variable(space, space.p(j, one));
    }
    dphi.emplace_back(std::move(phi));
  }

  LieField X{space, k, {}};
  const std::size_t N = space.dim(k);
  X.coefficients.reserve(N);
  for (int i = 0; i < n; ++i) X.coefficients.push_back(a[i]);
  for (VarId v = n; v < N; ++v) {
    auto [j, sigma] = space.decode(v);
    JetPolynomial c = dphi[j].get(sigma);
    for (int i = 0; i < n; ++i) c += a[i] * JetPolynomial::variable(space, space.raise(v, i));
    X.coefficients.push_back(std::move(c));
  }
  check_cancellation(X);
  return X;
}

LieField prolong_contact(const JetSpace& space, const JetPolynomial& phi, int k) {
  const int n = space.n();
  if (space.r() != 1) throw Error(ErrorCode::ParamOutOfRange, "contact lift needs r = 1");
  if (k < 1) throw Error(ErrorCode::DegreeUnderflow, "contact fields live on J^k with k >= 1");
  require_order(phi, 1, "generating function must live on J^1");

  std::vector<JetPolynomial> dphi_dp;
  for (int i = 0; i < n; ++i) {
    MultiIndex one(n, 0);
    one[i] = 1;
    dphi_dp.push_back(phi.derivative(space.p(0, one)));
  }
  TotalDerivatives dphi(phi);

  LieField X{space, k, {}};
  const std::size_t N = space.dim(k);
  for (int i = 0; i < n; ++i) X.coefficients.push_back(dphi_dp[i] * Rational(-1));
  for (VarId v = n; v < N; ++v) {
    JetPolynomial c = dphi.get(space.decode(v).second);
    for (int i = 0; i < n; ++i) c -= dphi_dp[i] * JetPolynomial::variable(space, space.raise(v, i));
    X.coefficients.push_back(std::move(c));
  }
  check_cancellation(X);
  return X;
}

bool cartan_preservation_check(const LieField& X, int trials, std::uint64_t seed) {
  const JetSpace& sp = X.space;
  const int n = sp.n();
  if (X.k == 0) return true;
  const std::size_t N = sp.dim(X.k);
  const VarId last = static_cast<VarId>(sp.dim(X.k - 1));
  for (int t = 0; t < trials; ++t) {
    JetPoint pt = JetPoint::random(sp, X.k, seed + static_cast<std::uint64_t>(t));
    std::vector<SparseVec> omegas, all;
    for (VarId v = n; v < last; ++v) {
      std::vector<std::pair<std::uint32_t, Rational>> w{{v, Rational(1)}};
      for (int i = 0; i < n; ++i) w.emplace_back(i, -pt.at(sp.raise(v, i)));
      omegas.push_back(combine(std::move(w)));

      JetPolynomial g = X.coefficients[v];
      for (int i = 0; i < n; ++i) g -= JetPolynomial::variable(sp, sp.raise(v, i)) * X.coefficients[i];
      std::vector<std::pair<std::uint32_t, Rational>> lie;
      for (VarId y : g.variables()) lie.emplace_back(y, g.derivative(y).evaluate(pt));
      for (int i = 0; i < n; ++i) {
        VarId up = sp.raise(v, i);
        lie.emplace_back(i, -X.coefficients[up].evaluate(pt));
        lie.emplace_back(up, X.coefficients[i].evaluate(pt));
      }
      all.push_back(combine(std::move(lie)));
    }
    all.insert(all.end(), omegas.begin(), omegas.end());
    if (rank(all, N) != omegas.size()) return false;
  }
  return true;
}

}  // namespace spencer::jet
