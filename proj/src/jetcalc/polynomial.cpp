#include <algorithm>
#include <random>
#include <set>

#include "spencer/jetcalc.hpp"

namespace spencer::jet {
namespace {

std::size_t below(int n, int d) { return d == 0 ? 0 : binomial(n + d - 1, n); }

MultiIndex sym_unrank(int n, int d, std::size_t rank) {
  MultiIndex out(n, 0);
  int rem = d;
  for (int pos = 0; pos + 1 < n; ++pos) {
    for (int t = rem; t >= 0; --t) {
      std::size_t cnt = sym_dim(n - pos - 1, rem - t);
      if (rank < cnt) {
        out[pos] = t;
        rem -= t;
        break;
      }
      rank -= cnt;
    }
  }
  out[n - 1] = rem;
  return out;
}

Monomial multiply(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back(b[j++]);
    } else {
      out.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

JetSpace::JetSpace(int n, int r) : n_(n), r_(r) {
  if (n < 1 || r < 1) throw Error(ErrorCode::ParamOutOfRange, "jet space needs n >= 1 and r >= 1");
}

VarId JetSpace::x(int i) const {
  if (i < 0 || i >= n_) throw Error(ErrorCode::ParamOutOfRange, "x index out of range");
  return static_cast<VarId>(i);
}

VarId JetSpace::p(int j, const MultiIndex& sigma) const {
  if (j < 0 || j >= r_) throw Error(ErrorCode::ParamOutOfRange, "fiber index out of range");
  if (static_cast<int>(sigma.size()) != n_) throw Error(ErrorCode::ParamOutOfRange, "multi-index has wrong length");
  int d = 0;
  for (int s : sigma) {
    if (s < 0) throw Error(ErrorCode::ParamOutOfRange, "negative multi-index entry");
    d += s;
  }
  std::size_t id = n_ + r_ * below(n_, d) + j * sym_dim(n_, d) + sym_rank(sigma);
  return static_cast<VarId>(id);
}

int JetSpace::order(VarId v) const {
  if (is_x(v)) return 0;
  std::size_t q = v - n_;
  int d = 0;
  while (r_ * below(n_, d + 1) <= q) ++d;
  return d;
}

std::pair<int, MultiIndex> JetSpace::decode(VarId v) const {
  if (is_x(v)) throw Error(ErrorCode::ParamOutOfRange, "decode of a base variable");
  int d = order(v);
  std::size_t rem = v - n_ - r_ * below(n_, d);
  std::size_t block = sym_dim(n_, d);
  return {static_cast<int>(rem / block), sym_unrank(n_, d, rem % block)};
}

VarId JetSpace::raise(VarId v, int i) const {
  auto [j, sigma] = decode(v);
  ++sigma.at(i);
  return p(j, sigma);
}

std::size_t JetSpace::dim(int k) const { return n_ + r_ * binomial(n_ + k, n_); }

std::string JetSpace::name(VarId v) const {
  if (is_x(v)) return "x" + std::to_string(v + 1);
  auto [j, sigma] = decode(v);
  if (std::all_of(sigma.begin(), sigma.end(), [](int s) { return s == 0; })) return "u" + std::to_string(j + 1);
  std::string s = "p[" + std::to_string(j + 1) + ",(";
  for (int i = 0; i < n_; ++i) s += (i ? "," : "") + std::to_string(sigma[i]);
  return s + ")]";
}

const Rational& JetPoint::at(VarId v) const {
  auto it = values.find(v);
  if (it == values.end()) throw Error(ErrorCode::ParamOutOfRange, "point does not fix " + space.name(v));
  return it->second;
}

JetPoint JetPoint::random(const JetSpace& space, int order, std::uint64_t seed) {
  JetPoint pt{space, order, {}};
  std::minstd_rand gen(static_cast<std::uint32_t>(seed % 2147483646u) + 1);
  for (VarId v = 0; v < space.dim(order); ++v) {
    long num = static_cast<long>(gen() % 19) - 9;
    long den = static_cast<long>(gen() % 9) + 1;
    Rational q(num, den);
    q.canonicalize();
    pt.values.emplace(v, q);
  }
  return pt;
}

JetPolynomial JetPolynomial::constant(JetSpace space, const Rational& c) {
  JetPolynomial f(space);
  f.add_term({}, c);
  return f;
}

JetPolynomial JetPolynomial::variable(JetSpace space, VarId v) { return monomial(space, {{v, 1}}); }

JetPolynomial JetPolynomial::monomial(JetSpace space, Monomial m, const Rational& c) {
  JetPolynomial f(space);
  f.add_term(m, c);
  return f;
}

void JetPolynomial::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (inserted) return;
  it->second += c;
  if (it->second == 0) terms_.erase(it);
}

int JetPolynomial::max_order() const {
  int o = -1;
  for (const auto& [m, c] : terms_)
    for (const auto& [v, e] : m) o = std::max(o, space_.order(v));
  return o;
}

int JetPolynomial::degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_) {
    int s = 0;
    for (const auto& [v, e] : m) s += static_cast<int>(e);
    d = std::max(d, s);
  }
  return d;
}

std::vector<VarId> JetPolynomial::variables() const {
  std::set<VarId> vs;
  for (const auto& [m, c] : terms_)
    for (const auto& [v, e] : m) vs.insert(v);
  return {vs.begin(), vs.end()};
}

JetPolynomial JetPolynomial::derivative(VarId v) const {
  JetPolynomial out(space_);
  for (const auto& [m, c] : terms_) {
    auto it = std::find_if(m.begin(), m.end(), [&](const auto& t) { return t.first == v; });
    if (it == m.end()) continue;
    Monomial dm = m;
    auto& slot = dm[it - m.begin()];
    Rational coef = c * slot.second;
    if (--slot.second == 0) dm.erase(dm.begin() + (it - m.begin()));
    out.add_term(dm, coef);
  }
  return out;
}

Rational JetPolynomial::evaluate(const JetPoint& pt) const {
  Rational sum = 0;
  for (const auto& [m, c] : terms_) {
    Rational t = c;
    for (const auto& [v, e] : m) {
      const Rational& x = pt.at(v);
      for (std::uint32_t k = 0; k < e; ++k) t *= x;
    }
    sum += t;
  }
  return sum;
}

JetPolynomial& JetPolynomial::operator+=(const JetPolynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

JetPolynomial& JetPolynomial::operator-=(const JetPolynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

JetPolynomial& JetPolynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, x] : terms_) x *= c;
  return *this;
}

JetPolynomial operator*(const JetPolynomial& a, const JetPolynomial& b) {
  JetPolynomial out(a.space_);
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) out.add_term(multiply(ma, mb), ca * cb);
  return out;
}

JetPolynomial total_derivative(const JetPolynomial& f, int i) {
  const JetSpace& sp = f.space();
  JetPolynomial out = f.derivative(sp.x(i));
  for (VarId v : f.variables()) {
    if (sp.is_x(v)) continue;
    out += JetPolynomial::variable(sp, sp.raise(v, i)) * f.derivative(v);
  }
  return out;
}

std::vector<JetPolynomial> horizontal_diff(const JetPolynomial& f) {
  std::vector<JetPolynomial> out;
  for (int i = 0; i < f.space().n(); ++i) out.push_back(total_derivative(f, i));
  return out;
}

JetPolynomial total_derivative(const JetPolynomial& f, const MultiIndex& sigma) {
  JetPolynomial out = f;
  for (int i = 0; i < static_cast<int>(sigma.size()); ++i)
    for (int t = 0; t < sigma[i]; ++t) out = total_derivative(out, i);
  return out;
}

}  // namespace spencer::jet
