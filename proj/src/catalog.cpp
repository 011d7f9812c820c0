#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "spencer/catalog.hpp"
#include "spencer/jetcalc.hpp"

namespace spencer::catalog {
namespace {

struct KindInfo {
  GroupKind kind;
  const char* name;
  std::vector<const char*> keys;
};

const std::vector<KindInfo>& kinds() {
  static const std::vector<KindInfo> table = {
      {GroupKind::General, "general", {"m"}},
      {GroupKind::Volume, "volume", {"m"}},
      {GroupKind::Complex, "complex", {"n"}},
      {GroupKind::Symplectic, "symplectic", {"2n"}},
      {GroupKind::Contact, "contact", {"m"}},
      {GroupKind::Isometry, "isometry", {"n"}},
      {GroupKind::PointLie, "point_lie", {"n", "r", "k"}},
      {GroupKind::ContactLie, "contact_lie", {"n", "k"}},
  };
  return table;
}

const KindInfo& info(GroupKind k) {
  for (const auto& e : kinds())
    if (e.kind == k) return e;
  throw Error(ErrorCode::ParamOutOfRange, "unknown pseudogroup kind");
}

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::ParamOutOfRange, what); }

std::uint32_t idx(const TensorShape& s, const MultiIndex& alpha, int value) {
  return static_cast<std::uint32_t>(s.index(sym_rank(alpha), 0, value));
}

// Sum of the symbol blocks with parameters (dim tau, dim nu).
std::size_t S(int a, int d) { return sym_dim(a, d); }

// Real and imaginary parts of a polynomial with Gaussian-rational coefficients.
using ComplexPoly = std::map<MultiIndex, std::pair<Rational, Rational>>;

ComplexPoly holomorphic_monomial(int n, const MultiIndex& beta) {
  ComplexPoly p{{MultiIndex(2 * n, 0), {Rational(1), Rational(0)}}};
  for (int j = 0; j < n; ++j) {
    for (int t = 0; t < beta[j]; ++t) {
      ComplexPoly next;
      for (const auto& [m, c] : p) {
        MultiIndex mx = m, my = m;
        ++mx[j];
        ++my[n + j];
        auto& a = next[mx];
        a.first += c.first;
        a.second += c.second;
        // times i*y_j
        auto& b = next[my];
        b.first -= c.second;
        b.second += c.first;
      }
      p = std::move(next);
    }
  }
  return p;
}

Subspace general_symbol(int m, int l) { return Subspace::full(TensorShape(m, l, 0, m)); }

Subspace volume_symbol(int m, int l) {
  TensorShape dom(m, l, 0, m), cod(m, l - 1, 0, 1);
  LinearMap div(dom, cod);
  const auto basis = sym_basis(m, l);
  for (std::size_t a = 0; a < basis.size(); ++a) {
    for (int j = 0; j < m; ++j) {
      if (basis[a][j] == 0) continue;
      MultiIndex lower = basis[a];
      --lower[j];
      div.columns[dom.index(a, 0, j)] = {{static_cast<std::uint32_t>(cod.index(sym_rank(lower), 0, 0)), Rational(basis[a][j])}};
    }
  }
  return kernel(div);
}

Subspace complex_symbol(int n, int l) {
  const int m = 2 * n;
  TensorShape s(m, l, 0, m);
  std::vector<SparseVec> gens;
  for (const auto& beta : sym_basis(n, l)) {
    ComplexPoly f = holomorphic_monomial(n, beta);
    for (int k = 0; k < n; ++k) {
      std::vector<std::pair<std::uint32_t, Rational>> re, im;
      for (const auto& [alpha, c] : f) {
        // f d/dz_k  ->  Re f d/dx_k + Im f d/dy_k ; and the same for i*f.
        re.emplace_back(idx(s, alpha, k), c.first);
        re.emplace_back(idx(s, alpha, n + k), c.second);
        im.emplace_back(idx(s, alpha, k), -c.second);
        im.emplace_back(idx(s, alpha, n + k), c.first);
      }
      gens.push_back(combine(std::move(re)));
      gens.push_back(combine(std::move(im)));
    }
  }
  return Subspace::span(s, gens);
}

Subspace symplectic_symbol(int n, int l) {
  const int m = 2 * n;
  TensorShape s(m, l, 0, m);
  std::vector<SparseVec> gens;
  for (const auto& h : sym_basis(m, l + 1)) {
    std::vector<std::pair<std::uint32_t, Rational>> t;
    for (int i = 0; i < n; ++i) {
      if (h[n + i] > 0) {
        MultiIndex d = h;
        --d[n + i];
        t.emplace_back(idx(s, d, i), Rational(h[n + i]));
      }
      if (h[i] > 0) {
        MultiIndex d = h;
        --d[i];
        t.emplace_back(idx(s, d, n + i), Rational(-h[i]));
      }
    }
    gens.push_back(combine(std::move(t)));
  }
  return Subspace::span(s, gens);
}

Subspace contact_symbol(int n, int l) {
  jet::JetSpace space(n, 1);
  auto fields = jet::generating_fields(jet::LiftKind::Contact, space, 1, l + 2);
  return jet::filtered_symbol(space, 1, l, fields);
}

Subspace isometry_symbol(int m, int l) {
  TensorShape s(m, l, 0, m);
  if (l != 1) return Subspace::zero(s);
  std::vector<SparseVec> gens;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      MultiIndex xi(m, 0), xj(m, 0);
      xi[i] = 1;
      xj[j] = 1;
      gens.push_back(combine({{idx(s, xi, j), Rational(1)}, {idx(s, xj, i), Rational(-1)}}));
    }
  }
  return Subspace::span(s, gens);
}

}  // namespace

std::string kind_name(GroupKind kind) { return info(kind).name; }

PseudogroupSpec PseudogroupSpec::parse(const std::string& text) {
  auto colon = text.find(':');
  std::string name = text.substr(0, colon);
  PseudogroupSpec spec;
  bool found = false;
  for (const auto& e : kinds()) {
    if (name == e.name) {
      spec.kind = e.kind;
      found = true;
    }
  }
  if (!found) throw Error(ErrorCode::ParseError, "unknown pseudogroup kind '" + name + "'");
  if (colon != std::string::npos) {
    std::stringstream rest(text.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
      auto eq = item.find('=');
      if (eq == std::string::npos) throw Error(ErrorCode::ParseError, "expected key=value in '" + item + "'");
      std::string key = item.substr(0, eq), val = item.substr(eq + 1);
      int v = 0;
      try {
        std::size_t used = 0;
        v = std::stoi(val, &used);
        if (used != val.size()) throw std::invalid_argument(val);
      } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, "not an integer: '" + val + "'");
      }
      if (spec.kind == GroupKind::Contact && key == "2n+1") key = "m";
      const auto& keys = info(spec.kind).keys;
      if (std::find_if(keys.begin(), keys.end(), [&](const char* k) { return key == k; }) == keys.end())
        throw Error(ErrorCode::ParseError, "unknown parameter '" + key + "' for " + name);
      spec.params[key] = v;
    }
  }
  spec.validate();
  return spec;
}

std::string PseudogroupSpec::to_string() const {
  std::string out = kind_name(kind);
  char sep = ':';
  for (const char* key : info(kind).keys) {
    auto it = params.find(key);
    if (it == params.end()) continue;
    out += sep + std::string(key) + "=" + std::to_string(it->second);
    sep = ',';
  }
  return out;
}

int PseudogroupSpec::param(const std::string& key) const {
  auto it = params.find(key);
  if (it == params.end()) bad(kind_name(kind) + " needs parameter " + key);
  return it->second;
}

void PseudogroupSpec::validate() const {
  for (const char* key : info(kind).keys) param(key);
  switch (kind) {
    case GroupKind::General:
    case GroupKind::Volume:
      if (param("m") < 1) bad("m must be >= 1");
      if (kind == GroupKind::Volume && param("m") < 2) bad("volume needs m >= 2");
      break;
    case GroupKind::Complex:
      if (param("n") < 1) bad("complex dimension must be >= 1");
      break;
    case GroupKind::Symplectic:
      if (param("2n") < 2 || param("2n") % 2) bad("symplectic ambient dimension must be even and >= 2");
      break;
    case GroupKind::Contact:
      if (param("m") < 3 || param("m") % 2 == 0) bad("contact ambient dimension must be odd and >= 3");
      break;
    case GroupKind::Isometry:
      if (param("n") < 2) bad("isometry needs n >= 2");
      break;
    case GroupKind::PointLie:
      if (param("n") < 1 || param("r") < 1 || param("k") < 0) bad("point_lie needs n, r >= 1 and k >= 0");
      break;
    case GroupKind::ContactLie:
      if (param("n") < 1 || param("k") < 1) bad("contact_lie needs n >= 1 and k >= 1");
      break;
  }
}

int PseudogroupSpec::ambient_dim() const {
  switch (kind) {
    case GroupKind::General:
    case GroupKind::Volume:
    case GroupKind::Contact:
      return param("m");
    case GroupKind::Complex:
      return 2 * param("n");
    case GroupKind::Symplectic:
      return param("2n");
    case GroupKind::Isometry:
      return param("n");
    case GroupKind::PointLie:
      return static_cast<int>(jet::JetSpace(param("n"), param("r")).dim(param("k")));
    case GroupKind::ContactLie:
      return static_cast<int>(jet::JetSpace(param("n"), 1).dim(param("k")));
  }
  return 0;
}

std::size_t default_cap() {
  if (const char* env = std::getenv("SPENCER_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 5000;
}

Subspace symbol(const PseudogroupSpec& spec, int l, std::size_t cap) {
  if (l < 1) throw Error(ErrorCode::DegreeUnderflow, "symbols start at l = 1");
  spec.validate();
  if (!spec.materializable())
    throw Error(ErrorCode::UnsupportedDegree, kind_name(spec.kind) + " symbols are formula-backed; use point_lie_embed");
  const int m = spec.ambient_dim();
  if (TensorShape(m, l, 0, m).dim() > cap)
    throw Error(ErrorCode::UnsupportedDegree, "S^l V* (x) V exceeds the materialization cap at l = " + std::to_string(l));
  switch (spec.kind) {
    case GroupKind::General: return general_symbol(m, l);
    case GroupKind::Volume: return volume_symbol(m, l);
    case GroupKind::Complex: return complex_symbol(m / 2, l);
    case GroupKind::Symplectic: return symplectic_symbol(m / 2, l);
    case GroupKind::Contact: return contact_symbol((m - 1) / 2, l);
    case GroupKind::Isometry: return isometry_symbol(m, l);
    default: break;
  }
  throw Error(ErrorCode::UnsupportedDegree, "not materializable");
}

SymbolicSystem system(const PseudogroupSpec& spec, int l_max, std::size_t cap) {
  const int m = spec.ambient_dim();
  std::map<int, Subspace> grades;
  for (int l = 1; l <= l_max; ++l) grades.emplace(l, symbol(spec, l, cap));
  return SymbolicSystem(m, m, std::move(grades));
}

std::size_t symbol_dim(const PseudogroupSpec& spec, int l) {
  if (l < 1) throw Error(ErrorCode::DegreeUnderflow, "symbols start at l = 1");
  spec.validate();
  switch (spec.kind) {
    case GroupKind::General: {
      int m = spec.param("m");
      return m * S(m, l);
    }
    case GroupKind::Volume: {
      int m = spec.param("m");
      return m * S(m, l) - S(m, l - 1);
    }
    case GroupKind::Complex: {
      int n = spec.param("n");
      return 2 * n * S(n, l);
    }
    case GroupKind::Symplectic: return S(spec.param("2n"), l + 1);
    case GroupKind::Contact: return S(spec.param("m"), l + 1);
    case GroupKind::Isometry: {
      int m = spec.param("n");
      return l == 1 ? m * (m - 1) / 2 : 0;
    }
    case GroupKind::PointLie:
      return point_lie_dim(spec.param("n"), spec.param("r"), spec.param("k"), l, true).total();
    case GroupKind::ContactLie: return contact_lie_dim(spec.param("n"), spec.param("k"), l);
  }
  return 0;
}

std::size_t claimed_symbol_dim(const PseudogroupSpec& spec, int l) {
  if (spec.kind == GroupKind::Volume && l >= 2) {
    int m = spec.param("m");
    return m * S(m, l);
  }
  return symbol_dim(spec, l);
}

PointLieDim point_lie_dim(int n, int r, int k, int l, bool allow_r1) {
  if (n < 1 || r < 1 || k < 0 || l < 1) throw Error(ErrorCode::ParamOutOfRange, "point_lie_dim needs n, r, l >= 1 and k >= 0");
  if (r == 1 && !allow_r1) throw Error(ErrorCode::ParamOutOfRange, "r = 1 point lift needs the explicit opt-in");
  PointLieDim d;
  if (k == 0) {
    // Lifts to J^0 are all vector fields on the total space.
    d.horizontal = n * S(n + r, l);
    d.vertical = r * S(n + r, l);
    return d;
  }
  std::size_t h = S(r, l);
  for (int i = 1; i < k; ++i) h += S(n, i) * S(r, l - 1);
  for (int i = k; i <= k + l - 1; ++i) h += S(n, i) * S(r, k + l - i - 1);
  std::size_t v = 0;
  for (int i = 0; i < k; ++i) v += S(n, i) * S(r, l);
  for (int i = k; i <= k + l; ++i) v += S(n, i) * S(r, k + l - i);
  d.horizontal = n * h;
  d.vertical = r * v;
  return d;
}

std::size_t contact_lie_dim(int n, int k, int l) {
  if (n < 1 || k < 1 || l < 1) throw Error(ErrorCode::ParamOutOfRange, "contact_lie_dim needs n, k, l >= 1");
  // tau and upsilon have dimension n, nu has dimension 1.
  std::size_t d = 1;
  for (int j = 0; j <= l; ++j) d += S(n, l + 1 - j);
  for (int i = 1; i < k; ++i)
    for (int j = 0; j <= l; ++j) d += S(n, i) * S(n, l - j);
  for (int i = k; i <= k + l; ++i)
    for (int j = 0; j <= k + l - i; ++j) d += S(n, i) * S(n, k + l - i - j);
  return d;
}

Subspace point_lie_embed(int n, int r, int k, int l, std::size_t cap, bool allow_r1) {
  if (l < 1 || k < 0) throw Error(ErrorCode::ParamOutOfRange, "point_lie_embed needs l >= 1 and k >= 0");
  jet::JetSpace space(n, r);
  const int N = static_cast<int>(space.dim(k));
  if (TensorShape(N, l, 0, N).dim() > cap)
    throw Error(ErrorCode::CapExceeded, "S^l T*(J^k) (x) T(J^k) exceeds the materialization cap");
  auto fields = jet::generating_fields(jet::LiftKind::Point, space, k, l + k + 1, allow_r1);
  return jet::filtered_symbol(space, k, l, fields);
}

}  // namespace spencer::catalog
