#include "spencer/jetcalc.hpp"

namespace spencer::jet {

TresseFrame::TresseFrame(std::vector<JetPolynomial> invariants, JetPoint point)
    : fs_(std::move(invariants)), point_(std::move(point)) {
  const int n = point_.space.n();
  if (static_cast<int>(fs_.size()) != n)
    throw Error(ErrorCode::ParamOutOfRange, "a Tresse frame needs exactly n invariants");
  jac_.assign(n, std::vector<Rational>(n));
  std::vector<SparseVec> rows;
  for (int a = 0; a < n; ++a) {
    for (int i = 0; i < n; ++i) jac_[a][i] = total_derivative(fs_[i], a).evaluate(point_);
    rows.push_back(from_dense(jac_[a]));
  }
  if (rank(rows, n) < static_cast<std::size_t>(n))
    throw Error(ErrorCode::SingularJacobian, "det D_a(f_i) vanishes at the chosen point");
}

std::vector<Rational> tresse(const JetPolynomial& f, const TresseFrame& frame) {
  const auto& J = frame.jacobian();
  const int n = static_cast<int>(J.size());
  std::vector<SparseVec> rows;
  for (int a = 0; a < n; ++a) {
    std::vector<Rational> row = J[a];
    row.push_back(total_derivative(f, a).evaluate(frame.point()));
    rows.push_back(from_dense(row));
  }
  Echelon e = rref(rows, n + 1);
  std::vector<Rational> c(n);
  for (int i = 0; i < n; ++i)
    for (const auto& [col, x] : e.rows[i])
      if (col == static_cast<std::uint32_t>(n)) c[i] = x;
  return c;
}

std::pair<JetPolynomial, JetPolynomial> tresse_symbolic(const JetPolynomial& f, const JetPolynomial& f1) {
  if (f.space().n() != 1) throw Error(ErrorCode::ParamOutOfRange, "symbolic Tresse derivatives need n = 1");
  JetPolynomial den = total_derivative(f1, 0);
  if (den.is_zero()) throw Error(ErrorCode::SingularJacobian, "D(f_1) vanishes identically");
  return {total_derivative(f, 0), den};
}

}  // namespace spencer::jet
