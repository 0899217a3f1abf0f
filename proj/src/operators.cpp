#include "chi2/operators.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <deque>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace chi2 {

OperatorExpr& OperatorExpr::operator+=(const OperatorExpr& other) {
  terms.insert(terms.end(), other.terms.begin(), other.terms.end());
  return *this;
}

OperatorExpr operator+(OperatorExpr a, const OperatorExpr& b) {
  a += b;
  return a;
}

OperatorExpr operator*(cx scale, OperatorExpr e) {
  for (auto& t : e.terms) t.coeff *= scale;
  return e;
}

OperatorExpr adjoint(const OperatorExpr& e) {
  OperatorExpr out;
  out.terms.reserve(e.terms.size());
  for (const auto& t : e.terms) {
    Term a;
    a.coeff = std::conj(t.coeff);
    a.factors.assign(t.factors.rbegin(), t.factors.rend());
    for (auto& f : a.factors)
      f.op = (f.op == Ladder::create) ? Ladder::annihilate : Ladder::create;
    out.terms.push_back(std::move(a));
  }
  return out;
}

OperatorExpr monomial(cx coeff, std::vector<MonomialFactor> factors) {
  return OperatorExpr{{Term{coeff, std::move(factors)}}};
}

OperatorExpr number_op(const std::string& mode) {
  return monomial(1.0, {{mode, Ladder::create}, {mode, Ladder::annihilate}});
}

OperatorExpr pair_creation(const std::string& x, const std::string& y,
                           const std::string& z) {
  return monomial(1.0, {{x, Ladder::create},
                        {y, Ladder::create},
                        {z, Ladder::annihilate}});
}

OperatorExpr g1_expr(double kappa, const std::string& x, const std::string& y,
                     const std::string& z) {
  OperatorExpr t = pair_creation(x, y, z);
  return (kI * (kappa / 2.0)) * t + (-kI * (kappa / 2.0)) * adjoint(t);
}

OperatorExpr g2_expr(double kappa, const std::string& x, const std::string& y,
                     const std::string& z) {
  OperatorExpr t = pair_creation(x, y, z);
  return cx(kappa / 2.0) * t + cx(kappa / 2.0) * adjoint(t);
}

OperatorExpr g2a_expr(const std::string& pump_ancilla) {
  OperatorExpr t = pair_creation("s", "i", pump_ancilla);
  return t + adjoint(t);
}

std::pair<OperatorExpr, OperatorExpr> ancilla_generators(AncillaKind kind) {
  switch (kind) {
    case AncillaKind::p_prime:
      return {g1_expr(1.0, "s", "i", "p'"), g2_expr(1.0, "s", "i", "p'")};
    case AncillaKind::s_prime_i_prime:
      return {g1_expr(1.0, "s'", "i'", "p"), g2_expr(1.0, "s'", "i'", "p")};
  }
  throw std::invalid_argument("unknown ancilla kind");
}

double OperatorMatrix::leakage() const {
  return std::sqrt(column_leakage.squaredNorm());
}

double OperatorMatrix::hermiticity_error() const {
  return (entries - entries.adjoint()).cwiseAbs().maxCoeff();
}

namespace {

// Apply one term to a single state.  Occupations are tracked as exact
// integers; only the final image is checked against the truncations.
struct TermImage {
  bool nonzero = false;
  bool in_truncation = false;
  FockState state;
  cx amp;
};

TermImage apply_term(const Term& t, const FockState& s, const ModeSet& modes,
                     const std::vector<int>& factor_modes) {
  TermImage img;
  img.state = s;
  img.amp = t.coeff;
  for (size_t k = t.factors.size(); k-- > 0;) {  // rightmost factor first
    int m = factor_modes[k];
    int& occ = img.state.occ[static_cast<size_t>(m)];
    if (t.factors[k].op == Ladder::annihilate) {
      if (occ == 0) return img;  // exact zero
      img.amp *= std::sqrt(static_cast<double>(occ));
      --occ;
    } else {
      img.amp *= std::sqrt(static_cast<double>(occ + 1));
      ++occ;
    }
  }
  img.nonzero = std::abs(img.amp) != 0.0;
  img.in_truncation = true;
  for (int m = 0; m < modes.size(); ++m)
    if (img.state.occ[static_cast<size_t>(m)] > modes.mode(m).max_occupation)
      img.in_truncation = false;
  return img;
}

std::vector<std::vector<int>> resolve_modes(const OperatorExpr& e,
                                            const ModeSet& modes) {
  std::vector<std::vector<int>> resolved;
  resolved.reserve(e.terms.size());
  for (const auto& t : e.terms) {
    std::vector<int> ids;
    ids.reserve(t.factors.size());
    for (const auto& f : t.factors) {
      int m = modes.index_of(f.mode);
      if (m < 0)
        throw std::invalid_argument("expression uses unknown mode '" +
                                    f.mode + "'");
      ids.push_back(m);
    }
    resolved.push_back(std::move(ids));
  }
  return resolved;
}

}  // namespace

ExprApplication apply_expr(const OperatorExpr& e, const FockState& s,
                           const ModeSet& modes) {
  auto resolved = resolve_modes(e, modes);
  ExprApplication res;
  for (size_t t = 0; t < e.terms.size(); ++t) {
    TermImage img = apply_term(e.terms[t], s, modes, resolved[t]);
    if (!img.nonzero) continue;
    if (img.in_truncation) {
      res.out[img.state] += img.amp;
    } else {
      res.dropped_sq += std::norm(img.amp);
    }
  }
  return res;
}

ExprApplication apply_expr(const OperatorExpr& e, const SparseState& s,
                           const ModeSet& modes) {
  auto resolved = resolve_modes(e, modes);
  ExprApplication res;
  for (const auto& [state, amp] : s) {
    for (size_t t = 0; t < e.terms.size(); ++t) {
      TermImage img = apply_term(e.terms[t], state, modes, resolved[t]);
      if (!img.nonzero) continue;
      if (img.in_truncation) {
        res.out[img.state] += amp * img.amp;
      } else {
        res.dropped_sq += std::norm(amp * img.amp);
      }
    }
  }
  return res;
}

OperatorMatrix to_matrix(const OperatorExpr& e, const BasisPtr& basis) {
  assert(basis);
  const int d = basis->dim();
  OperatorMatrix om;
  om.basis = basis;
  om.entries = Mat::Zero(d, d);
  om.column_leakage = Eigen::VectorXd::Zero(d);
  for (int col = 0; col < d; ++col) {
    ExprApplication app = apply_expr(e, basis->state(col), basis->modes());
    double lost_sq = app.dropped_sq;
    for (const auto& [state, amp] : app.out) {
      if (auto row = basis->find(state)) {
        om.entries(*row, col) += amp;
      } else {
        lost_sq += std::norm(amp);
      }
    }
    om.column_leakage(col) = std::sqrt(lost_sq);
  }
  return om;
}

Chi2Generators chi2_generators_on(const BasisPtr& basis, double kappa) {
  Chi2Generators g;
  g.basis = basis;
  g.kappa = kappa;
  g.G1 = to_matrix(g1_expr(kappa), basis);
  g.G2 = to_matrix(g2_expr(kappa), basis);
  g.Ns = to_matrix(number_op("s"), basis);
  g.Ni = to_matrix(number_op("i"), basis);
  g.Np = to_matrix(number_op("p"), basis);
  return g;
}

Chi2Generators chi2_generators(int n, double kappa) {
  if (n < 1) throw std::invalid_argument("chi2_generators requires n >= 1");
  return chi2_generators_on(enumerate_pump_subspace(n), kappa);
}

OperatorMatrix boundary_pauli(const BoundaryPauli& p) {
  if (p.n < 0) throw std::invalid_argument("boundary_pauli: n must be >= 0");
  if (p.k < 0 || p.k > p.n)
    throw std::invalid_argument("boundary_pauli: rung index out of range");
  BasisPtr basis = enumerate_pump_subspace(p.n + 1);
  OperatorMatrix om;
  om.basis = basis;
  om.entries = Mat::Zero(basis->dim(), basis->dim());
  om.column_leakage = Eigen::VectorXd::Zero(basis->dim());
  const int a = p.k;      // canonical index with pump count k
  const int b = p.k + 1;  // canonical index with pump count k+1
  if (p.axis == PauliAxis::x) {
    om.entries(a, b) = 1.0;
    om.entries(b, a) = 1.0;
  } else {
    om.entries(a, b) = kI;
    om.entries(b, a) = -kI;
  }
  return om;
}

BasisPtr span_closure(const std::vector<OperatorExpr>& exprs,
                      const std::vector<FockState>& seeds,
                      const ModeSet& modes) {
  std::set<FockState> seen;
  std::deque<FockState> queue;
  for (const auto& s : seeds) {
    if (static_cast<int>(s.occ.size()) != modes.size())
      throw std::invalid_argument("span_closure: seed has wrong mode count");
    for (int m = 0; m < modes.size(); ++m)
      if (s.occ[static_cast<size_t>(m)] < 0 ||
          s.occ[static_cast<size_t>(m)] > modes.mode(m).max_occupation)
        throw std::invalid_argument("span_closure: seed " + s.str() +
                                    " violates truncation");
    if (seen.insert(s).second) queue.push_back(s);
  }
  while (!queue.empty()) {
    FockState cur = queue.front();
    queue.pop_front();
    for (const auto& e : exprs) {
      ExprApplication app = apply_expr(e, cur, modes);
      for (const auto& [state, amp] : app.out) {
        if (std::abs(amp) == 0.0) continue;
        if (seen.insert(state).second) queue.push_back(state);
      }
    }
  }
  std::vector<FockState> states(seen.begin(), seen.end());  // lexicographic
  return make_basis(modes, std::move(states));
}

std::string operator_matrix_to_json(const OperatorMatrix& m) {
  nlohmann::ordered_json j;
  j["basis"] = nlohmann::ordered_json::parse(basis_to_json(*m.basis));
  j["entries"] = nlohmann::ordered_json::array();  // row-major [re, im] pairs
  for (int r = 0; r < m.entries.rows(); ++r) {
    for (int c = 0; c < m.entries.cols(); ++c) {
      j["entries"].push_back({m.entries(r, c).real(), m.entries(r, c).imag()});
    }
  }
  j["leakage"] = m.leakage();
  return j.dump(2);
}

}  // namespace chi2
