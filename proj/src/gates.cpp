#include "chi2/gates.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "json.hpp"

namespace chi2 {

double Gate::unitarity_error() const {
  return (u.adjoint() * u - Mat::Identity(u.rows(), u.cols()))
      .cwiseAbs()
      .maxCoeff();
}

void ApplyReport::merge(const ApplyReport& other) {
  passthrough_norm_sq += other.passthrough_norm_sq;
  passthrough_count += other.passthrough_count;
  audit_leakage = std::max(audit_leakage, other.audit_leakage);
}

namespace {

std::vector<std::string> basis_mode_ids(const SubspaceBasis& b) {
  std::vector<std::string> ids;
  ids.reserve(static_cast<size_t>(b.modes().size()));
  for (const auto& m : b.modes().modes()) ids.push_back(m.id);
  return ids;
}

Gate make_table_gate(std::string label, BasisPtr local, Mat u,
                     std::map<std::string, double> params = {}) {
  Gate g;
  g.label = std::move(label);
  g.footprint = basis_mode_ids(*local);
  g.local = std::move(local);
  g.u = std::move(u);
  g.column_leakage = Eigen::VectorXd::Zero(g.u.rows());
  g.params = std::move(params);
  assert(g.unitarity_error() < 1e-10);
  return g;
}

}  // namespace

Gate evolve(const OperatorMatrix& h, double t, std::string label) {
  if (h.hermiticity_error() > 1e-10)
    throw std::invalid_argument("evolve: Hamiltonian is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Mat> es(h.entries);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("evolve: eigendecomposition failed");
  Vec phases =
      (-kI * t * es.eigenvalues().cast<cx>().array()).exp().matrix();
  Mat u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();

  Gate g;
  g.label = std::move(label);
  g.footprint = basis_mode_ids(*h.basis);
  g.local = h.basis;
  g.u = std::move(u);
  g.column_leakage = h.column_leakage;
  g.params["t"] = t;
  assert(g.unitarity_error() < 1e-10);
  return g;
}

Gate sfg(double theta, const std::string& in1, const std::string& in2,
         const std::string& out) {
  if (in1 == in2 || in1 == out || in2 == out)
    throw std::invalid_argument("sfg: modes must be distinct");
  auto local = product_basis(ModeSet({{in1, 1}, {in2, 1}, {out, 1}}));
  OperatorExpr h =
      kI * monomial(1.0, {{in1, Ladder::annihilate},
                          {in2, Ladder::annihilate},
                          {out, Ladder::create}}) +
      (-kI) * monomial(1.0, {{in1, Ladder::create},
                             {in2, Ladder::create},
                             {out, Ladder::annihilate}});
  Gate g = evolve(to_matrix(h, local), theta, "SFG");
  g.params = {{"theta", theta}};
  // The conversion triple (1,1,0)<->(0,0,1) is closed; the only truncation
  // drop is on the jointly-occupied state (1,1,1), which the Hamiltonian
  // annihilates symmetrically, so the audit stays clean.
  g.column_leakage.setZero();
  return g;
}

Gate qfc(const std::string& a, const std::string& b) {
  auto local = product_basis(ModeSet({{a, 1}, {b, 1}}));
  // States in row-major order: (0,0), (0,1), (1,0), (1,1).
  Mat u = Mat::Identity(4, 4);
  u(1, 1) = 0.0;
  u(2, 2) = 0.0;
  u(1, 2) = 1.0;
  u(2, 1) = 1.0;
  return make_table_gate("QFC", std::move(local), std::move(u));
}

Gate shg(const std::string& low, const std::string& high,
         const PhaseConvention& conv) {
  auto local = product_basis(ModeSet({{low, 2}, {high, 1}}));
  // States: (0,0),(0,1),(1,0),(1,1),(2,0),(2,1); doublet (2,0) <-> (0,1).
  const int e1 = 4, e2 = 1;
  Mat u = Mat::Identity(6, 6);
  u(e1, e1) = 0.0;
  u(e2, e2) = 0.0;
  u(e2, e1) = conv.shg_phase;
  u(e1, e2) = -std::conj(conv.shg_phase);
  return make_table_gate("SHG", std::move(local), std::move(u));
}

Gate spdc(const std::string& high, const std::string& low,
          const PhaseConvention& conv) {
  auto local = product_basis(ModeSet({{high, 1}, {low, 2}}));
  // States: (0,0),(0,1),(0,2),(1,0),(1,1),(1,2); doublet (0,2) <-> (1,0).
  const int e1 = 2, e2 = 3;
  Mat u = Mat::Identity(6, 6);
  u(e1, e1) = 0.0;
  u(e2, e2) = 0.0;
  u(e1, e2) = conv.spdc_phase;
  u(e2, e1) = -std::conj(conv.spdc_phase);
  return make_table_gate("SPDC", std::move(local), std::move(u));
}

Gate shg_rabi(const std::string& low, const std::string& high, double t) {
  auto local = product_basis(ModeSet({{low, 2}, {high, 1}}));
  OperatorExpr h =
      (kI * 0.5) * monomial(1.0, {{high, Ladder::create},
                                  {low, Ladder::annihilate},
                                  {low, Ladder::annihilate}}) +
      (-kI * 0.5) * monomial(1.0, {{high, Ladder::annihilate},
                                   {low, Ladder::create},
                                   {low, Ladder::create}});
  Gate g = evolve(to_matrix(h, local), t, "SHG_rabi");
  g.params = {{"t", t}};
  return g;
}

Gate phase_shift(const std::string& mode, double phi, int truncation) {
  auto local = product_basis(ModeSet({{mode, truncation}}));
  Mat u = Mat::Zero(local->dim(), local->dim());
  for (int k = 0; k <= truncation; ++k)
    u(k, k) = std::exp(kI * (phi * static_cast<double>(k)));
  return make_table_gate("PHASE", std::move(local), std::move(u),
                         {{"phi", phi}});
}

SparseState apply_gate(const Gate& g, const SparseState& state,
                       const ModeSet& joint, ApplyReport* report) {
  const int nfoot = g.local->modes().size();
  std::vector<int> fidx(static_cast<size_t>(nfoot));
  for (int j = 0; j < nfoot; ++j) {
    const ModeSpec& lm = g.local->modes().mode(j);
    int idx = joint.index_of(lm.id);
    if (idx < 0)
      throw std::invalid_argument("apply_gate: joint space lacks mode '" +
                                  lm.id + "'");
    if (joint.mode(idx).max_occupation < lm.max_occupation)
      throw std::invalid_argument(
          "apply_gate: joint truncation of mode '" + lm.id +
          "' is below the gate's local truncation");
    fidx[static_cast<size_t>(j)] = idx;
  }

  SparseState out;
  std::set<int> populated_cols;
  for (const auto& [s, amp] : state) {
    if (static_cast<int>(s.occ.size()) != joint.size())
      throw std::invalid_argument("apply_gate: state has wrong mode count");
    FockState loc;
    loc.occ.resize(static_cast<size_t>(nfoot));
    for (int j = 0; j < nfoot; ++j)
      loc.occ[static_cast<size_t>(j)] =
          s.occ[static_cast<size_t>(fidx[static_cast<size_t>(j)])];
    auto col = g.local->find(loc);
    if (!col) {
      out[s] += amp;  // outside the gate's table: identity, flagged
      if (report) {
        report->passthrough_norm_sq += std::norm(amp);
        ++report->passthrough_count;
      }
      continue;
    }
    populated_cols.insert(*col);
    for (int r = 0; r < g.u.rows(); ++r) {
      cx w = g.u(r, *col);
      if (std::abs(w) < 1e-16) continue;
      FockState ns = s;
      const FockState& rs = g.local->state(r);
      for (int j = 0; j < nfoot; ++j)
        ns.occ[static_cast<size_t>(fidx[static_cast<size_t>(j)])] =
            rs.occ[static_cast<size_t>(j)];
      out[ns] += amp * w;
    }
  }

  if (report && g.column_leakage.size() == g.u.rows() &&
      g.column_leakage.maxCoeff() > 0.0) {
    // Local states reachable from the populated ones; if any of them loses
    // norm to truncation under the generating Hamiltonian, the evolution on
    // this input is not exact and the audit says so.
    double worst = 0.0;
    for (int r = 0; r < g.u.rows(); ++r) {
      for (int c : populated_cols) {
        if (std::abs(g.u(r, c)) > 1e-14) {
          worst = std::max(worst, g.column_leakage(r));
          break;
        }
      }
    }
    report->audit_leakage = std::max(report->audit_leakage, worst);
  }
  return out;
}

SparseState apply_circuit(const Circuit& c, const SparseState& state,
                          ApplyReport* report) {
  SparseState cur = state;
  for (const Gate& g : c.gates) {
    ApplyReport step;
    cur = apply_gate(g, cur, c.modes, &step);
    if (report) report->merge(step);
  }
  return cur;
}

OperatorMatrix circuit_unitary(const Circuit& c, const BasisPtr& joint) {
  assert(joint);
  const int d = joint->dim();
  OperatorMatrix om;
  om.basis = joint;
  om.entries = Mat::Zero(d, d);
  om.column_leakage = Eigen::VectorXd::Zero(d);
  for (int col = 0; col < d; ++col) {
    SparseState in;
    in[joint->state(col)] = 1.0;
    SparseState out = apply_circuit(c, in);
    double lost_sq = 0.0;
    for (const auto& [s, amp] : out) {
      if (auto row = joint->find(s)) {
        om.entries(*row, col) += amp;
      } else {
        lost_sq += std::norm(amp);
      }
    }
    om.column_leakage(col) = std::sqrt(lost_sq);
  }
  return om;
}

double distance_up_to_phase(const Mat& u, const Mat& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols() || u.rows() != u.cols())
    throw std::invalid_argument("distance_up_to_phase: dimension mismatch");
  const int d = static_cast<int>(u.rows());
  const Mat id = Mat::Identity(d, d);
  if ((u.adjoint() * u - id).cwiseAbs().maxCoeff() > 1e-8 ||
      (v.adjoint() * v - id).cwiseAbs().maxCoeff() > 1e-8)
    throw std::invalid_argument("distance_up_to_phase: non-unitary input");
  return 1.0 - std::abs((u.adjoint() * v).trace()) / static_cast<double>(d);
}

std::string circuit_to_json(const Circuit& c) {
  nlohmann::ordered_json j;
  j["modes"] = nlohmann::ordered_json::array();
  for (const auto& m : c.modes.modes())
    j["modes"].push_back({{"id", m.id}, {"max_occupation", m.max_occupation}});
  j["gates"] = nlohmann::ordered_json::array();
  for (const Gate& g : c.gates) {
    nlohmann::ordered_json gj;
    gj["label"] = g.label;
    gj["footprint"] = g.footprint;
    gj["params"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : g.params) gj["params"][k] = v;
    j["gates"].push_back(std::move(gj));
  }
  return j.dump(2);
}

namespace {

// Occupations of the qubit block (s,i,p) for logical value j in {0,1}.
std::array<int, 3> qubit_occ(int j) {
  return j == 0 ? std::array<int, 3>{1, 1, 0} : std::array<int, 3>{0, 0, 1};
}

// Occupations of the qutrit block for logical value j in {0,1,2}, logical
// order (|1,1,1>, |2,2,0>, |0,0,2>).
std::array<int, 3> qutrit_occ(int j) {
  switch (j) {
    case 0: return {1, 1, 1};
    case 1: return {2, 2, 0};
    default: return {0, 0, 2};
  }
}

}  // namespace

Lambda2Result build_lambda2_z() {
  ModeSet modes({{"sc", 1}, {"ic", 1}, {"pc", 1}, {"pcp", 1},
                 {"st", 1}, {"it", 1}, {"pt", 1}, {"g", 1}});
  Circuit c;
  c.modes = modes;
  Gate q1 = qfc("pc", "pcp");
  q1.label = "QFC1";
  Gate s = sfg(std::numbers::pi, "pcp", "pt", "g");
  s.label = "SFG_pi";
  Gate q2 = qfc("pc", "pcp");
  q2.label = "QFC2";
  c.gates = {std::move(q1), std::move(s), std::move(q2)};

  auto logical_state = [&](int j, int k) {
    auto cj = qubit_occ(j);
    auto tk = qubit_occ(k);
    return FockState{{cj[0], cj[1], cj[2], 0, tk[0], tk[1], tk[2], 0}};
  };

  Lambda2Result res;
  res.circuit = c;
  res.logical = Mat::Zero(4, 4);
  double lost_sq = 0.0;
  for (int col = 0; col < 4; ++col) {
    SparseState in;
    in[logical_state(col / 2, col % 2)] = 1.0;
    SparseState out = apply_circuit(c, in);
    for (const auto& [state, amp] : out) {
      bool placed = false;
      for (int row = 0; row < 4; ++row) {
        if (state == logical_state(row / 2, row % 2)) {
          res.logical(row, col) += amp;
          placed = true;
          break;
        }
      }
      if (!placed) lost_sq += std::norm(amp);
    }
  }
  res.leakage = std::sqrt(lost_sq);
  Mat target = Mat::Identity(4, 4);
  target(3, 3) = -1.0;
  res.distance = distance_up_to_phase(res.logical, target);
  return res;
}

Lambda3Result build_lambda3_z(const PhaseConvention& conv) {
  ModeSet modes({{"sc", 2}, {"ic", 2}, {"pc", 2}, {"fc", 1}, {"fcp", 1},
                 {"st", 2}, {"it", 2}, {"pt", 2}, {"ft", 1}, {"g", 1}});
  Circuit c;
  c.modes = modes;
  {
    Gate g1 = shg("pc", "fc", conv);          g1.label = "SHG_c";
    Gate g2 = shg("pt", "ft", conv);          g2.label = "SHG_t";
    Gate g3 = qfc("fc", "fcp");               g3.label = "QFC1";
    Gate g4 = sfg(std::numbers::pi, "fcp", "ft", "g");
    g4.label = "SFG_pi";
    Gate g5 = qfc("fc", "fcp");               g5.label = "QFC2";
    Gate g6 = spdc("fc", "pc", conv);         g6.label = "SPDC_c";
    Gate g7 = spdc("ft", "pt", conv);         g7.label = "SPDC_t";
    c.gates = {std::move(g1), std::move(g2), std::move(g3), std::move(g4),
               std::move(g5), std::move(g6), std::move(g7)};
  }

  auto logical_state = [&](int j, int k) {
    auto cj = qutrit_occ(j);
    auto tk = qutrit_occ(k);
    return FockState{
        {cj[0], cj[1], cj[2], 0, 0, tk[0], tk[1], tk[2], 0, 0}};
  };

  Lambda3Result res;
  res.circuit = c;
  res.convention = conv;
  res.logical = Mat::Zero(9, 9);
  double lost_sq = 0.0;
  double offdiag = 0.0;
  for (int col = 0; col < 9; ++col) {
    SparseState in;
    in[logical_state(col / 3, col % 3)] = 1.0;
    SparseState out = apply_circuit(c, in);
    double off_sq = 0.0;
    for (const auto& [state, amp] : out) {
      bool placed = false;
      for (int row = 0; row < 9; ++row) {
        if (state == logical_state(row / 3, row % 3)) {
          res.logical(row, col) += amp;
          if (row != col) off_sq += std::norm(amp);
          placed = true;
          break;
        }
      }
      if (!placed) lost_sq += std::norm(amp);
    }
    offdiag = std::max(offdiag, std::sqrt(off_sq));
  }
  res.leakage = std::sqrt(lost_sq);
  res.offdiagonal_residual = offdiag;

  // Divide out the controlled-Z sign, then read the local diagonal
  // corrections off the first row/column in the natural gauge.
  auto cz_sign = [](int j, int k) { return (j == 2 && k == 2) ? -1.0 : 1.0; };
  std::array<std::array<cx, 3>, 3> lam;
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k)
      lam[static_cast<size_t>(j)][static_cast<size_t>(k)] =
          res.logical(3 * j + k, 3 * j + k) * cz_sign(j, k);
  if (std::abs(lam[0][0]) < 1e-8)
    throw std::runtime_error("build_lambda3_z: degenerate gauge");
  for (int j = 0; j < 3; ++j) {
    res.d_control[static_cast<size_t>(j)] = lam[static_cast<size_t>(j)][0];
    res.d_target[static_cast<size_t>(j)] = lam[0][static_cast<size_t>(j)] /
                                           lam[0][0];
  }
  double worst = 0.0;
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k)
      worst = std::max(
          worst, std::abs(lam[static_cast<size_t>(j)][static_cast<size_t>(k)] -
                          res.d_control[static_cast<size_t>(j)] *
                              res.d_target[static_cast<size_t>(k)]));
  res.factorization_residual = worst;
  return res;
}

}  // namespace chi2
