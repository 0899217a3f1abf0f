#include "chi2/injection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include <Eigen/Dense>

namespace chi2 {

namespace {

constexpr double kPi = std::numbers::pi;

std::string rung_ancilla(int k) { return "p'" + std::to_string(k); }

double norm_sq(const SparseState& s) {
  double t = 0.0;
  for (const auto& [st, amp] : s) t += std::norm(amp);
  return t;
}

cx amplitude(const SparseState& s, const FockState& f) {
  auto it = s.find(f);
  return it == s.end() ? cx{0.0, 0.0} : it->second;
}

}  // namespace

Gate inject_pump(int signal_trunc, int idler_trunc,
                 const std::string& ancilla) {
  if (signal_trunc < 1 || idler_trunc < 1)
    throw std::invalid_argument("inject_pump: truncations must be >= 1");
  auto local = product_basis(
      ModeSet({{"s", signal_trunc}, {"i", idler_trunc}, {ancilla, 1}}));
  return evolve(to_matrix(g2a_expr(ancilla), local), -kPi / 2.0,
                "inject(" + ancilla + ")");
}

RotateResult rotate_111_to_002(double kappa, const PhaseConvention& conv) {
  if (!(kappa > 0.0))
    throw std::invalid_argument("rotate_111_to_002: kappa must be positive");
  RotateResult res;
  res.circuit.modes = ModeSet({{"s", 2}, {"i", 2}, {"p", 2}, {"h", 1}});

  auto sip = product_basis(ModeSet({{"s", 2}, {"i", 2}, {"p", 2}}));
  OperatorMatrix h = to_matrix(cx{2.0, 0.0} * g1_expr(kappa), sip);
  const double t = 2.0 * kPi / (3.0 * kappa * std::sqrt(6.0));
  res.circuit.gates.push_back(evolve(h, t, "rotate_1"));
  res.circuit.gates.push_back(shg("i", "h", conv));
  res.circuit.gates.push_back(spdc("h", "i", conv));
  res.circuit.gates.push_back(evolve(h, 2.0 * t, "rotate_3"));

  const std::array<FockState, 3> logical = {FockState{{1, 1, 1, 0}},
                                            FockState{{2, 2, 0, 0}},
                                            FockState{{0, 0, 2, 0}}};
  SparseState state{{logical[0], cx{1.0, 0.0}}};
  auto snapshot = [&](Vec& out) {
    out = Vec::Zero(3);
    double logical_sq = 0.0;
    for (int j = 0; j < 3; ++j) {
      out(j) = amplitude(state, logical[static_cast<size_t>(j)]);
      logical_sq += std::norm(out(j));
    }
    return std::sqrt(std::max(0.0, norm_sq(state) - logical_sq));
  };

  state = apply_gate(res.circuit.gates[0], state, res.circuit.modes);
  res.step_leakage[0] = snapshot(res.psi1);
  state = apply_gate(res.circuit.gates[1], state, res.circuit.modes);
  state = apply_gate(res.circuit.gates[2], state, res.circuit.modes);
  res.step_leakage[1] = snapshot(res.psi2);
  state = apply_gate(res.circuit.gates[3], state, res.circuit.modes);
  res.step_leakage[2] = snapshot(res.psi3);
  res.final_overlap = std::abs(res.psi3(2));
  return res;
}

LadderResult prepare_fock_ladder(int n_target, double tol,
                                 std::uint64_t seed) {
  if (n_target < 1)
    throw std::invalid_argument("prepare_fock_ladder: n_target must be >= 1");
  std::vector<ModeSpec> specs = {
      {"s", n_target}, {"i", n_target}, {"p", n_target}};
  if (n_target >= 2) specs.push_back({"h", 1});
  for (int k = 1; k < n_target; ++k) specs.push_back({rung_ancilla(k), 1});

  LadderResult res;
  res.circuit.modes = ModeSet(std::move(specs));
  const ModeSet& joint = res.circuit.modes;

  FockState start;
  start.occ.assign(static_cast<size_t>(joint.size()), 0);
  start.occ[2] = 1;  // one pump photon
  for (int k = 1; k < n_target; ++k)
    start.occ[static_cast<size_t>(joint.index_of(rung_ancilla(k)))] = 1;

  res.success = true;
  for (int k = 1; k < n_target; ++k) {
    res.circuit.gates.push_back(
        inject_pump(n_target, n_target, rung_ancilla(k)));
    if (k == 1) {
      RotateResult rot = rotate_111_to_002();
      for (auto& g : rot.circuit.gates)
        res.circuit.gates.push_back(std::move(g));
    } else {
      // Synthesize |1,1,k> -> |0,0,k+1> over (g1, g2) on the (k+1)-photon
      // ladder, then extend each segment to the full product space (exact:
      // the ladder is an invariant block there).
      Chi2Generators gen = chi2_generators(k + 1);
      SynthesisProblem prob;
      prob.basis = gen.basis;
      prob.generators = {gen.G1, gen.G2};
      prob.labels = {"G1", "G2"};
      ConstraintPair cp;
      cp.in = Vec::Zero(prob.basis->dim());
      cp.out = Vec::Zero(prob.basis->dim());
      cp.in(*prob.basis->find(FockState{{1, 1, k}})) = 1.0;
      cp.out(*prob.basis->find(FockState{{0, 0, k + 1}})) = 1.0;
      prob.constraints.push_back(std::move(cp));
      prob.tol = tol;
      prob.seed = seed;
      PulseSequence seq = synthesize(prob);
      res.rung_residuals.push_back(seq.achieved_residual);
      if (!seq.success) res.success = false;

      auto sip = product_basis(
          ModeSet({{"s", k + 1}, {"i", k + 1}, {"p", k + 1}}));
      OperatorMatrix h1 = to_matrix(g1_expr(), sip);
      OperatorMatrix h2 = to_matrix(g2_expr(), sip);
      for (const auto& seg : seq.segments)
        res.circuit.gates.push_back(
            evolve(seg.generator == 0 ? h1 : h2, seg.duration,
                   "rung" + std::to_string(k) + "_" +
                       seq.labels[static_cast<size_t>(seg.generator)]));
    }
  }

  res.state = apply_circuit(res.circuit, SparseState{{start, cx{1.0, 0.0}}});
  res.target.occ.assign(static_cast<size_t>(joint.size()), 0);
  res.target.occ[2] = n_target;
  res.overlap = std::abs(amplitude(res.state, res.target));
  res.fidelity = res.overlap * res.overlap;
  if (res.fidelity < 1.0 - 1e-8) res.success = false;
  return res;
}

SubtractionTargets subtraction_targets(int n) {
  if (n < 3)
    throw std::invalid_argument("subtraction_targets: n must be >= 3");
  SubtractionTargets t;
  t.modes = ModeSet({{"s", n + 1},
                     {"i", n + 1},
                     {"p", n + 1},
                     {"s'", n + 1},
                     {"i'", n + 1},
                     {"p'", n + 1}});
  for (int j = 1; j <= n; ++j) {
    t.stage1.emplace_back(FockState{{j, j, n + 1 - j, 0, 0, n - 3}},
                          FockState{{j - 1, j - 1, n + 1 - j, 0, 0, n - 2}});
    t.stage2.emplace_back(FockState{{j - 1, j - 1, n + 1 - j, 0, 0, n - 2}},
                          FockState{{j - 1, j - 1, n - j, 1, 1, n - 2}});
  }
  return t;
}

SynthesisProblem subtraction_problem(int n, AncillaKind kind,
                                     std::uint64_t seed) {
  const bool pp = (kind == AncillaKind::p_prime);
  if (pp && n < 3)
    throw std::invalid_argument(
        "subtraction_problem: the (s,i,p') stage needs n >= 3");
  if (!pp && n < 2)
    throw std::invalid_argument(
        "subtraction_problem: the (s',i',p) stage needs n >= 2");

  auto [e1, e2] = ancilla_generators(kind);
  // Truncations sized so every constraint sector closes exactly (the chain
  // ends are annihilated, not cut), keeping the generators leakage-free.
  const int top = pp ? 2 * n - 3 : n;
  ModeSet modes = pp ? ModeSet({{"s", top}, {"i", top}, {"p'", top}})
                     : ModeSet({{"s'", top}, {"i'", top}, {"p", top}});

  std::vector<FockState> seeds;
  std::vector<std::pair<FockState, FockState>> pairs;
  for (int j = 1; j <= n; ++j) {
    FockState in, out;
    if (pp) {
      in.occ = {j, j, n - 3};
      out.occ = {j - 1, j - 1, n - 2};
    } else {
      in.occ = {0, 0, n + 1 - j};
      out.occ = {1, 1, n - j};
    }
    seeds.push_back(in);
    seeds.push_back(out);
    pairs.emplace_back(std::move(in), std::move(out));
  }

  SynthesisProblem prob;
  prob.basis = span_closure({e1, e2}, seeds, modes);
  prob.generators = {to_matrix(e1, prob.basis), to_matrix(e2, prob.basis)};
  prob.labels = pp ? std::vector<std::string>{"G1p'", "G2p'"}
                   : std::vector<std::string>{"G1s'i'", "G2s'i'"};
  for (const auto& [in, out] : pairs) {
    ConstraintPair cp;
    cp.in = Vec::Zero(prob.basis->dim());
    cp.out = Vec::Zero(prob.basis->dim());
    cp.in(*prob.basis->find(in)) = 1.0;
    cp.out(*prob.basis->find(out)) = 1.0;
    prob.constraints.push_back(std::move(cp));
  }
  prob.seed = seed;
  return prob;
}

SubtractionBoundaryCheck subtraction_boundary_check(int n,
                                                    std::uint64_t seed) {
  if (n < 3)
    throw std::invalid_argument(
        "subtraction_boundary_check: n must be >= 3");
  SubtractionBoundaryCheck chk;
  chk.n = n;

  SynthesisProblem prob1 = subtraction_problem(n, AncillaKind::p_prime, seed);
  SynthesisProblem prob2 =
      subtraction_problem(n, AncillaKind::s_prime_i_prime, seed);
  chk.stage1 = synthesize(prob1);
  chk.stage2 = synthesize(prob2);
  chk.success = chk.stage1.success && chk.stage2.success;

  // Product spaces large enough to hold the boundary chains exactly: the
  // signal chain climbs the stage-1 ancilla to n-3+(n+1) = 2n-2, the pump
  // chain climbs (s',i') to n+1.
  const int hi = std::max(n + 1, 2 * n - 2);
  auto [e1a, e1b] = ancilla_generators(AncillaKind::p_prime);
  auto fp1 = product_basis(ModeSet({{"s", hi}, {"i", hi}, {"p'", 2 * n - 2}}));
  OperatorMatrix h1a = to_matrix(e1a, fp1);
  OperatorMatrix h1b = to_matrix(e1b, fp1);
  auto [e2a, e2b] = ancilla_generators(AncillaKind::s_prime_i_prime);
  auto fp2 =
      product_basis(ModeSet({{"s'", n + 1}, {"i'", n + 1}, {"p", n + 1}}));
  OperatorMatrix h2a = to_matrix(e2a, fp2);
  OperatorMatrix h2b = to_matrix(e2b, fp2);

  Circuit circ;
  circ.modes = ModeSet({{"s", hi},
                        {"i", hi},
                        {"p", n + 1},
                        {"s'", n + 1},
                        {"i'", n + 1},
                        {"p'", 2 * n - 2}});
  for (const auto& seg : chk.stage1.segments)
    circ.gates.push_back(
        evolve(seg.generator == 0 ? h1a : h1b, seg.duration,
               chk.stage1.labels[static_cast<size_t>(seg.generator)]));
  for (const auto& seg : chk.stage2.segments)
    circ.gates.push_back(
        evolve(seg.generator == 0 ? h2a : h2b, seg.duration,
               chk.stage2.labels[static_cast<size_t>(seg.generator)]));

  FockState pump_in{{0, 0, n + 1, 0, 0, n - 3}};
  FockState sig_in{{n + 1, n + 1, 0, 0, 0, n - 3}};
  SparseState pump_img =
      apply_circuit(circ, SparseState{{pump_in, cx{1.0, 0.0}}});
  SparseState sig_img =
      apply_circuit(circ, SparseState{{sig_in, cx{1.0, 0.0}}});

  chk.pump_chain.resize(static_cast<size_t>(n + 2));
  chk.signal_chain.resize(static_cast<size_t>(n + 2));
  double psq = 0.0, ssq = 0.0;
  for (int k = 0; k <= n + 1; ++k) {
    FockState c{{0, 0, n + 1 - k, k, k, n - 3}};
    FockState d{{n + 1 - k, n + 1 - k, 0, 0, 0, n - 3 + k}};
    chk.pump_chain[static_cast<size_t>(k)] = amplitude(pump_img, c);
    chk.signal_chain[static_cast<size_t>(k)] = amplitude(sig_img, d);
    psq += std::norm(chk.pump_chain[static_cast<size_t>(k)]);
    ssq += std::norm(chk.signal_chain[static_cast<size_t>(k)]);
  }
  chk.pump_chain_norm = psq;
  chk.signal_chain_norm = ssq;

  const int is = circ.modes.index_of("s'");
  const int ii = circ.modes.index_of("i'");
  const int ip = circ.modes.index_of("p'");
  double fsq = 0.0;
  for (const SparseState* img : {&pump_img, &sig_img})
    for (const auto& [st, amp] : *img)
      if (st.occ[static_cast<size_t>(is)] == 1 &&
          st.occ[static_cast<size_t>(ii)] == 1 &&
          st.occ[static_cast<size_t>(ip)] == n - 2)
        fsq += std::norm(amp);
  chk.forbidden_norm = std::sqrt(fsq);
  return chk;
}

ImprimitivityResult imprimitivity_check(double theta, Vec alpha, Vec beta) {
  ImprimitivityResult res;
  res.theta = theta;
  if (alpha.size() == 0) {
    alpha = Vec::Zero(3);
    alpha(0) = alpha(1) = 1.0 / std::sqrt(2.0);
  }
  if (beta.size() == 0) {
    beta = Vec::Zero(4);
    beta(0) = beta(1) = 1.0 / std::sqrt(2.0);
  }
  if (alpha.size() != 3)
    throw std::invalid_argument(
        "imprimitivity_check: alpha needs 3 amplitudes (canonical "
        "two-pump-photon states)");
  if (beta.size() != 4)
    throw std::invalid_argument(
        "imprimitivity_check: beta needs 4 amplitudes (ancilla occupations "
        "0..3)");
  const double na = alpha.norm(), nb = beta.norm();
  if (na < 1e-14 || nb < 1e-14)
    throw std::invalid_argument("imprimitivity_check: zero input amplitudes");
  alpha /= na;
  beta /= nb;
  res.alpha = alpha;
  res.beta = beta;

  auto basis =
      product_basis(ModeSet({{"s", 3}, {"i", 3}, {"p", 2}, {"p'", 3}}));
  auto h2 = enumerate_pump_subspace(2);
  OperatorMatrix g2p =
      to_matrix(ancilla_generators(AncillaKind::p_prime).second, basis);
  Mat u = evolve(g2p, theta, "imprimitivity").u;

  auto idx = [&](int j, int q) {
    const FockState& c = h2->state(j);
    return *basis->find(FockState{{c.occ[0], c.occ[1], c.occ[2], q}});
  };

  Vec psi = Vec::Zero(basis->dim());
  for (int j = 0; j < 3; ++j)
    for (int q = 0; q < 4; ++q) psi(idx(j, q)) += alpha(j) * beta(q);
  Vec phi = u * psi;

  // Ancilla marginal: the basis is row-major with p' fastest, so reshaping
  // to (core x ancilla) and forming T^dag T gives the reduced state.
  const int nanc = 4;
  Mat t = Mat::Zero(basis->dim() / nanc, nanc);
  for (int f = 0; f < basis->dim(); ++f) t(f / nanc, f % nanc) = phi(f);
  Mat rho = t.adjoint() * t;
  Eigen::SelfAdjointEigenSolver<Mat> es(rho);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("imprimitivity_check: eigensolver failed");
  double entropy = 0.0;
  for (int k = 0; k < es.eigenvalues().size(); ++k) {
    const double ev = es.eigenvalues()(k);
    if (ev > 1e-15) entropy -= ev * std::log(ev);
  }
  res.entropy = entropy;
  res.entropy_bound = std::log(static_cast<double>(nanc));
  for (int j = 0; j < 3; ++j)
    for (int q = 0; q < 2; ++q) {
      const int k = idx(j, q);
      res.self_return[static_cast<size_t>(j)][static_cast<size_t>(q)] =
          u(k, k);
    }
  return res;
}

}  // namespace chi2
