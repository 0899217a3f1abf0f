#pragma once
// Pump-photon management built from the interaction primitives: ancilla
// injection pulses, the three-step two-photon rotation, iterative Fock-ladder
// preparation, photon-subtraction pulse problems with boundary-sector
// checks, and an ancilla-entanglement witness.

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "chi2/gates.hpp"
#include "chi2/operators.hpp"
#include "chi2/synthesis.hpp"

namespace chi2 {

// Quarter-period pulse of the injection generator on (s, i, ancilla):
// exp(+i pi/2 g2a), mapping |0,0;1> -> i |1,1;0> exactly while the pump
// stays a spectator.  The signal/idler truncations set the gate's local
// space and must not exceed those of the joint space it is applied to.
Gate inject_pump(int signal_trunc, int idler_trunc,
                 const std::string& ancilla = "p'");

// Three-step rotation carrying |1,1,1> to -|0,0,2> on the two-pump-photon
// space: timed evolution under 2 kappa g1 for t = 2 pi / (3 kappa sqrt(6)),
// a second-harmonic round trip on the idler (imprinting the -1 phase on the
// |2,2,0> component), then the same evolution again for duration 2t.
struct RotateResult {
  Circuit circuit;
  // Amplitudes on (|1,1,1>, |2,2,0>, |0,0,2>) after the first evolution,
  // after the harmonic round trip, and at the end.
  Vec psi1, psi2, psi3;
  std::array<double, 3> step_leakage;  // out-of-logical norm at each snapshot
  double final_overlap;                // |<0,0,2|psi3>|
};
RotateResult rotate_111_to_002(double kappa = 1.0,
                               const PhaseConvention& conv = {});

// Grow |0,0,1> to |0,0,n> by alternating ancilla injections with rung
// transfers |1,1,k> -> |0,0,k+1>: the k = 1 rung uses the exact three-step
// rotation, higher rungs are synthesized pulse sequences over (g1, g2) on
// the (k+1)-pump-photon ladder.  Consumes one single-photon ancilla
// (p'1 ... p'(n-1)) per rung.
struct LadderResult {
  Circuit circuit;
  SparseState state;  // final state over (s, i, p, h, p'1..)
  FockState target;   // |0,0,n> with every ancilla empty
  double overlap;     // |<target|state>|
  double fidelity;    // overlap squared
  std::vector<double> rung_residuals;  // synthesized rungs only (k >= 2)
  bool success;       // fidelity >= 1 - 1e-8 and all syntheses converged
};
LadderResult prepare_fock_ladder(int n_target, double tol = 1e-8,
                                 std::uint64_t seed = 12345);

// Photon-subtraction targets on the six-mode space (s, i, p, s', i', p'),
// all truncated at n+1.  Stage 1 moves one photon from each of (s, i) into
// the p' ancilla; stage 2 moves one pump photon into the (s', i') pair.
// Pairs are ordered by j = 1..n (the signal occupation before stage 1).
struct SubtractionTargets {
  ModeSet modes;
  std::vector<std::pair<FockState, FockState>> stage1, stage2;
};
SubtractionTargets subtraction_targets(int n);

// Pulse problem for one subtraction stage on its three-mode footprint.  The
// state space is the exact invariant closure of the constraint states under
// the stage generators (9 states for n = 3), so the synthesized dynamics is
// leakage-free by construction.
SynthesisProblem subtraction_problem(int n, AncillaKind kind,
                                     std::uint64_t seed = 12345);

// Solve both stages, extend them to the full three-mode product spaces
// (truncation n+1), compose them, and record how the two boundary states
// |0,0,n+1> and |n+1,n+1,0> spread along their closed occupation chains.
struct SubtractionBoundaryCheck {
  int n = 0;
  PulseSequence stage1, stage2;
  // <0,0,n+1-k; k,k; 0| image of |0,0,n+1;0,0;0>, k = 0..n+1; the pump
  // boundary state only feels stage 2.
  std::vector<cx> pump_chain;
  // <n+1-k,n+1-k,0; 0,0; k| image of |n+1,n+1,0;0,0;0>; only stage 1 acts.
  std::vector<cx> signal_chain;
  double pump_chain_norm = 0.0;    // probability within the chain (expect 1)
  double signal_chain_norm = 0.0;
  // Total weight of both images in the flagged sector s' = i' = 1 with
  // p' = n-2, which the closed chains can never reach.
  double forbidden_norm = 0.0;
  bool success = false;  // both stage syntheses met tolerance
};
SubtractionBoundaryCheck subtraction_boundary_check(int n = 3,
                                                    std::uint64_t seed = 12345);

// Entanglement witness for the pump ancilla: evolve a product of a
// two-pump-photon superposition (alpha over the canonical three states,
// pump kept as a spectator) and an ancilla superposition (beta over
// occupations 0..3) under the stage-1 generator g2 for angle theta, then
// measure the von Neumann entropy of the ancilla marginal.  Any nonzero
// entropy certifies that the coupling does not factor into independent
// system and ancilla rotations.
struct ImprimitivityResult {
  double theta = 0.0;
  Vec alpha, beta;  // normalized amplitudes actually used
  double entropy = 0.0;
  double entropy_bound = 0.0;  // ln(ancilla dimension)
  // Self-return amplitude of the product basis state (canonical state j) x
  // (ancilla occupation q), for j = 0..2 and q = 0..1.  State-dependent
  // moduli are the imprimitivity signature.
  std::array<std::array<cx, 2>, 3> self_return;
};
ImprimitivityResult imprimitivity_check(double theta, Vec alpha = Vec(),
                                        Vec beta = Vec());

}  // namespace chi2
