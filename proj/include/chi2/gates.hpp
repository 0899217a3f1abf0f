#pragma once
// Unitary gates with declared mode footprints, circuit composition, the
// optical primitive library (SFG, QFC, SHG, SPDC, phase shift), and the
// two controlled-Z constructions on qubit and qutrit registers.

#include <array>
#include <map>
#include <string>
#include <vector>

#include "chi2/operators.hpp"

namespace chi2 {

// Relative phases picked up by the second-harmonic round trip.  The defaults
// give a -1 round-trip (Berry) phase: shg followed by spdc multiplies the
// two-photon component by shg_phase * spdc_phase = -1.
struct PhaseConvention {
  cx shg_phase{1.0, 0.0};
  cx spdc_phase{-1.0, 0.0};
  cx berry_roundtrip() const { return shg_phase * spdc_phase; }
};

// A unitary acting on an explicit local basis over its footprint modes.
// Joint states whose footprint occupation is not in the local basis pass
// through unchanged and are counted by the apply report.
struct Gate {
  std::string label;
  std::vector<std::string> footprint;  // mode ids the gate may act on
  BasisPtr local;                      // basis over exactly those modes
  Mat u;                               // unitary on `local`
  // Truncation audit inherited from the generating Hamiltonian: per local
  // basis state, the norm its image loses outside the local basis.  All
  // zeros when the local space is exactly invariant.
  Eigen::VectorXd column_leakage;
  std::map<std::string, double> params;

  double unitarity_error() const;
};

struct ApplyReport {
  // Weight and count of joint states acted on as identity because their
  // footprint occupation has no row in the gate's local basis.
  double passthrough_norm_sq = 0.0;
  long passthrough_count = 0;
  // Worst Hamiltonian-truncation leakage among local states reachable from
  // the populated ones; zero means the application was exact.
  double audit_leakage = 0.0;

  void merge(const ApplyReport& other);
};

// exp(-i t H).  H must be Hermitian to 1e-10; computed by exact
// eigendecomposition, unitary to machine precision.
Gate evolve(const OperatorMatrix& h, double t, std::string label = "evolve");

// Sum-frequency conversion between (in1, in2) and the output mode: the
// partial-Rabi unitary rotating |1,1,0> -> cos(theta)|1,1,0> +
// sin(theta)|0,0,1> and |0,0,1> -> -sin(theta)|1,1,0> + cos(theta)|0,0,1>,
// leaving |1,0,0>, |0,1,0>, |0,0,0> fixed.
Gate sfg(double theta, const std::string& in1, const std::string& in2,
         const std::string& out);

// Single-photon frequency swap: |1,0> <-> |0,1> with phase +1, identity on
// |0,0> and |1,1>.  Occupations >= 2 pass through (flagged by the report).
Gate qfc(const std::string& a, const std::string& b);

// Second-harmonic generation |2>_low|0>_high -> shg_phase |0>_low|1>_high
// (and the unitary reverse), identity on the 0- and 1-photon states.
Gate shg(const std::string& low, const std::string& high,
         const PhaseConvention& conv = {});
// Downconversion |1>_high -> spdc_phase |2>_low, the inverse direction.
Gate spdc(const std::string& high, const std::string& low,
          const PhaseConvention& conv = {});
// Cross-validation variant: timed evolution under i(b†a² - b a†²)/2; full
// conversion at t = pi/sqrt(2) reproduces shg with the default convention.
Gate shg_rabi(const std::string& low, const std::string& high, double t);

// exp(i phi n̂) on one mode.
Gate phase_shift(const std::string& mode, double phi, int truncation);

// Apply a gate to a sparse state over a joint mode set.  The joint set must
// contain every footprint mode with truncation at least the gate's local
// one; the local basis defines which occupations are acted upon.
SparseState apply_gate(const Gate& g, const SparseState& state,
                       const ModeSet& joint, ApplyReport* report = nullptr);

// Ordered gate list over one joint mode set; total unitary is the ordered
// product (first gate acts first).  Mode routing between rails is pure
// relabeling and carries no gate of its own.
struct Circuit {
  ModeSet modes;
  std::vector<Gate> gates;
};

SparseState apply_circuit(const Circuit& c, const SparseState& state,
                          ApplyReport* report = nullptr);

// Dense total unitary of the circuit on an explicit joint basis.  Amplitude
// landing outside the basis is accumulated into column leakage.
OperatorMatrix circuit_unitary(const Circuit& c, const BasisPtr& joint);

// 1 - |tr(U†V)|/d: zero iff U = e^{i phi} V.  Rejects non-unitary input.
double distance_up_to_phase(const Mat& u, const Mat& v);

std::string circuit_to_json(const Circuit& c);

// Controlled-Z on two qubit registers encoded in one-pump-photon spaces.
// The circuit converts the control pump to a spectator frequency, applies a
// pi-angle SFG against the target pump, and converts back; the logical
// restriction is diag(1,1,1,-1).
struct Lambda2Result {
  Circuit circuit;
  Mat logical;      // 4x4 restriction, logical order |00>,|01>,|10>,|11>
  double distance;  // distance_up_to_phase from diag(1,1,1,-1)
  double leakage;   // amplitude norm outside the logical subspace
};
Lambda2Result build_lambda2_z();

// Controlled-Z on two qutrit registers encoded in two-pump-photon spaces.
// Each rail is frequency-doubled, a qubit-style controlled phase acts on the
// doubled photons, and each rail is converted back.  The logical restriction
// equals CZ (a -1 on the |2,2> component) times reported diagonal local
// corrections determined by the phase convention.
struct Lambda3Result {
  Circuit circuit;
  Mat logical;  // 9x9 restriction, control-major logical order
  std::array<cx, 3> d_control, d_target;  // diagonal local corrections
  double offdiagonal_residual;   // amplitude off the expected diagonal
  double factorization_residual; // residual of the CZ·(Dc⊗Dt) factorization
  double leakage;                // amplitude outside the logical subspace
  PhaseConvention convention;
};
Lambda3Result build_lambda3_z(const PhaseConvention& conv = {});

}  // namespace chi2
