#pragma once
// Splitting the n-pump-photon exchange generator into boundary and bulk
// parts: the two outermost two-state rungs of the occupation ladder form the
// boundary term, everything between them the bulk.  A first-order product
// formula alternating full-generator and reverse-bulk steps converges to the
// pure boundary rotation at rate 1/m, and timed boundary-generator pulses
// drive independent SU(2) actions on the two boundary doublets.

#include <cstdint>
#include <vector>

#include "chi2/gates.hpp"
#include "chi2/operators.hpp"

namespace chi2 {

// Two-rung boundary part on the (n+1)-pump-photon space (dimension n+2):
// sqrt(n+1) * rung(k=n) + (n+1) * rung(k=0), with the given Pauli axis.
OperatorMatrix boundary_generator(PauliAxis axis, int n);

// Everything else in the ladder decomposition of twice the full generator:
// sum over k = 1 .. n-1 of (n+1-k) * sqrt(k+1) * rung(k).  Requires n >= 2
// (below that there is no bulk).
OperatorMatrix bulk_generator(PauliAxis axis, int n);

// exp(-i theta * bulk).  Fixes both boundary basis states exactly.
Gate bulk_rotation(PauliAxis axis, double theta, int n);

struct TrotterResult {
  PauliAxis axis;
  int n = 0;
  double theta = 0.0;
  int m = 0;
  Mat approx;       // [exp(+i 2 theta/m G_full) exp(-i theta/m bulk)]^m
  Mat target;       // exp(+i theta * boundary)
  double error;     // largest absolute entry of approx - target (linear in
                    // the step size, halving when m doubles)
  double distance;  // phase-blind trace distance (quadratic in the step)
};

// First-order product formula for the boundary rotation by angle theta,
// using m steps of the full interaction generator interleaved with reverse
// bulk rotations.
TrotterResult trotter_v(PauliAxis axis, double theta, int m, int n);

std::vector<TrotterResult> trotter_curve(PauliAxis axis, double theta, int n,
                                         const std::vector<int>& ms);

// Six timed boundary-generator pulses (axis pattern Y,X,Y,X,Y,X, each
// applied as exp(+i angle * H)) steering the two boundary doublets to
// independent 2x2 targets up to per-block phase.  Doublet A is spanned by
// the first two ladder states (highest signal/idler), doublet B by the last
// two in reversed order (highest pump first).
struct BoundarySu2Result {
  int n = 0;
  std::vector<double> angles;
  Mat unitary;        // full (n+2)-dimensional pulse product
  Mat block_a;        // 2x2 restriction to doublet A
  Mat block_b;        // 2x2 restriction to doublet B
  double residual_a;  // 1 - |tr(targetA^dag block_a)| / 2
  double residual_b;  // 1 - |tr(targetB^dag block_b)| / 2
  double offblock_norm;  // Frobenius norm of the A<->B coupling entries
  double objective;
  bool success = false;
};

BoundarySu2Result boundary_su2(int n, const Mat& target_a, const Mat& target_b,
                               std::uint64_t seed = 12345, int restarts = 24,
                               double tol = 1e-8);

}  // namespace chi2
