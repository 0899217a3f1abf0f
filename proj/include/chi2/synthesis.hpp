#pragma once
// Pulse-sequence synthesis: a fixed round-robin cycle of Hermitian
// generators, each applied for an optimized duration (segment k evolves
// under generator k mod g as exp(-i t_k G)).  Durations are found by
// multi-start L-BFGS with analytic gradients, driving either state-transfer
// overlaps or trace-overlap targets to unity.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chi2/operators.hpp"

namespace chi2 {

// Demand |<out|U|in>| ~ 1; contributes 1 - |<out|U|in>|^2 to the objective.
struct ConstraintPair {
  Vec in, out;
};

// Contributes 1 - |tr(target^dag U)| / denom.  For a full-unitary target,
// denom is the space dimension; a block target embedded in the full space
// (zeros elsewhere) uses the block dimension instead.
struct TraceTerm {
  Mat target;
  double denom = 0.0;
};

struct ObjectiveSpec {
  std::vector<ConstraintPair> constraints;
  std::vector<TraceTerm> trace_terms;
};

struct SolveOptions {
  int n_segments = 0;
  double tol = 1e-8;       // success threshold on the objective
  int restarts = 24;       // attempt budget (first start is all-zero)
  std::uint64_t seed = 12345;
  int max_iters = 800;     // L-BFGS iteration cap per attempt
};

struct SolveResult {
  std::vector<double> durations;
  double objective = 0.0;
  bool success = false;
  int restarts_used = 0;
};

// Generic optimizer core on raw Hermitian matrices.
SolveResult solve_pulse(const std::vector<Mat>& generators,
                        const ObjectiveSpec& objective,
                        const SolveOptions& options);

// Ordered product of the segment unitaries (first duration acts first).
Mat pulse_unitary(const std::vector<Mat>& generators,
                  const std::vector<double>& durations);

// Objective value of a given duration vector, recomputed from scratch.
double evaluate_objective(const std::vector<Mat>& generators,
                          const ObjectiveSpec& objective,
                          const std::vector<double>& durations);

// Haar-style pseudo-random special-unitary matrix, deterministic in seed
// (complex Gaussian matrix, QR, R-diagonal phase fix, det normalization).
Mat random_target_su(int d, std::uint64_t seed);

// A synthesis task phrased on a Fock basis with labeled generators and
// either a target unitary, state-transfer constraints, or both.
struct SynthesisProblem {
  BasisPtr basis;
  std::vector<OperatorMatrix> generators;  // Hermitian, on `basis`
  std::vector<std::string> labels;         // one per generator (optional)
  std::optional<Mat> target;               // trace target on the full basis
  std::vector<ConstraintPair> constraints;
  int n_segments = 0;  // 0 -> 8 * basis dimension
  double tol = 1e-8;
  int restarts = 24;
  std::uint64_t seed = 12345;
  int max_iters = 800;
};

struct PulseSegment {
  int generator = 0;
  double duration = 0.0;
};

struct PulseSequence {
  std::vector<PulseSegment> segments;
  std::vector<std::string> labels;  // generator labels, indexed by segment.generator
  double achieved_residual = 0.0;
  bool success = false;
  int restarts_used = 0;
};

PulseSequence synthesize(const SynthesisProblem& problem);

// Materialize the sequence as timed evolutions and multiply them out.
Mat sequence_unitary(const SynthesisProblem& problem,
                     const PulseSequence& seq);

// Independent re-evaluation of the problem objective at the sequence.
double evaluate_residual(const SynthesisProblem& problem,
                         const PulseSequence& seq);

std::string pulse_to_json(const PulseSequence& seq);

}  // namespace chi2
