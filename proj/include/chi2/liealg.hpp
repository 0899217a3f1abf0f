#pragma once
// Real Lie-algebra closures of Hermitian generator sets under the bracket
// (A, B) -> i[A, B], plus the nine-operator qutrit chain and its Gell-Mann
// reconstruction.

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "chi2/operators.hpp"

namespace chi2 {

// Orthonormal Hermitian spanning set under the Hilbert-Schmidt inner product
// Re tr(A†B).
struct AlgebraBasis {
  BasisPtr basis;
  std::vector<Mat> elements;
  int dim() const { return static_cast<int>(elements.size()); }
};

struct ClosureReport {
  int dim = 0;
  int rounds = 0;
  double residual = 0.0;  // largest norm of a rejected (already-spanned) bracket
  bool saturated = false;  // dimension cap d*d reached (full u(d))
  std::vector<std::string> generators_used;
  std::vector<int> added_per_round;
};

struct ClosureResult {
  ClosureReport report;
  AlgebraBasis algebra;
};

// i[A, B]
Mat bracket(const Mat& a, const Mat& b);

double hs_inner(const Mat& a, const Mat& b);  // Re tr(A†B)
double hs_norm(const Mat& a);

// Repeatedly orthonormalizes the generators and all pairwise brackets
// against the current span, adding components with norm > tol, until a full
// round adds nothing or the d² cap is hit.  Deterministic processing order.
// Non-Hermitian generators (beyond tol) are rejected.
ClosureResult closure(const std::vector<Mat>& generators,
                      const std::vector<std::string>& labels, BasisPtr basis,
                      double tol = 1e-9);
ClosureResult closure(const Chi2Generators& g, double tol = 1e-9);

// Residual of A against the span; membership iff residual <= tol.
std::pair<bool, double> membership(const Mat& a, const AlgebraBasis& algebra,
                                   double tol = 1e-9);

// Max deviation from pairwise orthonormality (diagnostic for tests).
double orthonormality_error(const AlgebraBasis& algebra);

// The nine Hermitian qutrit operators on the logical-order two-pump-photon
// space: the two wave-mixing generators, their nested commutators, and two
// number-operator combinations.  Normalizations are chosen so that the
// off-diagonal members are exactly the scaled Pauli blocks
//   chain[2] = diag(1,-2,1)            chain[3] = 3·(x block on 0,1)
//   chain[4] = -3·(y block on 0,1)     chain[5] = (3/4)·(x block on 1,2)
//   chain[6] = (3/4)·(y block on 1,2)  chain[7] = diag(0,1/2,-1/2)
// and chain[8] is the identity.
std::array<Mat, 9> qutrit_chain(double kappa = 1.0);

// Hard-coded reference table the chain is compared against entrywise by the
// verification suite.  (The first entry of this table is NOT reproduced by
// the chain: its two ±i/√2 entries appear with opposite sign.  The chain
// value is forced by the commutator relations; the discrepancy is reported,
// never patched.)
std::array<Mat, 9> qutrit_reference();

// Linear combinations of the chain giving the eight Gell-Mann matrices plus
// the identity element.
std::array<Mat, 9> gell_mann_reconstruct(const std::array<Mat, 9>& chain);

// The standard Gell-Mann matrices, for cross-checks.
std::array<Mat, 8> standard_gell_mann();

// Max deviation of tr(λa λb) from 2δab over a,b = 1..8.
double gell_mann_normalization_error(const std::array<Mat, 9>& lambdas);

// Max deviation of the antisymmetric structure constants
// f_abc = tr([λa,λb] λc) / (4i) from the su(3) table.
double su3_structure_error(const std::array<Mat, 9>& lambdas);

std::string closure_report_to_json(const ClosureReport& report);

}  // namespace chi2
