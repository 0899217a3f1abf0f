#pragma once
// Second-quantized operator expressions and their dense matrix restrictions
// to a SubspaceBasis.  Supplies every Hamiltonian used by the gate, closure,
// injection, and Trotter machinery.

#include <array>
#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "chi2/fock.hpp"

namespace chi2 {

using cx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr cx kI{0.0, 1.0};

enum class Ladder { create, annihilate };

struct MonomialFactor {
  std::string mode;
  Ladder op;
};

// One product term: coefficient times an ordered ladder monomial.  The
// RIGHTMOST factor acts first, matching how operator products are written.
struct Term {
  cx coeff;
  std::vector<MonomialFactor> factors;
};

// Finite sum of ladder monomials.  Supports sum, scalar multiple, adjoint.
struct OperatorExpr {
  std::vector<Term> terms;

  OperatorExpr& operator+=(const OperatorExpr& other);
};

OperatorExpr operator+(OperatorExpr a, const OperatorExpr& b);
OperatorExpr operator*(cx scale, OperatorExpr e);
OperatorExpr adjoint(const OperatorExpr& e);

// Single-term builders.
OperatorExpr monomial(cx coeff, std::vector<MonomialFactor> factors);
OperatorExpr number_op(const std::string& mode);  // a† a
// a†_x a†_y a_z : annihilate one z photon, create an (x, y) pair.
OperatorExpr pair_creation(const std::string& x, const std::string& y,
                           const std::string& z);

// The two three-wave-mixing generators on modes (x, y, z) with coupling
// kappa (default 1):
//   g1 = (i kappa / 2) (T - T†),   g2 = (kappa / 2) (T + T†),
// where T = a†_x a†_y a_z.
OperatorExpr g1_expr(double kappa = 1.0, const std::string& x = "s",
                     const std::string& y = "i", const std::string& z = "p");
OperatorExpr g2_expr(double kappa = 1.0, const std::string& x = "s",
                     const std::string& y = "i", const std::string& z = "p");

// Injection generator a†_s a†_i a_{p'} + h.c. — note: no 1/2 prefactor, so a
// quarter-period pulse exp(i pi/2 · g2a) maps |0,0;1> to |1,1;0> exactly.
OperatorExpr g2a_expr(const std::string& pump_ancilla = "p'");

// Ancilla-assisted subtraction generators.  Both carry the 1/2 prefactor.
//   p_prime          : couple (s, i, p'),   T = a†_s a†_i a_{p'}
//   s_prime_i_prime  : couple (s', i', p),  T = a†_{s'} a†_{i'} a_p
enum class AncillaKind { p_prime, s_prime_i_prime };
std::pair<OperatorExpr, OperatorExpr> ancilla_generators(AncillaKind kind);

// Dense matrix restriction of an expression to a basis.
struct OperatorMatrix {
  BasisPtr basis;
  Mat entries;
  // Per input basis state: norm of the amplitude dropped because the image
  // left the basis (either exceeding a truncation or landing outside the
  // listed states).  Zero everywhere iff the basis is exactly invariant.
  Eigen::VectorXd column_leakage;

  double leakage() const;            // sqrt(sum of squared column leakages)
  double hermiticity_error() const;  // max |A - A†|
};

// Sparse state: amplitudes keyed by Fock state (deterministic order).
using SparseState = std::map<FockState, cx>;

struct ExprApplication {
  SparseState out;        // in-truncation image amplitudes
  double dropped_sq = 0;  // squared norm lost beyond per-mode truncations
};

// Apply an expression to a single Fock state / sparse state.  Intermediate
// occupations are tracked exactly (they may exceed the truncation mid-
// monomial); only the final image is truncation-checked, so a monomial whose
// net effect stays inside the space never loses amplitude.
ExprApplication apply_expr(const OperatorExpr& e, const FockState& s,
                           const ModeSet& modes);
ExprApplication apply_expr(const OperatorExpr& e, const SparseState& s,
                           const ModeSet& modes);

// <row| e |col> over all basis states; unknown mode ids are rejected.
OperatorMatrix to_matrix(const OperatorExpr& e, const BasisPtr& basis);

// The five qudit-space operators restricted to an (s,i,p) basis.
struct Chi2Generators {
  BasisPtr basis;
  OperatorMatrix G1, G2, Ns, Ni, Np;
  double kappa = 1.0;
};
Chi2Generators chi2_generators(int n, double kappa = 1.0);  // canonical order
Chi2Generators chi2_generators_on(const BasisPtr& basis, double kappa = 1.0);

// Two-level Pauli block between neighbouring rungs of H_{n+1}.  Rung k
// couples |n+1-k,n+1-k,k> and |n-k,n-k,k+1> (canonical indices k, k+1).
// Sign convention for the y axis: entry (k, k+1) = +i, (k+1, k) = -i.  This
// is the unique choice under which 2·g1 on H_{n+1} decomposes into rung
// operators with positive coefficients (see the decomposition tests).
enum class PauliAxis { x, y };
struct BoundaryPauli {
  int n;           // decomposition acts on H_{n+1}
  int k;           // rung index, 0 <= k <= n
  PauliAxis axis;
};
OperatorMatrix boundary_pauli(const BoundaryPauli& p);

// Smallest truncation-respecting state set containing the seeds and closed
// under every monomial move of the given expressions; returned in
// lexicographic order.  Used to build exact invariant bases for dynamics.
BasisPtr span_closure(const std::vector<OperatorExpr>& exprs,
                      const std::vector<FockState>& seeds,
                      const ModeSet& modes);

std::string operator_matrix_to_json(const OperatorMatrix& m);

}  // namespace chi2
