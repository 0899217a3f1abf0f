#include "chi2/trotter.hpp"

#include <cmath>
#include <stdexcept>

#include "chi2/synthesis.hpp"

namespace chi2 {

OperatorMatrix boundary_generator(PauliAxis axis, int n) {
  if (n < 1)
    throw std::invalid_argument("boundary_generator: n must be >= 1");
  OperatorMatrix outer = boundary_pauli({n, n, axis});
  OperatorMatrix inner = boundary_pauli({n, 0, axis});
  OperatorMatrix res = outer;
  res.entries = std::sqrt(static_cast<double>(n + 1)) * outer.entries +
                static_cast<double>(n + 1) * inner.entries;
  return res;
}

OperatorMatrix bulk_generator(PauliAxis axis, int n) {
  if (n < 2) throw std::invalid_argument("bulk_generator: n must be >= 2");
  OperatorMatrix res = boundary_pauli({n, 1, axis});
  res.entries = Mat::Zero(n + 2, n + 2);
  for (int k = 1; k <= n - 1; ++k) {
    OperatorMatrix rung = boundary_pauli({n, k, axis});
    res.entries += static_cast<double>(n + 1 - k) *
                   std::sqrt(static_cast<double>(k + 1)) * rung.entries;
  }
  return res;
}

Gate bulk_rotation(PauliAxis axis, double theta, int n) {
  return evolve(bulk_generator(axis, n), theta, "bulk_rotation");
}

TrotterResult trotter_v(PauliAxis axis, double theta, int m, int n) {
  if (m < 1) throw std::invalid_argument("trotter_v: m must be >= 1");
  if (n < 2) throw std::invalid_argument("trotter_v: n must be >= 2");
  Chi2Generators gens = chi2_generators(n + 1);
  const OperatorMatrix& full = (axis == PauliAxis::y) ? gens.G1 : gens.G2;

  TrotterResult res;
  res.axis = axis;
  res.n = n;
  res.theta = theta;
  res.m = m;
  res.target = evolve(boundary_generator(axis, n), -theta).u;

  Mat step = evolve(full, -2.0 * theta / m).u *
             bulk_rotation(axis, theta / m, n).u;
  Mat approx = Mat::Identity(n + 2, n + 2);
  for (int k = 0; k < m; ++k) approx = step * approx;
  res.approx = std::move(approx);
  res.error = (res.approx - res.target).cwiseAbs().maxCoeff();
  res.distance = distance_up_to_phase(res.approx, res.target);
  return res;
}

std::vector<TrotterResult> trotter_curve(PauliAxis axis, double theta, int n,
                                         const std::vector<int>& ms) {
  std::vector<TrotterResult> out;
  out.reserve(ms.size());
  for (int m : ms) out.push_back(trotter_v(axis, theta, m, n));
  return out;
}

BoundarySu2Result boundary_su2(int n, const Mat& target_a, const Mat& target_b,
                               std::uint64_t seed, int restarts, double tol) {
  if (target_a.rows() != 2 || target_a.cols() != 2 || target_b.rows() != 2 ||
      target_b.cols() != 2)
    throw std::invalid_argument("boundary_su2: targets must be 2x2");
  const int dim = n + 2;
  Mat hy = boundary_generator(PauliAxis::y, n).entries;
  Mat hx = boundary_generator(PauliAxis::x, n).entries;

  // Doublet A at ladder indices (0, 1); doublet B at (n+1, n).
  const int a0 = 0, a1 = 1, b0 = n + 1, b1 = n;
  auto embed = [&](const Mat& t, int r0, int r1) {
    Mat full = Mat::Zero(dim, dim);
    full(r0, r0) = t(0, 0);
    full(r0, r1) = t(0, 1);
    full(r1, r0) = t(1, 0);
    full(r1, r1) = t(1, 1);
    return full;
  };

  ObjectiveSpec spec;
  spec.trace_terms.push_back({embed(target_a, a0, a1), 2.0});
  spec.trace_terms.push_back({embed(target_b, b0, b1), 2.0});

  // Segment unitaries are exp(+i t H); feed the negated generators to the
  // exp(-i t G) solver core so the reported durations are the angles.
  SolveOptions opt;
  opt.n_segments = 6;
  opt.tol = tol;
  opt.restarts = restarts;
  opt.seed = seed;
  std::vector<Mat> gens = {-hy, -hx};
  SolveResult sol = solve_pulse(gens, spec, opt);

  BoundarySu2Result res;
  res.n = n;
  res.angles = sol.durations;
  res.unitary = pulse_unitary(gens, sol.durations);
  res.objective = sol.objective;
  res.success = sol.success;

  auto block = [&](int r0, int r1) {
    Mat b(2, 2);
    b << res.unitary(r0, r0), res.unitary(r0, r1), res.unitary(r1, r0),
        res.unitary(r1, r1);
    return b;
  };
  res.block_a = block(a0, a1);
  res.block_b = block(b0, b1);
  res.residual_a =
      1.0 - std::abs((target_a.adjoint() * res.block_a).trace()) / 2.0;
  res.residual_b =
      1.0 - std::abs((target_b.adjoint() * res.block_b).trace()) / 2.0;

  double off_sq = 0.0;
  for (int r : {a0, a1})
    for (int c : {b0, b1}) off_sq += std::norm(res.unitary(r, c));
  for (int r : {b0, b1})
    for (int c : {a0, a1}) off_sq += std::norm(res.unitary(r, c));
  res.offblock_norm = std::sqrt(off_sq);
  return res;
}

}  // namespace chi2
