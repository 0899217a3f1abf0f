#include "chi2/liealg.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace chi2 {

Mat bracket(const Mat& a, const Mat& b) { return kI * (a * b - b * a); }

double hs_inner(const Mat& a, const Mat& b) {
  return (a.adjoint() * b).trace().real();
}

double hs_norm(const Mat& a) { return std::sqrt(std::abs(hs_inner(a, a))); }

namespace {

// Gram-Schmidt accumulator over the real span of Hermitian matrices.
struct RealSpan {
  std::vector<Mat> elements;
  double tol;
  double max_rejected = 0.0;

  explicit RealSpan(double t) : tol(t) {}

  // Returns true when a new direction was added.
  bool try_add(Mat m, bool record_rejection) {
    double n0 = hs_norm(m);
    if (n0 < 1e-300) return false;
    m /= n0;
    for (int pass = 0; pass < 2; ++pass)  // re-orthogonalize for stability
      for (const Mat& e : elements) m -= hs_inner(e, m) * e;
    double n = hs_norm(m);
    if (n > tol) {
      m /= n;
      m = ((m + Mat(m.adjoint())) / 2.0).eval();  // keep exactly Hermitian
      elements.push_back(std::move(m));
      return true;
    }
    if (record_rejection) max_rejected = std::max(max_rejected, n);
    return false;
  }
};

}  // namespace

ClosureResult closure(const std::vector<Mat>& generators,
                      const std::vector<std::string>& labels, BasisPtr basis,
                      double tol) {
  if (generators.empty())
    throw std::invalid_argument("closure: no generators");
  if (labels.size() != generators.size())
    throw std::invalid_argument("closure: label count mismatch");
  const int d = static_cast<int>(generators.front().rows());
  const int cap = d * d;
  for (const Mat& g : generators) {
    if (g.rows() != d || g.cols() != d)
      throw std::invalid_argument("closure: generator dimension mismatch");
    if ((g - g.adjoint()).cwiseAbs().maxCoeff() > std::max(tol, 1e-12))
      throw std::invalid_argument("closure: non-Hermitian generator");
  }

  RealSpan span(tol);
  for (const Mat& g : generators) span.try_add(g, /*record_rejection=*/false);

  ClosureReport report;
  report.generators_used = labels;

  int frontier_start = 0;
  bool saturated = static_cast<int>(span.elements.size()) >= cap;
  while (!saturated) {
    const int dim_at_start = static_cast<int>(span.elements.size());
    int added = 0;
    for (int j = 0; j < dim_at_start && !saturated; ++j) {
      for (int k = std::max(j + 1, frontier_start);
           k < dim_at_start && !saturated; ++k) {
        Mat cand = bracket(span.elements[static_cast<size_t>(j)],
                           span.elements[static_cast<size_t>(k)]);
        if (span.try_add(std::move(cand), /*record_rejection=*/true)) {
          ++added;
          if (static_cast<int>(span.elements.size()) >= cap) saturated = true;
        }
      }
    }
    ++report.rounds;
    report.added_per_round.push_back(added);
    frontier_start = dim_at_start;
    if (added == 0) break;
  }

  report.dim = static_cast<int>(span.elements.size());
  report.residual = span.max_rejected;
  report.saturated = saturated;

  ClosureResult result;
  result.report = std::move(report);
  result.algebra = AlgebraBasis{std::move(basis), std::move(span.elements)};
  return result;
}

ClosureResult closure(const Chi2Generators& g, double tol) {
  return closure({g.G1.entries, g.G2.entries, g.Ns.entries, g.Ni.entries,
                  g.Np.entries},
                 {"G1", "G2", "Ns", "Ni", "Np"}, g.basis, tol);
}

std::pair<bool, double> membership(const Mat& a, const AlgebraBasis& algebra,
                                   double tol) {
  if (!algebra.elements.empty() &&
      (a.rows() != algebra.elements.front().rows() ||
       a.cols() != algebra.elements.front().cols()))
    throw std::invalid_argument("membership: dimension mismatch");
  double n0 = hs_norm(a);
  if (n0 < 1e-300) return {true, 0.0};
  Mat m = a / n0;
  for (int pass = 0; pass < 2; ++pass)
    for (const Mat& e : algebra.elements) m -= hs_inner(e, m) * e;
  double res = hs_norm(m);
  return {res <= tol, res};
}

double orthonormality_error(const AlgebraBasis& algebra) {
  double worst = 0.0;
  for (size_t j = 0; j < algebra.elements.size(); ++j) {
    for (size_t k = j; k < algebra.elements.size(); ++k) {
      double ip = hs_inner(algebra.elements[j], algebra.elements[k]);
      double target = (j == k) ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(ip - target));
    }
  }
  return worst;
}

std::array<Mat, 9> qutrit_chain(double kappa) {
  auto g = chi2_generators_on(h2_logical_basis(), kappa);
  const Mat id = Mat::Identity(3, 3);
  std::array<Mat, 9> c;
  c[0] = g.G1.entries;
  c[1] = g.G2.entries;
  c[2] = bracket(c[0], c[1]);
  c[3] = bracket(c[2], c[0]);
  c[4] = bracket(c[2], c[1]);
  const double s = 1.0 / (2.0 * std::sqrt(2.0));
  c[5] = s * 0.5 * (bracket(c[0], c[3]) + bracket(c[4], c[1]));
  c[6] = s * bracket(c[1], c[3]);
  c[7] = 0.5 * (id - g.Np.entries);
  c[8] = 0.5 * (0.5 * (g.Ns.entries + g.Ni.entries) + g.Np.entries);
  return c;
}

std::array<Mat, 9> qutrit_reference() {
  const double r2 = std::sqrt(2.0);
  std::array<Mat, 9> r;
  for (auto& m : r) m = Mat::Zero(3, 3);

  r[0] << 0.0, 2.0, r2, -2.0, 0.0, 0.0, -r2, 0.0, 0.0;
  r[0] *= cx(0.0, -0.5);

  r[1] << 0.0, 2.0, r2, 2.0, 0.0, 0.0, r2, 0.0, 0.0;
  r[1] *= 0.5;

  r[2].diagonal() << 1.0, -2.0, 1.0;

  r[3] << 0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0;
  r[3] *= 3.0;

  r[4] << 0.0, 1.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0;
  r[4] *= cx(0.0, 3.0);

  r[5] << 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0;
  r[5] *= 0.75;

  r[6] << 0.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 1.0, 0.0;
  r[6] *= cx(0.0, 0.75);

  r[7].diagonal() << 0.0, 0.5, -0.5;

  r[8] = Mat::Identity(3, 3);
  return r;
}

std::array<Mat, 9> gell_mann_reconstruct(const std::array<Mat, 9>& c) {
  const double r2 = std::sqrt(2.0);
  const double r3 = std::sqrt(3.0);
  std::array<Mat, 9> l;
  l[0] = c[3] / 3.0;
  l[1] = -c[4] / 3.0;
  l[2] = 2.0 * c[7] + c[2];
  l[3] = r2 * (c[1] - c[3] / 3.0);
  l[4] = -r2 * (c[0] + c[4] / 3.0);
  l[5] = (4.0 / 3.0) * c[5];
  l[6] = (4.0 / 3.0) * c[6];
  l[7] = (c[2] + 6.0 * c[7]) / r3;
  l[8] = c[8];
  return l;
}

std::array<Mat, 8> standard_gell_mann() {
  std::array<Mat, 8> l;
  for (auto& m : l) m = Mat::Zero(3, 3);
  l[0](0, 1) = 1.0; l[0](1, 0) = 1.0;
  l[1](0, 1) = -kI; l[1](1, 0) = kI;
  l[2].diagonal() << 1.0, -1.0, 0.0;
  l[3](0, 2) = 1.0; l[3](2, 0) = 1.0;
  l[4](0, 2) = -kI; l[4](2, 0) = kI;
  l[5](1, 2) = 1.0; l[5](2, 1) = 1.0;
  l[6](1, 2) = -kI; l[6](2, 1) = kI;
  l[7].diagonal() << 1.0, 1.0, -2.0;
  l[7] /= std::sqrt(3.0);
  return l;
}

double gell_mann_normalization_error(const std::array<Mat, 9>& lambdas) {
  double worst = 0.0;
  for (int a = 0; a < 8; ++a) {
    for (int b = 0; b < 8; ++b) {
      cx tr = (lambdas[static_cast<size_t>(a)] * lambdas[static_cast<size_t>(b)])
                  .trace();
      cx want = (a == b) ? cx(2.0) : cx(0.0);
      worst = std::max(worst, std::abs(tr - want));
    }
  }
  return worst;
}

double su3_structure_error(const std::array<Mat, 9>& lambdas) {
  const double r3h = std::sqrt(3.0) / 2.0;
  // Independent nonzero structure constants (1-indexed), extended by total
  // antisymmetry; all other components vanish.
  struct F { int a, b, c; double v; };
  const F table[] = {{1, 2, 3, 1.0},  {1, 4, 7, 0.5},  {1, 5, 6, -0.5},
                     {2, 4, 6, 0.5},  {2, 5, 7, 0.5},  {3, 4, 5, 0.5},
                     {3, 6, 7, -0.5}, {4, 5, 8, r3h},  {6, 7, 8, r3h}};
  auto expected = [&](int a, int b, int c) -> double {
    for (const F& f : table) {
      int p[3] = {a + 1, b + 1, c + 1};
      // Sign of the permutation taking (f.a,f.b,f.c) to p, if any.
      int q[3] = {f.a, f.b, f.c};
      static const int perms[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1},
                                      {0, 2, 1}, {2, 1, 0}, {1, 0, 2}};
      static const double sign[6] = {1, 1, 1, -1, -1, -1};
      for (int t = 0; t < 6; ++t) {
        if (q[perms[t][0]] == p[0] && q[perms[t][1]] == p[1] &&
            q[perms[t][2]] == p[2])
          return sign[t] * f.v;
      }
    }
    return 0.0;
  };
  double worst = 0.0;
  for (int a = 0; a < 8; ++a) {
    for (int b = 0; b < 8; ++b) {
      Mat comm = lambdas[static_cast<size_t>(a)] * lambdas[static_cast<size_t>(b)] -
                 lambdas[static_cast<size_t>(b)] * lambdas[static_cast<size_t>(a)];
      for (int c = 0; c < 8; ++c) {
        cx f = (comm * lambdas[static_cast<size_t>(c)]).trace() / (4.0 * kI);
        worst = std::max(worst, std::abs(f - cx(expected(a, b, c))));
      }
    }
  }
  return worst;
}

std::string closure_report_to_json(const ClosureReport& report) {
  nlohmann::ordered_json j;
  j["dim"] = report.dim;
  j["rounds"] = report.rounds;
  j["residual"] = report.residual;
  j["saturated"] = report.saturated;
  j["generators"] = report.generators_used;
  j["added_per_round"] = report.added_per_round;
  return j.dump(2);
}

}  // namespace chi2
