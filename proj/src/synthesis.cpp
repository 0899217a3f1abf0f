#include "chi2/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "chi2/gates.hpp"
#include "json.hpp"

namespace chi2 {

namespace {

// Uniform double in (0, 1] built directly from the 53 top bits of the engine
// output, so the start points do not depend on the platform's distribution
// implementation.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
}

struct SegmentCache {
  std::vector<Eigen::VectorXd> evals;
  std::vector<Mat> evecs;

  explicit SegmentCache(const std::vector<Mat>& gens) {
    evals.reserve(gens.size());
    evecs.reserve(gens.size());
    for (const Mat& g : gens) {
      Eigen::SelfAdjointEigenSolver<Mat> es(g);
      if (es.info() != Eigen::Success)
        throw std::runtime_error("solve_pulse: eigendecomposition failed");
      evals.push_back(es.eigenvalues());
      evecs.push_back(es.eigenvectors());
    }
  }

  Mat unitary(int gi, double t) const {
    const auto& w = evals[static_cast<size_t>(gi)];
    const auto& v = evecs[static_cast<size_t>(gi)];
    Vec ph = (-kI * t * w.cast<cx>().array()).exp().matrix();
    return v * ph.asDiagonal() * v.adjoint();
  }
};

struct Evaluator {
  const std::vector<Mat>& gens;
  const ObjectiveSpec& spec;
  std::vector<int> pattern;
  SegmentCache cache;
  int d;

  Evaluator(const std::vector<Mat>& g, const ObjectiveSpec& s, int nseg)
      : gens(g), spec(s), cache(g), d(static_cast<int>(g[0].rows())) {
    pattern.resize(static_cast<size_t>(nseg));
    for (int k = 0; k < nseg; ++k)
      pattern[static_cast<size_t>(k)] = k % static_cast<int>(g.size());
  }

  double value_grad(const std::vector<double>& ts,
                    std::vector<double>* grad) const {
    const int n = static_cast<int>(ts.size());
    std::vector<Mat> seg(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k)
      seg[static_cast<size_t>(k)] =
          cache.unitary(pattern[static_cast<size_t>(k)],
                        ts[static_cast<size_t>(k)]);

    // Prefix products P[k] = U_{k-1} ... U_0 and suffixes S[k] = U_{n-1} ... U_k.
    std::vector<Mat> pre(static_cast<size_t>(n) + 1);
    pre[0] = Mat::Identity(d, d);
    for (int k = 0; k < n; ++k)
      pre[static_cast<size_t>(k) + 1] =
          seg[static_cast<size_t>(k)] * pre[static_cast<size_t>(k)];
    std::vector<Mat> suf(static_cast<size_t>(n) + 1);
    suf[static_cast<size_t>(n)] = Mat::Identity(d, d);
    for (int k = n - 1; k >= 0; --k)
      suf[static_cast<size_t>(k)] =
          suf[static_cast<size_t>(k) + 1] * seg[static_cast<size_t>(k)];
    const Mat& u = pre[static_cast<size_t>(n)];

    if (grad) grad->assign(static_cast<size_t>(n), 0.0);
    double f = 0.0;

    for (const ConstraintPair& cp : spec.constraints) {
      cx a = cp.out.adjoint() * u * cp.in;
      f += 1.0 - std::norm(a);
      if (!grad) continue;
      for (int k = 0; k < n; ++k) {
        Vec v = pre[static_cast<size_t>(k) + 1] * cp.in;
        Vec w = suf[static_cast<size_t>(k) + 1].adjoint() * cp.out;
        cx da = w.adjoint() *
                (-kI * (gens[static_cast<size_t>(
                            pattern[static_cast<size_t>(k)])] *
                        v));
        (*grad)[static_cast<size_t>(k)] += -2.0 * std::real(std::conj(a) * da);
      }
    }

    for (const TraceTerm& tt : spec.trace_terms) {
      cx tr = (tt.target.adjoint() * u).trace();
      f += 1.0 - std::abs(tr) / tt.denom;
      if (!grad) continue;
      if (std::abs(tr) < 1e-14) continue;  // non-smooth point: leave at zero
      for (int k = 0; k < n; ++k) {
        Mat b = pre[static_cast<size_t>(k) + 1] * tt.target.adjoint() *
                suf[static_cast<size_t>(k) + 1];
        cx dtr = -kI * (b * gens[static_cast<size_t>(
                                pattern[static_cast<size_t>(k)])])
                           .trace();
        (*grad)[static_cast<size_t>(k)] +=
            -std::real(std::conj(tr) * dtr) / (std::abs(tr) * tt.denom);
      }
    }
    return f;
  }
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double inf_norm(const std::vector<double>& a) {
  double s = 0.0;
  for (double v : a) s = std::max(s, std::abs(v));
  return s;
}

std::vector<double> axpy(const std::vector<double>& x, double alpha,
                         const std::vector<double>& p) {
  std::vector<double> r = x;
  for (size_t i = 0; i < r.size(); ++i) r[i] += alpha * p[i];
  return r;
}

struct Point {
  std::vector<double> x, g;
  double f = 0.0;
};

// Strong-Wolfe line search (sufficient decrease 1e-4, curvature 0.9) with a
// bisection zoom.  Returns false when no acceptable step exists.
bool wolfe_search(const Evaluator& ev, const Point& p0,
                  const std::vector<double>& dir, Point* out) {
  const double c1 = 1e-4, c2 = 0.9;
  const double dphi0 = dot(p0.g, dir);
  if (dphi0 >= 0.0) return false;

  auto eval_at = [&](double alpha, Point* pt) {
    pt->x = axpy(p0.x, alpha, dir);
    pt->f = ev.value_grad(pt->x, &pt->g);
    return dot(pt->g, dir);
  };

  auto zoom = [&](double lo, double f_lo, double hi, Point* pt) -> bool {
    for (int it = 0; it < 60; ++it) {
      double alpha = 0.5 * (lo + hi);
      double dphi = eval_at(alpha, pt);
      if (pt->f > p0.f + c1 * alpha * dphi0 || pt->f >= f_lo) {
        hi = alpha;
      } else {
        if (std::abs(dphi) <= -c2 * dphi0) return true;
        if (dphi * (hi - lo) >= 0.0) hi = lo;
        lo = alpha;
        f_lo = pt->f;
      }
      if (std::abs(hi - lo) < 1e-16 * std::max(1.0, std::abs(lo)))
        return pt->f < p0.f;
    }
    return pt->f < p0.f;
  };

  double alpha_prev = 0.0, f_prev = p0.f;
  double alpha = 1.0;
  const double alpha_max = 100.0;
  for (int it = 0; it < 30; ++it) {
    Point pt;
    double dphi = eval_at(alpha, &pt);
    if (pt.f > p0.f + c1 * alpha * dphi0 || (it > 0 && pt.f >= f_prev)) {
      bool ok = zoom(alpha_prev, f_prev, alpha, out);
      if (!ok) return false;
      return true;
    }
    if (std::abs(dphi) <= -c2 * dphi0) {
      *out = std::move(pt);
      return true;
    }
    if (dphi >= 0.0) {
      double f_hi = pt.f;
      (void)f_hi;
      bool ok = zoom(alpha, pt.f, alpha_prev, out);
      if (!ok) return false;
      return true;
    }
    alpha_prev = alpha;
    f_prev = pt.f;
    if (alpha >= alpha_max) {
      *out = std::move(pt);
      return out->f < p0.f;
    }
    alpha = std::min(2.0 * alpha, alpha_max);
  }
  return false;
}

// Limited-memory BFGS with the standard two-loop recursion (history 10).
Point lbfgs_minimize(const Evaluator& ev, std::vector<double> x0,
                     int max_iters, double target_f) {
  const size_t hist = 10;
  Point cur;
  cur.x = std::move(x0);
  cur.f = ev.value_grad(cur.x, &cur.g);

  std::vector<std::vector<double>> ss, ys;
  std::vector<double> rhos;

  for (int iter = 0; iter < max_iters; ++iter) {
    if (cur.f <= target_f) break;
    if (inf_norm(cur.g) < 1e-14) break;

    // Two-loop recursion for the search direction.
    std::vector<double> q = cur.g;
    std::vector<double> alphas(ss.size());
    for (size_t j = ss.size(); j-- > 0;) {
      alphas[j] = rhos[j] * dot(ss[j], q);
      for (size_t i = 0; i < q.size(); ++i) q[i] -= alphas[j] * ys[j][i];
    }
    if (!ss.empty()) {
      double gamma = dot(ss.back(), ys.back()) / dot(ys.back(), ys.back());
      for (double& v : q) v *= gamma;
    }
    for (size_t j = 0; j < ss.size(); ++j) {
      double beta = rhos[j] * dot(ys[j], q);
      for (size_t i = 0; i < q.size(); ++i)
        q[i] += (alphas[j] - beta) * ss[j][i];
    }
    std::vector<double> dir(q.size());
    for (size_t i = 0; i < q.size(); ++i) dir[i] = -q[i];

    if (dot(dir, cur.g) >= 0.0) {  // not a descent direction: restart
      ss.clear();
      ys.clear();
      rhos.clear();
      for (size_t i = 0; i < dir.size(); ++i) dir[i] = -cur.g[i];
    }

    Point next;
    if (!wolfe_search(ev, cur, dir, &next)) break;

    std::vector<double> s(cur.x.size()), y(cur.x.size());
    for (size_t i = 0; i < s.size(); ++i) {
      s[i] = next.x[i] - cur.x[i];
      y[i] = next.g[i] - cur.g[i];
    }
    double sy = dot(s, y);
    if (sy > 1e-12 * std::sqrt(dot(s, s)) * std::sqrt(dot(y, y))) {
      ss.push_back(std::move(s));
      ys.push_back(std::move(y));
      rhos.push_back(1.0 / sy);
      if (ss.size() > hist) {
        ss.erase(ss.begin());
        ys.erase(ys.begin());
        rhos.erase(rhos.begin());
      }
    }

    double df = cur.f - next.f;
    cur = std::move(next);
    if (df <= 1e-18 * std::max(1.0, std::abs(cur.f))) break;
  }
  return cur;
}

void validate_generators(const std::vector<Mat>& gens) {
  if (gens.empty())
    throw std::invalid_argument("solve_pulse: no generators");
  const auto d = gens[0].rows();
  for (const Mat& g : gens) {
    if (g.rows() != d || g.cols() != d)
      throw std::invalid_argument("solve_pulse: generator dimension mismatch");
    if ((g - g.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
      throw std::invalid_argument("solve_pulse: generator is not Hermitian");
  }
}

void validate_objective(const ObjectiveSpec& spec, Eigen::Index d) {
  if (spec.constraints.empty() && spec.trace_terms.empty())
    throw std::invalid_argument("solve_pulse: empty objective");
  for (const auto& cp : spec.constraints)
    if (cp.in.size() != d || cp.out.size() != d)
      throw std::invalid_argument("solve_pulse: constraint dimension mismatch");
  for (const auto& tt : spec.trace_terms) {
    if (tt.target.rows() != d || tt.target.cols() != d)
      throw std::invalid_argument("solve_pulse: target dimension mismatch");
    if (!(tt.denom > 0.0))
      throw std::invalid_argument("solve_pulse: trace denominator must be > 0");
  }
}

}  // namespace

SolveResult solve_pulse(const std::vector<Mat>& generators,
                        const ObjectiveSpec& objective,
                        const SolveOptions& options) {
  validate_generators(generators);
  validate_objective(objective, generators[0].rows());
  if (options.n_segments <= 0)
    throw std::invalid_argument("solve_pulse: n_segments must be positive");
  if (options.restarts <= 0)
    throw std::invalid_argument("solve_pulse: restarts must be positive");

  Evaluator ev(generators, objective, options.n_segments);
  const double target_inner = std::max(options.tol * 1e-2, 1e-15);

  SolveResult best;
  best.objective = std::numeric_limits<double>::infinity();
  for (int r = 0; r < options.restarts; ++r) {
    std::vector<double> x0(static_cast<size_t>(options.n_segments), 0.0);
    if (r > 0) {
      std::mt19937_64 rng(options.seed + static_cast<std::uint64_t>(r));
      for (double& v : x0) v = -1.5 + 3.0 * uniform01(rng);
    }
    Point p = lbfgs_minimize(ev, std::move(x0), options.max_iters,
                             target_inner);
    if (p.f < best.objective) {
      best.objective = p.f;
      best.durations = std::move(p.x);
    }
    best.restarts_used = r + 1;
    if (best.objective <= options.tol) break;
  }
  best.success = best.objective <= options.tol;
  return best;
}

Mat pulse_unitary(const std::vector<Mat>& generators,
                  const std::vector<double>& durations) {
  validate_generators(generators);
  SegmentCache cache(generators);
  const auto d = generators[0].rows();
  Mat u = Mat::Identity(d, d);
  for (size_t k = 0; k < durations.size(); ++k)
    u = cache.unitary(static_cast<int>(k % generators.size()), durations[k]) *
        u;
  return u;
}

double evaluate_objective(const std::vector<Mat>& generators,
                          const ObjectiveSpec& objective,
                          const std::vector<double>& durations) {
  validate_generators(generators);
  validate_objective(objective, generators[0].rows());
  Mat u = pulse_unitary(generators, durations);
  double f = 0.0;
  for (const ConstraintPair& cp : objective.constraints) {
    cx a = cp.out.adjoint() * u * cp.in;
    f += 1.0 - std::norm(a);
  }
  for (const TraceTerm& tt : objective.trace_terms)
    f += 1.0 - std::abs((tt.target.adjoint() * u).trace()) / tt.denom;
  return f;
}

Mat random_target_su(int d, std::uint64_t seed) {
  if (d <= 0) throw std::invalid_argument("random_target_su: d must be > 0");
  std::mt19937_64 rng(seed);
  auto gauss_pair = [&rng]() {
    double u1 = uniform01(rng);
    double u2 = uniform01(rng);
    double r = std::sqrt(-2.0 * std::log(u1));
    return cx(r * std::cos(2.0 * std::numbers::pi * u2),
              r * std::sin(2.0 * std::numbers::pi * u2));
  };
  Mat z(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) z(i, j) = gauss_pair() / std::sqrt(2.0);
  Eigen::HouseholderQR<Mat> qr(z);
  Mat q = qr.householderQ() * Mat::Identity(d, d);
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    cx rd = r(j, j);
    if (std::abs(rd) > 0.0) q.col(j) *= rd / std::abs(rd);
  }
  cx det = q.determinant();
  q /= std::pow(det, 1.0 / static_cast<double>(d));
  return q;
}

namespace {

ObjectiveSpec problem_objective(const SynthesisProblem& p) {
  ObjectiveSpec spec;
  spec.constraints = p.constraints;
  if (p.target) {
    TraceTerm tt;
    tt.target = *p.target;
    tt.denom = static_cast<double>(p.target->rows());
    spec.trace_terms.push_back(std::move(tt));
  }
  return spec;
}

std::vector<Mat> problem_generators(const SynthesisProblem& p) {
  if (!p.basis) throw std::invalid_argument("synthesize: missing basis");
  if (p.generators.empty())
    throw std::invalid_argument("synthesize: no generators");
  std::vector<Mat> gens;
  gens.reserve(p.generators.size());
  for (const OperatorMatrix& g : p.generators) {
    if (!g.basis || !g.basis->modes().same_as(p.basis->modes()) ||
        g.entries.rows() != p.basis->dim())
      throw std::invalid_argument(
          "synthesize: generator basis does not match the problem basis");
    gens.push_back(g.entries);
  }
  return gens;
}

}  // namespace

PulseSequence synthesize(const SynthesisProblem& problem) {
  std::vector<Mat> gens = problem_generators(problem);
  if (!problem.labels.empty() && problem.labels.size() != gens.size())
    throw std::invalid_argument("synthesize: one label per generator");

  SolveOptions opt;
  opt.n_segments = problem.n_segments > 0 ? problem.n_segments
                                          : 8 * problem.basis->dim();
  opt.tol = problem.tol;
  opt.restarts = problem.restarts;
  opt.seed = problem.seed;
  opt.max_iters = problem.max_iters;

  SolveResult res = solve_pulse(gens, problem_objective(problem), opt);

  PulseSequence seq;
  seq.segments.reserve(res.durations.size());
  for (size_t k = 0; k < res.durations.size(); ++k)
    seq.segments.push_back(
        {static_cast<int>(k % gens.size()), res.durations[k]});
  if (problem.labels.empty()) {
    for (size_t i = 0; i < gens.size(); ++i)
      seq.labels.push_back("G" + std::to_string(i));
  } else {
    seq.labels = problem.labels;
  }
  seq.achieved_residual = res.objective;
  seq.success = res.success;
  seq.restarts_used = res.restarts_used;
  return seq;
}

Mat sequence_unitary(const SynthesisProblem& problem,
                     const PulseSequence& seq) {
  if (!problem.basis) throw std::invalid_argument("sequence_unitary: missing basis");
  const int d = problem.basis->dim();
  Mat u = Mat::Identity(d, d);
  for (const PulseSegment& s : seq.segments) {
    if (s.generator < 0 ||
        s.generator >= static_cast<int>(problem.generators.size()))
      throw std::invalid_argument("sequence_unitary: generator index");
    u = evolve(problem.generators[static_cast<size_t>(s.generator)],
               s.duration)
            .u *
        u;
  }
  return u;
}

double evaluate_residual(const SynthesisProblem& problem,
                         const PulseSequence& seq) {
  Mat u = sequence_unitary(problem, seq);
  ObjectiveSpec spec = problem_objective(problem);
  double f = 0.0;
  for (const ConstraintPair& cp : spec.constraints) {
    cx a = cp.out.adjoint() * u * cp.in;
    f += 1.0 - std::norm(a);
  }
  for (const TraceTerm& tt : spec.trace_terms)
    f += 1.0 - std::abs((tt.target.adjoint() * u).trace()) / tt.denom;
  return f;
}

std::string pulse_to_json(const PulseSequence& seq) {
  nlohmann::ordered_json j;
  j["segments"] = nlohmann::ordered_json::array();
  for (const PulseSegment& s : seq.segments) {
    nlohmann::ordered_json sj;
    sj["generator"] = s.generator;
    if (s.generator >= 0 &&
        s.generator < static_cast<int>(seq.labels.size()))
      sj["label"] = seq.labels[static_cast<size_t>(s.generator)];
    sj["duration"] = s.duration;
    j["segments"].push_back(std::move(sj));
  }
  j["achieved_residual"] = seq.achieved_residual;
  j["success"] = seq.success;
  j["restarts_used"] = seq.restarts_used;
  return j.dump(2);
}

}  // namespace chi2
