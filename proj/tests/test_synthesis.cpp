#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "chi2/gates.hpp"
#include "chi2/operators.hpp"
#include "chi2/synthesis.hpp"

using namespace chi2;

namespace {

Vec unit(int d, int k) {
  Vec v = Vec::Zero(d);
  v(k) = 1.0;
  return v;
}

SynthesisProblem exchange_problem() {
  // Ancilla-pump exchange on the (s, i, p') single-photon product space:
  // a single segment must rotate |0,0,1> fully into |1,1,0>.
  SynthesisProblem p;
  p.basis = product_basis(ModeSet({{"s", 1}, {"i", 1}, {"p'", 1}}));
  p.generators = {to_matrix(g2a_expr(), p.basis)};
  p.labels = {"G2a"};
  ConstraintPair cp;
  cp.in = unit(p.basis->dim(), *p.basis->find(FockState{{0, 0, 1}}));
  cp.out = unit(p.basis->dim(), *p.basis->find(FockState{{1, 1, 0}}));
  p.constraints = {cp};
  p.n_segments = 1;
  return p;
}

}  // namespace

TEST_CASE("identity objective is solved by the all-zero start") {
  auto gens = chi2_generators(1);
  SynthesisProblem p;
  p.basis = gens.basis;
  p.generators = {gens.G1, gens.G2};
  p.labels = {"G1", "G2"};
  ConstraintPair cp;
  cp.in = unit(2, 0);
  cp.out = unit(2, 0);
  p.constraints = {cp};
  p.n_segments = 4;
  PulseSequence seq = synthesize(p);
  CHECK(seq.success);
  CHECK(seq.restarts_used == 1);
  CHECK(seq.achieved_residual < 1e-12);
  REQUIRE(seq.segments.size() == 4);
  for (const auto& s : seq.segments) CHECK(s.duration == 0.0);
  CHECK(seq.segments[0].generator == 0);
  CHECK(seq.segments[1].generator == 1);
  CHECK(seq.segments[2].generator == 0);
}

TEST_CASE("solve_pulse with an identity trace target needs no motion") {
  auto gens = chi2_generators(1);
  ObjectiveSpec spec;
  spec.trace_terms.push_back({Mat::Identity(2, 2), 2.0});
  SolveOptions opt;
  opt.n_segments = 3;
  SolveResult res = solve_pulse({gens.G1.entries, gens.G2.entries}, spec, opt);
  CHECK(res.success);
  CHECK(res.objective < 1e-14);
  for (double t : res.durations) CHECK(t == 0.0);
}

TEST_CASE("single-segment exchange: zero start is a stationary point, the "
          "first random restart escapes it") {
  SynthesisProblem p = exchange_problem();
  PulseSequence seq = synthesize(p);
  CHECK(seq.success);
  // f(t) = cos^2(t) has zero gradient at t = 0, so the all-zero attempt
  // cannot move and a random start is required.
  CHECK(seq.restarts_used == 2);
  REQUIRE(seq.segments.size() == 1);
  double t = seq.segments[0].duration;
  CHECK(std::abs(std::abs(std::sin(t)) - 1.0) < 1e-7);
  CHECK(seq.achieved_residual < 1e-9);

  Mat u = sequence_unitary(p, seq);
  int in = *p.basis->find(FockState{{0, 0, 1}});
  int out = *p.basis->find(FockState{{1, 1, 0}});
  CHECK(std::abs(u(out, in)) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("synthesis is deterministic for a fixed seed") {
  SynthesisProblem p = exchange_problem();
  PulseSequence a = synthesize(p);
  PulseSequence b = synthesize(p);
  REQUIRE(a.segments.size() == b.segments.size());
  for (size_t k = 0; k < a.segments.size(); ++k)
    CHECK(a.segments[k].duration == b.segments[k].duration);
  CHECK(a.achieved_residual == b.achieved_residual);
}

TEST_CASE("pump-ladder rung transfer |1,1,2> -> |0,0,3| on the four-state "
          "space") {
  auto gens = chi2_generators(3);
  SynthesisProblem p;
  p.basis = gens.basis;
  p.generators = {gens.G1, gens.G2};
  p.labels = {"G1", "G2"};
  ConstraintPair cp;
  cp.in = unit(4, *gens.basis->find(FockState{{1, 1, 2}}));
  cp.out = unit(4, *gens.basis->find(FockState{{0, 0, 3}}));
  p.constraints = {cp};
  p.n_segments = 32;
  PulseSequence seq = synthesize(p);
  CHECK(seq.success);
  CHECK(seq.achieved_residual < 1e-8);
  CHECK(std::abs(evaluate_residual(p, seq) - seq.achieved_residual) < 1e-12);

  Mat u = sequence_unitary(p, seq);
  CHECK((u.adjoint() * u - Mat::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10);
  double amp = std::abs(u(*gens.basis->find(FockState{{0, 0, 3}}),
                          *gens.basis->find(FockState{{1, 1, 2}})));
  CHECK(amp * amp >= 1.0 - 1e-8);
}

TEST_CASE("random special-unitary targets are reachable on the two-pump "
          "space") {
  auto gens = chi2_generators(2);
  SynthesisProblem p;
  p.basis = gens.basis;
  p.generators = {gens.G1, gens.G2};
  p.labels = {"G1", "G2"};
  p.target = random_target_su(3, 42);
  p.n_segments = 24;
  p.tol = 1e-8;
  PulseSequence seq = synthesize(p);
  CHECK(seq.success);
  CHECK(seq.achieved_residual < 1e-6);
  Mat u = sequence_unitary(p, seq);
  double dist = distance_up_to_phase(u, *p.target);
  CHECK(std::abs(dist - evaluate_residual(p, seq)) < 1e-12);
}

TEST_CASE("random_target_su: unitary, unit determinant, seed-deterministic") {
  Mat q = random_target_su(3, 42);
  CHECK((q.adjoint() * q - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(std::abs(q.determinant() - cx(1.0)) < 1e-12);
  Mat q2 = random_target_su(3, 42);
  CHECK((q - q2).cwiseAbs().maxCoeff() == 0.0);
  Mat q3 = random_target_su(3, 43);
  CHECK((q - q3).cwiseAbs().maxCoeff() > 1e-3);
}

TEST_CASE("an unreachable target is reported as a failure, not faked") {
  auto gens = chi2_generators(1);
  SynthesisProblem p;
  p.basis = gens.basis;
  // The pump number operator is diagonal, so no pulse built from it alone
  // can produce the off-diagonal exchange target.
  p.generators = {gens.Np};
  Mat x = Mat::Zero(2, 2);
  x(0, 1) = 1.0;
  x(1, 0) = 1.0;
  p.target = x;
  p.n_segments = 2;
  p.restarts = 2;
  p.max_iters = 60;
  PulseSequence seq = synthesize(p);
  CHECK_FALSE(seq.success);
  CHECK(seq.achieved_residual > 0.5);
  CHECK(seq.restarts_used == 2);
}

TEST_CASE("problem validation") {
  auto gens = chi2_generators(1);
  SynthesisProblem p;
  p.basis = gens.basis;
  CHECK_THROWS_AS(synthesize(p), std::invalid_argument);  // no generators

  p.generators = {gens.G1, gens.G2};
  p.labels = {"only-one"};
  ConstraintPair cp;
  cp.in = unit(2, 0);
  cp.out = unit(2, 0);
  p.constraints = {cp};
  p.n_segments = 2;
  CHECK_THROWS_AS(synthesize(p), std::invalid_argument);  // label count

  p.labels = {"G1", "G2"};
  p.constraints[0].in = unit(3, 0);
  CHECK_THROWS_AS(synthesize(p), std::invalid_argument);  // vector length

  p.constraints.clear();
  CHECK_THROWS_AS(synthesize(p), std::invalid_argument);  // empty objective
}

TEST_CASE("n_segments defaults to eight times the space dimension") {
  auto gens = chi2_generators(1);
  SynthesisProblem p;
  p.basis = gens.basis;
  p.generators = {gens.G1, gens.G2};
  ConstraintPair cp;
  cp.in = unit(2, 0);
  cp.out = unit(2, 0);
  p.constraints = {cp};
  PulseSequence seq = synthesize(p);
  CHECK(seq.segments.size() == 16);
  CHECK(seq.labels[0] == "G0");  // default labels when none are given
}

TEST_CASE("pulse JSON round-trips the essentials") {
  SynthesisProblem p = exchange_problem();
  PulseSequence seq = synthesize(p);
  std::string j = pulse_to_json(seq);
  CHECK(j.find("\"achieved_residual\"") != std::string::npos);
  CHECK(j.find("\"G2a\"") != std::string::npos);
  CHECK(j.find("\"success\": true") != std::string::npos);
}
