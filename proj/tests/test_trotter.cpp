#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "chi2/operators.hpp"
#include "chi2/trotter.hpp"

using namespace chi2;

TEST_CASE("boundary plus bulk reassembles twice the full generator") {
  for (int n = 2; n <= 4; ++n) {
    Chi2Generators gens = chi2_generators(n + 1);
    Mat y_sum = boundary_generator(PauliAxis::y, n).entries +
                bulk_generator(PauliAxis::y, n).entries;
    CHECK((y_sum - 2.0 * gens.G1.entries).cwiseAbs().maxCoeff() < 1e-12);
    Mat x_sum = boundary_generator(PauliAxis::x, n).entries +
                bulk_generator(PauliAxis::x, n).entries;
    CHECK((x_sum - 2.0 * gens.G2.entries).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("bulk rotation leaves both boundary ladder states fixed") {
  const int n = 3;
  Gate g = bulk_rotation(PauliAxis::y, 0.9, n);
  REQUIRE(g.u.rows() == n + 2);
  for (int idx : {0, n + 1}) {
    CHECK(std::abs(g.u(idx, idx) - cx(1.0)) < 1e-12);
    for (int r = 0; r < n + 2; ++r) {
      if (r == idx) continue;
      CHECK(std::abs(g.u(r, idx)) < 1e-12);
    }
  }
  CHECK(g.unitarity_error() < 1e-12);
}

TEST_CASE("degenerate parameters are rejected") {
  CHECK_THROWS_AS(bulk_generator(PauliAxis::y, 1), std::invalid_argument);
  CHECK_THROWS_AS(trotter_v(PauliAxis::y, 0.5, 0, 2), std::invalid_argument);
  CHECK_THROWS_AS(trotter_v(PauliAxis::y, 0.5, 4, 1), std::invalid_argument);
}

TEST_CASE("zero angle: product formula and target are both the identity") {
  TrotterResult r = trotter_v(PauliAxis::y, 0.0, 8, 2);
  CHECK(r.error < 1e-12);
  CHECK((r.target - Mat::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("first-order error curve at theta = 0.7 on the two-photon ladder") {
  auto curve = trotter_curve(PauliAxis::y, 0.7, 2, {8, 16, 32, 64});
  REQUIRE(curve.size() == 4);
  // Reference values from an independent run of the same construction.
  const double expected[4] = {1.181e-1, 5.855e-2, 2.913e-2, 1.453e-2};
  for (size_t i = 0; i < 4; ++i) {
    CAPTURE(i);
    CHECK(curve[i].error ==
          doctest::Approx(expected[i]).epsilon(2e-2));
    CHECK((curve[i].approx.adjoint() * curve[i].approx -
           Mat::Identity(4, 4))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
  }
  for (size_t i = 0; i + 1 < 4; ++i) {
    double ratio = curve[i].error / curve[i + 1].error;
    CHECK(ratio > 1.8);
    CHECK(ratio < 2.2);
  }
}

TEST_CASE("large step counts drive the error far below the one-step value") {
  TrotterResult r1 = trotter_v(PauliAxis::y, 0.7, 1, 2);
  TrotterResult r1024 = trotter_v(PauliAxis::y, 0.7, 1024, 2);
  // The phase-blind distance is quadratic in the step size, so three orders
  // of magnitude are long gone at m = 1024 ...
  CHECK(r1024.distance < 1e-3 * r1.distance);
  // ... while the elementwise error shrinks linearly.
  CHECK(r1024.error < 1e-2 * r1.error);
}

TEST_CASE("boundary_su2: identity targets need no motion") {
  Mat id2 = Mat::Identity(2, 2);
  BoundarySu2Result r = boundary_su2(2, id2, id2);
  CHECK(r.success);
  CHECK(r.objective < 1e-10);
  REQUIRE(r.angles.size() == 6);
  for (double a : r.angles) CHECK(a == 0.0);
}

TEST_CASE("boundary_su2: X on doublet A, identity on doublet B") {
  Mat x(2, 2);
  x << 0, 1, 1, 0;
  Mat id2 = Mat::Identity(2, 2);
  BoundarySu2Result r = boundary_su2(2, x, id2);
  CHECK(r.success);
  CHECK(r.residual_a < 1e-8);
  CHECK(r.residual_b < 1e-8);
  CHECK(r.offblock_norm < 1e-6);
  CHECK((r.unitary.adjoint() * r.unitary - Mat::Identity(4, 4))
            .cwiseAbs()
            .maxCoeff() < 1e-10);
}

TEST_CASE("boundary_su2 on the three-photon ladder fixes the middle state") {
  Mat x(2, 2);
  x << 0, 1, 1, 0;
  Mat id2 = Mat::Identity(2, 2);
  BoundarySu2Result r = boundary_su2(3, x, id2);
  CHECK(r.success);
  CHECK(r.residual_a < 1e-8);
  CHECK(r.residual_b < 1e-8);
  // Index 2 sits between the boundary rungs and is untouched by both
  // generators.
  CHECK(std::abs(r.unitary(2, 2) - cx(1.0)) < 1e-10);
}
