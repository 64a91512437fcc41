#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "fracldg/errors.hpp"
#include "fracldg/field.hpp"
#include "fracldg/mesh.hpp"

using namespace fracldg;

namespace {

DgField random_field(const MeshPtr& mesh, int k, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  Eigen::VectorXd c(mesh->size() * (k + 1));
  for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = d(rng);
  return DgField(mesh, k, c);
}

}  // namespace

TEST(Mesh, UniformUnitInterval) {
  const MeshPtr m = make_mesh(0.0, 1.0, 10);
  ASSERT_EQ(m->size(), 10);
  for (int i = 0; i <= 10; ++i) EXPECT_NEAR(m->boundaries()[i], 0.1 * i, 1e-15);
  EXPECT_TRUE(m->uniform());
}

TEST(Mesh, UniformWidths) {
  const MeshPtr m = make_mesh(-2.0, 2.0, 40);
  for (int j = 0; j < 40; ++j) EXPECT_NEAR(m->width(j), 0.1, 1e-14);
  EXPECT_NEAR(m->min_width(), 0.1, 1e-14);
}

TEST(Mesh, InvalidInputsRejected) {
  EXPECT_THROW(make_mesh(1.0, 0.0, 10), InvalidArgument);
  EXPECT_THROW(make_mesh(0.0, 1.0, 0), InvalidArgument);
  EXPECT_THROW(Mesh1D({0.0, 0.5, 0.5, 1.0}), InvalidArgument);
}

TEST(Mesh, UniformFlag) {
  EXPECT_FALSE(Mesh1D({0.0, 0.3, 1.0}).uniform());
  EXPECT_TRUE(Mesh1D({0.0, 0.5, 1.0}).uniform());
}

TEST(Mesh, LocateInteriorBoundary) {
  const MeshPtr m = make_mesh(0.0, 1.0, 4);
  EXPECT_EQ(m->locate(0.25, true), 0);
  EXPECT_EQ(m->locate(0.25, false), 1);
  EXPECT_EQ(m->locate(0.6, true), 2);
}

TEST(Projection, ConstantHasOnlyMeanMode) {
  const MeshPtr m = make_mesh(0.0, 2.0, 7);
  for (int k = 0; k <= 4; ++k) {
    const DgField u = l2_project([](double) { return 1.0; }, m, k);
    for (int j = 0; j < 7; ++j) {
      EXPECT_NEAR(u.coeff(j, 0), std::numbers::sqrt2, 1e-14);
      for (int n = 1; n <= k; ++n) EXPECT_NEAR(u.coeff(j, n), 0.0, 1e-14);
    }
    EXPECT_NEAR(eval_field(u, 1.3), 1.0, 1e-14);
  }
}

TEST(Projection, LinearReproduced) {
  const MeshPtr m = make_mesh(0.0, 1.0, 10);
  for (int k = 1; k <= 4; ++k) {
    const DgField u = l2_project([](double x) { return x; }, m, k);
    EXPECT_LT(l2_error(u, [](double x) { return x; }), 1e-13);
  }
}

TEST(Projection, QuadraticRemainderClosedForm) {
  const MeshPtr m = make_mesh(0.0, 1.0, 10);
  const DgField u = l2_project([](double x) { return x * x; }, m, 1);
  EXPECT_NEAR(l2_error(u, [](double x) { return x * x; }), 0.01 / std::sqrt(180.0), 1e-15);
}

TEST(Projection, IdempotentOnDgFields) {
  const MeshPtr m = make_mesh(-1.0, 3.0, 9);
  const DgField u = random_field(m, 3, 4);
  // Evaluate element-wise so interface values never mix elements.
  DgField v(m, 3);
  for (int j = 0; j < 9; ++j) {
    const MeshPtr single = std::make_shared<const Mesh1D>(std::vector<double>{m->left(j), m->right(j)});
    const DgField piece = l2_project([&](double x) { return u.value(j, m->to_reference(j, x)); },
                                     single, 3);
    for (int n = 0; n <= 3; ++n) v.coeff(j, n) = piece.coeff(0, n);
  }
  EXPECT_LT((u.coeffs() - v.coeffs()).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Projection, SineConvergenceOrder) {
  const auto f = [](double x) { return std::sin(std::numbers::pi * x); };
  const double e10 = l2_error(l2_project(f, make_mesh(0.0, 1.0, 10), 2), f);
  const double e20 = l2_error(l2_project(f, make_mesh(0.0, 1.0, 20), 2), f);
  EXPECT_GE(std::log2(e10 / e20), 2.8);
}

TEST(Traces, ConstantField) {
  const MeshPtr m = make_mesh(0.0, 1.0, 5);
  const DgField u = l2_project([](double) { return 3.5; }, m, 2);
  for (int j = 0; j + 1 < 5; ++j) {
    EXPECT_NEAR(u.right_trace(j), 3.5, 1e-14);
    EXPECT_NEAR(u.left_trace(j + 1), 3.5, 1e-14);
  }
}

TEST(Traces, ContinuousPolynomialHasNoJumps) {
  const MeshPtr m = make_mesh(0.0, 1.0, 8);
  const auto f = [](double x) { return 1.0 - 2.0 * x + 3.0 * x * x * x; };
  const DgField u = l2_project(f, m, 3);
  for (int j = 0; j + 1 < 8; ++j) {
    const double x = m->right(j);
    EXPECT_NEAR(eval_field(u, x, TraceSide::left), f(x), 1e-13);
    EXPECT_NEAR(eval_field(u, x, TraceSide::right), f(x), 1e-13);
    EXPECT_NEAR(u.left_trace(j + 1) - u.right_trace(j), 0.0, 1e-12);
  }
}

TEST(Traces, EndpointSumsMatchDenseSampling) {
  const MeshPtr m = make_mesh(0.0, 1.0, 6);
  const DgField u = random_field(m, 4, 9);
  for (int j = 0; j < 6; ++j) {
    double sum = 0.0;
    for (int n = 0; n <= 4; ++n) sum += u.coeff(j, n) * std::sqrt((2.0 * n + 1.0) / 2.0);
    EXPECT_NEAR(u.right_trace(j), sum, 1e-13);
    EXPECT_NEAR(u.value(j, 1.0 - 1e-9), sum, 1e-7);
  }
}

TEST(Traces, OutsideMeshRejected) {
  const DgField u(make_mesh(0.0, 1.0, 3), 1);
  EXPECT_THROW(eval_field(u, 1.5), InvalidArgument);
}

TEST(Norms, SelfErrorIsZeroAndUnitConstant) {
  const MeshPtr m = make_mesh(0.0, 1.0, 4);
  const DgField u = random_field(m, 2, 1);
  EXPECT_EQ(l2_error(u, u), 0.0);
  EXPECT_NEAR(l2_norm(l2_project([](double) { return 1.0; }, m, 2)), 1.0, 1e-14);
}

TEST(Norms, Homogeneity) {
  const MeshPtr m = make_mesh(0.0, 1.0, 5);
  const DgField u = random_field(m, 3, 2);
  const DgField v(m, 3, -2.5 * u.coeffs());
  const auto zero = [](double) { return 0.0; };
  EXPECT_NEAR(l2_error(v, zero), 2.5 * l2_error(u, zero), 1e-13);
  EXPECT_NEAR(l2_norm(u), l2_error(u, zero), 1e-13);
}

TEST(Field, RejectsNonFiniteAndWrongLength) {
  const MeshPtr m = make_mesh(0.0, 1.0, 2);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(4);
  c[1] = std::nan("");
  EXPECT_THROW(DgField(m, 1, c), InvalidArgument);
  EXPECT_THROW(DgField(m, 1, Eigen::VectorXd::Zero(3)), InvalidArgument);
}

TEST(Snapshot, CsvFormat) {
  const MeshPtr m = make_mesh(0.0, 1.0, 2);
  const DgField u = l2_project([](double x) { return x; }, m, 1);
  std::ostringstream out;
  write_snapshot_csv(u, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x,u");
  int rows = 0;
  double prev = -1.0;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    const double x = std::stod(line.substr(0, comma));
    const double v = std::stod(line.substr(comma + 1));
    EXPECT_GT(x, prev);
    EXPECT_NEAR(v, x, 1e-14);
    prev = x;
    ++rows;
  }
  EXPECT_EQ(rows, 2 * (1 + 5));
  EXPECT_EQ(format_real(0.1), "0.10000000000000001");
}
