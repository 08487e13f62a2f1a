#include <doctest.h>

#include <random>

#include "test_helpers.hpp"
#include "wg/basis.hpp"

using namespace wg;

TEST_CASE("scaled monomial values, gradients, hessians at simple points") {
  const Mesh mesh = unit_square_mesh(1);
  const CellBasis basis(mesh, 0, 2);
  const Vec2 xc = basis.center();
  const double h = basis.scale();

  Eigen::VectorXd v(6), gx(6), gy(6), hxx(6), hxy(6), hyy(6);
  basis.values(xc, v);
  basis.gradients(xc, gx, gy);
  basis.hessians(xc, hxx, hxy, hyy);

  // constant
  CHECK(v(0) == 1.0);
  CHECK(gx(0) == 0.0);
  CHECK(gy(0) == 0.0);
  CHECK(hxx(0) == 0.0);
  // ((x-xc)/h): zero at the centroid, gradient (1/h, 0)
  CHECK(v(1) == 0.0);
  CHECK(gx(1) == doctest::Approx(1.0 / h).epsilon(1e-15));
  CHECK(gy(1) == 0.0);
  // ((x-xc)/h)^2: constant second derivative 2/h^2 everywhere
  const int ixx = basis.index_of(2, 0);
  basis.hessians({0.3, 0.9}, hxx, hxy, hyy);
  CHECK(hxx(ixx) == doctest::Approx(2.0 / (h * h)).epsilon(1e-15));
  CHECK(hxy(ixx) == 0.0);
  CHECK(hyy(ixx) == 0.0);
}

TEST_CASE("derivatives agree with central finite differences") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Mesh tri = testing::random_shape_regular_triangle(rng);
    const int degree = 2 + trial % 3;
    const CellBasis basis(tri, 0, degree);
    const int nd = basis.size();
    const double step = 1e-5 * basis.scale();
    const Vec2 p = tri.cells[0].centroid + Vec2{0.21, -0.13} * basis.scale();

    Eigen::VectorXd gx(nd), gy(nd), hxx(nd), hxy(nd), hyy(nd);
    basis.gradients(p, gx, gy);
    basis.hessians(p, hxx, hxy, hyy);

    Eigen::VectorXd vpp(nd), vpm(nd), vmp(nd), vmm(nd), vc(nd);
    basis.values(p, vc);
    auto val_at = [&](double dx, double dy, Eigen::VectorXd& out) {
      basis.values({p.x + dx, p.y + dy}, out);
    };
    val_at(step, 0, vpp);
    val_at(-step, 0, vmm);
    for (int i = 0; i < nd; ++i) {
      const double fd = (vpp(i) - vmm(i)) / (2 * step);
      if (std::abs(gx(i)) > 1e-12)
        CHECK(std::abs(fd - gx(i)) <= 1e-6 * std::abs(gx(i)) + 1e-12);
      const double fd2 = (vpp(i) - 2 * vc(i) + vmm(i)) / (step * step);
      if (std::abs(hxx(i)) > 1e-9) CHECK(std::abs(fd2 - hxx(i)) <= 1e-5 * std::abs(hxx(i)) + 1e-6);
    }
    val_at(0, step, vpp);
    val_at(0, -step, vmm);
    for (int i = 0; i < nd; ++i) {
      const double fd = (vpp(i) - vmm(i)) / (2 * step);
      if (std::abs(gy(i)) > 1e-12)
        CHECK(std::abs(fd - gy(i)) <= 1e-6 * std::abs(gy(i)) + 1e-12);
    }
    val_at(step, step, vpp);
    val_at(step, -step, vpm);
    val_at(-step, step, vmp);
    val_at(-step, -step, vmm);
    for (int i = 0; i < nd; ++i) {
      const double fd = (vpp(i) - vpm(i) - vmp(i) + vmm(i)) / (4 * step * step);
      if (std::abs(hxy(i)) > 1e-9) CHECK(std::abs(fd - hxy(i)) <= 1e-5 * std::abs(hxy(i)) + 1e-6);
    }
  }
}

TEST_CASE("cell Gram matrices are SPD for k = 2, 3, 4") {
  std::mt19937 rng(11);
  for (int degree : {2, 3, 4}) {
    for (int trial = 0; trial < 10; ++trial) {
      const Mesh tri = testing::random_shape_regular_triangle(rng);
      const CellBasis basis(tri, 0, degree);
      const auto pts = map_to_cell(cell_quadrature(2 * degree + 2), tri, 0);
      const Eigen::MatrixXd m = cell_mass_matrix(basis, pts);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
      CAPTURE(degree);
      CHECK(es.eigenvalues().minCoeff() > 0.0);
      CHECK(std::isfinite(spd_condition(m)));
    }
  }
}

TEST_CASE("coefficient-level differentiation matches pointwise evaluation") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const Mesh tri = testing::random_shape_regular_triangle(rng);
  for (int degree : {2, 3, 4}) {
    const CellBasis basis(tri, 0, degree);
    Eigen::VectorXd coeffs(basis.size());
    for (int i = 0; i < basis.size(); ++i) coeffs(i) = unif(rng);
    const Eigen::VectorXd dx = basis.d_dx(coeffs);
    const Eigen::VectorXd dy = basis.d_dy(coeffs);
    for (int trial = 0; trial < 5; ++trial) {
      const Vec2 p = tri.cells[0].centroid + Vec2{unif(rng), unif(rng)} * (0.3 * basis.scale());
      Eigen::VectorXd gx(basis.size()), gy(basis.size());
      basis.gradients(p, gx, gy);
      CHECK(basis.eval(dx, p) == doctest::Approx(coeffs.dot(gx)).epsilon(1e-12));
      CHECK(basis.eval(dy, p) == doctest::Approx(coeffs.dot(gy)).epsilon(1e-12));
    }
  }
}

TEST_CASE("edge basis is centered and bounded") {
  const Mesh mesh = unit_square_mesh(1);
  const EdgeBasis basis(mesh, 0, 2);
  Eigen::VectorXd v(3);
  basis.values(0.5 * basis.length(), v);
  CHECK(v(0) == 1.0);
  CHECK(v(1) == 0.0);
  CHECK(v(2) == 0.0);
  basis.values(basis.length(), v);
  CHECK(v(1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(v(2) == doctest::Approx(0.25).epsilon(1e-15));
}
