#include "wg/cases.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wg {

namespace {

// Value and derivatives of a scalar field at one point, through fourth order
// in the combinations the source term needs.
struct Derivs {
  double val = 0, dx = 0, dy = 0, dxx = 0, dxy = 0, dyy = 0;
  double lap = 0, bilap = 0;
};

// Closed forms below are machine-generated from the analytic solutions and
// cross-checked at runtime by the finite-difference consistency tests.
Derivs internal_peak_derivs(double x, double y) {
  const double x0 = 2 * x;
  const double x1 = x0 - 1;
  const double x2 = x1 * x1;
  const double x3 = 1000 * y;
  const double x4 = x3 - 117;
  const double x5 = x4 * x4;
  const double x6 = std::exp(-250 * x2 - 1.0 / 1000.0 * x5);
  const double x7 = x * y;
  const double x8 = x - 1;
  const double x9 = y - 1;
  const double x10 = x8 * x9;
  const double x11 = x10 * x7;
  const double x12 = 1000 * x1;
  const double x13 = x * x12;
  const double x14 = x9 * y;
  const double x15 = 2 * y;
  const double x16 = x15 * x4;
  const double x17 = x * x8;
  const double x18 = x12 * x8;
  const double x19 = 500 * x2 - 1;
  const double x20 = x * x19;
  const double x21 = 1000 * x20 * x8;
  const double x22 = -x13 - x18 + x21 + 1;
  const double x23 = x15 * x22 * x9;
  const double x24 = x * x9;
  const double x25 = x1 * x17;
  const double x26 = x4 * x9;
  const double x27 = 2 * x26;
  const double x28 = x5 - 500;
  const double x29 = x28 * x9;
  const double x30 = x15 * x29;
  const double x31 = -x16 - x27 + x30 + 1;
  const double x32 = x0 * x8;
  const double x33 = x31 * x32;
  const double x34 = x17 * x31;
  const double x35 = x14 * x22;
  const double x36 = 1000000 * x14;
  const double x37 = 2000 * y;
  const double x38 = 400 * x1;
  const double x39 = 500000 * x2;

  Derivs d;
  d.val = x11 * x6;
  d.dx = x14 * x6 * (2 * x - x13 * x8 - 1);
  d.dy = x17 * x6 * (-x16 * x9 + 2 * y - 1);
  d.dxx = x23 * x6;
  d.dxy = x6 * (-x0 * x26 * y + 2000 * x1 * x11 * x4 - x10 * x16 + x10 - x18 * x24 + x24 -
                x25 * x3 + x7 + x8 * y);
  d.dyy = x33 * x6;
  d.lap = 2 * x6 * (x34 + x35);
  d.bilap =
      -4 * x6 *
      (x1 * x36 * (-8 * x + x19 * x8 + x20 + 2000 * x25 + 4) + x13 * x31 + x13 -
       5000 * x14 * (x * x38 + 400 * x17 + 100 * x2 + x38 * x8 - 1) + x16 * x22 + x16 +
       4 * x17 * x4 * (x26 * x37 + x28 * y + x29 - 4000 * y + 1234) + x18 * x31 + x18 - x21 +
       x22 * x27 - x23 * x5 + x27 - x30 - x32 * (2000 * x26 + x36 + x37 * x4 + x5 - 2500) -
       x33 * x5 - x34 * x39 + 2000 * x34 - x35 * x39 + 2000 * x35 - 2);
  return d;
}

Derivs interior_layer_derivs(double x, double y, double beta, double gamma) {
  const double x0 = y - 1;
  const double x1 = (1.0 / 2.0) * x0;
  const double x2 = x - 1;
  const double x3 = 1.0 / gamma;
  const double x4 = std::tanh(x3 * (beta - x));
  const double x5 = x4 - 1;
  const double x6 = x * x5;
  const double x7 = x2 * x6;
  const double x8 = x4 * x4;
  const double x9 = x8 - 1;
  const double x10 = x3 * x9;
  const double x11 = x * x10;
  const double x12 = x11 * x2 + x2 * x5 + x6;
  const double x13 = 1.0 / (gamma * gamma);
  const double x14 = x13 * x2;
  const double x15 = x * x14;
  const double x16 = x4 * x9;
  const double x17 = x10 * x2 + x11;
  const double x18 = -x0 * (x15 * x16 + x17 + x5);
  const double x19 = 2 * x;
  const double x20 = x3 * x8;

  Derivs d;
  d.val = -x1 * x7;
  d.dx = -x1 * x12;
  d.dy = -1.0 / 2.0 * x7;
  d.dxx = x18;
  d.dxy = -1.0 / 2.0 * x12;
  d.dyy = 0;
  d.lap = x18;
  d.bilap = -4 * x0 * x13 * x9 *
            (x14 * x16 * x19 + x15 * (x4 * x4 * x4) + x17 + x19 * x20 + 2 * x2 * x20 + 3 * x4);
  return d;
}

// exp with a clamped nonpositive argument; on the unit square every exponent
// below is <= 0 and underflow to zero is the intended layer cutoff.
double exp_nonpos(double t) { return std::exp(std::min(t, 0.0)); }

// Separable boundary-layer solution u = g(x) p(y); everything reduces to the
// 1D derivatives of g and p up to fourth order.
struct BoundaryLayerProduct {
  double eps;
  double l, q, d;  // l = 1 - e^{-1/eps}, q = 2 - l, d = 1/(q - 2 eps l)

  explicit BoundaryLayerProduct(double eps_in) : eps(eps_in) {
    const double m = exp_nonpos(-1.0 / eps);
    l = 1.0 - m;
    q = 2.0 - l;
    d = 1.0 / (q - 2.0 * eps * l);
  }

  std::array<double, 5> g(double x) const {
    const double pi = std::numbers::pi;
    const double e0 = exp_nonpos(-x / eps);
    const double e1 = exp_nonpos((x - 1.0) / eps);
    const double m = exp_nonpos(-1.0 / eps);
    std::array<double, 5> out{};
    out[0] = 0.5 * (std::sin(pi * x) + pi * eps / l * (e0 + e1 - 1.0 - m));
    out[1] = 0.5 * (pi * std::cos(pi * x) + pi / l * (-e0 + e1));
    out[2] = 0.5 * (-pi * pi * std::sin(pi * x) + pi / (l * eps) * (e0 + e1));
    out[3] = 0.5 * (-pi * pi * pi * std::cos(pi * x) + pi / (l * eps * eps) * (-e0 + e1));
    out[4] = 0.5 * (pi * pi * pi * pi * std::sin(pi * x) + pi / (l * eps * eps * eps) * (e0 + e1));
    return out;
  }

  std::array<double, 5> p(double y) const {
    const double f0 = exp_nonpos(-y / eps);
    const double f1 = exp_nonpos((y - 1.0) / eps);
    const double c0 = 3.0 / l - d;
    const double c1 = 3.0 / l + d;
    std::array<double, 5> out{};
    out[0] = 2.0 * y * (1.0 - y * y) +
             eps * (l * d * (1.0 - 2.0 * y) - 3.0 * q / l + c0 * f0 + c1 * f1);
    out[1] = 2.0 - 6.0 * y * y - 2.0 * eps * l * d - c0 * f0 + c1 * f1;
    out[2] = -12.0 * y + (c0 * f0 + c1 * f1) / eps;
    out[3] = -12.0 + (-c0 * f0 + c1 * f1) / (eps * eps);
    out[4] = (c0 * f0 + c1 * f1) / (eps * eps * eps);
    return out;
  }

  Derivs operator()(double x, double y) const {
    const auto gx = g(x);
    const auto py = p(y);
    Derivs out;
    out.val = gx[0] * py[0];
    out.dx = gx[1] * py[0];
    out.dy = gx[0] * py[1];
    out.dxx = gx[2] * py[0];
    out.dxy = gx[1] * py[1];
    out.dyy = gx[0] * py[2];
    out.lap = out.dxx + out.dyy;
    out.bilap = gx[4] * py[0] + 2.0 * gx[2] * py[2] + gx[0] * py[4];
    return out;
  }
};

double measure_boundary_flux(const ScalarField& field) {
  double worst = 0.0;
  const int n = 512;
  for (int i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    worst = std::max(worst, std::abs(field.gradient({t, 0.0}).y));
    worst = std::max(worst, std::abs(field.gradient({t, 1.0}).y));
    worst = std::max(worst, std::abs(field.gradient({0.0, t}).x));
    worst = std::max(worst, std::abs(field.gradient({1.0, t}).x));
  }
  return worst;
}

template <typename DerivFn>
ManufacturedCase make_exact_case(std::string name, double eps, double eps_default,
                                 double theta_default, DerivFn derivs) {
  ManufacturedCase c;
  c.name = std::move(name);
  c.eps = eps;
  c.eps_default = eps_default;
  c.theta_default = theta_default;
  c.has_exact = true;
  c.exact.value = [derivs](Vec2 p) { return derivs(p.x, p.y).val; };
  c.exact.gradient = [derivs](Vec2 p) {
    const Derivs d = derivs(p.x, p.y);
    return Vec2{d.dx, d.dy};
  };
  c.exact.hessian = [derivs](Vec2 p) {
    const Derivs d = derivs(p.x, p.y);
    return std::array<double, 3>{d.dxx, d.dxy, d.dyy};
  };
  c.source = [derivs, eps](Vec2 p) {
    const Derivs d = derivs(p.x, p.y);
    return eps * eps * d.bilap - d.lap;
  };
  c.boundary_flux_max = measure_boundary_flux(c.exact);
  return c;
}

}  // namespace

ManufacturedCase example_1(double eps) {
  return make_exact_case("internal-peak", eps, 1.0, 0.3,
                         [](double x, double y) { return internal_peak_derivs(x, y); });
}

ManufacturedCase example_2(double eps, double beta, double gamma) {
  return make_exact_case("interior-layer", eps, 1.0, 0.3, [beta, gamma](double x, double y) {
    return interior_layer_derivs(x, y, beta, gamma);
  });
}

ManufacturedCase example_3(double eps) {
  const BoundaryLayerProduct fields(eps);
  return make_exact_case("boundary-layer-product", eps, 1e-6, 0.5, fields);
}

ManufacturedCase example_4(double eps) {
  ManufacturedCase c;
  c.name = "four-layers";
  c.eps = eps;
  c.eps_default = 1e-6;
  c.theta_default = 0.3;
  c.has_exact = false;
  c.source = [](Vec2 p) {
    const double pi = std::numbers::pi;
    return 2.0 * pi * pi * (1.0 - std::cos(2.0 * pi * p.x) * std::cos(2.0 * pi * p.y));
  };
  return c;
}

const std::vector<std::string>& case_names() {
  static const std::vector<std::string> names{"internal-peak", "interior-layer",
                                              "boundary-layer-product", "four-layers"};
  return names;
}

ManufacturedCase case_by_name(const std::string& name, std::optional<double> eps) {
  if (name == "internal-peak") return example_1(eps.value_or(1.0));
  if (name == "interior-layer") return example_2(eps.value_or(1.0));
  if (name == "boundary-layer-product") return example_3(eps.value_or(1e-6));
  if (name == "four-layers") return example_4(eps.value_or(1e-6));
  throw std::invalid_argument("unknown case '" + name +
                              "'; known cases: internal-peak, interior-layer, "
                              "boundary-layer-product, four-layers");
}

}  // namespace wg
