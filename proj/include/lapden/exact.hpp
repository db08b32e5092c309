#pragma once

#include <Eigen/Core>

#include <cmath>
#include <memory>
#include <stdexcept>

#include "lapden/mesh.hpp"

namespace lapden::exact {

enum class Axis { X, Y };

namespace detail {

enum class Kind { Const, Trig, Sum, Prod, Pow, Exp };

struct Node {
  Kind kind;
  double value = 0.0;   // Const
  Axis axis = Axis::X;  // Trig
  int freq = 0;         // Trig
  bool is_sin = false;  // Trig
  int exponent = 0;     // Pow
  std::shared_ptr<const Node> a, b;
};

using NodePtr = std::shared_ptr<const Node>;

inline NodePtr make_const(double c) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Const;
  n->value = c;
  return n;
}

inline NodePtr make_trig(Axis axis, int freq, bool is_sin) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Trig;
  n->axis = axis;
  n->freq = freq;
  n->is_sin = is_sin;
  return n;
}

inline NodePtr make_sum(NodePtr a, NodePtr b) {
  if (a->kind == Kind::Const && a->value == 0.0) return b;
  if (b->kind == Kind::Const && b->value == 0.0) return a;
  if (a->kind == Kind::Const && b->kind == Kind::Const)
    return make_const(a->value + b->value);
  auto n = std::make_shared<Node>();
  n->kind = Kind::Sum;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

inline NodePtr make_prod(NodePtr a, NodePtr b) {
  if (a->kind == Kind::Const) {
    if (a->value == 0.0) return a;
    if (a->value == 1.0) return b;
    if (b->kind == Kind::Const) return make_const(a->value * b->value);
  }
  if (b->kind == Kind::Const) {
    if (b->value == 0.0) return b;
    if (b->value == 1.0) return a;
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Prod;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

inline NodePtr make_pow(NodePtr a, int k) {
  if (k == 0) return make_const(1.0);
  if (k == 1) return a;
  if (a->kind == Kind::Const) return make_const(std::pow(a->value, k));
  auto n = std::make_shared<Node>();
  n->kind = Kind::Pow;
  n->exponent = k;
  n->a = std::move(a);
  return n;
}

inline NodePtr make_exp(NodePtr a) {
  if (a->kind == Kind::Const) return make_const(std::exp(a->value));
  auto n = std::make_shared<Node>();
  n->kind = Kind::Exp;
  n->a = std::move(a);
  return n;
}

inline NodePtr differentiate(const NodePtr& n, Axis axis) {
  switch (n->kind) {
    case Kind::Const:
      return make_const(0.0);
    case Kind::Trig:
      if (n->axis != axis) return make_const(0.0);
      // d/dt sin(kt) = k cos(kt), d/dt cos(kt) = -k sin(kt)
      return make_prod(make_const(n->is_sin ? n->freq : -n->freq),
                       make_trig(n->axis, n->freq, !n->is_sin));
    case Kind::Sum:
      return make_sum(differentiate(n->a, axis), differentiate(n->b, axis));
    case Kind::Prod:
      return make_sum(make_prod(differentiate(n->a, axis), n->b),
                      make_prod(n->a, differentiate(n->b, axis)));
    case Kind::Pow:
      return make_prod(
          make_prod(make_const(n->exponent), make_pow(n->a, n->exponent - 1)),
          differentiate(n->a, axis));
    case Kind::Exp:
      return make_prod(differentiate(n->a, axis), make_exp(n->a));
  }
  throw std::logic_error("unreachable");
}

inline double eval_point(const NodePtr& n, double x, double y) {
  switch (n->kind) {
    case Kind::Const: return n->value;
    case Kind::Trig: {
      double t = (n->axis == Axis::X ? x : y) * n->freq;
      return n->is_sin ? std::sin(t) : std::cos(t);
    }
    case Kind::Sum: return eval_point(n->a, x, y) + eval_point(n->b, x, y);
    case Kind::Prod: return eval_point(n->a, x, y) * eval_point(n->b, x, y);
    case Kind::Pow: return std::pow(eval_point(n->a, x, y), n->exponent);
    case Kind::Exp: return std::exp(eval_point(n->a, x, y));
  }
  throw std::logic_error("unreachable");
}

inline Eigen::ArrayXd eval_grid(const NodePtr& n, const Eigen::ArrayXd& x,
                                const Eigen::ArrayXd& y) {
  switch (n->kind) {
    case Kind::Const:
      return Eigen::ArrayXd::Constant(x.size(), n->value);
    case Kind::Trig: {
      Eigen::ArrayXd t = (n->axis == Axis::X ? x : y) * double(n->freq);
      if (n->is_sin) return t.sin();
      return t.cos();
    }
    case Kind::Sum: return eval_grid(n->a, x, y) + eval_grid(n->b, x, y);
    case Kind::Prod: return eval_grid(n->a, x, y) * eval_grid(n->b, x, y);
    case Kind::Pow: return eval_grid(n->a, x, y).pow(n->exponent);
    case Kind::Exp: return eval_grid(n->a, x, y).exp();
  }
  throw std::logic_error("unreachable");
}

}  // namespace detail

/// Closed-form 2pi-periodic function on the flat torus with exact partial
/// derivatives. Periodicity is enforced by construction: the only
/// non-constant leaves are sin/cos of integer frequencies.
class ExactFunction {
 public:
  static ExactFunction constant(double c) { return ExactFunction(detail::make_const(c)); }
  static ExactFunction sin(Axis axis, int freq) {
    check_freq(freq);
    return ExactFunction(detail::make_trig(axis, freq, true));
  }
  static ExactFunction cos(Axis axis, int freq) {
    check_freq(freq);
    return ExactFunction(detail::make_trig(axis, freq, false));
  }
  /// A bare coordinate is not 2pi-periodic and is therefore not admitted.
  static ExactFunction coordinate(Axis) {
    throw std::invalid_argument(
        "bare coordinates are not 2pi-periodic; use sin/cos leaves");
  }
  static ExactFunction exp(const ExactFunction& f) {
    return ExactFunction(detail::make_exp(f.node_));
  }

  ExactFunction pow(int k) const {
    if (k < 0) throw std::invalid_argument("negative powers not admitted");
    return ExactFunction(detail::make_pow(node_, k));
  }
  ExactFunction derivative(Axis axis) const {
    return ExactFunction(detail::differentiate(node_, axis));
  }

  ExactFunction operator+(const ExactFunction& o) const {
    return ExactFunction(detail::make_sum(node_, o.node_));
  }
  ExactFunction operator*(const ExactFunction& o) const {
    return ExactFunction(detail::make_prod(node_, o.node_));
  }
  ExactFunction operator-() const {
    return ExactFunction(detail::make_prod(detail::make_const(-1.0), node_));
  }
  ExactFunction operator-(const ExactFunction& o) const { return *this + (-o); }

  double operator()(double x, double y) const {
    return detail::eval_point(node_, x, y);
  }
  Eigen::ArrayXd eval(const Eigen::ArrayXd& x, const Eigen::ArrayXd& y) const {
    return detail::eval_grid(node_, x, y);
  }

 private:
  explicit ExactFunction(detail::NodePtr node) : node_(std::move(node)) {}
  static void check_freq(int freq) {
    if (freq < 1) throw std::invalid_argument("frequency must be >= 1");
  }
  detail::NodePtr node_;
};

inline ExactFunction operator*(double c, const ExactFunction& f) {
  return ExactFunction::constant(c) * f;
}
inline ExactFunction operator+(double c, const ExactFunction& f) {
  return ExactFunction::constant(c) + f;
}

/// Uniform grid of N x N sample coordinates on [0,2pi)^2, flattened.
inline void torus_grid(int N, Eigen::ArrayXd& x, Eigen::ArrayXd& y) {
  const double step = 2.0 * kPi / N;
  x.resize(N * N);
  y.resize(N * N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      x[i * N + j] = i * step;
      y[i * N + j] = j * step;
    }
}

/// Trapezoid rule on the periodic grid, spectrally accurate for smooth
/// periodic integrands: (2pi/N)^2 sum f.
inline double torus_quadrature(const ExactFunction& f, int N) {
  if (N < 16) throw std::invalid_argument("torus_quadrature: N must be >= 16");
  Eigen::ArrayXd x, y;
  torus_grid(N, x, y);
  double cell = (2.0 * kPi / N) * (2.0 * kPi / N);
  return cell * f.eval(x, y).sum();
}

/// g(grad f, grad g) on the flat torus.
inline ExactFunction grad_dot(const ExactFunction& f, const ExactFunction& g) {
  return f.derivative(Axis::X) * g.derivative(Axis::X) +
         f.derivative(Axis::Y) * g.derivative(Axis::Y);
}

inline ExactFunction grad_norm_sq(const ExactFunction& f) {
  return grad_dot(f, f);
}

/// Negative-divergence Laplacian: -(f_xx + f_yy).
inline ExactFunction laplacian(const ExactFunction& f) {
  return -(f.derivative(Axis::X).derivative(Axis::X) +
           f.derivative(Axis::Y).derivative(Axis::Y));
}

/// L_h u = e^{-h(alpha-1)} (Delta u + alpha g(grad h, grad u)).
inline ExactFunction apply_Lh(const ExactFunction& u, const ExactFunction& h,
                              double alpha) {
  auto prefactor = ExactFunction::exp((-(alpha - 1.0)) * h);
  return prefactor * (laplacian(u) + alpha * grad_dot(h, u));
}

/// |D^2 u|^2 = u_xx^2 + 2 u_xy^2 + u_yy^2.
inline ExactFunction hessian_norm_sq(const ExactFunction& u) {
  auto ux = u.derivative(Axis::X), uy = u.derivative(Axis::Y);
  auto uxx = ux.derivative(Axis::X);
  auto uxy = ux.derivative(Axis::Y);
  auto uyy = uy.derivative(Axis::Y);
  return uxx.pow(2) + 2.0 * uxy.pow(2) + uyy.pow(2);
}

/// D^2 h (grad u, grad u).
inline ExactFunction hessian_form(const ExactFunction& h,
                                  const ExactFunction& u) {
  auto ux = u.derivative(Axis::X), uy = u.derivative(Axis::Y);
  auto hx = h.derivative(Axis::X);
  auto hxx = hx.derivative(Axis::X);
  auto hxy = hx.derivative(Axis::Y);
  auto hyy = h.derivative(Axis::Y).derivative(Axis::Y);
  return hxx * ux.pow(2) + 2.0 * (hxy * ux * uy) + hyy * uy.pow(2);
}

}  // namespace lapden::exact
