#include "socheck/expr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "socheck/errors.hpp"
#include "socheck/sampling.hpp"

namespace socheck {

namespace {

[[noreturn]] void bad_kind() { throw Error("corrupt expression node"); }

}  // namespace

Expr Expr::constant(double value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Constant;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::variable(int index) {
  if (index < 0) throw Error("variable index must be nonnegative");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Variable;
  n->index = index;
  return Expr(std::move(n));
}

Expr Expr::sum(std::vector<Expr> terms) {
  if (terms.empty()) return constant(0.0);
  if (terms.size() == 1) return terms.front();
  auto n = std::make_shared<Node>();
  n->kind = Kind::Sum;
  n->children = std::move(terms);
  return Expr(std::move(n));
}

Expr Expr::product(Expr lhs, Expr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Product;
  n->children = {std::move(lhs), std::move(rhs)};
  return Expr(std::move(n));
}

Expr Expr::negate(Expr child) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Negate;
  n->children = {std::move(child)};
  return Expr(std::move(n));
}

Expr Expr::int_power(Expr base, int exponent) {
  if (exponent < 1) throw Error("int_power exponent must be >= 1");
  auto n = std::make_shared<Node>();
  n->kind = Kind::IntPower;
  n->exponent = exponent;
  n->children = {std::move(base)};
  return Expr(std::move(n));
}

Expr Expr::abs(Expr child) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Abs;
  n->children = {std::move(child)};
  return Expr(std::move(n));
}

Expr Expr::exp(Expr child) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Exp;
  n->children = {std::move(child)};
  return Expr(std::move(n));
}

Expr Expr::sin(Expr child) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Sin;
  n->children = {std::move(child)};
  return Expr(std::move(n));
}

Expr Expr::cos(Expr child) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Cos;
  n->children = {std::move(child)};
  return Expr(std::move(n));
}

Expr Expr::max(Expr lhs, Expr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Max;
  n->children = {std::move(lhs), std::move(rhs)};
  return Expr(std::move(n));
}

Expr Expr::min(Expr lhs, Expr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Min;
  n->children = {std::move(lhs), std::move(rhs)};
  return Expr(std::move(n));
}

Expr operator+(Expr lhs, Expr rhs) {
  return Expr::sum({std::move(lhs), std::move(rhs)});
}
Expr operator-(Expr lhs, Expr rhs) {
  return Expr::sum({std::move(lhs), Expr::negate(std::move(rhs))});
}
Expr operator-(Expr e) { return Expr::negate(std::move(e)); }
Expr operator*(Expr lhs, Expr rhs) {
  return Expr::product(std::move(lhs), std::move(rhs));
}
Expr operator*(double c, Expr rhs) {
  return Expr::product(Expr::constant(c), std::move(rhs));
}

int Expr::max_variable_index() const {
  int result = -1;
  if (kind() == Kind::Variable) result = variable_index();
  for (const Expr& c : children())
    result = std::max(result, c.max_variable_index());
  return result;
}

bool Expr::has_nonsmooth_node() const {
  const Kind k = kind();
  if (k == Kind::Abs || k == Kind::Max || k == Kind::Min) return true;
  for (const Expr& c : children())
    if (c.has_nonsmooth_node()) return true;
  return false;
}

bool Expr::structurally_equal(const Expr& other) const {
  if (kind() != other.kind()) return false;
  switch (kind()) {
    case Kind::Constant:
      if (constant_value() != other.constant_value()) return false;
      break;
    case Kind::Variable:
      if (variable_index() != other.variable_index()) return false;
      break;
    case Kind::IntPower:
      if (exponent() != other.exponent()) return false;
      break;
    default:
      break;
  }
  if (children().size() != other.children().size()) return false;
  for (std::size_t i = 0; i < children().size(); ++i)
    if (!children()[i].structurally_equal(other.children()[i])) return false;
  return true;
}

void validate_arity(const FunctionDef& f) {
  if (f.arity < 0) throw ArityMismatch(f.name + ": negative arity");
  if (f.expr.max_variable_index() >= f.arity)
    throw ArityMismatch(f.name + ": variable index exceeds arity " +
                        std::to_string(f.arity));
}

// ---------------------------------------------------------------------------
// Plain evaluation
// ---------------------------------------------------------------------------

namespace {

double eval_rec(const Expr& e, const Vec& x) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::Constant:
      return e.constant_value();
    case K::Variable:
      return x[e.variable_index()];
    case K::Sum: {
      double s = 0.0;
      for (const Expr& c : e.children()) s += eval_rec(c, x);
      return s;
    }
    case K::Product:
      return eval_rec(e.children()[0], x) * eval_rec(e.children()[1], x);
    case K::Negate:
      return -eval_rec(e.children()[0], x);
    case K::IntPower:
      return std::pow(eval_rec(e.children()[0], x), e.exponent());
    case K::Abs:
      return std::abs(eval_rec(e.children()[0], x));
    case K::Max:
      return std::max(eval_rec(e.children()[0], x),
                      eval_rec(e.children()[1], x));
    case K::Min:
      return std::min(eval_rec(e.children()[0], x),
                      eval_rec(e.children()[1], x));
    case K::Exp:
      return std::exp(eval_rec(e.children()[0], x));
    case K::Sin:
      return std::sin(eval_rec(e.children()[0], x));
    case K::Cos:
      return std::cos(eval_rec(e.children()[0], x));
  }
  bad_kind();
}

}  // namespace

double evaluate(const FunctionDef& f, const Vec& x) {
  if (x.size() != f.arity)
    throw ArityMismatch(f.name + ": expected " + std::to_string(f.arity) +
                        " coordinates, got " + std::to_string(x.size()));
  return eval_rec(f.expr, x);
}

// ---------------------------------------------------------------------------
// First-order forward walker (value + full gradient)
// ---------------------------------------------------------------------------

namespace {

struct D1 {
  double val;
  Vec grad;
};

D1 d1_rec(const Expr& e, const Vec& x) {
  using K = Expr::Kind;
  const int n = static_cast<int>(x.size());
  switch (e.kind()) {
    case K::Constant:
      return {e.constant_value(), Vec::Zero(n)};
    case K::Variable: {
      Vec g = Vec::Zero(n);
      g[e.variable_index()] = 1.0;
      return {x[e.variable_index()], std::move(g)};
    }
    case K::Sum: {
      D1 acc{0.0, Vec::Zero(n)};
      for (const Expr& c : e.children()) {
        D1 t = d1_rec(c, x);
        acc.val += t.val;
        acc.grad += t.grad;
      }
      return acc;
    }
    case K::Product: {
      D1 a = d1_rec(e.children()[0], x);
      D1 b = d1_rec(e.children()[1], x);
      return {a.val * b.val, a.grad * b.val + b.grad * a.val};
    }
    case K::Negate: {
      D1 a = d1_rec(e.children()[0], x);
      return {-a.val, -a.grad};
    }
    case K::IntPower: {
      D1 a = d1_rec(e.children()[0], x);
      const int k = e.exponent();
      const double dphi =
          k == 1 ? 1.0 : static_cast<double>(k) * std::pow(a.val, k - 1);
      return {std::pow(a.val, k), dphi * a.grad};
    }
    case K::Abs: {
      D1 a = d1_rec(e.children()[0], x);
      const double s = a.val > 0.0 ? 1.0 : (a.val < 0.0 ? -1.0 : 0.0);
      return {std::abs(a.val), s * a.grad};
    }
    case K::Max:
    case K::Min: {
      D1 a = d1_rec(e.children()[0], x);
      D1 b = d1_rec(e.children()[1], x);
      const bool take_first =
          e.kind() == K::Max ? (a.val > b.val) : (a.val < b.val);
      if (a.val == b.val)
        return {a.val, 0.5 * (a.grad + b.grad)};  // tie: averaged selection
      return take_first ? std::move(a) : std::move(b);
    }
    case K::Exp: {
      D1 a = d1_rec(e.children()[0], x);
      const double v = std::exp(a.val);
      return {v, v * a.grad};
    }
    case K::Sin: {
      D1 a = d1_rec(e.children()[0], x);
      return {std::sin(a.val), std::cos(a.val) * a.grad};
    }
    case K::Cos: {
      D1 a = d1_rec(e.children()[0], x);
      return {std::cos(a.val), -std::sin(a.val) * a.grad};
    }
  }
  bad_kind();
}

}  // namespace

Vec gradient(const FunctionDef& f, const Vec& x) {
  if (x.size() != f.arity)
    throw ArityMismatch(f.name + ": gradient arity mismatch");
  return d1_rec(f.expr, x).grad;
}

// ---------------------------------------------------------------------------
// Second-order forward walker: value, directional derivative along d,
// gradient, and gradient of the directional derivative (= H(x) d).
// ---------------------------------------------------------------------------

namespace {

struct D2 {
  double val;
  double dot;    // <grad, d>
  Vec grad;      // gradient
  Vec grad_dot;  // gradient of dot, i.e. Hessian * d on smooth branches
};

D2 d2_rec(const Expr& e, const Vec& x, const Vec& d) {
  using K = Expr::Kind;
  const int n = static_cast<int>(x.size());
  switch (e.kind()) {
    case K::Constant:
      return {e.constant_value(), 0.0, Vec::Zero(n), Vec::Zero(n)};
    case K::Variable: {
      Vec g = Vec::Zero(n);
      const int i = e.variable_index();
      g[i] = 1.0;
      return {x[i], d[i], std::move(g), Vec::Zero(n)};
    }
    case K::Sum: {
      D2 acc{0.0, 0.0, Vec::Zero(n), Vec::Zero(n)};
      for (const Expr& c : e.children()) {
        D2 t = d2_rec(c, x, d);
        acc.val += t.val;
        acc.dot += t.dot;
        acc.grad += t.grad;
        acc.grad_dot += t.grad_dot;
      }
      return acc;
    }
    case K::Product: {
      D2 a = d2_rec(e.children()[0], x, d);
      D2 b = d2_rec(e.children()[1], x, d);
      D2 r;
      r.val = a.val * b.val;
      r.dot = a.dot * b.val + a.val * b.dot;
      r.grad = a.grad * b.val + b.grad * a.val;
      r.grad_dot = a.grad_dot * b.val + a.grad * b.dot + b.grad * a.dot +
                   b.grad_dot * a.val;
      return r;
    }
    case K::Negate: {
      D2 a = d2_rec(e.children()[0], x, d);
      return {-a.val, -a.dot, -a.grad, -a.grad_dot};
    }
    case K::IntPower: {
      D2 a = d2_rec(e.children()[0], x, d);
      const int k = e.exponent();
      const double d1 =
          k == 1 ? 1.0 : static_cast<double>(k) * std::pow(a.val, k - 1);
      const double d2v = k <= 2 ? (k == 2 ? 2.0 : 0.0)
                                : static_cast<double>(k) * (k - 1) *
                                      std::pow(a.val, k - 2);
      D2 r;
      r.val = std::pow(a.val, k);
      r.dot = d1 * a.dot;
      r.grad = d1 * a.grad;
      r.grad_dot = d2v * a.dot * a.grad + d1 * a.grad_dot;
      return r;
    }
    case K::Abs: {
      D2 a = d2_rec(e.children()[0], x, d);
      const double s = a.val > 0.0 ? 1.0 : (a.val < 0.0 ? -1.0 : 0.0);
      return {std::abs(a.val), s * a.dot, s * a.grad, s * a.grad_dot};
    }
    case K::Max:
    case K::Min: {
      D2 a = d2_rec(e.children()[0], x, d);
      D2 b = d2_rec(e.children()[1], x, d);
      if (a.val == b.val) {
        return {a.val, 0.5 * (a.dot + b.dot), 0.5 * (a.grad + b.grad),
                0.5 * (a.grad_dot + b.grad_dot)};
      }
      const bool take_first =
          e.kind() == K::Max ? (a.val > b.val) : (a.val < b.val);
      return take_first ? std::move(a) : std::move(b);
    }
    case K::Exp: {
      D2 a = d2_rec(e.children()[0], x, d);
      const double v = std::exp(a.val);
      return {v, v * a.dot, v * a.grad, v * a.dot * a.grad + v * a.grad_dot};
    }
    case K::Sin: {
      D2 a = d2_rec(e.children()[0], x, d);
      const double s = std::sin(a.val), c = std::cos(a.val);
      return {s, c * a.dot, c * a.grad, -s * a.dot * a.grad + c * a.grad_dot};
    }
    case K::Cos: {
      D2 a = d2_rec(e.children()[0], x, d);
      const double s = std::sin(a.val), c = std::cos(a.val);
      return {c, -s * a.dot, -s * a.grad,
              -c * a.dot * a.grad - s * a.grad_dot};
    }
  }
  bad_kind();
}

}  // namespace

Vec hessian_vec(const FunctionDef& f, const Vec& x, const Vec& d,
                double theta_kink) {
  if (x.size() != f.arity || d.size() != f.arity)
    throw ArityMismatch(f.name + ": hessian_vec arity mismatch");
  if (kink_distance(f, x) <= theta_kink)
    throw OnKink(f.name + ": point lies on a tie surface");
  return d2_rec(f.expr, x, d).grad_dot;
}

// ---------------------------------------------------------------------------
// Kink distance
// ---------------------------------------------------------------------------

namespace {

void kink_rec(const Expr& e, const Vec& x, double& best) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::Abs:
      best = std::min(best, std::abs(eval_rec(e.children()[0], x)));
      break;
    case K::Max:
    case K::Min:
      best = std::min(best, std::abs(eval_rec(e.children()[0], x) -
                                     eval_rec(e.children()[1], x)));
      break;
    default:
      break;
  }
  for (const Expr& c : e.children()) kink_rec(c, x, best);
}

}  // namespace

double kink_distance(const FunctionDef& f, const Vec& x) {
  if (x.size() != f.arity)
    throw ArityMismatch(f.name + ": kink_distance arity mismatch");
  double best = std::numeric_limits<double>::infinity();
  kink_rec(f.expr, x, best);
  if (!std::isfinite(best)) return best;
  return best / (1.0 + x.norm());
}

namespace {
void switch_values(const Expr& e, const Vec& x, std::vector<double>& out);
}  // namespace

std::vector<double> switching_values(const FunctionDef& f, const Vec& x) {
  if (x.size() != f.arity)
    throw ArityMismatch(f.name + ": switching_values arity mismatch");
  std::vector<double> out;
  switch_values(f.expr, x, out);
  return out;
}

// ---------------------------------------------------------------------------
// Gradient continuity probe
// ---------------------------------------------------------------------------

namespace {

// Collect switching residuals (values whose zero set is a tie surface).
void switch_values(const Expr& e, const Vec& x, std::vector<double>& out) {
  using K = Expr::Kind;
  if (e.kind() == K::Abs) {
    out.push_back(eval_rec(e.children()[0], x));
  } else if (e.kind() == K::Max || e.kind() == K::Min) {
    out.push_back(eval_rec(e.children()[0], x) -
                  eval_rec(e.children()[1], x));
  }
  for (const Expr& c : e.children()) switch_values(c, x, out);
}

double pair_ratio(const FunctionDef& f, const Vec& u, const Vec& v) {
  const double dist = (u - v).norm();
  if (dist <= 0.0) return 0.0;
  return (gradient(f, u) - gradient(f, v)).norm() / dist;
}

}  // namespace

GradientContinuityReport gradient_continuity_probe(const FunctionDef& f,
                                                   const Box& region,
                                                   int samples, double step,
                                                   std::uint64_t seed) {
  if (samples < 1) throw PreconditionFailed("probe requires samples >= 1");
  GradientContinuityReport rep;
  Rng rng(seed);

  // Pairs that straddle tie surfaces: scan random chords for sign changes of
  // each switching residual, bisect to the crossing, then pair up across it.
  std::vector<Vec> crossings;
  const int chords = std::max(8, samples / 4);
  for (int c = 0; c < chords; ++c) {
    Vec a = rng.box_point(region);
    Vec b = rng.box_point(region);
    std::vector<double> sa, sb;
    switch_values(f.expr, a, sa);
    switch_values(f.expr, b, sb);
    for (std::size_t k = 0; k < sa.size(); ++k) {
      if (sa[k] == 0.0 || sa[k] * sb[k] >= 0.0) continue;
      Vec lo = a, hi = b;
      double flo = sa[k];
      for (int it = 0; it < 60; ++it) {
        Vec mid = 0.5 * (lo + hi);
        std::vector<double> sm;
        switch_values(f.expr, mid, sm);
        if (sm[k] == 0.0) {
          lo = mid;
          break;
        }
        if (sm[k] * flo > 0.0) {
          lo = mid;
          flo = sm[k];
        } else {
          hi = mid;
        }
      }
      crossings.push_back(0.5 * (lo + hi));
    }
  }

  const int n = static_cast<int>(region.lo.size());
  const std::vector<double> levels = {step, step / 4.0, step / 16.0};
  rep.step_levels = levels;
  rep.max_ratio_per_level.assign(levels.size(), 0.0);

  for (std::size_t lvl = 0; lvl < levels.size(); ++lvl) {
    const double h = levels[lvl];
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
      Vec u = rng.box_point(region);
      Vec v = u + h * rng.unit_sphere(n);
      worst = std::max(worst, pair_ratio(f, u, v));
      ++rep.pairs_evaluated;
    }
    for (const Vec& c : crossings) {
      Vec dir = rng.unit_sphere(n);
      worst = std::max(worst, pair_ratio(f, c - 0.5 * h * dir, c + 0.5 * h * dir));
      ++rep.pairs_evaluated;
    }
    rep.max_ratio_per_level[lvl] = worst;
  }

  rep.lipschitz_estimate =
      *std::max_element(rep.max_ratio_per_level.begin(),
                        rep.max_ratio_per_level.end());
  // A jump discontinuity of size g makes the ratio behave like g/step, so it
  // grows by ~4x per level here; Lipschitz gradients keep it bounded.
  const double first = rep.max_ratio_per_level.front();
  const double last = rep.max_ratio_per_level.back();
  rep.c11_consistent = !(last > 2.5 * std::max(first, 1e-12) && last > 1e-6);
  if (rep.c11_consistent) rep.lipschitz_estimate = first;
  return rep;
}

// ---------------------------------------------------------------------------
// One-sided jets
// ---------------------------------------------------------------------------

namespace {

Jet jet_add(const Jet& a, const Jet& b) {
  return {a.c0 + b.c0, a.c1 + b.c1, a.c2 + b.c2, a.c3 + b.c3};
}

Jet jet_neg(const Jet& a) { return {-a.c0, -a.c1, -a.c2, -a.c3}; }

Jet jet_mul(const Jet& a, const Jet& b) {
  return {a.c0 * b.c0, a.c0 * b.c1 + a.c1 * b.c0,
          a.c0 * b.c2 + a.c1 * b.c1 + a.c2 * b.c0,
          a.c0 * b.c3 + a.c1 * b.c2 + a.c2 * b.c1 + a.c3 * b.c0};
}

// Composition with a smooth phi given derivatives at a.c0 (order 3).
Jet jet_compose(const Jet& a, double p0, double p1, double p2, double p3) {
  const Jet w{0.0, a.c1, a.c2, a.c3};
  const Jet w2 = jet_mul(w, w);
  const Jet w3 = jet_mul(w2, w);
  Jet r{p0, 0.0, 0.0, 0.0};
  r = jet_add(r, {0.0, p1 * w.c1, p1 * w.c2, p1 * w.c3});
  r = jet_add(r, {0.0, 0.0, 0.5 * p2 * w2.c2, 0.5 * p2 * w2.c3});
  r = jet_add(r, {0.0, 0.0, 0.0, p3 / 6.0 * w3.c3});
  return r;
}

// Sign of the jet for t -> 0+ (lexicographic on the coefficients).
int jet_sign(const Jet& a) {
  const double eps = 0.0;  // exact zero tests: branch functions are exact here
  if (a.c0 > eps) return 1;
  if (a.c0 < -eps) return -1;
  if (a.c1 > eps) return 1;
  if (a.c1 < -eps) return -1;
  if (a.c2 > eps) return 1;
  if (a.c2 < -eps) return -1;
  if (a.c3 > eps) return 1;
  if (a.c3 < -eps) return -1;
  return 0;
}

Jet jet_rec(const Expr& e, const Vec& x, int axis, int sigma) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::Constant:
      return {e.constant_value(), 0.0, 0.0, 0.0};
    case K::Variable: {
      const int i = e.variable_index();
      return {x[i], i == axis ? static_cast<double>(sigma) : 0.0, 0.0, 0.0};
    }
    case K::Sum: {
      Jet acc{0.0, 0.0, 0.0, 0.0};
      for (const Expr& c : e.children())
        acc = jet_add(acc, jet_rec(c, x, axis, sigma));
      return acc;
    }
    case K::Product:
      return jet_mul(jet_rec(e.children()[0], x, axis, sigma),
                     jet_rec(e.children()[1], x, axis, sigma));
    case K::Negate:
      return jet_neg(jet_rec(e.children()[0], x, axis, sigma));
    case K::IntPower: {
      Jet a = jet_rec(e.children()[0], x, axis, sigma);
      Jet r{1.0, 0.0, 0.0, 0.0};
      for (int k = 0; k < e.exponent(); ++k) r = jet_mul(r, a);
      return r;
    }
    case K::Abs: {
      Jet a = jet_rec(e.children()[0], x, axis, sigma);
      return jet_sign(a) < 0 ? jet_neg(a) : a;
    }
    case K::Max:
    case K::Min: {
      Jet a = jet_rec(e.children()[0], x, axis, sigma);
      Jet b = jet_rec(e.children()[1], x, axis, sigma);
      const int cmp = jet_sign(jet_add(a, jet_neg(b)));
      if (e.kind() == K::Max) return cmp >= 0 ? a : b;
      return cmp <= 0 ? a : b;
    }
    case K::Exp: {
      Jet a = jet_rec(e.children()[0], x, axis, sigma);
      const double v = std::exp(a.c0);
      return jet_compose(a, v, v, v, v);
    }
    case K::Sin: {
      Jet a = jet_rec(e.children()[0], x, axis, sigma);
      const double s = std::sin(a.c0), c = std::cos(a.c0);
      return jet_compose(a, s, c, -s, -c);
    }
    case K::Cos: {
      Jet a = jet_rec(e.children()[0], x, axis, sigma);
      const double s = std::sin(a.c0), c = std::cos(a.c0);
      return jet_compose(a, c, -s, -c, s);
    }
  }
  bad_kind();
}

}  // namespace

Jet one_sided_jet(const FunctionDef& f, const Vec& x, int axis, int sigma) {
  if (x.size() != f.arity)
    throw ArityMismatch(f.name + ": jet arity mismatch");
  if (axis < 0 || axis >= f.arity)
    throw PreconditionFailed("jet axis out of range");
  if (sigma != 1 && sigma != -1)
    throw PreconditionFailed("jet side must be +1 or -1");
  return jet_rec(f.expr, x, axis, sigma);
}

}  // namespace socheck
