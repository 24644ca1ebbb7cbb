#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace socheck {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Immutable expression tree over real variables v0..v(n-1).
///
/// The node set is deliberately small: arithmetic, integer powers, a few
/// smooth unaries, and the three nonsmooth primitives (abs/max/min) that
/// generate piecewise-smooth functions with Lipschitz gradients.
class Expr {
 public:
  enum class Kind {
    Constant,
    Variable,
    Sum,       // n-ary
    Product,   // binary
    Negate,
    IntPower,  // exponent >= 1
    Abs,
    Max,
    Min,
    Exp,
    Sin,
    Cos,
  };

  static Expr constant(double value);
  static Expr variable(int index);
  static Expr sum(std::vector<Expr> terms);
  static Expr product(Expr lhs, Expr rhs);
  static Expr negate(Expr child);
  static Expr int_power(Expr base, int exponent);
  static Expr abs(Expr child);
  static Expr max(Expr lhs, Expr rhs);
  static Expr min(Expr lhs, Expr rhs);
  static Expr exp(Expr child);
  static Expr sin(Expr child);
  static Expr cos(Expr child);

  Kind kind() const { return node_->kind; }
  double constant_value() const { return node_->value; }
  int variable_index() const { return node_->index; }
  int exponent() const { return node_->exponent; }
  const std::vector<Expr>& children() const { return node_->children; }

  /// Largest variable index in the tree, or -1 for constant expressions.
  int max_variable_index() const;
  bool has_nonsmooth_node() const;
  bool structurally_equal(const Expr& other) const;

 private:
  struct Node {
    Kind kind;
    double value = 0.0;
    int index = 0;
    int exponent = 0;
    std::vector<Expr> children;
  };

  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

Expr operator+(Expr lhs, Expr rhs);
Expr operator-(Expr lhs, Expr rhs);
Expr operator-(Expr e);
Expr operator*(Expr lhs, Expr rhs);
Expr operator*(double c, Expr rhs);

/// A named function R^n -> R. declared_c11 records the user's assertion that
/// the gradient is locally Lipschitz; gradient_continuity_probe can falsify
/// it but nothing in the library proves it.
struct FunctionDef {
  std::string name;
  int arity = 0;
  Expr expr = Expr::constant(0.0);
  bool declared_c11 = true;
};

/// Checks that every variable index fits the declared arity.
void validate_arity(const FunctionDef& f);

double evaluate(const FunctionDef& f, const Vec& x);

/// Total gradient selection: chain rule with Abs'(0) := 0 and the average of
/// the two branch derivatives at Max/Min ties. Where the true gradient
/// exists (the whole domain for C^{1,1} members of this DSL) this is it.
Vec gradient(const FunctionDef& f, const Vec& x);

/// Hessian-times-direction of the active smooth branch. The point must lie
/// in the interior of a C^2 piece: throws OnKink when
/// kink_distance(f, x) <= theta_kink.
Vec hessian_vec(const FunctionDef& f, const Vec& x, const Vec& d,
                double theta_kink = 1e-8);

/// Scaled distance-to-tie diagnostic: min over Abs/Max/Min nodes of the
/// switching value magnitude, scaled by 1/(1+|x|). +infinity when the tree
/// has no nonsmooth node; exactly zero on tie sets.
double kink_distance(const FunctionDef& f, const Vec& x);

/// Switching residuals of every Abs/Max/Min node at x, in traversal order
/// (u for Abs(u), left-right for Max/Min). Zero crossings of these mark tie
/// surfaces.
std::vector<double> switching_values(const FunctionDef& f, const Vec& x);

struct Box {
  Vec lo;
  Vec hi;
};

struct GradientContinuityReport {
  double lipschitz_estimate = 0.0;  // max observed gradient difference ratio
  bool c11_consistent = true;       // false when ratios blow up as step -> 0
  std::vector<double> step_levels;
  std::vector<double> max_ratio_per_level;
  int pairs_evaluated = 0;
};

/// Empirically probes local Lipschitz continuity of the gradient over a box:
/// close point pairs (random plus pairs constructed to straddle detected tie
/// surfaces) at shrinking steps. A ratio that keeps growing as the step
/// shrinks indicates a gradient jump, i.e. the function is not C^{1,1}.
GradientContinuityReport gradient_continuity_probe(const FunctionDef& f,
                                                   const Box& region,
                                                   int samples, double step,
                                                   std::uint64_t seed = 2024);

/// Order-3 one-sided Taylor jet of a 1-D slice t -> f(x + t*sigma*e_i),
/// with branch decisions resolved lexicographically on the side sigma.
/// coeff[k] is the k-th Taylor coefficient in t at t=0+.
struct Jet {
  double c0 = 0.0, c1 = 0.0, c2 = 0.0, c3 = 0.0;
};

/// One-sided jet of `f` along coordinate `axis` from `x` on side `sigma`
/// (+1 or -1). Used by the separable second-order oracle.
Jet one_sided_jet(const FunctionDef& f, const Vec& x, int axis, int sigma);

}  // namespace socheck
