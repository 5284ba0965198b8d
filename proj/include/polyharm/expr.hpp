#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polyharm/jet.hpp"

namespace polyharm {

enum class Func { Sin, Cos, Exp, Log, Sqrt };

/// Immutable arithmetic expression over named variables, real literals, pi,
/// binary + - * /, integer-literal ^, unary minus and sin/cos/exp/log/sqrt.
/// Evaluation happens in plain doubles or in jet arithmetic; there is no
/// symbolic differentiation.
class Expr {
  public:
    struct Node;

    Expr() = default;
    bool valid() const { return n_ != nullptr; }

    /// Parse `text`; identifiers must appear in `allowed_vars`, whose position
    /// becomes the variable index used at evaluation time.
    static Expr parse(std::string_view text, std::span<const std::string> allowed_vars);

    static Expr number(double v);
    static Expr pi();
    static Expr var(int index, std::string name = {});
    static Expr call(Func f, Expr a);
    Expr pow_int(int exponent) const;

    friend Expr operator+(Expr a, Expr b);
    friend Expr operator-(Expr a, Expr b);
    friend Expr operator*(Expr a, Expr b);
    friend Expr operator/(Expr a, Expr b);
    Expr operator-() const;

    /// Canonical fully parenthesized form; parsing it again reproduces the AST.
    std::string str() const;

    double eval(std::span<const double> env) const;
    Jet eval_jet(std::span<const Jet> env) const;
    /// Convenience: seed variable jets at `point` inside a `num_vars`-variable
    /// jet space (num_vars may exceed point.size() to leave auxiliary slots).
    Jet eval_jet_at(std::span<const double> point, int num_vars, int order) const;

    int max_var_index() const;  // -1 when the expression uses no variables
    bool operator==(const Expr& o) const;
    bool operator!=(const Expr& o) const { return !(*this == o); }

  private:
    std::shared_ptr<const Node> n_;
    explicit Expr(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
};

/// Variable name lists for domain ("x1".."xm") and target ("y1".."yn") charts.
std::vector<std::string> x_var_names(int m);
std::vector<std::string> y_var_names(int n);

}  // namespace polyharm
