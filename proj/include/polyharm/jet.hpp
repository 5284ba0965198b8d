#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "polyharm/errors.hpp"

namespace polyharm {

inline constexpr int kMaxJetVars = 4;
inline constexpr int kMaxJetOrder = 12;

/// Coefficient layout shared by all jets of a given (num_vars, order):
/// multi-indices of total degree <= order enumerated in graded-lex order
/// (by total degree, lexicographically descending within a degree).
/// Instances are interned, so jets compare shapes by pointer.
struct JetShape {
    int num_vars = 0;
    int order = 0;
    int count = 0;
    std::vector<std::array<std::uint8_t, 4>> exponents;  // position -> multi-index
    std::vector<std::uint32_t> key;                      // position -> nibble-packed index
    std::vector<int> degree;                             // position -> total degree
    std::vector<int> degree_start;                       // degree -> first position (size order+2)
    std::vector<std::int32_t> pos_of_key;                // packed key -> position, -1 if absent
    std::vector<double> index_factorial;                 // position -> beta!

    static const JetShape& get(int num_vars, int order);

    int position(std::span<const int> beta) const;  // -1 if |beta| > order or out of range
};

/// Truncated multivariate Taylor polynomial of a scalar quantity at a point.
/// Coefficients are Taylor coefficients (partial derivative divided by beta!).
/// Values are immutable in practice: every operation returns a fresh jet.
class Jet {
  public:
    Jet() = default;  // empty jet; only assignment is valid on it

    Jet(int num_vars, int order)
        : shape_(&JetShape::get(num_vars, order)), c_(static_cast<std::size_t>(shape_->count), 0.0) {}

    static Jet constant(double value, int num_vars, int order) {
        Jet j(num_vars, order);
        j.c_[0] = value;
        return j;
    }

    /// The coordinate function x^index expanded at `value`.
    static Jet variable(int index, double value, int num_vars, int order);

    int num_vars() const { return shape_->num_vars; }
    int order() const { return shape_->order; }
    int size() const { return shape_->count; }
    const JetShape& shape() const { return *shape_; }
    bool empty() const { return shape_ == nullptr; }

    double value() const { return c_[0]; }
    double operator[](int pos) const { return c_[static_cast<std::size_t>(pos)]; }
    double& operator[](int pos) { return c_[static_cast<std::size_t>(pos)]; }

    /// Raw Taylor coefficient of the multi-index beta.
    double coeff(std::span<const int> beta) const;
    /// True mixed partial derivative: beta! * coeff(beta).
    double partial(std::span<const int> beta) const;

    /// Same function, truncated to a lower order.
    Jet truncated(int new_order) const;
    /// Jet of the partial derivative with respect to variable `var`; order drops by one.
    Jet derivative(int var) const;
    /// Drop the last variable, extracting the coefficient slice of the given
    /// degree in it. slice_last(1) of f(x, t) is the jet of (d/dt f)|_{t=0}.
    Jet slice_last(int aux_degree) const;

    Jet& operator+=(const Jet& b);
    Jet& operator-=(const Jet& b);
    Jet& operator+=(double b) { c_[0] += b; return *this; }
    Jet& operator-=(double b) { c_[0] -= b; return *this; }
    Jet& operator*=(double b);

    friend Jet operator-(const Jet& a);
    friend Jet operator+(const Jet& a, const Jet& b) { Jet r = a; r += b; return r; }
    friend Jet operator-(const Jet& a, const Jet& b) { Jet r = a; r -= b; return r; }
    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet operator/(const Jet& a, const Jet& b);
    friend Jet operator+(const Jet& a, double b) { Jet r = a; r += b; return r; }
    friend Jet operator+(double a, const Jet& b) { Jet r = b; r += a; return r; }
    friend Jet operator-(const Jet& a, double b) { Jet r = a; r -= b; return r; }
    friend Jet operator-(double a, const Jet& b) { Jet r = -b; r += a; return r; }
    friend Jet operator*(const Jet& a, double b) { Jet r = a; r *= b; return r; }
    friend Jet operator*(double a, const Jet& b) { Jet r = b; r *= a; return r; }
    friend Jet operator/(const Jet& a, double b) { Jet r = a; r *= 1.0 / b; return r; }
    friend Jet operator/(double a, const Jet& b);

    std::string str() const;

  private:
    const JetShape* shape_ = nullptr;
    std::vector<double> c_;

    friend Jet compose_univariate(const Jet& a, std::span<const double> series);
    friend void check_same_shape(const Jet& a, const Jet& b);
};

/// Taylor expansion of f(a) truncated at a's order, where `series` holds the
/// univariate Taylor coefficients of f at a's constant term (length order+1).
Jet compose_univariate(const Jet& a, std::span<const double> series);

Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sqrt(const Jet& a);
Jet pow(const Jet& a, double p);  // requires positive constant term
Jet pow(const Jet& a, int n);     // any base; negative n requires nonzero constant term

}  // namespace polyharm
