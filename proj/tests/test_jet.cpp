#include <array>
#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "doctest.h"
#include "polyharm/jet.hpp"

using namespace polyharm;

namespace {

using MIdx = std::array<int, 4>;

// Sparse polynomial used as an independent oracle: map multi-index -> coefficient.
using Poly = std::map<MIdx, double>;

Poly random_poly(std::mt19937_64& rng, int num_vars, int max_deg, int terms) {
    std::uniform_int_distribution<int> coef(-5, 5);
    std::uniform_int_distribution<int> expo(0, max_deg);
    Poly p;
    for (int t = 0; t < terms; ++t) {
        MIdx idx{};
        int left = max_deg;
        for (int v = 0; v < num_vars; ++v) {
            int e = expo(rng) % (left + 1);
            idx[static_cast<std::size_t>(v)] = e;
            left -= e;
        }
        p[idx] += coef(rng);
    }
    return p;
}

// Truncated product computed by direct convolution of coefficient maps.
Poly poly_mul_truncated(const Poly& a, const Poly& b, int order) {
    Poly r;
    for (const auto& [ia, ca] : a)
        for (const auto& [ib, cb] : b) {
            MIdx ic{};
            int deg = 0;
            for (int v = 0; v < 4; ++v) {
                ic[static_cast<std::size_t>(v)] = ia[static_cast<std::size_t>(v)] + ib[static_cast<std::size_t>(v)];
                deg += ic[static_cast<std::size_t>(v)];
            }
            if (deg <= order) r[ic] += ca * cb;
        }
    return r;
}

// Build the jet of a polynomial through the library path (variable jets + pow).
Jet poly_to_jet(const Poly& p, std::span<const double> at, int num_vars, int order) {
    Jet sum(num_vars, order);
    for (const auto& [idx, c] : p) {
        Jet term = Jet::constant(c, num_vars, order);
        for (int v = 0; v < num_vars; ++v)
            if (idx[static_cast<std::size_t>(v)] > 0)
                term = term * pow(Jet::variable(v, at[static_cast<std::size_t>(v)], num_vars, order),
                                  idx[static_cast<std::size_t>(v)]);
        sum += term;
    }
    return sum;
}

double poly_coeff_at_zero(const Poly& p, const MIdx& idx) {
    auto it = p.find(idx);
    return it == p.end() ? 0.0 : it->second;
}

}  // namespace

TEST_SUITE("jets") {

TEST_CASE("variable jets carry value and unit first-order coefficient") {
    Jet j = Jet::variable(0, 2.0, 2, 3);
    CHECK(j.value() == 2.0);
    std::vector<int> e10{1, 0}, e01{0, 1}, e20{2, 0};
    CHECK(j.coeff(e10) == 1.0);
    CHECK(j.coeff(e01) == 0.0);
    CHECK(j.coeff(e20) == 0.0);

    Jet k = Jet::variable(1, 0.0, 2, 1);
    CHECK(k.coeff(e01) == 1.0);

    CHECK_THROWS_AS(Jet::variable(2, 0.0, 2, 3), ShapeError);
    CHECK_THROWS_AS(Jet::variable(-1, 0.0, 2, 3), ShapeError);
}

TEST_CASE("product of two first-order variables has a unit mixed coefficient") {
    Jet x = Jet::variable(0, 0.0, 2, 2);
    Jet y = Jet::variable(1, 0.0, 2, 2);
    Jet p = x * y;
    std::vector<int> e11{1, 1};
    CHECK(p.coeff(e11) == 1.0);
    CHECK(p.value() == 0.0);
}

TEST_CASE("division reproduces the geometric series") {
    // 1/(1+x) = 1 - x + x^2 - x^3 + ...
    Jet one = Jet::constant(1.0, 1, 3);
    Jet denom = Jet::variable(0, 0.0, 1, 3) + 1.0;
    Jet q = one / denom;
    for (int d = 0; d <= 3; ++d) {
        std::vector<int> beta{d};
        const double expected = (d % 2 == 0) ? 1.0 : -1.0;
        CHECK(q.coeff(beta) == doctest::Approx(expected).epsilon(1e-13));
    }
}

TEST_CASE("shape mismatch and zero-constant-term division are rejected") {
    Jet a(2, 3), b(2, 2), c(1, 3);
    CHECK_THROWS_AS(a + b, ShapeError);
    CHECK_THROWS_AS(a * c, ShapeError);
    Jet z = Jet::variable(0, 0.0, 2, 3);
    CHECK_THROWS_AS(a / z, NumericDomainError);
}

TEST_CASE("random polynomial products match the convolution oracle") {
    std::mt19937_64 rng(20240811u);
    for (int rep = 0; rep < 40; ++rep) {
        const int nv = 1 + static_cast<int>(rng() % 3);
        const int order = 3 + static_cast<int>(rng() % 4);
        Poly pa = random_poly(rng, nv, order, 5);
        Poly pb = random_poly(rng, nv, order, 5);
        Poly pc = poly_mul_truncated(pa, pb, order);

        std::vector<double> at(static_cast<std::size_t>(nv), 0.0);
        Jet ja = poly_to_jet(pa, at, nv, order);
        Jet jb = poly_to_jet(pb, at, nv, order);
        Jet jc = ja * jb;

        // Expanded at 0, jet coefficients are exactly the polynomial coefficients.
        for (int p = 0; p < jc.size(); ++p) {
            const auto& e = jc.shape().exponents[static_cast<std::size_t>(p)];
            MIdx idx{e[0], e[1], e[2], e[3]};
            const double expected = poly_coeff_at_zero(pc, idx);
            const double got = jc[p];
            CHECK(std::abs(got - expected) <= 1e-13 * (1.0 + std::abs(expected)));
        }
    }
}

TEST_CASE("addition is coefficientwise (linearity of extraction)") {
    std::mt19937_64 rng(7u);
    Poly pa = random_poly(rng, 2, 4, 6);
    Poly pb = random_poly(rng, 2, 4, 6);
    std::vector<double> at{0.3, -0.7};
    Jet ja = poly_to_jet(pa, at, 2, 4);
    Jet jb = poly_to_jet(pb, at, 2, 4);
    Jet js = ja + jb;
    for (int d1 = 0; d1 <= 4; ++d1)
        for (int d2 = 0; d1 + d2 <= 4; ++d2) {
            std::vector<int> beta{d1, d2};
            CHECK(js.partial(beta) ==
                  doctest::Approx(ja.partial(beta) + jb.partial(beta)).epsilon(1e-12));
        }
}

TEST_CASE("product rule holds for first partials") {
    std::mt19937_64 rng(99u);
    Poly pa = random_poly(rng, 3, 3, 5);
    Poly pb = random_poly(rng, 3, 3, 5);
    std::vector<double> at{0.2, 1.1, -0.4};
    Jet ja = poly_to_jet(pa, at, 3, 3);
    Jet jb = poly_to_jet(pb, at, 3, 3);
    Jet jc = ja * jb;
    for (int v = 0; v < 3; ++v) {
        std::vector<int> beta{0, 0, 0};
        beta[static_cast<std::size_t>(v)] = 1;
        const double lhs = jc.partial(beta);
        const double rhs = ja.partial(beta) * jb.value() + ja.value() * jb.partial(beta);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("elementary functions reproduce Maclaurin series") {
    Jet x3 = Jet::variable(0, 0.0, 1, 3);
    Jet s = sin(x3);
    std::vector<int> b0{0}, b1{1}, b2{2}, b3{3};
    CHECK(s.coeff(b0) == doctest::Approx(0.0));
    CHECK(s.coeff(b1) == doctest::Approx(1.0));
    CHECK(s.coeff(b2) == doctest::Approx(0.0));
    CHECK(s.coeff(b3) == doctest::Approx(-1.0 / 6.0));

    Jet x4 = Jet::variable(0, 0.0, 1, 4);
    Jet e = exp(x4);
    const double expected[5] = {1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0};
    for (int d = 0; d <= 4; ++d) {
        std::vector<int> beta{d};
        CHECK(e.coeff(beta) == doctest::Approx(expected[d]).epsilon(1e-14));
    }

    CHECK_THROWS_AS(log(Jet::variable(0, 0.0, 1, 2)), NumericDomainError);
    CHECK_THROWS_AS(sqrt(Jet::constant(-1.0, 1, 2)), NumericDomainError);
    CHECK_THROWS_AS(pow(Jet::constant(-2.0, 1, 2), 0.5), NumericDomainError);
}

TEST_CASE("integer powers work for any base sign") {
    Jet x = Jet::variable(0, -2.0, 1, 3);
    Jet p3 = pow(x, 3);
    CHECK(p3.value() == doctest::Approx(-8.0));
    std::vector<int> b1{1};
    CHECK(p3.partial(b1) == doctest::Approx(12.0));  // 3x^2 at -2
    Jet pm1 = pow(x, -1);
    CHECK(pm1.value() == doctest::Approx(-0.5));
    CHECK(pm1.partial(b1) == doctest::Approx(-0.25));  // -1/x^2 at -2
    CHECK_THROWS_AS(pow(Jet::variable(0, 0.0, 1, 2), -2), NumericDomainError);
}

TEST_CASE("extract_partial returns true derivatives") {
    Jet s = sin(Jet::variable(0, 0.0, 1, 5));
    std::vector<int> b3{3};
    CHECK(s.partial(b3) == doctest::Approx(-1.0));  // third derivative of sin at 0

    // f = x1^2 x2 at (1,1): d^3 f / dx1^2 dx2 ... (2,1) partial is 2.
    Jet x1 = Jet::variable(0, 1.0, 2, 3);
    Jet x2 = Jet::variable(1, 1.0, 2, 3);
    Jet f = x1 * x1 * x2;
    std::vector<int> b21{2, 1};
    CHECK(f.partial(b21) == doctest::Approx(2.0));

    std::vector<int> b4{4};
    CHECK_THROWS_AS(s.coeff(std::span<const int>(b4.data(), 0)), ShapeError);
    std::vector<int> b6{6};
    CHECK_THROWS_AS(s.partial(b6), OrderError);
}

TEST_CASE("composition consistency: sin(x)^2 via pow equals product of sin jets") {
    Jet x = Jet::variable(0, 0.7, 1, 6);
    Jet a = pow(sin(x), 2);
    Jet b = sin(x) * sin(x);
    for (int d = 0; d <= 6; ++d) {
        std::vector<int> beta{d};
        CHECK(std::abs(a.coeff(beta) - b.coeff(beta)) <=
              1e-13 * (1.0 + std::abs(b.coeff(beta))));
    }
}

TEST_CASE("derivative operator shifts coefficients") {
    Jet x = Jet::variable(0, 0.5, 2, 4);
    Jet y = Jet::variable(1, -1.0, 2, 4);
    Jet f = sin(x * y);
    Jet fx = f.derivative(0);
    CHECK(fx.order() == 3);
    // d/dx sin(xy) = y cos(xy)
    Jet oracle = y.truncated(3) * cos((x * y).truncated(3));
    for (int p = 0; p < fx.size(); ++p)
        CHECK(fx[p] == doctest::Approx(oracle[p]).epsilon(1e-12));
    CHECK_THROWS_AS(Jet::constant(1.0, 1, 0).derivative(0), OrderError);
}

TEST_CASE("auxiliary-slot slice extracts a directional derivative") {
    // f(x, t) = sin(x + t); the t-linear slice at t=0 is cos(x).
    const double x0 = 0.3;
    Jet x = Jet::variable(0, x0, 2, 5);
    Jet t = Jet::variable(1, 0.0, 2, 5);
    Jet f = sin(x + t);
    Jet df_dt = f.slice_last(1);
    CHECK(df_dt.num_vars() == 1);
    CHECK(df_dt.order() == 4);
    Jet oracle = cos(Jet::variable(0, x0, 1, 4));
    for (int p = 0; p < df_dt.size(); ++p)
        CHECK(df_dt[p] == doctest::Approx(oracle[p]).epsilon(1e-13));

    Jet f0 = f.slice_last(0);
    Jet oracle0 = sin(Jet::variable(0, x0, 1, 5));
    for (int p = 0; p < f0.size(); ++p)
        CHECK(f0[p] == doctest::Approx(oracle0[p]).epsilon(1e-13));
}

TEST_CASE("coefficients are stable under raising the truncation order") {
    const double x0 = 0.4, y0 = -0.2;
    auto build = [&](int order) {
        Jet x = Jet::variable(0, x0, 2, order);
        Jet y = Jet::variable(1, y0, 2, order);
        return exp(sin(x) * y) / (1.0 + x * x + y * y);
    };
    Jet lo = build(6), hi = build(8);
    for (int p = 0; p < lo.size(); ++p)
        CHECK(std::abs(lo[p] - hi[p]) <= 1e-13 * (1.0 + std::abs(lo[p])));
}

}  // TEST_SUITE
