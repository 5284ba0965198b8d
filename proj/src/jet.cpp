#include "polyharm/jet.hpp"

#include <cmath>
#include <cstdio>
#include <memory>
#include <mutex>

namespace polyharm {

namespace {

void append_indices(std::vector<std::array<std::uint8_t, 4>>& out, int num_vars, int var,
                    int deg_left, std::array<std::uint8_t, 4>& cur) {
    if (var == num_vars - 1) {
        cur[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(deg_left);
        out.push_back(cur);
        return;
    }
    for (int e = deg_left; e >= 0; --e) {
        cur[static_cast<std::size_t>(var)] = static_cast<std::uint8_t>(e);
        append_indices(out, num_vars, var + 1, deg_left - e, cur);
    }
}

std::unique_ptr<JetShape> build_shape(int num_vars, int order) {
    auto s = std::make_unique<JetShape>();
    s->num_vars = num_vars;
    s->order = order;
    s->degree_start.assign(static_cast<std::size_t>(order) + 2, 0);
    std::array<std::uint8_t, 4> cur{};
    for (int d = 0; d <= order; ++d) {
        s->degree_start[static_cast<std::size_t>(d)] = static_cast<int>(s->exponents.size());
        append_indices(s->exponents, num_vars, 0, d, cur);
    }
    s->count = static_cast<int>(s->exponents.size());
    s->degree_start[static_cast<std::size_t>(order) + 1] = s->count;

    s->key.resize(static_cast<std::size_t>(s->count));
    s->degree.resize(static_cast<std::size_t>(s->count));
    s->index_factorial.resize(static_cast<std::size_t>(s->count));
    s->pos_of_key.assign(std::size_t{1} << (4 * num_vars), -1);
    for (int p = 0; p < s->count; ++p) {
        const auto& e = s->exponents[static_cast<std::size_t>(p)];
        std::uint32_t key = 0;
        int deg = 0;
        double fact = 1.0;
        for (int v = 0; v < num_vars; ++v) {
            key |= static_cast<std::uint32_t>(e[static_cast<std::size_t>(v)]) << (4 * v);
            deg += e[static_cast<std::size_t>(v)];
            for (int q = 2; q <= e[static_cast<std::size_t>(v)]; ++q) fact *= q;
        }
        s->key[static_cast<std::size_t>(p)] = key;
        s->degree[static_cast<std::size_t>(p)] = deg;
        s->index_factorial[static_cast<std::size_t>(p)] = fact;
        s->pos_of_key[key] = p;
    }
    return s;
}

}  // namespace

const JetShape& JetShape::get(int num_vars, int order) {
    if (num_vars < 1 || num_vars > kMaxJetVars)
        throw ShapeError("jet num_vars must be in 1.." + std::to_string(kMaxJetVars) + ", got " +
                         std::to_string(num_vars));
    if (order < 0 || order > kMaxJetOrder)
        throw ShapeError("jet order must be in 0.." + std::to_string(kMaxJetOrder) + ", got " +
                         std::to_string(order));
    static std::mutex mu;
    static std::unique_ptr<JetShape> cache[kMaxJetVars + 1][kMaxJetOrder + 1];
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[num_vars][order];
    if (!slot) slot = build_shape(num_vars, order);
    return *slot;
}

int JetShape::position(std::span<const int> beta) const {
    if (static_cast<int>(beta.size()) != num_vars) return -1;
    std::uint32_t k = 0;
    int deg = 0;
    for (int v = 0; v < num_vars; ++v) {
        if (beta[static_cast<std::size_t>(v)] < 0) return -1;
        deg += beta[static_cast<std::size_t>(v)];
        if (deg > order) return -1;
        k |= static_cast<std::uint32_t>(beta[static_cast<std::size_t>(v)]) << (4 * v);
    }
    return pos_of_key[k];
}

void check_same_shape(const Jet& a, const Jet& b) {
    if (a.shape_ != b.shape_)
        throw ShapeError("jet shape mismatch: (" + std::to_string(a.num_vars()) + "," +
                         std::to_string(a.order()) + ") vs (" + std::to_string(b.num_vars()) +
                         "," + std::to_string(b.order()) + ")");
}

Jet Jet::variable(int index, double value, int num_vars, int order) {
    if (index < 0 || index >= num_vars)
        throw ShapeError("jet variable index " + std::to_string(index) + " out of range for " +
                         std::to_string(num_vars) + " variables");
    Jet j(num_vars, order);
    j.c_[0] = value;
    if (order >= 1) j.c_[static_cast<std::size_t>(j.shape_->pos_of_key[1u << (4 * index)])] = 1.0;
    return j;
}

double Jet::coeff(std::span<const int> beta) const {
    if (static_cast<int>(beta.size()) != num_vars())
        throw ShapeError("multi-index length does not match jet num_vars");
    int deg = 0;
    for (int b : beta) {
        if (b < 0) throw ShapeError("negative multi-index entry");
        deg += b;
    }
    if (deg > order())
        throw OrderError("multi-index degree " + std::to_string(deg) + " exceeds jet order " +
                             std::to_string(order()),
                         deg);
    return c_[static_cast<std::size_t>(shape_->position(beta))];
}

double Jet::partial(std::span<const int> beta) const {
    double c = coeff(beta);
    int pos = shape_->position(beta);
    return c * shape_->index_factorial[static_cast<std::size_t>(pos)];
}

Jet Jet::truncated(int new_order) const {
    if (new_order == order()) return *this;
    if (new_order > order())
        throw OrderError("cannot raise jet order from " + std::to_string(order()) + " to " +
                             std::to_string(new_order),
                         new_order);
    Jet r(num_vars(), new_order);
    // Graded layout: positions of degree <= new_order are a shared prefix.
    for (int p = 0; p < r.size(); ++p) r.c_[static_cast<std::size_t>(p)] = c_[static_cast<std::size_t>(p)];
    return r;
}

Jet Jet::derivative(int var) const {
    if (var < 0 || var >= num_vars()) throw ShapeError("derivative variable out of range");
    if (order() < 1)
        throw OrderError("jet order exhausted: cannot differentiate an order-0 jet", 1);
    Jet r(num_vars(), order() - 1);
    const JetShape& rs = *r.shape_;
    const JetShape& ss = *shape_;
    const std::uint32_t step = 1u << (4 * var);
    for (int p = 0; p < rs.count; ++p) {
        const int src = ss.pos_of_key[rs.key[static_cast<std::size_t>(p)] + step];
        const double factor = rs.exponents[static_cast<std::size_t>(p)][static_cast<std::size_t>(var)] + 1.0;
        r.c_[static_cast<std::size_t>(p)] = c_[static_cast<std::size_t>(src)] * factor;
    }
    return r;
}

Jet Jet::slice_last(int aux_degree) const {
    if (num_vars() < 2) throw ShapeError("slice_last requires at least two variables");
    if (aux_degree < 0 || aux_degree > order())
        throw OrderError("slice degree exceeds jet order", aux_degree);
    Jet r(num_vars() - 1, order() - aux_degree);
    const JetShape& rs = *r.shape_;
    const JetShape& ss = *shape_;
    const std::uint32_t aux = static_cast<std::uint32_t>(aux_degree) << (4 * (num_vars() - 1));
    for (int p = 0; p < rs.count; ++p) {
        const int src = ss.pos_of_key[rs.key[static_cast<std::size_t>(p)] + aux];
        r.c_[static_cast<std::size_t>(p)] = c_[static_cast<std::size_t>(src)];
    }
    return r;
}

Jet& Jet::operator+=(const Jet& b) {
    check_same_shape(*this, b);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += b.c_[i];
    return *this;
}

Jet& Jet::operator-=(const Jet& b) {
    check_same_shape(*this, b);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= b.c_[i];
    return *this;
}

Jet& Jet::operator*=(double b) {
    for (double& v : c_) v *= b;
    return *this;
}

Jet operator-(const Jet& a) {
    Jet r = a;
    for (double& v : r.c_) v = -v;
    return r;
}

Jet operator*(const Jet& a, const Jet& b) {
    check_same_shape(a, b);
    const JetShape& s = *a.shape_;
    Jet r(s.num_vars, s.order);
    for (int ia = 0; ia < s.count; ++ia) {
        const double av = a.c_[static_cast<std::size_t>(ia)];
        if (av == 0.0) continue;
        const std::uint32_t ka = s.key[static_cast<std::size_t>(ia)];
        const int bend = s.degree_start[static_cast<std::size_t>(s.order - s.degree[static_cast<std::size_t>(ia)]) + 1];
        for (int ib = 0; ib < bend; ++ib) {
            const double bv = b.c_[static_cast<std::size_t>(ib)];
            if (bv == 0.0) continue;
            const int ic = s.pos_of_key[ka + s.key[static_cast<std::size_t>(ib)]];
            r.c_[static_cast<std::size_t>(ic)] += av * bv;
        }
    }
    return r;
}

Jet operator/(const Jet& a, const Jet& b) {
    check_same_shape(a, b);
    if (b.c_[0] == 0.0)
        throw NumericDomainError("division by a jet with zero constant term");
    const JetShape& s = *a.shape_;
    Jet q(s.num_vars, s.order);
    const double inv_b0 = 1.0 / b.c_[0];
    for (int ic = 0; ic < s.count; ++ic) {
        double acc = a.c_[static_cast<std::size_t>(ic)];
        const auto& ec = s.exponents[static_cast<std::size_t>(ic)];
        const std::uint32_t kc = s.key[static_cast<std::size_t>(ic)];
        const int bend = s.degree_start[static_cast<std::size_t>(s.degree[static_cast<std::size_t>(ic)]) + 1];
        for (int ib = s.degree_start[1]; ib < bend; ++ib) {
            const double bv = b.c_[static_cast<std::size_t>(ib)];
            if (bv == 0.0) continue;
            const auto& eb = s.exponents[static_cast<std::size_t>(ib)];
            bool fits = true;
            for (int v = 0; v < s.num_vars; ++v)
                if (eb[static_cast<std::size_t>(v)] > ec[static_cast<std::size_t>(v)]) { fits = false; break; }
            if (!fits) continue;
            const int iq = s.pos_of_key[kc - s.key[static_cast<std::size_t>(ib)]];
            acc -= bv * q.c_[static_cast<std::size_t>(iq)];
        }
        q.c_[static_cast<std::size_t>(ic)] = acc * inv_b0;
    }
    return q;
}

Jet operator/(double a, const Jet& b) {
    return Jet::constant(a, b.num_vars(), b.order()) / b;
}

Jet compose_univariate(const Jet& a, std::span<const double> series) {
    const int d = a.order();
    Jet tilde = a;
    tilde.c_[0] = 0.0;
    Jet r = Jet::constant(series[static_cast<std::size_t>(d)], a.num_vars(), d);
    for (int k = d - 1; k >= 0; --k) {
        r = r * tilde;
        r.c_[0] += series[static_cast<std::size_t>(k)];
    }
    return r;
}

Jet sin(const Jet& a) {
    const int d = a.order();
    std::vector<double> s(static_cast<std::size_t>(d) + 1);
    const double s0 = std::sin(a.value()), c0 = std::cos(a.value());
    double inv_fact = 1.0;
    for (int k = 0; k <= d; ++k) {
        if (k > 0) inv_fact /= k;
        switch (k % 4) {
            case 0: s[static_cast<std::size_t>(k)] = s0 * inv_fact; break;
            case 1: s[static_cast<std::size_t>(k)] = c0 * inv_fact; break;
            case 2: s[static_cast<std::size_t>(k)] = -s0 * inv_fact; break;
            default: s[static_cast<std::size_t>(k)] = -c0 * inv_fact; break;
        }
    }
    return compose_univariate(a, s);
}

Jet cos(const Jet& a) {
    const int d = a.order();
    std::vector<double> s(static_cast<std::size_t>(d) + 1);
    const double s0 = std::sin(a.value()), c0 = std::cos(a.value());
    double inv_fact = 1.0;
    for (int k = 0; k <= d; ++k) {
        if (k > 0) inv_fact /= k;
        switch (k % 4) {
            case 0: s[static_cast<std::size_t>(k)] = c0 * inv_fact; break;
            case 1: s[static_cast<std::size_t>(k)] = -s0 * inv_fact; break;
            case 2: s[static_cast<std::size_t>(k)] = -c0 * inv_fact; break;
            default: s[static_cast<std::size_t>(k)] = s0 * inv_fact; break;
        }
    }
    return compose_univariate(a, s);
}

Jet exp(const Jet& a) {
    const int d = a.order();
    std::vector<double> s(static_cast<std::size_t>(d) + 1);
    const double e0 = std::exp(a.value());
    double term = e0;
    s[0] = term;
    for (int k = 1; k <= d; ++k) {
        term /= k;
        s[static_cast<std::size_t>(k)] = term;
    }
    return compose_univariate(a, s);
}

Jet log(const Jet& a) {
    if (!(a.value() > 0.0))
        throw NumericDomainError("log of a jet with non-positive constant term");
    const int d = a.order();
    std::vector<double> s(static_cast<std::size_t>(d) + 1);
    s[0] = std::log(a.value());
    const double inv_a0 = 1.0 / a.value();
    double p = 1.0;
    for (int k = 1; k <= d; ++k) {
        p *= inv_a0;
        s[static_cast<std::size_t>(k)] = (k % 2 == 1 ? p : -p) / k;
    }
    return compose_univariate(a, s);
}

Jet sqrt(const Jet& a) {
    if (!(a.value() > 0.0))
        throw NumericDomainError("sqrt of a jet with non-positive constant term");
    const int d = a.order();
    std::vector<double> s(static_cast<std::size_t>(d) + 1);
    s[0] = std::sqrt(a.value());
    const double inv_a0 = 1.0 / a.value();
    for (int k = 1; k <= d; ++k)
        s[static_cast<std::size_t>(k)] = s[static_cast<std::size_t>(k) - 1] * (0.5 - (k - 1)) / k * inv_a0;
    return compose_univariate(a, s);
}

Jet pow(const Jet& a, double p) {
    if (!(a.value() > 0.0))
        throw NumericDomainError("pow with real exponent requires a positive constant term");
    const int d = a.order();
    std::vector<double> s(static_cast<std::size_t>(d) + 1);
    s[0] = std::pow(a.value(), p);
    const double inv_a0 = 1.0 / a.value();
    for (int k = 1; k <= d; ++k)
        s[static_cast<std::size_t>(k)] = s[static_cast<std::size_t>(k) - 1] * (p - (k - 1)) / k * inv_a0;
    return compose_univariate(a, s);
}

Jet pow(const Jet& a, int n) {
    if (n == 0) return Jet::constant(1.0, a.num_vars(), a.order());
    if (n < 0) {
        if (a.value() == 0.0)
            throw NumericDomainError("negative integer power of a jet with zero constant term");
        return 1.0 / pow(a, -n);
    }
    Jet result = Jet::constant(1.0, a.num_vars(), a.order());
    Jet base = a;
    int e = n;
    while (true) {
        if (e & 1) result = result * base;
        e >>= 1;
        if (e == 0) break;
        base = base * base;
    }
    return result;
}

std::string Jet::str() const {
    std::string out = "jet(v=" + std::to_string(num_vars()) + ",D=" + std::to_string(order()) + ")[";
    char buf[32];
    for (int p = 0; p < size(); ++p) {
        std::snprintf(buf, sizeof buf, "%.17g", c_[static_cast<std::size_t>(p)]);
        out += buf;
        if (p + 1 < size()) out += ", ";
    }
    out += "]";
    return out;
}

}  // namespace polyharm
