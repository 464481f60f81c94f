#pragma once

// Immutable expression trees for closed-form complex functions of one
// complex variable, with exact evaluation and exact symbolic
// differentiation. No simplification is ever performed: derivative trees
// may grow, and correctness is preferred over canonical form.
//
// Evaluation returns nullopt ("pole-overflow") instead of a huge or
// non-finite value whenever the point is within the pole guard of a pole
// of a wp / wp' / negative-power subterm, or an intermediate overflows.
// Callers that sample (see verify.hpp) resample on pole-overflow.

#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fermat/elliptic.hpp"

namespace fermat {

enum class NodeType {
    Constant,
    Variable,
    Add,
    Mul,
    Pow,
    Exp,
    Sin,
    Cos,
    Polynomial,
    Wp,
    WpPrime,
    Shift,
};

class Expr {
public:
    struct Node {
        NodeType type = NodeType::Constant;
        cplx value{};              // Constant value or Shift offset
        int exponent = 0;          // Pow
        std::vector<cplx> coeffs;  // Polynomial, lowest degree first
        std::shared_ptr<const Node> a, b;
    };

    static Expr constant(cplx v) {
        Node n;
        n.type = NodeType::Constant;
        n.value = v;
        return finish(std::move(n));
    }
    static Expr variable() {
        Node n;
        n.type = NodeType::Variable;
        return finish(std::move(n));
    }
    static Expr add(Expr x, Expr y) {
        Node n;
        n.type = NodeType::Add;
        n.a = std::move(x.node_);
        n.b = std::move(y.node_);
        return finish(std::move(n));
    }
    static Expr mul(Expr x, Expr y) {
        Node n;
        n.type = NodeType::Mul;
        n.a = std::move(x.node_);
        n.b = std::move(y.node_);
        return finish(std::move(n));
    }
    static Expr sub(Expr x, Expr y) { return add(std::move(x), mul(constant(-1.0), std::move(y))); }

    static Expr pow(Expr base, int k) {
        if (k == 0) throw std::invalid_argument("Expr::pow: exponent must be a nonzero integer");
        Node n;
        n.type = NodeType::Pow;
        n.exponent = k;
        n.a = std::move(base.node_);
        return finish(std::move(n));
    }

    static Expr exp(Expr x) { return unary(NodeType::Exp, std::move(x)); }
    static Expr sin(Expr x) { return unary(NodeType::Sin, std::move(x)); }
    static Expr cos(Expr x) { return unary(NodeType::Cos, std::move(x)); }
    static Expr wp(Expr x) { return unary(NodeType::Wp, std::move(x)); }
    static Expr wp_prime(Expr x) { return unary(NodeType::WpPrime, std::move(x)); }

    static Expr polynomial(std::vector<cplx> coeffs) {
        Node n;
        n.type = NodeType::Polynomial;
        n.coeffs = std::move(coeffs);
        return finish(std::move(n));
    }

    static Expr shift(Expr x, cplx offset) {
        Node n;
        n.type = NodeType::Shift;
        n.value = offset;
        n.a = std::move(x.node_);
        return finish(std::move(n));
    }

    /// Wrap an existing (shared, immutable) node. Used when walking trees.
    static Expr from_node(std::shared_ptr<const Node> n) {
        if (!n) throw std::invalid_argument("Expr::from_node: null node");
        return Expr(std::move(n));
    }

    const Node& node() const { return *node_; }
    const std::shared_ptr<const Node>& node_ptr() const { return node_; }
    Expr child_a() const { return from_node(node_->a); }
    Expr child_b() const { return from_node(node_->b); }

private:
    static Expr unary(NodeType t, Expr x) {
        Node n;
        n.type = t;
        n.a = std::move(x.node_);
        return finish(std::move(n));
    }
    static Expr finish(Node n) { return Expr(std::make_shared<const Node>(std::move(n))); }
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

inline Expr operator+(Expr x, Expr y) { return Expr::add(std::move(x), std::move(y)); }
inline Expr operator-(Expr x, Expr y) { return Expr::sub(std::move(x), std::move(y)); }
inline Expr operator*(Expr x, Expr y) { return Expr::mul(std::move(x), std::move(y)); }

struct EvalOptions {
    double pole_guard = kDefaultPoleGuard;
};

namespace detail {

inline cplx pow_int_pos(cplx base, int k) {
    cplx r = 1.0;
    while (k > 0) {
        if (k & 1) r *= base;
        base *= base;
        k >>= 1;
    }
    return r;
}

inline bool finite(cplx v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
}

inline std::optional<cplx> eval_node(const Expr::Node& n, cplx z, const EvalOptions& opt) {
    auto fin = [](cplx v) -> std::optional<cplx> {
        if (!finite(v)) return std::nullopt;
        return v;
    };
    switch (n.type) {
        case NodeType::Constant:
            return fin(n.value);
        case NodeType::Variable:
            return fin(z);
        case NodeType::Add: {
            auto x = eval_node(*n.a, z, opt);
            if (!x) return std::nullopt;
            auto y = eval_node(*n.b, z, opt);
            if (!y) return std::nullopt;
            return fin(*x + *y);
        }
        case NodeType::Mul: {
            auto x = eval_node(*n.a, z, opt);
            if (!x) return std::nullopt;
            auto y = eval_node(*n.b, z, opt);
            if (!y) return std::nullopt;
            return fin(*x * *y);
        }
        case NodeType::Pow: {
            auto x = eval_node(*n.a, z, opt);
            if (!x) return std::nullopt;
            if (n.exponent > 0) return fin(pow_int_pos(*x, n.exponent));
            if (std::abs(*x) < opt.pole_guard) return std::nullopt;  // pole of x^-k
            return fin(1.0 / pow_int_pos(*x, -n.exponent));
        }
        case NodeType::Exp: {
            auto x = eval_node(*n.a, z, opt);
            if (!x) return std::nullopt;
            return fin(std::exp(*x));
        }
        case NodeType::Sin: {
            auto x = eval_node(*n.a, z, opt);
            if (!x) return std::nullopt;
            return fin(std::sin(*x));
        }
        case NodeType::Cos: {
            auto x = eval_node(*n.a, z, opt);
            if (!x) return std::nullopt;
            return fin(std::cos(*x));
        }
        case NodeType::Polynomial: {
            cplx acc = 0.0;
            for (auto it = n.coeffs.rbegin(); it != n.coeffs.rend(); ++it) {
                acc = acc * z + *it;
            }
            return fin(acc);
        }
        case NodeType::Wp: {
            auto x = eval_node(*n.a, z, opt);
            if (!x) return std::nullopt;
            auto v = wp(*x, opt.pole_guard);
            if (!v) return std::nullopt;
            return fin(*v);
        }
        case NodeType::WpPrime: {
            auto x = eval_node(*n.a, z, opt);
            if (!x) return std::nullopt;
            auto v = wp_prime(*x, opt.pole_guard);
            if (!v) return std::nullopt;
            return fin(*v);
        }
        case NodeType::Shift:
            return eval_node(*n.a, z + n.value, opt);
    }
    throw std::logic_error("eval: malformed expression tree");
}

}  // namespace detail

/// Evaluate e at z. nullopt means pole-overflow: the point is within the
/// pole guard of a singular subterm (or an intermediate overflowed) and the
/// caller should resample.
inline std::optional<cplx> eval(const Expr& e, cplx z, const EvalOptions& opt = {}) {
    return detail::eval_node(e.node(), z, opt);
}

/// Exact derivative tree. wp nodes follow d wp(u) = wp'(u) u' and
/// d wp'(u) = 6 wp(u)^2 u' (differentiated form of (wp')^2 = 4 wp^3 - 1).
inline Expr differentiate(const Expr& e) {
    const Expr::Node& n = e.node();
    switch (n.type) {
        case NodeType::Constant:
            return Expr::constant(0.0);
        case NodeType::Variable:
            return Expr::constant(1.0);
        case NodeType::Add:
            return Expr::add(differentiate(e.child_a()), differentiate(e.child_b()));
        case NodeType::Mul: {
            Expr a = e.child_a(), b = e.child_b();
            return Expr::add(Expr::mul(differentiate(a), b), Expr::mul(a, differentiate(b)));
        }
        case NodeType::Pow: {
            Expr a = e.child_a();
            Expr da = differentiate(a);
            if (n.exponent == 1) return da;
            return Expr::mul(
                Expr::mul(Expr::constant(double(n.exponent)), Expr::pow(a, n.exponent - 1)),
                std::move(da));
        }
        case NodeType::Exp: {
            Expr a = e.child_a();
            return Expr::mul(Expr::exp(a), differentiate(a));
        }
        case NodeType::Sin: {
            Expr a = e.child_a();
            return Expr::mul(Expr::cos(a), differentiate(a));
        }
        case NodeType::Cos: {
            Expr a = e.child_a();
            return Expr::mul(Expr::mul(Expr::constant(-1.0), Expr::sin(a)), differentiate(a));
        }
        case NodeType::Polynomial: {
            if (n.coeffs.size() <= 1) return Expr::constant(0.0);
            std::vector<cplx> d(n.coeffs.size() - 1);
            for (std::size_t k = 1; k < n.coeffs.size(); ++k) {
                d[k - 1] = double(k) * n.coeffs[k];
            }
            return Expr::polynomial(std::move(d));
        }
        case NodeType::Wp: {
            Expr a = e.child_a();
            return Expr::mul(Expr::wp_prime(a), differentiate(a));
        }
        case NodeType::WpPrime: {
            Expr a = e.child_a();
            return Expr::mul(Expr::mul(Expr::constant(6.0), Expr::pow(Expr::wp(a), 2)),
                             differentiate(a));
        }
        case NodeType::Shift:
            return Expr::shift(differentiate(e.child_a()), n.value);
    }
    throw std::logic_error("differentiate: malformed expression tree");
}

/// True if the tree references the variable z.
inline bool contains_variable(const Expr::Node& n) {
    if (n.type == NodeType::Variable) return true;
    if (n.type == NodeType::Polynomial) return n.coeffs.size() > 1;
    if (n.a && contains_variable(*n.a)) return true;
    if (n.b && contains_variable(*n.b)) return true;
    return false;
}
inline bool contains_variable(const Expr& e) { return contains_variable(e.node()); }

/// True if the tree has a subterm that can blow up: wp, wp', or a negative
/// integer power. Expressions without such subterms are entire.
inline bool contains_pole_capable(const Expr::Node& n) {
    if (n.type == NodeType::Wp || n.type == NodeType::WpPrime) return true;
    if (n.type == NodeType::Pow && n.exponent < 0) return true;
    if (n.a && contains_pole_capable(*n.a)) return true;
    if (n.b && contains_pole_capable(*n.b)) return true;
    return false;
}
inline bool contains_pole_capable(const Expr& e) { return contains_pole_capable(e.node()); }

/// Structural recognition of h(z) = a z + b (constant subtrees are folded
/// by evaluating them). Returns (a, b) or nullopt.
inline std::optional<std::pair<cplx, cplx>> as_affine(const Expr& e) {
    const Expr::Node& n = e.node();
    if (!contains_variable(n)) {
        auto v = eval(e, 0.0);
        if (!v) return std::nullopt;
        return std::make_pair(cplx(0.0), *v);
    }
    switch (n.type) {
        case NodeType::Variable:
            return std::make_pair(cplx(1.0), cplx(0.0));
        case NodeType::Polynomial:
            if (n.coeffs.size() == 2) return std::make_pair(n.coeffs[1], n.coeffs[0]);
            return std::nullopt;
        case NodeType::Add: {
            auto x = as_affine(e.child_a());
            if (!x) return std::nullopt;
            auto y = as_affine(e.child_b());
            if (!y) return std::nullopt;
            return std::make_pair(x->first + y->first, x->second + y->second);
        }
        case NodeType::Mul: {
            auto x = as_affine(e.child_a());
            if (!x) return std::nullopt;
            auto y = as_affine(e.child_b());
            if (!y) return std::nullopt;
            if (x->first == cplx(0.0)) {
                return std::make_pair(x->second * y->first, x->second * y->second);
            }
            if (y->first == cplx(0.0)) {
                return std::make_pair(y->second * x->first, y->second * x->second);
            }
            return std::nullopt;
        }
        case NodeType::Pow:
            if (n.exponent == 1) return as_affine(e.child_a());
            return std::nullopt;
        case NodeType::Shift: {
            auto x = as_affine(e.child_a());
            if (!x) return std::nullopt;
            return std::make_pair(x->first, x->second + x->first * n.value);
        }
        default:
            return std::nullopt;
    }
}

/// Structural recognition of h(z) = e^{a z + b} with a != 0.
inline std::optional<std::pair<cplx, cplx>> as_exp_affine(const Expr& e) {
    const Expr::Node& n = e.node();
    if (n.type == NodeType::Exp) {
        auto x = as_affine(e.child_a());
        if (!x || x->first == cplx(0.0)) return std::nullopt;
        return x;
    }
    if (n.type == NodeType::Shift) {
        auto x = as_exp_affine(e.child_a());
        if (!x) return std::nullopt;
        return std::make_pair(x->first, x->second + x->first * n.value);
    }
    if (n.type == NodeType::Pow && n.exponent == 1) return as_exp_affine(e.child_a());
    return std::nullopt;
}

}  // namespace fermat
