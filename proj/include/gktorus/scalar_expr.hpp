// Exact symbolic scalars in one variable t: rational constants, named real
// parameters, field operations, integer powers, and exp/cos/sin of
// subexpressions. Closed under d/dt. Zero testing is structural on a
// polynomial normal form, with a Chebyshev-grid numerical fallback.
#pragma once

#include <gktorus/rational.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace gktorus {

using ParamEnv = std::map<std::string, double>;

struct DomainError : std::domain_error {
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

enum class ExprKind { Rat, Var, Param, Add, Sub, Neg, Mul, Div, Pow, Exp, Cos, Sin };

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    ExprKind kind;
    Rational value;             // Rat
    std::string name;           // Param
    std::vector<ExprPtr> kids;  // composite nodes
    int exponent = 0;           // Pow
};

namespace detail {

inline ExprPtr make_node(ExprKind kind, std::vector<ExprPtr> kids = {}) {
    auto n = std::make_shared<ExprNode>();
    n->kind = kind;
    n->kids = std::move(kids);
    return n;
}

inline ExprPtr make_rat(Rational q) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Rat;
    n->value = std::move(q);
    return n;
}

inline ExprPtr make_param(std::string name) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Param;
    n->name = std::move(name);
    return n;
}

inline ExprPtr make_pow(ExprPtr base, int e) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Pow;
    n->kids = {std::move(base)};
    n->exponent = e;
    return n;
}

inline void write_sexpr(const ExprPtr& e, std::ostream& out) {
    switch (e->kind) {
        case ExprKind::Rat:
            if (is_integer(e->value)) {
                out << to_string(e->value);
            } else {
                out << "(rat " << numerator(e->value).str() << " " << denominator(e->value).str()
                    << ")";
            }
            return;
        case ExprKind::Var:
            out << "t";
            return;
        case ExprKind::Param:
            out << e->name;
            return;
        default:
            break;
    }
    static const char* names[] = {"",    "",    "",    "add", "sub", "neg",
                                  "mul", "div", "pow", "exp", "cos", "sin"};
    out << "(" << names[static_cast<int>(e->kind)];
    for (const auto& k : e->kids) {
        out << " ";
        write_sexpr(k, out);
    }
    if (e->kind == ExprKind::Pow) {
        out << " " << e->exponent;
    }
    out << ")";
}

inline std::string sexpr_string(const ExprPtr& e) {
    std::ostringstream os;
    write_sexpr(e, os);
    return os.str();
}

inline double eval_node(const ExprPtr& e, double t, const ParamEnv& env) {
    switch (e->kind) {
        case ExprKind::Rat:
            return to_double(e->value);
        case ExprKind::Var:
            return t;
        case ExprKind::Param: {
            auto it = env.find(e->name);
            if (it == env.end()) {
                throw DomainError("unbound parameter: " + e->name);
            }
            return it->second;
        }
        case ExprKind::Add: {
            double s = 0;
            for (const auto& k : e->kids) s += eval_node(k, t, env);
            return s;
        }
        case ExprKind::Sub:
            return eval_node(e->kids[0], t, env) - eval_node(e->kids[1], t, env);
        case ExprKind::Neg:
            return -eval_node(e->kids[0], t, env);
        case ExprKind::Mul: {
            double p = 1;
            for (const auto& k : e->kids) p *= eval_node(k, t, env);
            return p;
        }
        case ExprKind::Div: {
            double den = eval_node(e->kids[1], t, env);
            if (den == 0.0) {
                throw DomainError("division by zero in " + sexpr_string(e->kids[1]));
            }
            return eval_node(e->kids[0], t, env) / den;
        }
        case ExprKind::Pow: {
            double b = eval_node(e->kids[0], t, env);
            int n = e->exponent;
            if (n < 0 && b == 0.0) {
                throw DomainError("negative power of zero in " + sexpr_string(e));
            }
            double r = 1;
            for (int i = 0; i < std::abs(n); ++i) r *= b;
            return n < 0 ? 1.0 / r : r;
        }
        case ExprKind::Exp:
            return std::exp(eval_node(e->kids[0], t, env));
        case ExprKind::Cos:
            return std::cos(eval_node(e->kids[0], t, env));
        case ExprKind::Sin:
            return std::sin(eval_node(e->kids[0], t, env));
    }
    throw std::logic_error("unreachable expression kind");
}

}  // namespace detail

class ScalarExpr;
ScalarExpr exp_of(const ScalarExpr& x);
ScalarExpr cos_of(const ScalarExpr& x);
ScalarExpr sin_of(const ScalarExpr& x);

/// Report from a symbolic-or-numerical zero test.
struct ZeroCheck {
    enum class Verdict { Structural, Numerical, Nonzero };
    Verdict verdict = Verdict::Structural;
    double max_abs = 0.0;  // largest |value| seen on the probe grid
    double worst_t = 0.0;

    bool is_zero() const { return verdict != Verdict::Nonzero; }
    std::string describe() const {
        switch (verdict) {
            case Verdict::Structural:
                return "structural zero";
            case Verdict::Numerical:
                return "numerical zero";
            default: {
                std::ostringstream os;
                os << "nonzero (|value| up to " << max_abs << " near t = " << worst_t << ")";
                return os.str();
            }
        }
    }
};

class ScalarExpr {
public:
    ScalarExpr() : node_(detail::make_rat(Rational(0))) {}
    ScalarExpr(const Rational& q) : node_(detail::make_rat(q)) {}  // NOLINT: implicit by design
    ScalarExpr(std::int64_t n) : node_(detail::make_rat(Rational(n))) {}
    explicit ScalarExpr(ExprPtr node) : node_(std::move(node)) {}

    static ScalarExpr t() { return ScalarExpr(detail::make_node(ExprKind::Var)); }
    static ScalarExpr param(const std::string& name);

    const ExprPtr& node() const { return node_; }

    ScalarExpr operator+(const ScalarExpr& o) const {
        return ScalarExpr(detail::make_node(ExprKind::Add, {node_, o.node_}));
    }
    ScalarExpr operator-(const ScalarExpr& o) const {
        return ScalarExpr(detail::make_node(ExprKind::Sub, {node_, o.node_}));
    }
    ScalarExpr operator-() const { return ScalarExpr(detail::make_node(ExprKind::Neg, {node_})); }
    ScalarExpr operator*(const ScalarExpr& o) const {
        return ScalarExpr(detail::make_node(ExprKind::Mul, {node_, o.node_}));
    }
    ScalarExpr operator/(const ScalarExpr& o) const {
        return ScalarExpr(detail::make_node(ExprKind::Div, {node_, o.node_}));
    }
    ScalarExpr pow(int e) const { return ScalarExpr(detail::make_pow(node_, e)); }

    ScalarExpr& operator+=(const ScalarExpr& o) { return *this = *this + o; }
    ScalarExpr& operator-=(const ScalarExpr& o) { return *this = *this - o; }
    ScalarExpr& operator*=(const ScalarExpr& o) { return *this = *this * o; }

    /// Structural equality of normal forms, not pointwise equality of values.
    bool operator==(const ScalarExpr& o) const { return (*this - o).is_structural_zero(); }
    bool operator!=(const ScalarExpr& o) const { return !(*this == o); }

    /// Symbolic d/dt; exact, no truncation.
    ScalarExpr derivative() const;

    double eval(double t, const ParamEnv& env = {}) const {
        return detail::eval_node(node_, t, env);
    }

    std::pair<double, double> eval_with_derivative(double t, const ParamEnv& env = {}) const {
        return {eval(t, env), derivative().eval(t, env)};
    }

    /// Canonical form: expanded polynomial over transcendental atoms.
    ScalarExpr normalized() const;

    /// True when the normal form is the zero polynomial.
    bool is_structural_zero() const;

    ZeroCheck zero_check(double lo = 0.0, double hi = 1.0, const ParamEnv& env = {},
                         double tol = 1e-12) const;

    std::string to_sexpr() const { return detail::sexpr_string(node_); }
    static ScalarExpr parse_sexpr(const std::string& text);

private:
    ExprPtr node_;
};

inline ScalarExpr exp_of(const ScalarExpr& x) {
    return ScalarExpr(detail::make_node(ExprKind::Exp, {x.node()}));
}
inline ScalarExpr cos_of(const ScalarExpr& x) {
    return ScalarExpr(detail::make_node(ExprKind::Cos, {x.node()}));
}
inline ScalarExpr sin_of(const ScalarExpr& x) {
    return ScalarExpr(detail::make_node(ExprKind::Sin, {x.node()}));
}

namespace detail {

// ---- polynomial normal form ------------------------------------------------

enum class AtomKind { Var, Param, Exp, Cos, Sin, Inv };

struct Atom {
    AtomKind kind;
    std::string key;  // canonical serialization, used for ordering
    ExprPtr node;     // rebuilt expression for this atom

    bool operator<(const Atom& o) const { return key < o.key; }
    bool operator==(const Atom& o) const { return key == o.key; }
};

using Monomial = std::vector<std::pair<Atom, int>>;  // sorted by atom key, exponents nonzero

struct MonomialLess {
    bool operator()(const Monomial& a, const Monomial& b) const {
        std::size_t n = std::min(a.size(), b.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (a[i].first.key != b[i].first.key) return a[i].first.key < b[i].first.key;
            if (a[i].second != b[i].second) return a[i].second < b[i].second;
        }
        return a.size() < b.size();
    }
};

using Poly = std::map<Monomial, Rational, MonomialLess>;

inline Poly poly_const(const Rational& c) {
    Poly p;
    if (c != 0) p[Monomial{}] = c;
    return p;
}

inline void poly_add_term(Poly& p, const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto it = p.find(m);
    if (it == p.end()) {
        p.emplace(m, c);
    } else {
        it->second += c;
        if (it->second == 0) p.erase(it);
    }
}

inline Poly poly_add(const Poly& a, const Poly& b) {
    Poly r = a;
    for (const auto& [m, c] : b) poly_add_term(r, m, c);
    return r;
}

inline Poly poly_neg(const Poly& a) {
    Poly r;
    for (const auto& [m, c] : a) r[m] = -c;
    return r;
}

inline Poly poly_scale(const Poly& a, const Rational& s) {
    Poly r;
    if (s == 0) return r;
    for (const auto& [m, c] : a) r[m] = c * s;
    return r;
}

inline bool poly_is_const(const Poly& p) {
    return p.empty() || (p.size() == 1 && p.begin()->first.empty());
}

inline Rational poly_const_value(const Poly& p) {
    return p.empty() ? Rational(0) : p.begin()->second;
}

inline ExprPtr rebuild(const Poly& p);
inline Poly canonical_monomial(Rational coeff, std::vector<std::pair<Atom, int>> factors);
inline Poly normalize_node(const ExprPtr& e);
inline Poly poly_invert(const Poly& p);

inline Poly poly_mul(const Poly& a, const Poly& b) {
    Poly r;
    for (const auto& [ma, ca] : a) {
        for (const auto& [mb, cb] : b) {
            std::vector<std::pair<Atom, int>> factors;
            factors.reserve(ma.size() + mb.size());
            factors.insert(factors.end(), ma.begin(), ma.end());
            factors.insert(factors.end(), mb.begin(), mb.end());
            Poly term = canonical_monomial(ca * cb, std::move(factors));
            r = poly_add(r, term);
        }
    }
    return r;
}

inline Poly poly_pow(const Poly& a, int n) {
    Poly r = poly_const(Rational(1));
    for (int i = 0; i < n; ++i) r = poly_mul(r, a);
    return r;
}

inline Atom var_atom() {
    return Atom{AtomKind::Var, "t", make_node(ExprKind::Var)};
}

inline Atom param_atom(const std::string& name) {
    return Atom{AtomKind::Param, name, make_param(name)};
}

// exp(arg) folds exp(0) = 1; the argument polynomial is carried canonically.
inline std::pair<Rational, std::optional<Atom>> exp_atom(const Poly& arg) {
    if (arg.empty()) return {Rational(1), std::nullopt};
    ExprPtr a = rebuild(arg);
    ExprPtr n = make_node(ExprKind::Exp, {a});
    return {Rational(1), Atom{AtomKind::Exp, sexpr_string(n), n}};
}

// Arguments of cos/sin are normalized to a nonnegative leading coefficient.
inline bool leading_negative(const Poly& p) {
    return !p.empty() && p.begin()->second < 0;
}

inline std::pair<Rational, std::optional<Atom>> cos_atom(Poly arg) {
    if (arg.empty()) return {Rational(1), std::nullopt};
    if (leading_negative(arg)) arg = poly_neg(arg);
    ExprPtr a = rebuild(arg);
    ExprPtr n = make_node(ExprKind::Cos, {a});
    return {Rational(1), Atom{AtomKind::Cos, sexpr_string(n), n}};
}

inline std::pair<Rational, std::optional<Atom>> sin_atom(Poly arg) {
    if (arg.empty()) return {Rational(0), std::nullopt};
    Rational sign(1);
    if (leading_negative(arg)) {
        arg = poly_neg(arg);
        sign = -1;
    }
    ExprPtr a = rebuild(arg);
    ExprPtr n = make_node(ExprKind::Sin, {a});
    return {sign, Atom{AtomKind::Sin, sexpr_string(n), n}};
}

inline Atom inv_atom(const Poly& payload) {
    ExprPtr p = rebuild(payload);
    ExprPtr n = make_node(ExprKind::Div, {make_rat(Rational(1)), p});
    return Atom{AtomKind::Inv, sexpr_string(n), n};
}

inline ExprPtr cos_node_arg(const Atom& a) { return a.node->kids[0]; }

// Builds the canonical polynomial for coeff * prod(factors). Merges exp
// factors by adding arguments, cancels matched exponents, and rewrites
// cos(u)^2 -> 1 - sin(u)^2 so Pythagorean combinations collapse.
inline Poly canonical_monomial(Rational coeff, std::vector<std::pair<Atom, int>> factors) {
    if (coeff == 0) return Poly{};
    std::map<std::string, std::pair<Atom, long long>> merged;
    Poly exp_arg;  // accumulated argument of a single exp factor
    bool have_exp = false;
    for (auto& [atom, e] : factors) {
        if (e == 0) continue;
        if (atom.kind == AtomKind::Exp) {
            Poly arg = normalize_node(atom.node->kids[0]);
            exp_arg = poly_add(exp_arg, poly_scale(arg, Rational(e)));
            have_exp = true;
            continue;
        }
        auto it = merged.find(atom.key);
        if (it == merged.end()) {
            merged.emplace(atom.key, std::make_pair(atom, static_cast<long long>(e)));
        } else {
            it->second.second += e;
        }
    }
    if (have_exp) {
        auto [mult, at] = exp_atom(exp_arg);
        coeff *= mult;
        if (coeff == 0) return Poly{};
        if (at) merged.emplace(at->key, std::make_pair(*at, 1LL));
    }

    // Locate a cos factor with exponent >= 2 and rewrite it.
    for (const auto& [key, pair_] : merged) {
        const Atom& atom = pair_.first;
        long long e = pair_.second;
        if (atom.kind == AtomKind::Cos && e >= 2) {
            long long half = e / 2;
            long long rest = e % 2;
            std::vector<std::pair<Atom, int>> remaining;
            for (const auto& [k2, p2] : merged) {
                if (p2.second == 0) continue;
                if (k2 == key) {
                    if (rest) remaining.emplace_back(p2.first, static_cast<int>(rest));
                } else {
                    remaining.emplace_back(p2.first, static_cast<int>(p2.second));
                }
            }
            Poly base = canonical_monomial(coeff, std::move(remaining));
            Poly sin_sq;
            {
                Poly arg = normalize_node(cos_node_arg(atom));
                auto [mult, at] = sin_atom(arg);
                if (at) {
                    Monomial m{{*at, 2}};
                    sin_sq[m] = mult * mult;
                }
            }
            Poly one_minus = poly_add(poly_const(Rational(1)), poly_neg(sin_sq));
            return poly_mul(base, poly_pow(one_minus, static_cast<int>(half)));
        }
    }

    Monomial m;
    for (const auto& [key, p] : merged) {
        if (p.second == 0) continue;
        m.emplace_back(p.first, static_cast<int>(p.second));
    }
    Poly r;
    r[std::move(m)] = coeff;
    return r;
}

inline Poly normalize_node_uncached(const ExprPtr& e) {
    switch (e->kind) {
        case ExprKind::Rat:
            return poly_const(e->value);
        case ExprKind::Var: {
            Monomial m{{var_atom(), 1}};
            Poly p;
            p[m] = 1;
            return p;
        }
        case ExprKind::Param: {
            Monomial m{{param_atom(e->name), 1}};
            Poly p;
            p[m] = 1;
            return p;
        }
        case ExprKind::Add: {
            Poly r;
            for (const auto& k : e->kids) r = poly_add(r, normalize_node(k));
            return r;
        }
        case ExprKind::Sub:
            return poly_add(normalize_node(e->kids[0]), poly_neg(normalize_node(e->kids[1])));
        case ExprKind::Neg:
            return poly_neg(normalize_node(e->kids[0]));
        case ExprKind::Mul: {
            Poly r = poly_const(Rational(1));
            for (const auto& k : e->kids) r = poly_mul(r, normalize_node(k));
            return r;
        }
        case ExprKind::Div:
            return poly_mul(normalize_node(e->kids[0]), poly_invert(normalize_node(e->kids[1])));
        case ExprKind::Pow: {
            int n = e->exponent;
            Poly b = normalize_node(e->kids[0]);
            if (n >= 0) return poly_pow(b, n);
            return poly_pow(poly_invert(b), -n);
        }
        case ExprKind::Exp: {
            Poly arg = normalize_node(e->kids[0]);
            auto [mult, at] = exp_atom(arg);
            if (!at) return poly_const(mult);
            Monomial m{{*at, 1}};
            Poly p;
            p[m] = mult;
            return p;
        }
        case ExprKind::Cos: {
            auto [mult, at] = cos_atom(normalize_node(e->kids[0]));
            if (!at) return poly_const(mult);
            Monomial m{{*at, 1}};
            Poly p;
            p[m] = mult;
            return p;
        }
        case ExprKind::Sin: {
            auto [mult, at] = sin_atom(normalize_node(e->kids[0]));
            if (!at) return poly_const(mult);
            Monomial m{{*at, 1}};
            Poly p;
            p[m] = mult;
            return p;
        }
    }
    throw std::logic_error("unreachable expression kind");
}

// Nodes are immutable and shared, so normal forms are cached by node
// identity. The cached entry pins the node to keep its address unique.
inline Poly normalize_node(const ExprPtr& e) {
    thread_local std::unordered_map<const ExprNode*, std::pair<ExprPtr, Poly>> cache;
    auto it = cache.find(e.get());
    if (it != cache.end()) return it->second.second;
    Poly p = normalize_node_uncached(e);
    if (cache.size() >= (std::size_t{1} << 20)) cache.clear();
    cache.emplace(e.get(), std::make_pair(e, p));
    return p;
}

// 1/p. Exact for constants and single monomials (exp factors invert to
// exp(-arg)); multi-term denominators become an opaque inverse atom with a
// monic canonical payload.
inline Poly poly_invert(const Poly& p) {
    if (p.empty()) {
        throw DomainError("division by symbolically zero expression");
    }
    if (poly_is_const(p)) {
        return poly_const(Rational(1) / poly_const_value(p));
    }
    if (p.size() == 1) {
        const Monomial& m = p.begin()->first;
        const Rational& c = p.begin()->second;
        std::vector<std::pair<Atom, int>> inverted;
        for (const auto& [atom, e] : m) {
            if (atom.kind == AtomKind::Inv) {
                // 1 / inv(P)^e = P^e; recover the payload and re-expand
                Poly payload = normalize_node(atom.node->kids[1]);
                Poly r = e >= 0 ? poly_pow(payload, e) : poly_pow(poly_invert(payload), -e);
                Monomial rest;
                for (const auto& [a2, e2] : m) {
                    if (!(a2 == atom)) rest.emplace_back(a2, e2);
                }
                Poly rest_inv = poly_invert(canonical_monomial(c, std::move(rest)));
                return poly_mul(r, rest_inv);
            }
            inverted.emplace_back(atom, -e);
        }
        return canonical_monomial(Rational(1) / c, std::move(inverted));
    }
    Rational lead = p.begin()->second;
    Poly monic = poly_scale(p, Rational(1) / lead);
    Atom at = inv_atom(monic);
    Monomial m{{at, 1}};
    Poly r;
    r[m] = Rational(1) / lead;
    return r;
}

inline ExprPtr rebuild_monomial(const Monomial& m, const Rational& c) {
    std::vector<ExprPtr> factors;
    if (c != 1 || m.empty()) factors.push_back(make_rat(c));
    for (const auto& [atom, e] : m) {
        if (e == 1) {
            factors.push_back(atom.node);
        } else {
            factors.push_back(make_pow(atom.node, e));
        }
    }
    if (factors.size() == 1) return factors[0];
    return make_node(ExprKind::Mul, std::move(factors));
}

inline ExprPtr rebuild(const Poly& p) {
    if (p.empty()) return make_rat(Rational(0));
    std::vector<ExprPtr> terms;
    for (const auto& [m, c] : p) terms.push_back(rebuild_monomial(m, c));
    if (terms.size() == 1) return terms[0];
    return make_node(ExprKind::Add, std::move(terms));
}

// ---- differentiation -------------------------------------------------------

inline ExprPtr derivative_node(const ExprPtr& e) {
    switch (e->kind) {
        case ExprKind::Rat:
        case ExprKind::Param:
            return make_rat(Rational(0));
        case ExprKind::Var:
            return make_rat(Rational(1));
        case ExprKind::Add:
        case ExprKind::Sub: {
            std::vector<ExprPtr> kids;
            for (const auto& k : e->kids) kids.push_back(derivative_node(k));
            return make_node(e->kind, std::move(kids));
        }
        case ExprKind::Neg:
            return make_node(ExprKind::Neg, {derivative_node(e->kids[0])});
        case ExprKind::Mul: {
            std::vector<ExprPtr> terms;
            for (std::size_t i = 0; i < e->kids.size(); ++i) {
                std::vector<ExprPtr> factors;
                for (std::size_t j = 0; j < e->kids.size(); ++j) {
                    factors.push_back(j == i ? derivative_node(e->kids[j]) : e->kids[j]);
                }
                terms.push_back(make_node(ExprKind::Mul, std::move(factors)));
            }
            return make_node(ExprKind::Add, std::move(terms));
        }
        case ExprKind::Div: {
            const ExprPtr& a = e->kids[0];
            const ExprPtr& b = e->kids[1];
            ExprPtr num = make_node(
                ExprKind::Sub, {make_node(ExprKind::Mul, {derivative_node(a), b}),
                                make_node(ExprKind::Mul, {a, derivative_node(b)})});
            return make_node(ExprKind::Div, {num, make_pow(b, 2)});
        }
        case ExprKind::Pow: {
            int n = e->exponent;
            if (n == 0) return make_rat(Rational(0));
            ExprPtr inner = make_pow(e->kids[0], n - 1);
            return make_node(ExprKind::Mul,
                             {make_rat(Rational(n)), inner, derivative_node(e->kids[0])});
        }
        case ExprKind::Exp:
            return make_node(ExprKind::Mul, {derivative_node(e->kids[0]), e});
        case ExprKind::Cos:
            return make_node(ExprKind::Neg,
                             {make_node(ExprKind::Mul, {derivative_node(e->kids[0]),
                                                        make_node(ExprKind::Sin, {e->kids[0]})})});
        case ExprKind::Sin:
            return make_node(ExprKind::Mul, {derivative_node(e->kids[0]),
                                             make_node(ExprKind::Cos, {e->kids[0]})});
    }
    throw std::logic_error("unreachable expression kind");
}

// ---- s-expression parsing ----------------------------------------------------

struct SexprParser {
    std::string text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    std::string next_token() {
        skip_ws();
        if (pos >= text.size()) throw std::invalid_argument("unexpected end of s-expression");
        char c = text[pos];
        if (c == '(' || c == ')') {
            ++pos;
            return std::string(1, c);
        }
        std::size_t start = pos;
        while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
               text[pos] != '(' && text[pos] != ')') {
            ++pos;
        }
        return text.substr(start, pos - start);
    }

    std::string peek_token() {
        std::size_t saved = pos;
        std::string tok = next_token();
        pos = saved;
        return tok;
    }

    static bool is_integer_token(const std::string& s) {
        if (s.empty()) return false;
        std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (i == s.size()) return false;
        for (; i < s.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
        }
        return true;
    }

    static bool is_symbol_token(const std::string& s) {
        if (s.empty()) return false;
        if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
        for (char c : s) {
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
        }
        return true;
    }

    ExprPtr parse_expr() {
        std::string tok = next_token();
        if (tok == ")") throw std::invalid_argument("unexpected ')' in s-expression");
        if (tok != "(") {
            if (is_integer_token(tok)) return make_rat(Rational(BigInt(tok)));
            if (tok == "t") return make_node(ExprKind::Var);
            if (is_symbol_token(tok)) return make_param(tok);
            throw std::invalid_argument("bad token in s-expression: " + tok);
        }
        std::string head = next_token();
        if (head == "rat") {
            std::string n = next_token();
            std::string d = next_token();
            if (!is_integer_token(n) || !is_integer_token(d)) {
                throw std::invalid_argument("rat expects two integers");
            }
            expect_close();
            BigInt den(d);
            if (den == 0) throw std::invalid_argument("rat with zero denominator");
            return make_rat(Rational(BigInt(n), den));
        }
        if (head == "pow") {
            ExprPtr base = parse_expr();
            std::string etok = next_token();
            if (!is_integer_token(etok)) {
                throw std::invalid_argument("pow expects an integer exponent");
            }
            expect_close();
            return make_pow(base, std::stoi(etok));
        }
        ExprKind kind;
        std::size_t min_args = 1, max_args = SIZE_MAX;
        if (head == "add") {
            kind = ExprKind::Add;
            min_args = 2;
        } else if (head == "sub") {
            kind = ExprKind::Sub;
            min_args = max_args = 2;
        } else if (head == "neg") {
            kind = ExprKind::Neg;
            min_args = max_args = 1;
        } else if (head == "mul") {
            kind = ExprKind::Mul;
            min_args = 2;
        } else if (head == "div") {
            kind = ExprKind::Div;
            min_args = max_args = 2;
        } else if (head == "exp") {
            kind = ExprKind::Exp;
            min_args = max_args = 1;
        } else if (head == "cos") {
            kind = ExprKind::Cos;
            min_args = max_args = 1;
        } else if (head == "sin") {
            kind = ExprKind::Sin;
            min_args = max_args = 1;
        } else {
            throw std::invalid_argument("unknown s-expression head: " + head);
        }
        std::vector<ExprPtr> kids;
        while (peek_token() != ")") kids.push_back(parse_expr());
        next_token();  // consume ')'
        if (kids.size() < min_args || kids.size() > max_args) {
            throw std::invalid_argument("wrong arity for " + head);
        }
        return make_node(kind, std::move(kids));
    }

    void expect_close() {
        if (next_token() != ")") throw std::invalid_argument("expected ')'");
    }
};

}  // namespace detail

inline ScalarExpr ScalarExpr::param(const std::string& name) {
    if (!detail::SexprParser::is_symbol_token(name) || name == "t") {
        throw std::invalid_argument("bad parameter name: " + name);
    }
    static const char* reserved[] = {"add", "sub", "neg", "mul", "div",
                                     "pow", "exp", "cos", "sin", "rat"};
    for (const char* r : reserved) {
        if (name == r) throw std::invalid_argument("reserved parameter name: " + name);
    }
    return ScalarExpr(detail::make_param(name));
}

inline ScalarExpr ScalarExpr::derivative() const {
    return ScalarExpr(detail::derivative_node(node_));
}

inline ScalarExpr ScalarExpr::normalized() const {
    return ScalarExpr(detail::rebuild(detail::normalize_node(node_)));
}

inline bool ScalarExpr::is_structural_zero() const {
    return detail::normalize_node(node_).empty();
}

inline ZeroCheck ScalarExpr::zero_check(double lo, double hi, const ParamEnv& env,
                                        double tol) const {
    ZeroCheck r;
    detail::Poly p = detail::normalize_node(node_);
    if (p.empty()) {
        r.verdict = ZeroCheck::Verdict::Structural;
        return r;
    }
    ExprPtr probe = detail::rebuild(p);
    constexpr int kNodes = 64;
    const double pi = std::acos(-1.0);
    double max_abs = 0.0, worst = lo;
    for (int j = 0; j < kNodes; ++j) {
        // Chebyshev-Lobatto nodes, endpoints included
        double x = lo + (hi - lo) * 0.5 * (1.0 - std::cos(pi * j / (kNodes - 1)));
        double v;
        try {
            v = detail::eval_node(probe, x, env);
        } catch (const DomainError&) {
            r.verdict = ZeroCheck::Verdict::Nonzero;
            r.max_abs = std::numeric_limits<double>::infinity();
            r.worst_t = x;
            return r;
        }
        if (std::fabs(v) > max_abs) {
            max_abs = std::fabs(v);
            worst = x;
        }
    }
    r.max_abs = max_abs;
    r.worst_t = worst;
    r.verdict = max_abs <= tol ? ZeroCheck::Verdict::Numerical : ZeroCheck::Verdict::Nonzero;
    return r;
}

inline ScalarExpr ScalarExpr::parse_sexpr(const std::string& text) {
    detail::SexprParser p{text};
    ExprPtr e = p.parse_expr();
    p.skip_ws();
    if (p.pos != text.size()) {
        throw std::invalid_argument("trailing characters after s-expression");
    }
    return ScalarExpr(e);
}

}  // namespace gktorus
