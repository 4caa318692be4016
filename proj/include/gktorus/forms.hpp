// Differential forms on a mapping-torus chart with coordinates
// (x1, x2, x3, y1..y_fiber, t). Coefficients depend on t only, so the
// exterior derivative reduces to one symbolic t-derivative per term.
#pragma once

#include <gktorus/matrix.hpp>
#include <gktorus/scalar_expr.hpp>

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace gktorus {

/// Coordinate chart: ordered labels, time slot always last.
class ChartSpace {
public:
    static ChartSpace mapping_torus(std::size_t fiber_dim) {
        std::vector<std::string> labels = {"x1", "x2", "x3"};
        for (std::size_t i = 1; i <= fiber_dim; ++i) labels.push_back("y" + std::to_string(i));
        labels.push_back("t");
        return ChartSpace(std::move(labels));
    }

    std::size_t dim() const { return labels_->size(); }
    std::size_t time_slot() const { return dim() - 1; }
    const std::string& label(std::size_t slot) const { return (*labels_)[slot]; }

    std::size_t slot(const std::string& label) const {
        for (std::size_t i = 0; i < labels_->size(); ++i) {
            if ((*labels_)[i] == label) return i;
        }
        throw std::invalid_argument("unknown coordinate label: " + label);
    }

    bool operator==(const ChartSpace& o) const {
        return labels_ == o.labels_ || *labels_ == *o.labels_;
    }
    bool operator!=(const ChartSpace& o) const { return !(*this == o); }

private:
    explicit ChartSpace(std::vector<std::string> labels)
        : labels_(std::make_shared<const std::vector<std::string>>(std::move(labels))) {}
    std::shared_ptr<const std::vector<std::string>> labels_;
};

/// Complex scalar as a pair of real symbolic parts.
struct ComplexExpr {
    ScalarExpr re;
    ScalarExpr im;

    ComplexExpr() = default;
    ComplexExpr(ScalarExpr r) : re(std::move(r)) {}  // NOLINT: implicit by design
    ComplexExpr(ScalarExpr r, ScalarExpr i) : re(std::move(r)), im(std::move(i)) {}

    static ComplexExpr unit_i() { return {ScalarExpr(0), ScalarExpr(1)}; }

    ComplexExpr operator+(const ComplexExpr& o) const { return {re + o.re, im + o.im}; }
    ComplexExpr operator-(const ComplexExpr& o) const { return {re - o.re, im - o.im}; }
    ComplexExpr operator-() const { return {-re, -im}; }
    ComplexExpr operator*(const ComplexExpr& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    ComplexExpr conj() const { return {re, -im}; }
    ComplexExpr derivative() const { return {re.derivative(), im.derivative()}; }

    bool is_structural_zero() const {
        return re.is_structural_zero() && im.is_structural_zero();
    }

    ZeroCheck zero_check(double lo, double hi, const ParamEnv& env, double tol) const {
        ZeroCheck a = re.zero_check(lo, hi, env, tol);
        ZeroCheck b = im.zero_check(lo, hi, env, tol);
        ZeroCheck worse = a.max_abs >= b.max_abs ? a : b;
        if (a.is_zero() && b.is_zero()) {
            worse.verdict = (a.verdict == ZeroCheck::Verdict::Structural &&
                             b.verdict == ZeroCheck::Verdict::Structural)
                                ? ZeroCheck::Verdict::Structural
                                : ZeroCheck::Verdict::Numerical;
        } else {
            worse.verdict = ZeroCheck::Verdict::Nonzero;
        }
        return worse;
    }
};

namespace detail {

inline ZeroCheck coeff_zero_check(const ScalarExpr& c, double lo, double hi, const ParamEnv& env,
                                  double tol) {
    return c.zero_check(lo, hi, env, tol);
}
inline ZeroCheck coeff_zero_check(const ComplexExpr& c, double lo, double hi, const ParamEnv& env,
                                  double tol) {
    return c.zero_check(lo, hi, env, tol);
}
inline bool coeff_structural_zero(const ScalarExpr& c) { return c.is_structural_zero(); }
inline bool coeff_structural_zero(const ComplexExpr& c) { return c.is_structural_zero(); }
inline ScalarExpr coeff_normalized(const ScalarExpr& c) { return c.normalized(); }
inline ComplexExpr coeff_normalized(const ComplexExpr& c) {
    return {c.re.normalized(), c.im.normalized()};
}

}  // namespace detail

using Index = std::uint32_t;  // bitmask over coordinate slots

inline int form_degree_of(Index idx) { return std::popcount(idx); }

/// Sign of moving every factor of b past the factors of a (graded product).
inline int koszul_sign(Index a, Index b) {
    int crossings = 0;
    for (Index rest = b; rest != 0; rest &= rest - 1) {
        int j = std::countr_zero(rest);
        crossings += std::popcount(a >> (j + 1));
    }
    return crossings % 2 == 0 ? 1 : -1;
}

/// Aggregated zero test over all coefficients of a form.
struct FormZeroCheck {
    bool zero = true;
    bool structural = true;
    double max_abs = 0.0;
    double worst_t = 0.0;
    std::string worst_term;

    std::string describe() const {
        if (zero) return structural ? "structural zero" : "numerical zero";
        std::ostringstream os;
        os << "nonzero (|coeff| up to " << max_abs << " on " << worst_term << " near t = "
           << worst_t << ")";
        return os.str();
    }
};

template <class C>
class Form {
public:
    Form(ChartSpace space, int degree) : space_(std::move(space)), degree_(degree) {
        if (degree < 0 || degree > static_cast<int>(space_.dim())) {
            throw std::invalid_argument("form degree out of range");
        }
    }

    /// Monomial builder; slots in any order, sign by sorting parity,
    /// repeated slot gives the zero form.
    static Form monomial(const ChartSpace& space, std::vector<std::size_t> slots, C coeff) {
        Form f(space, static_cast<int>(slots.size()));
        int sign = 1;
        for (std::size_t i = 1; i < slots.size(); ++i) {
            for (std::size_t j = i; j > 0 && slots[j - 1] > slots[j]; --j) {
                std::swap(slots[j - 1], slots[j]);
                sign = -sign;
            }
        }
        Index idx = 0;
        for (std::size_t s : slots) {
            if (s >= space.dim()) throw std::invalid_argument("slot out of range");
            Index bit = Index{1} << s;
            if (idx & bit) return f;  // repeated factor
            idx |= bit;
        }
        C signed_coeff = sign > 0 ? std::move(coeff) : C(-coeff);
        f.add_term(idx, std::move(signed_coeff));
        return f;
    }

    static Form monomial_labels(const ChartSpace& space, std::initializer_list<const char*> labels,
                                C coeff) {
        std::vector<std::size_t> slots;
        for (const char* l : labels) slots.push_back(space.slot(l));
        return monomial(space, std::move(slots), std::move(coeff));
    }

    const ChartSpace& space() const { return space_; }
    int degree() const { return degree_; }
    const std::map<Index, C>& terms() const { return terms_; }

    C coefficient(Index idx) const {
        auto it = terms_.find(idx);
        return it == terms_.end() ? C() : it->second;
    }

    void add_term(Index idx, C coeff) {
        if (form_degree_of(idx) != degree_) {
            throw std::invalid_argument("term degree does not match form degree");
        }
        auto it = terms_.find(idx);
        if (it == terms_.end()) {
            terms_.emplace(idx, std::move(coeff));
        } else {
            it->second = it->second + coeff;
        }
    }

    Form operator+(const Form& o) const {
        require_compatible(o);
        Form r = *this;
        for (const auto& [idx, c] : o.terms_) r.add_term(idx, c);
        return r;
    }

    Form operator-(const Form& o) const {
        require_compatible(o);
        Form r = *this;
        for (const auto& [idx, c] : o.terms_) r.add_term(idx, -c);
        return r;
    }

    Form operator-() const {
        Form r(space_, degree_);
        for (const auto& [idx, c] : terms_) r.terms_.emplace(idx, -c);
        return r;
    }

    Form scaled(const C& s) const {
        Form r(space_, degree_);
        for (const auto& [idx, c] : terms_) r.terms_.emplace(idx, c * s);
        return r;
    }

    /// Drops coefficients that normalize to the zero polynomial and rebuilds
    /// the survivors from their normal forms, collapsing accumulated sums.
    Form pruned() const {
        Form r(space_, degree_);
        for (const auto& [idx, c] : terms_) {
            if (!detail::coeff_structural_zero(c)) {
                r.terms_.emplace(idx, detail::coeff_normalized(c));
            }
        }
        return r;
    }

    FormZeroCheck zero_report(double lo, double hi, const ParamEnv& env = {},
                              double tol = 1e-12) const {
        FormZeroCheck r;
        for (const auto& [idx, c] : terms_) {
            ZeroCheck z = detail::coeff_zero_check(c, lo, hi, env, tol);
            if (z.verdict != ZeroCheck::Verdict::Structural) r.structural = false;
            if (z.max_abs >= r.max_abs) {
                r.max_abs = z.max_abs;
                r.worst_t = z.worst_t;
                r.worst_term = term_label(idx);
            }
            if (!z.is_zero()) r.zero = false;
        }
        return r;
    }

    std::string term_label(Index idx) const {
        if (idx == 0) return "1";
        std::string s;
        for (std::size_t i = 0; i < space_.dim(); ++i) {
            if (idx & (Index{1} << i)) {
                if (!s.empty()) s += "^";
                s += "d" + space_.label(i);
            }
        }
        return s;
    }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string s;
        for (const auto& [idx, c] : terms_) {
            if (!s.empty()) s += " + ";
            s += "(" + coeff_string(c) + ") " + term_label(idx);
        }
        return s;
    }

private:
    void require_compatible(const Form& o) const {
        if (space_ != o.space_ || degree_ != o.degree_) {
            throw std::invalid_argument("incompatible forms");
        }
    }

    static std::string coeff_string(const ScalarExpr& c) { return c.to_sexpr(); }
    static std::string coeff_string(const ComplexExpr& c) {
        return c.re.to_sexpr() + " + i*" + c.im.to_sexpr();
    }

    ChartSpace space_;
    int degree_;
    std::map<Index, C> terms_;
};

using RealForm = Form<ScalarExpr>;
using ComplexForm = Form<ComplexExpr>;

template <class C>
Form<C> wedge(const Form<C>& a, const Form<C>& b) {
    if (a.space() != b.space()) throw std::invalid_argument("wedge on different charts");
    Form<C> r(a.space(), a.degree() + b.degree());
    for (const auto& [ia, ca] : a.terms()) {
        for (const auto& [ib, cb] : b.terms()) {
            if (ia & ib) continue;
            C prod = ca * cb;
            if (koszul_sign(ia, ib) < 0) prod = -prod;
            r.add_term(ia | ib, std::move(prod));
        }
    }
    return r;
}

/// d(f(t) dx^I) = f'(t) dt wedge dx^I; terms already containing dt die.
template <class C>
Form<C> exterior_d(const Form<C>& a) {
    Form<C> r(a.space(), a.degree() + 1);
    Index t_bit = Index{1} << a.space().time_slot();
    for (const auto& [idx, c] : a.terms()) {
        if (idx & t_bit) continue;
        C dc = c.derivative();
        if (a.degree() % 2 != 0) dc = -dc;
        r.add_term(idx | t_bit, std::move(dc));
    }
    return r;
}

/// Substitution dx^mu -> sum_nu S(mu,nu) dx^nu over the full chart,
/// multiplicative over wedge factors. Realizes the pullback of a form under
/// the linear operator whose row mu lists the image of dx^mu.
template <class C, class E>
Form<C> substitute(const Form<C>& a, const Matrix<E>& s) {
    if (s.rows() != a.space().dim() || s.cols() != a.space().dim()) {
        throw std::invalid_argument("substitution matrix must match chart dimension");
    }
    Form<C> r(a.space(), a.degree());
    for (const auto& [idx, c] : a.terms()) {
        Form<C> factor_product(a.space(), 0);
        factor_product.add_term(0, c);
        for (Index rest = idx; rest != 0; rest &= rest - 1) {
            std::size_t mu = static_cast<std::size_t>(std::countr_zero(rest));
            Form<C> line(a.space(), 1);
            for (std::size_t nu = 0; nu < a.space().dim(); ++nu) {
                if (s(mu, nu) == E(0)) continue;
                line.add_term(Index{1} << nu, C(ScalarExpr(s(mu, nu))));
            }
            factor_product = wedge(factor_product, line);
        }
        for (const auto& [i2, c2] : factor_product.terms()) r.add_term(i2, c2);
    }
    return r.pruned();
}

template <class C>
Form<C> substitute(const Form<C>& a, const Matrix<ScalarExpr>& s) {
    if (s.rows() != a.space().dim() || s.cols() != a.space().dim()) {
        throw std::invalid_argument("substitution matrix must match chart dimension");
    }
    Form<C> r(a.space(), a.degree());
    for (const auto& [idx, c] : a.terms()) {
        Form<C> factor_product(a.space(), 0);
        factor_product.add_term(0, c);
        for (Index rest = idx; rest != 0; rest &= rest - 1) {
            std::size_t mu = static_cast<std::size_t>(std::countr_zero(rest));
            Form<C> line(a.space(), 1);
            for (std::size_t nu = 0; nu < a.space().dim(); ++nu) {
                if (s(mu, nu).is_structural_zero()) continue;
                line.add_term(Index{1} << nu, C(s(mu, nu)));
            }
            factor_product = wedge(factor_product, line);
        }
        for (const auto& [i2, c2] : factor_product.terms()) r.add_term(i2, c2);
    }
    return r.pruned();
}

/// Pullback under a rational linear map of the spatial block (all slots but
/// t); the t direction is untouched.
template <class C>
Form<C> pullback_linear(const Form<C>& a, const QMatrix& m) {
    std::size_t spatial = a.space().dim() - 1;
    if (m.rows() != spatial || m.cols() != spatial) {
        throw std::invalid_argument("pullback matrix must match the spatial block");
    }
    Matrix<Rational> full(a.space().dim(), a.space().dim(), Rational(0));
    for (std::size_t i = 0; i < spatial; ++i) {
        for (std::size_t j = 0; j < spatial; ++j) full(i, j) = m(i, j);
    }
    full(spatial, spatial) = 1;
    return substitute(a, full);
}

/// Vector field with t-dependent coefficients over the chart slots.
struct ChartVector {
    ChartSpace space;
    std::vector<ScalarExpr> components;

    ChartVector(ChartSpace s, std::vector<ScalarExpr> comps)
        : space(std::move(s)), components(std::move(comps)) {
        if (components.size() != space.dim()) {
            throw std::invalid_argument("vector component count must match chart dimension");
        }
    }

    static ChartVector basis(const ChartSpace& s, std::size_t slot) {
        std::vector<ScalarExpr> comps(s.dim(), ScalarExpr(0));
        comps.at(slot) = ScalarExpr(1);
        return ChartVector(s, std::move(comps));
    }
};

/// Pairing of a 1-form with a vector field.
inline ScalarExpr pairing(const RealForm& a, const ChartVector& x) {
    if (a.degree() != 1) throw std::invalid_argument("pairing needs a 1-form");
    if (a.space() != x.space) throw std::invalid_argument("pairing on different charts");
    ScalarExpr total(0);
    for (const auto& [idx, c] : a.terms()) {
        std::size_t slot = static_cast<std::size_t>(std::countr_zero(idx));
        total = total + c * x.components[slot];
    }
    return total;
}

/// Complexification with zero imaginary part.
inline ComplexForm complexify(const RealForm& a) {
    ComplexForm r(a.space(), a.degree());
    for (const auto& [idx, c] : a.terms()) r.add_term(idx, ComplexExpr(c));
    return r;
}

inline ComplexForm conj(const ComplexForm& a) {
    ComplexForm r(a.space(), a.degree());
    for (const auto& [idx, c] : a.terms()) r.add_term(idx, c.conj());
    return r;
}

}  // namespace gktorus
