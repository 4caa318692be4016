// Finitely generated graded-commutative differential algebras over the
// rationals: monomial bases, exact cohomology, quasi-isomorphism checks.
#pragma once

#include <gktorus/cohomology.hpp>
#include <gktorus/matrix.hpp>
#include <gktorus/rational.hpp>

#include <cctype>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gktorus {

/// Inconsistent algebra presentation or morphism data. Carries the name of
/// the generator that triggered the failure.
class AlgebraError : public std::runtime_error {
public:
    AlgebraError(std::string generator, const std::string& message)
        : std::runtime_error(message), generator_(std::move(generator)) {}

    const std::string& generator() const noexcept { return generator_; }

private:
    std::string generator_;
};

/// Word in the generators of a graded algebra: indices in ascending order,
/// with repeated entries for powers of even generators.
using Word = std::vector<std::size_t>;

/// Rational linear combination of words. Zero coefficients are never stored,
/// so the default map equality is exact element equality.
using AlgebraElement = std::map<Word, Rational>;

inline void add_scaled(AlgebraElement& acc, const AlgebraElement& x, const Rational& c) {
    if (c == 0) return;
    for (const auto& [w, q] : x) {
        auto it = acc.try_emplace(w, Rational(0)).first;
        it->second += q * c;
        if (it->second == 0) acc.erase(it);
    }
}

struct AlgebraGenerator {
    std::string name;
    std::size_t degree = 1;
};

/// Free graded-commutative algebra on named generators with a differential
/// of degree one. Words are kept in a canonical sorted form; sorting signs
/// follow the usual rule that moving an odd generator past another odd
/// generator flips the sign, and odd generators square to zero.
class CDGA {
public:
    CDGA() = default;

    std::size_t add_generator(const std::string& name, std::size_t degree) {
        if (degree == 0) {
            throw AlgebraError(name, "generator " + name + " must have positive degree");
        }
        if (!valid_name(name)) {
            throw AlgebraError(name, "generator name '" + name + "' is not an identifier");
        }
        if (index_.count(name) != 0) {
            throw AlgebraError(name, "duplicate generator " + name);
        }
        index_.emplace(name, generators_.size());
        generators_.push_back({name, degree});
        differentials_.emplace_back();
        return generators_.size() - 1;
    }

    const std::vector<AlgebraGenerator>& generators() const { return generators_; }

    std::size_t generator_index(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end()) {
            throw std::out_of_range("unknown generator " + name);
        }
        return it->second;
    }

    std::size_t cutoff() const { return cutoff_; }
    void set_cutoff(std::size_t c) { cutoff_ = c; }

    AlgebraElement unit() const { return {{Word{}, Rational(1)}}; }

    AlgebraElement generator_element(std::size_t g) const {
        return {{Word{g}, Rational(1)}};
    }

    AlgebraElement generator_element(const std::string& name) const {
        return generator_element(generator_index(name));
    }

    std::size_t word_degree(const Word& w) const {
        std::size_t d = 0;
        for (std::size_t g : w) d += generators_.at(g).degree;
        return d;
    }

    /// Sets d(name) to a homogeneous element of degree one higher. The words
    /// of the value must already be in canonical form.
    void set_differential(const std::string& name, const AlgebraElement& value) {
        std::size_t g = generator_index(name);
        AlgebraElement clean;
        for (const auto& [w, c] : value) {
            if (c == 0) continue;
            if (!canonical_word(w)) {
                throw AlgebraError(name, "differential of " + name + " uses a non-canonical word");
            }
            if (word_degree(w) != generators_[g].degree + 1) {
                throw AlgebraError(name, "differential of " + name +
                                             " is not homogeneous of degree " +
                                             std::to_string(generators_[g].degree + 1));
            }
            clean.emplace(w, c);
        }
        differentials_[g] = std::move(clean);
    }

    const AlgebraElement& differential_of(std::size_t g) const { return differentials_.at(g); }

    AlgebraElement multiply(const AlgebraElement& x, const AlgebraElement& y) const {
        AlgebraElement out;
        Word merged;
        for (const auto& [wx, cx] : x) {
            for (const auto& [wy, cy] : y) {
                int sign = merge_words(wx, wy, merged);
                if (sign == 0) continue;
                Rational prod = cx * cy;
                if (sign < 0) prod = -prod;
                auto it = out.try_emplace(merged, Rational(0)).first;
                it->second += prod;
                if (it->second == 0) out.erase(it);
            }
        }
        return out;
    }

    /// Graded Leibniz extension of the generator differentials.
    AlgebraElement differential(const AlgebraElement& x) const {
        AlgebraElement out;
        for (const auto& [word, coeff] : x) {
            bool odd_prefix = false;
            for (std::size_t pos = 0; pos < word.size(); ++pos) {
                const AlgebraElement& dg = differentials_[word[pos]];
                if (!dg.empty()) {
                    AlgebraElement t{{Word(word.begin(), word.begin() + pos), Rational(1)}};
                    t = multiply(t, dg);
                    AlgebraElement tail{{Word(word.begin() + pos + 1, word.end()), Rational(1)}};
                    t = multiply(t, tail);
                    add_scaled(out, t, odd_prefix ? -coeff : coeff);
                }
                odd_prefix = odd_prefix != (generators_[word[pos]].degree % 2 != 0);
            }
        }
        return out;
    }

    /// All canonical words of the given total degree, deterministic order.
    std::vector<Word> monomial_basis(std::size_t degree) const {
        if (degree > cutoff_) {
            throw std::invalid_argument("cutoff too small to enumerate a requested degree");
        }
        std::vector<Word> out;
        Word cur;
        basis_rec(0, degree, cur, out);
        return out;
    }

    /// Verifies that the differential squares to zero on every generator.
    void check_differential() const {
        for (std::size_t g = 0; g < generators_.size(); ++g) {
            if (!differential(differentials_[g]).empty()) {
                throw AlgebraError(generators_[g].name,
                                   "differential does not square to zero on " +
                                       generators_[g].name);
            }
        }
    }

    std::string label(const Word& w) const {
        if (w.empty()) return "1";
        std::string s;
        for (std::size_t k = 0; k < w.size(); ++k) {
            if (k != 0) s += "*";
            s += generators_[w[k]].name;
        }
        return s;
    }

    std::string to_string(const AlgebraElement& x) const {
        if (x.empty()) return "0";
        std::string s;
        for (const auto& [w, c] : x) {
            Rational a = c < 0 ? -c : c;
            if (s.empty()) {
                if (c < 0) s += "-";
            } else {
                s += c < 0 ? " - " : " + ";
            }
            if (a != 1 || w.empty()) {
                s += gktorus::to_string(a);
                if (!w.empty()) s += "*";
            }
            if (!w.empty()) s += label(w);
        }
        return s;
    }

    /// Parses "2*b1*b2 - 1/2*a*c + b3^2" style polynomials in the generators.
    AlgebraElement parse(const std::string& text) const {
        std::size_t pos = 0;
        auto skip = [&] {
            while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) {
                ++pos;
            }
        };
        auto malformed = [&](const std::string& what) {
            return std::invalid_argument("malformed polynomial near position " +
                                         std::to_string(pos) + ": " + what);
        };
        AlgebraElement total;
        skip();
        if (pos == text.size()) return total;
        bool first = true;
        while (pos < text.size()) {
            skip();
            Rational sign(1);
            if (!first && pos < text.size()) {
                if (text[pos] == '+') {
                    ++pos;
                } else if (text[pos] == '-') {
                    sign = -1;
                    ++pos;
                } else {
                    throw malformed("expected '+' or '-' between terms");
                }
            }
            skip();
            while (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
                if (text[pos] == '-') sign = -sign;
                ++pos;
                skip();
            }
            AlgebraElement term = unit();
            Rational coeff = sign;
            bool expect_factor = true;
            while (expect_factor) {
                skip();
                if (pos >= text.size()) throw malformed("missing factor");
                char ch = text[pos];
                if (std::isdigit(static_cast<unsigned char>(ch))) {
                    std::size_t start = pos;
                    while (pos < text.size() &&
                           (std::isdigit(static_cast<unsigned char>(text[pos])) ||
                            text[pos] == '/')) {
                        ++pos;
                    }
                    coeff *= parse_rational(text.substr(start, pos - start));
                } else if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
                    std::size_t start = pos;
                    while (pos < text.size() &&
                           (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                            text[pos] == '_')) {
                        ++pos;
                    }
                    std::size_t g = generator_index(text.substr(start, pos - start));
                    std::size_t power = 1;
                    skip();
                    if (pos < text.size() && text[pos] == '^') {
                        ++pos;
                        skip();
                        if (pos >= text.size() ||
                            !std::isdigit(static_cast<unsigned char>(text[pos]))) {
                            throw malformed("exponent must be a nonnegative integer");
                        }
                        power = 0;
                        while (pos < text.size() &&
                               std::isdigit(static_cast<unsigned char>(text[pos]))) {
                            power = power * 10 + static_cast<std::size_t>(text[pos] - '0');
                            ++pos;
                        }
                    }
                    for (std::size_t k = 0; k < power; ++k) {
                        term = multiply(term, generator_element(g));
                    }
                } else {
                    throw malformed(std::string("unexpected character '") + ch + "'");
                }
                skip();
                if (pos < text.size() && text[pos] == '*') {
                    ++pos;
                } else {
                    expect_factor = false;
                }
            }
            add_scaled(total, term, coeff);
            first = false;
            skip();
        }
        return total;
    }

private:
    static bool valid_name(const std::string& name) {
        if (name.empty()) return false;
        if (!std::isalpha(static_cast<unsigned char>(name[0])) && name[0] != '_') return false;
        for (char c : name) {
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
        }
        return true;
    }

    bool canonical_word(const Word& w) const {
        for (std::size_t k = 0; k < w.size(); ++k) {
            if (w[k] >= generators_.size()) return false;
            if (k + 1 < w.size()) {
                if (w[k] > w[k + 1]) return false;
                if (w[k] == w[k + 1] && generators_[w[k]].degree % 2 != 0) return false;
            }
        }
        return true;
    }

    /// Merges two canonical words; the return value is the Koszul sign, or
    /// zero when an odd generator repeats.
    int merge_words(const Word& a, const Word& b, Word& out) const {
        out.clear();
        out.reserve(a.size() + b.size());
        std::size_t odd_left = 0;
        for (std::size_t g : a) odd_left += generators_[g].degree % 2;
        int sign = 1;
        std::size_t i = 0;
        std::size_t j = 0;
        while (i < a.size() && j < b.size()) {
            if (a[i] <= b[j]) {
                odd_left -= generators_[a[i]].degree % 2;
                out.push_back(a[i]);
                ++i;
            } else {
                if (generators_[b[j]].degree % 2 != 0 && odd_left % 2 != 0) sign = -sign;
                out.push_back(b[j]);
                ++j;
            }
        }
        while (i < a.size()) out.push_back(a[i++]);
        while (j < b.size()) out.push_back(b[j++]);
        for (std::size_t k = 0; k + 1 < out.size(); ++k) {
            if (out[k] == out[k + 1] && generators_[out[k]].degree % 2 != 0) return 0;
        }
        return sign;
    }

    void basis_rec(std::size_t idx, std::size_t remaining, Word& cur,
                   std::vector<Word>& out) const {
        if (remaining == 0) {
            out.push_back(cur);
            return;
        }
        if (idx == generators_.size()) return;
        std::size_t deg = generators_[idx].degree;
        std::size_t max_mult = deg % 2 != 0 ? 1 : remaining / deg;
        std::size_t pushed = 0;
        for (std::size_t mult = 0; mult <= max_mult; ++mult) {
            if (mult * deg > remaining) break;
            basis_rec(idx + 1, remaining - mult * deg, cur, out);
            cur.push_back(idx);
            ++pushed;
        }
        for (std::size_t k = 0; k < pushed; ++k) cur.pop_back();
    }

    std::vector<AlgebraGenerator> generators_;
    std::vector<AlgebraElement> differentials_;
    std::map<std::string, std::size_t> index_;
    std::size_t cutoff_ = 10;
};

namespace detail {

struct DegreeBasis {
    std::vector<Word> words;
    std::map<Word, std::size_t> index;
};

/// Monomial bases and differential matrices of an algebra through degree top.
struct AlgebraComplex {
    std::vector<DegreeBasis> bases;  // degrees 0..top
    std::vector<QMatrix> d;          // d[k] maps degree k to k+1, k < top
};

inline AlgebraComplex build_complex(const CDGA& a, std::size_t top) {
    AlgebraComplex c;
    c.bases.resize(top + 1);
    for (std::size_t k = 0; k <= top; ++k) {
        c.bases[k].words = a.monomial_basis(k);
        for (std::size_t i = 0; i < c.bases[k].words.size(); ++i) {
            c.bases[k].index.emplace(c.bases[k].words[i], i);
        }
    }
    c.d.reserve(top);
    for (std::size_t k = 0; k < top; ++k) {
        QMatrix m(c.bases[k + 1].words.size(), c.bases[k].words.size(), Rational(0));
        for (std::size_t j = 0; j < c.bases[k].words.size(); ++j) {
            AlgebraElement dw =
                a.differential(AlgebraElement{{c.bases[k].words[j], Rational(1)}});
            for (const auto& [w, q] : dw) {
                m(c.bases[k + 1].index.at(w), j) = q;
            }
        }
        c.d.push_back(std::move(m));
    }
    return c;
}

inline std::vector<Rational> coordinates(const AlgebraElement& x, const DegreeBasis& b) {
    std::vector<Rational> v(b.words.size(), Rational(0));
    for (const auto& [w, c] : x) {
        auto it = b.index.find(w);
        if (it == b.index.end()) {
            throw std::logic_error("element leaves the enumerated monomial basis");
        }
        v[it->second] = c;
    }
    return v;
}

inline AlgebraElement from_coordinates(const std::vector<Rational>& v, const DegreeBasis& b) {
    AlgebraElement x;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] != 0) x.emplace(b.words[i], v[i]);
    }
    return x;
}

/// Extends a generator assignment multiplicatively; images are indexed by
/// source generator and live in the target algebra.
inline AlgebraElement apply_assignment(const CDGA& target,
                                       const std::vector<AlgebraElement>& images,
                                       const AlgebraElement& x) {
    AlgebraElement out;
    for (const auto& [w, c] : x) {
        AlgebraElement m{{Word{}, Rational(1)}};
        for (std::size_t g : w) m = target.multiply(m, images[g]);
        add_scaled(out, m, c);
    }
    return out;
}

inline std::vector<AlgebraElement> collect_images(
    const CDGA& source, const CDGA& target,
    const std::map<std::string, AlgebraElement>& nu) {
    std::vector<AlgebraElement> images;
    images.reserve(source.generators().size());
    for (const auto& g : source.generators()) {
        auto it = nu.find(g.name);
        if (it == nu.end()) {
            throw AlgebraError(g.name, "no image assigned to generator " + g.name);
        }
        for (const auto& [w, c] : it->second) {
            if (target.word_degree(w) != g.degree) {
                throw AlgebraError(g.name, "image of " + g.name +
                                               " is not homogeneous of degree " +
                                               std::to_string(g.degree));
            }
        }
        images.push_back(it->second);
    }
    return images;
}

/// Greedy cocycle representatives of cohomology in one degree: kernel
/// vectors that extend the span of the boundary columns.
inline std::vector<std::vector<Rational>> class_vectors(
    const std::vector<std::vector<Rational>>& kernel, const QMatrix* boundary,
    const Rref* boundary_red, std::size_t dim) {
    Span span(dim);
    if (boundary != nullptr) {
        for (std::size_t c : boundary_red->pivot_cols) {
            std::vector<Rational> col(boundary->rows());
            for (std::size_t i = 0; i < boundary->rows(); ++i) col[i] = (*boundary)(i, c);
            span.insert(std::move(col));
        }
    }
    std::vector<std::vector<Rational>> out;
    for (const auto& v : kernel) {
        if (span.insert(v)) out.push_back(v);
    }
    return out;
}

}  // namespace detail

/// Cohomology of the algebra in degrees 0..max_degree by exact elimination
/// over the monomial bases. Representatives are primitive integer
/// combinations of basis words.
inline CohomologyTable cdga_cohomology(const CDGA& a, std::size_t max_degree) {
    a.check_differential();
    detail::AlgebraComplex c = detail::build_complex(a, max_degree + 1);
    std::vector<Rref> red;
    red.reserve(max_degree + 1);
    for (std::size_t k = 0; k <= max_degree; ++k) red.push_back(rref(c.d[k]));
    CohomologyTable t;
    t.dims.assign(max_degree + 1, 0);
    t.reps.assign(max_degree + 1, {});
    for (std::size_t k = 0; k <= max_degree; ++k) {
        auto kernel = kernel_basis(red[k]);
        std::size_t boundary_rank = k == 0 ? 0 : red[k - 1].rank();
        t.dims[k] = kernel.size() - boundary_rank;
        auto classes = detail::class_vectors(kernel, k == 0 ? nullptr : &c.d[k - 1],
                                             k == 0 ? nullptr : &red[k - 1],
                                             c.bases[k].words.size());
        std::vector<std::string> labels;
        labels.reserve(c.bases[k].words.size());
        for (const auto& w : c.bases[k].words) labels.push_back(a.label(w));
        for (const auto& v : classes) {
            t.reps[k].push_back(detail::combination_label(v, labels));
        }
    }
    return t;
}

/// Degree-by-degree outcome of an induced-cohomology comparison.
struct DegreeIso {
    std::size_t degree = 0;
    std::size_t source_dim = 0;
    std::size_t target_dim = 0;
    std::size_t rank = 0;
    bool iso = false;
};

struct QuasiIsoReport {
    std::vector<DegreeIso> degrees;
    bool quasi_iso = false;

    const DegreeIso& at(std::size_t degree) const {
        for (const auto& d : degrees) {
            if (d.degree == degree) return d;
        }
        throw std::out_of_range("degree missing from the quasi-isomorphism report");
    }
};

/// Checks that the generator assignment nu defines a chain map from source
/// to target and that the induced map on cohomology is an isomorphism in
/// every degree up to max_degree. Chain-map failures throw an AlgebraError
/// naming the offending generator.
inline QuasiIsoReport check_quasi_iso(const CDGA& source, const CDGA& target,
                                      const std::map<std::string, AlgebraElement>& nu,
                                      std::size_t max_degree) {
    source.check_differential();
    target.check_differential();
    auto images = detail::collect_images(source, target, nu);
    for (std::size_t g = 0; g < images.size(); ++g) {
        AlgebraElement lhs =
            detail::apply_assignment(target, images, source.differential_of(g));
        AlgebraElement rhs = target.differential(images[g]);
        if (lhs != rhs) {
            throw AlgebraError(source.generators()[g].name,
                               "chain-map condition fails on generator " +
                                   source.generators()[g].name);
        }
    }
    detail::AlgebraComplex cs = detail::build_complex(source, max_degree + 1);
    detail::AlgebraComplex ct = detail::build_complex(target, max_degree + 1);
    std::vector<Rref> rs;
    std::vector<Rref> rt;
    for (std::size_t k = 0; k <= max_degree; ++k) {
        rs.push_back(rref(cs.d[k]));
        rt.push_back(rref(ct.d[k]));
    }
    QuasiIsoReport rep;
    rep.quasi_iso = true;
    for (std::size_t k = 0; k <= max_degree; ++k) {
        auto source_classes =
            detail::class_vectors(kernel_basis(rs[k]), k == 0 ? nullptr : &cs.d[k - 1],
                                  k == 0 ? nullptr : &rs[k - 1], cs.bases[k].words.size());
        auto target_classes =
            detail::class_vectors(kernel_basis(rt[k]), k == 0 ? nullptr : &ct.d[k - 1],
                                  k == 0 ? nullptr : &rt[k - 1], ct.bases[k].words.size());
        std::size_t hs = source_classes.size();
        std::size_t ht = target_classes.size();
        std::size_t dim_t = ct.bases[k].words.size();
        std::size_t image_rank = k == 0 ? 0 : rt[k - 1].rank();
        QMatrix span_cols(dim_t, ht + image_rank, Rational(0));
        for (std::size_t j = 0; j < ht; ++j) {
            for (std::size_t i = 0; i < dim_t; ++i) span_cols(i, j) = target_classes[j][i];
        }
        if (k > 0) {
            const QMatrix& dm = ct.d[k - 1];
            for (std::size_t j = 0; j < image_rank; ++j) {
                std::size_t col = rt[k - 1].pivot_cols[j];
                for (std::size_t i = 0; i < dim_t; ++i) span_cols(i, ht + j) = dm(i, col);
            }
        }
        QMatrix targets(dim_t, hs, Rational(0));
        for (std::size_t j = 0; j < hs; ++j) {
            AlgebraElement z = detail::from_coordinates(source_classes[j], cs.bases[k]);
            AlgebraElement w = detail::apply_assignment(target, images, z);
            auto coords = detail::coordinates(w, ct.bases[k]);
            for (std::size_t i = 0; i < dim_t; ++i) targets(i, j) = coords[i];
        }
        auto solved = solve_columns(span_cols, targets);
        if (!solved) {
            throw std::logic_error("image of a cocycle fell outside the cocycle span");
        }
        QMatrix induced(ht, hs, Rational(0));
        for (std::size_t i = 0; i < ht; ++i) {
            for (std::size_t j = 0; j < hs; ++j) induced(i, j) = (*solved)(i, j);
        }
        std::size_t r = rank(induced);
        bool iso = hs == ht && r == hs;
        rep.degrees.push_back({k, hs, ht, r, iso});
        rep.quasi_iso = rep.quasi_iso && iso;
    }
    return rep;
}

/// Checks a classifying assignment from the algebra into its own cohomology
/// ring, taken with zero differential: every image must be closed, the image
/// of every generator differential must be exact, and the induced
/// endomorphism of cohomology must be an isomorphism in every degree up to
/// max_degree. A passing report is a formality certificate for the algebra.
inline QuasiIsoReport check_quasi_iso(const CDGA& a,
                                      const std::map<std::string, AlgebraElement>& nu,
                                      std::size_t max_degree) {
    a.check_differential();
    auto images = detail::collect_images(a, a, nu);
    for (std::size_t g = 0; g < images.size(); ++g) {
        if (!a.differential(images[g]).empty()) {
            throw AlgebraError(a.generators()[g].name,
                               "image of " + a.generators()[g].name + " is not closed");
        }
    }
    std::size_t top = max_degree + 1;
    for (const auto& g : a.generators()) {
        if (!a.differential_of(a.generator_index(g.name)).empty() && g.degree + 1 > top) {
            top = g.degree + 1;
        }
    }
    detail::AlgebraComplex c = detail::build_complex(a, top);
    std::vector<Rref> red;
    for (std::size_t k = 0; k < top; ++k) red.push_back(rref(c.d[k]));
    for (std::size_t g = 0; g < images.size(); ++g) {
        const AlgebraElement& dg = a.differential_of(g);
        if (dg.empty()) continue;
        AlgebraElement w = detail::apply_assignment(a, images, dg);
        if (w.empty()) continue;
        std::size_t k = a.generators()[g].degree + 1;
        auto coords = detail::coordinates(w, c.bases[k]);
        QMatrix target(coords.size(), 1, Rational(0));
        for (std::size_t i = 0; i < coords.size(); ++i) target(i, 0) = coords[i];
        const QMatrix& dm = c.d[k - 1];
        const auto& pivots = red[k - 1].pivot_cols;
        QMatrix image_cols(dm.rows(), pivots.size(), Rational(0));
        for (std::size_t j = 0; j < pivots.size(); ++j) {
            for (std::size_t i = 0; i < dm.rows(); ++i) image_cols(i, j) = dm(i, pivots[j]);
        }
        if (!solve_columns(image_cols, target)) {
            throw AlgebraError(a.generators()[g].name,
                               "chain-map condition fails on generator " +
                                   a.generators()[g].name);
        }
    }
    QuasiIsoReport rep;
    rep.quasi_iso = true;
    for (std::size_t k = 0; k <= max_degree; ++k) {
        auto classes =
            detail::class_vectors(kernel_basis(red[k]), k == 0 ? nullptr : &c.d[k - 1],
                                  k == 0 ? nullptr : &red[k - 1], c.bases[k].words.size());
        std::size_t h = classes.size();
        std::size_t dim = c.bases[k].words.size();
        std::size_t image_rank = k == 0 ? 0 : red[k - 1].rank();
        QMatrix span_cols(dim, h + image_rank, Rational(0));
        for (std::size_t j = 0; j < h; ++j) {
            for (std::size_t i = 0; i < dim; ++i) span_cols(i, j) = classes[j][i];
        }
        if (k > 0) {
            const QMatrix& dm = c.d[k - 1];
            for (std::size_t j = 0; j < image_rank; ++j) {
                std::size_t col = red[k - 1].pivot_cols[j];
                for (std::size_t i = 0; i < dim; ++i) span_cols(i, h + j) = dm(i, col);
            }
        }
        QMatrix targets(dim, h, Rational(0));
        for (std::size_t j = 0; j < h; ++j) {
            AlgebraElement z = detail::from_coordinates(classes[j], c.bases[k]);
            AlgebraElement w = detail::apply_assignment(a, images, z);
            auto coords = detail::coordinates(w, c.bases[k]);
            for (std::size_t i = 0; i < dim; ++i) targets(i, j) = coords[i];
        }
        auto solved = solve_columns(span_cols, targets);
        if (!solved) {
            throw std::logic_error("image of a cocycle fell outside the cocycle span");
        }
        QMatrix induced(h, h, Rational(0));
        for (std::size_t i = 0; i < h; ++i) {
            for (std::size_t j = 0; j < h; ++j) induced(i, j) = (*solved)(i, j);
        }
        std::size_t r = rank(induced);
        bool iso = r == h;
        rep.degrees.push_back({k, h, h, r, iso});
        rep.quasi_iso = rep.quasi_iso && iso;
    }
    return rep;
}

}  // namespace gktorus
