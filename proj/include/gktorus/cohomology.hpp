// Exact de Rham cohomology of torus mapping tori: induced actions on exterior
// powers, kernel/cokernel splitting, Kunneth products, Hodge tables for the
// Inoue-type base and flat tori, Borel second pages, and the complex coframe
// certificate for the admissible-frame Dolbeault computation.
#pragma once

#include <gktorus/frame.hpp>

#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

namespace gktorus {

namespace detail {

/// Incremental echelon span used to pick greedy complements.
class Span {
public:
    explicit Span(std::size_t dim) : dim_(dim) {}

    std::size_t size() const { return rows_.size(); }

    /// Reduces v against the span; inserts the remainder when nonzero.
    bool insert(std::vector<Rational> v) {
        for (const auto& [lead, row] : rows_) {
            if (v[lead] == 0) continue;
            Rational f = v[lead];
            for (std::size_t j = 0; j < dim_; ++j) v[j] -= f * row[j];
        }
        std::size_t lead = dim_;
        for (std::size_t j = 0; j < dim_; ++j) {
            if (v[j] != 0) {
                lead = j;
                break;
            }
        }
        if (lead == dim_) return false;
        Rational inv = Rational(1) / v[lead];
        for (std::size_t j = 0; j < dim_; ++j) v[j] *= inv;
        rows_.emplace_back(lead, std::move(v));
        return true;
    }

private:
    std::size_t dim_;
    std::vector<std::pair<std::size_t, std::vector<Rational>>> rows_;
};

inline std::uint64_t binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

}  // namespace detail

/// All k-element subsets of {0..n-1} in lexicographic order.
inline std::vector<std::vector<std::size_t>> k_subsets(std::size_t n, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    if (k > n) return out;
    std::vector<std::size_t> cur(k);
    std::iota(cur.begin(), cur.end(), 0);
    while (true) {
        out.push_back(cur);
        if (k == 0) break;
        std::size_t i = k;
        while (i > 0 && cur[i - 1] == n - k + (i - 1)) --i;
        if (i == 0) break;
        ++cur[i - 1];
        for (std::size_t j = i; j < k; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

/// Induced matrix on the k-th exterior power over the lexicographic subset
/// basis; entry (J, I) is the minor of b with rows J and columns I. Satisfies
/// exterior_power_map(b1 * b2, k) = exterior_power_map(b1, k) * exterior_power_map(b2, k).
inline QMatrix exterior_power_map(const QMatrix& b, std::size_t k) {
    if (b.rows() != b.cols()) {
        throw std::invalid_argument("exterior power of a non-square matrix");
    }
    std::size_t n = b.rows();
    if (k > n) throw std::invalid_argument("exterior power degree out of range");
    auto idx = k_subsets(n, k);
    QMatrix r(idx.size(), idx.size(), Rational(0));
    for (std::size_t a = 0; a < idx.size(); ++a) {
        for (std::size_t c = 0; c < idx.size(); ++c) {
            QMatrix sub(k, k, Rational(0));
            for (std::size_t i = 0; i < k; ++i) {
                for (std::size_t j = 0; j < k; ++j) sub(i, j) = b(idx[a][i], idx[c][j]);
            }
            r(a, c) = det(sub);
        }
    }
    return r;
}

inline QMatrix kronecker(const QMatrix& a, const QMatrix& b) {
    QMatrix r(a.rows() * b.rows(), a.cols() * b.cols(), Rational(0));
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (a(i, j) == 0) continue;
            for (std::size_t k = 0; k < b.rows(); ++k) {
                for (std::size_t l = 0; l < b.cols(); ++l) {
                    r(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
                }
            }
        }
    }
    return r;
}

/// Kernel basis, rank, and a deterministic standard-basis complement of the
/// column space (lowest indices first).
struct KerCoker {
    std::vector<std::vector<Rational>> kernel;
    std::size_t rank = 0;
    std::size_t coker_dim = 0;
    std::vector<std::size_t> coker_reps;

    std::size_t kernel_dim() const { return kernel.size(); }
};

inline KerCoker ker_coker(const QMatrix& m) {
    KerCoker r;
    r.kernel = kernel_basis(m);
    r.rank = m.cols() - r.kernel.size();
    r.coker_dim = m.rows() - r.rank;
    detail::Span span(m.rows());
    for (std::size_t j = 0; j < m.cols(); ++j) {
        std::vector<Rational> col(m.rows());
        for (std::size_t i = 0; i < m.rows(); ++i) col[i] = m(i, j);
        span.insert(std::move(col));
    }
    for (std::size_t i = 0; i < m.rows() && r.coker_reps.size() < r.coker_dim; ++i) {
        std::vector<Rational> e(m.rows(), Rational(0));
        e[i] = 1;
        if (span.insert(std::move(e))) r.coker_reps.push_back(i);
    }
    return r;
}

/// Action of a torus diffeomorphism on degree-one cohomology, stored as the
/// matrix on coefficient vectors over the coordinate coframe basis. For a map
/// with coordinate matrix m this is the transpose of m.
struct PullbackAction {
    QMatrix h1;

    explicit PullbackAction(QMatrix b) : h1(std::move(b)) {
        if (h1.rows() != h1.cols()) {
            throw std::invalid_argument("degree-one action must be square");
        }
    }

    static PullbackAction from_coordinate_map(const QMatrix& m) {
        return PullbackAction(m.transposed());
    }

    std::size_t h1_rank() const { return h1.rows(); }

    QMatrix degree(std::size_t k) const { return exterior_power_map(h1, k); }

    std::vector<QMatrix> all_degrees() const {
        std::vector<QMatrix> r;
        for (std::size_t k = 0; k <= h1_rank(); ++k) r.push_back(degree(k));
        return r;
    }
};

struct CohomologyTable {
    std::vector<std::size_t> dims;
    std::vector<std::vector<std::string>> reps;  // optional, per degree

    std::size_t top_degree() const { return dims.empty() ? 0 : dims.size() - 1; }

    int euler_characteristic() const {
        int chi = 0;
        for (std::size_t r = 0; r < dims.size(); ++r) {
            chi += (r % 2 == 0 ? 1 : -1) * static_cast<int>(dims[r]);
        }
        return chi;
    }

    bool poincare_symmetric() const {
        for (std::size_t r = 0; r < dims.size(); ++r) {
            if (dims[r] != dims[dims.size() - 1 - r]) return false;
        }
        return true;
    }
};

namespace detail {

/// "dx^{45}" style label for a coordinate subset, 1-based indices.
inline std::string subset_label(const std::vector<std::size_t>& idx) {
    if (idx.empty()) return "1";
    std::string s = "dx^{";
    for (std::size_t i : idx) s += std::to_string(i + 1);
    return s + "}";
}

/// Integer-primitive combination label over basis labels, e.g.
/// "dx^{46}+dx^{57}" or "2dx^{12}-dx^{13}".
inline std::string combination_label(const std::vector<Rational>& v,
                                     const std::vector<std::string>& basis) {
    BigInt den(1), num(0);
    for (const auto& q : v) den = boost::multiprecision::lcm(den, denominator(q));
    for (const auto& q : v) {
        BigInt scaled = numerator(q) * (den / denominator(q));
        num = boost::multiprecision::gcd(num, scaled);
    }
    if (num == 0) return "0";
    std::size_t first = 0;
    while (v[first] == 0) ++first;
    Rational scale = Rational(den, num);
    if (v[first] < 0) scale = -scale;
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0) continue;
        Rational entry = v[i] * scale;
        BigInt c = numerator(entry);
        if (s.empty()) {
            if (c < 0) s += "-";
        } else {
            s += c < 0 ? "-" : "+";
        }
        BigInt a = boost::multiprecision::abs(c);
        if (a != 1) s += a.str();
        s += basis[i];
    }
    return s;
}

inline std::string wedge_label(const std::string& a, const std::string& b) {
    if (a == "1") return b;
    if (b == "1") return a;
    auto guard = [](const std::string& s) {
        return s.find('+') != std::string::npos || s.find('-') != std::string::npos
                   ? "(" + s + ")"
                   : s;
    };
    return guard(a) + "^" + guard(b);
}

}  // namespace detail

/// Betti numbers of the mapping torus from the per-degree pullback matrices:
/// dims[r] = dim ker(f_r - Id) + dim coker(f_{r-1} - Id).
inline CohomologyTable mapping_torus_cohomology(const std::vector<QMatrix>& actions) {
    if (actions.empty()) {
        throw std::invalid_argument("degree gap: no pullback actions given");
    }
    for (std::size_t r = 0; r < actions.size(); ++r) {
        if (actions[r].rows() != actions[r].cols()) {
            throw std::invalid_argument("pullback action in degree " + std::to_string(r) +
                                        " must be square");
        }
        if (actions[r].rows() == 0) {
            throw std::invalid_argument("degree gap: empty action in degree " +
                                        std::to_string(r));
        }
    }
    CohomologyTable table;
    std::size_t n = actions.size() - 1;
    for (std::size_t r = 0; r <= n + 1; ++r) {
        std::size_t d = 0;
        if (r <= n) {
            QMatrix m = actions[r] - QMatrix::identity(actions[r].rows());
            d += kernel_basis(m).size();
        }
        if (r >= 1) {
            QMatrix m = actions[r - 1] - QMatrix::identity(actions[r - 1].rows());
            d += actions[r - 1].rows() - rank(m);
        }
        table.dims.push_back(d);
    }
    return table;
}

/// Same computation driven by a degree-one action, with representative labels
/// over the coordinate coframe: fixed combinations in each exterior power plus
/// circle-direction classes on cokernel representatives.
inline CohomologyTable mapping_torus_cohomology(const PullbackAction& action) {
    std::size_t n = action.h1_rank();
    CohomologyTable table;
    std::vector<KerCoker> kc;
    for (std::size_t r = 0; r <= n; ++r) {
        QMatrix m = action.degree(r);
        kc.push_back(ker_coker(m - QMatrix::identity(m.rows())));
    }
    for (std::size_t r = 0; r <= n + 1; ++r) {
        std::vector<std::string> labels;
        if (r <= n) {
            auto basis_sets = k_subsets(n, r);
            std::vector<std::string> basis;
            for (const auto& I : basis_sets) basis.push_back(detail::subset_label(I));
            for (const auto& vec : kc[r].kernel) {
                labels.push_back(detail::combination_label(vec, basis));
            }
        }
        if (r >= 1) {
            auto basis_sets = k_subsets(n, r - 1);
            for (std::size_t i : kc[r - 1].coker_reps) {
                labels.push_back(detail::wedge_label("theta", detail::subset_label(basis_sets[i])));
            }
        }
        table.dims.push_back(labels.size());
        table.reps.push_back(std::move(labels));
    }
    return table;
}

/// Poincare-polynomial convolution; labels are combined when both factors
/// carry them.
inline CohomologyTable kunneth(const CohomologyTable& p, const CohomologyTable& q) {
    CohomologyTable r;
    if (p.dims.empty() || q.dims.empty()) {
        throw std::invalid_argument("kunneth of an empty table");
    }
    std::size_t top = p.dims.size() + q.dims.size() - 2;
    bool with_labels =
        p.reps.size() == p.dims.size() && q.reps.size() == q.dims.size();
    for (std::size_t k = 0; k <= top; ++k) {
        std::size_t d = 0;
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < p.dims.size(); ++i) {
            if (k < i || k - i >= q.dims.size()) continue;
            d += p.dims[i] * q.dims[k - i];
            if (with_labels) {
                for (const auto& a : p.reps[i]) {
                    for (const auto& b : q.reps[k - i]) {
                        labels.push_back(detail::wedge_label(a, b));
                    }
                }
            }
        }
        r.dims.push_back(d);
        if (with_labels) r.reps.push_back(std::move(labels));
    }
    return r;
}

/// Fixed vectors of the product action in one bidegree, computed directly on
/// the tensor product and again through the per-factor fixed spaces.
struct BidegreeFixedSpace {
    std::size_t i = 0, j = 0;
    std::size_t direct_dim = 0;
    std::size_t factorized_dim = 0;
    bool agree = true;
};

struct TensorFixedReport {
    std::vector<BidegreeFixedSpace> bidegrees;
    std::size_t total_direct = 0;
    std::size_t total_factorized = 0;
    bool factorization_consistent = true;
};

inline TensorFixedReport tensor_fixed_spaces(const PullbackAction& rho,
                                             const PullbackAction& psi, std::size_t degree) {
    TensorFixedReport report;
    for (std::size_t i = 0; i <= std::min(degree, rho.h1_rank()); ++i) {
        std::size_t j = degree - i;
        if (j > psi.h1_rank()) continue;
        QMatrix a = rho.degree(i);
        QMatrix c = psi.degree(j);
        QMatrix t = kronecker(a, c);
        BidegreeFixedSpace b;
        b.i = i;
        b.j = j;
        b.direct_dim = kernel_basis(t - QMatrix::identity(t.rows())).size();
        std::size_t ki = kernel_basis(a - QMatrix::identity(a.rows())).size();
        std::size_t kj = kernel_basis(c - QMatrix::identity(c.rows())).size();
        b.factorized_dim = ki * kj;
        b.agree = b.direct_dim == b.factorized_dim;
        report.total_direct += b.direct_dim;
        report.total_factorized += b.factorized_dim;
        if (!b.agree) report.factorization_consistent = false;
        report.bidegrees.push_back(b);
    }
    return report;
}

/// Bigraded dimension table h^{p,q} for a compact complex surface or torus.
struct HodgeTable {
    std::size_t complex_dim = 0;
    std::vector<std::vector<std::size_t>> h;

    static HodgeTable zeros(std::size_t n) {
        HodgeTable t;
        t.complex_dim = n;
        t.h.assign(n + 1, std::vector<std::size_t>(n + 1, 0));
        return t;
    }

    std::size_t at(long long p, long long q) const {
        if (p < 0 || q < 0) throw std::out_of_range("negative Hodge bidegree");
        if (p > static_cast<long long>(complex_dim) || q > static_cast<long long>(complex_dim)) {
            return 0;
        }
        return h[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)];
    }

    std::size_t total() const {
        std::size_t s = 0;
        for (const auto& row : h) {
            for (std::size_t d : row) s += d;
        }
        return s;
    }
};

/// Dolbeault table of the admissible-frame surface: one class in each of
/// (0,0), (0,1), (2,1), (2,2).
inline HodgeTable inoue_hodge() {
    HodgeTable t = HodgeTable::zeros(2);
    t.h[0][0] = 1;
    t.h[0][1] = 1;
    t.h[2][1] = 1;
    t.h[2][2] = 1;
    return t;
}

inline HodgeTable torus_hodge(std::size_t n) {
    HodgeTable t = HodgeTable::zeros(n);
    for (std::size_t p = 0; p <= n; ++p) {
        for (std::size_t q = 0; q <= n; ++q) {
            t.h[p][q] = static_cast<std::size_t>(detail::binomial(n, p) *
                                                 detail::binomial(n, q));
        }
    }
    return t;
}

/// Second page of the fibration spectral sequence, 4-graded with p+q = u+v;
/// sparse storage of the nonzero entries.
struct BorelPage {
    std::size_t base_dim = 0;
    std::size_t fiber_dim = 0;
    std::map<std::array<std::size_t, 4>, std::size_t> entries;  // (p,q,u,v)

    std::size_t at(long long p, long long q, long long u, long long v) const {
        if (p < 0 || q < 0 || u < 0 || v < 0) {
            throw std::out_of_range("negative spectral page index");
        }
        auto it = entries.find({static_cast<std::size_t>(p), static_cast<std::size_t>(q),
                                static_cast<std::size_t>(u), static_cast<std::size_t>(v)});
        return it == entries.end() ? 0 : it->second;
    }

    std::size_t total() const {
        std::size_t s = 0;
        for (const auto& [key, d] : entries) s += d;
        return s;
    }
};

/// E2 of a holomorphic fibration with the given base and fiber tables:
/// entry (p,q,u,v) sums base(k, u-k) * fiber(p-k, q-u+k) over k.
inline BorelPage borel_e2(const HodgeTable& base, const HodgeTable& fiber) {
    BorelPage page;
    page.base_dim = base.complex_dim;
    page.fiber_dim = fiber.complex_dim;
    std::size_t n = base.complex_dim + fiber.complex_dim;
    for (std::size_t p = 0; p <= n; ++p) {
        for (std::size_t q = 0; q <= n; ++q) {
            for (std::size_t u = 0; u <= 2 * base.complex_dim && u <= p + q; ++u) {
                std::size_t v = p + q - u;
                std::size_t d = 0;
                for (std::size_t k = 0; k <= base.complex_dim && k <= p; ++k) {
                    if (u < k) continue;
                    long long fq = static_cast<long long>(q) - static_cast<long long>(u) +
                                   static_cast<long long>(k);
                    if (fq < 0) continue;
                    d += base.at(static_cast<long long>(k), static_cast<long long>(u - k)) *
                         fiber.at(static_cast<long long>(p - k), fq);
                }
                if (d != 0) page.entries[{p, q, u, v}] = d;
            }
        }
    }
    return page;
}

/// Bigraded sums of a page. Without the degeneration flag the table is only
/// an upper bound for the limit; the flag records the caller's argument that
/// the next differential vanishes.
struct CollapsedHodge {
    HodgeTable table;
    bool exact = false;
    std::string note;
};

inline CollapsedHodge collapse(const BorelPage& page, bool degenerate = false,
                               const std::string& justification = "") {
    if (degenerate && justification.empty()) {
        throw std::invalid_argument("degeneration flag requires a justification");
    }
    CollapsedHodge c;
    c.table = HodgeTable::zeros(page.base_dim + page.fiber_dim);
    for (const auto& [key, d] : page.entries) {
        c.table.h[key[0]][key[1]] += d;
    }
    c.exact = degenerate;
    c.note = degenerate ? justification
                        : "upper bound; exact when the second page degenerates";
    return c;
}

/// One residual line of the complex coframe certificate.
struct DolbeaultFrameCheck {
    std::string name;
    double residual = std::numeric_limits<double>::infinity();
    bool pass = false;
};

struct DolbeaultFrameCertificate {
    std::vector<DolbeaultFrameCheck> items;
    double alpha = 0.0;       // coefficient of the vertical structure equation
    double beta_plus = 0.0;   // rotation rates of the two horizontal equations
    double beta_minus = 0.0;

    bool all_pass() const {
        for (const auto& it : items) {
            if (!it.pass) return false;
        }
        return true;
    }

    const DolbeaultFrameCheck& item(const std::string& name) const {
        for (const auto& it : items) {
            if (it.name == name) return it;
        }
        throw std::out_of_range("no certificate item named " + name);
    }
};

/// Certifies the structure equations of the complex coframe
/// phi1 = e2 + i e3 (plus) / e3 + i e2 (minus), phi2 = e1 + i theta over the
/// exponential frame of an admissible matrix:
///   d phi1 = ((alpha - i beta)/2i) (phi^{12} - phi^{1 conj(2)})
///   d phi2 = -i alpha phi^{2 conj(2)}
/// with alpha = v/l and beta = -w/l (plus) or w/l (minus).
inline DolbeaultFrameCertificate verify_inoue_dolbeault_frame(const InoueData& data,
                                                              double tol = 1e-9) {
    FrameFamily fam = example31_frame(data);
    Coframe cof = build_coframe(fam);
    ScalarExpr l = fam.l();
    ScalarExpr alpha = fam.v() / l;
    ScalarExpr rate = fam.w() / l;
    ComplexExpr iu = ComplexExpr::unit_i();

    ComplexForm e1 = complexify(cof.e1);
    ComplexForm e2 = complexify(cof.e2);
    ComplexForm e3 = complexify(cof.e3);
    ComplexForm th = complexify(cof.theta);
    ComplexForm phi2 = e1 + th.scaled(iu);

    DolbeaultFrameCertificate cert;
    double period = fam.period;
    auto push = [&](const std::string& name, const ComplexForm& residual_form) {
        FormZeroCheck z = residual_form.zero_report(0.0, period, fam.env, tol);
        cert.items.push_back({name, z.max_abs, z.zero});
    };

    for (int sign = 0; sign < 2; ++sign) {
        bool plus = sign == 0;
        ComplexForm phi1 = plus ? e2 + e3.scaled(iu) : e3 + e2.scaled(iu);
        ScalarExpr beta = plus ? -rate : rate;
        // (alpha - i beta) / (2i) = -beta/2 - (alpha/2) i
        ComplexExpr coeff(-(beta / 2), -(alpha / 2));
        ComplexForm rhs =
            (wedge(phi1, phi2) - wedge(phi1, conj(phi2))).scaled(coeff);
        push(plus ? "phi1 plus structure" : "phi1 minus structure",
             exterior_d(phi1) - rhs);
        push(plus ? "phi1 plus conjugate consistency" : "phi1 minus conjugate consistency",
             exterior_d(conj(phi1)) - conj(exterior_d(phi1)));
    }

    ComplexForm rhs2 = wedge(phi2, conj(phi2)).scaled(ComplexExpr(ScalarExpr(0), -alpha));
    push("phi2 structure", exterior_d(phi2) - rhs2);

    ZeroCheck za = (alpha + ScalarExpr(rat(1, 2))).zero_check(0.0, period, fam.env, tol);
    cert.items.push_back({"alpha equals minus one half", za.max_abs, za.is_zero()});
    ZeroCheck zb = (-rate - ScalarExpr::param("p")).zero_check(0.0, period, fam.env, tol);
    cert.items.push_back({"beta equals rotation rate", zb.max_abs, zb.is_zero()});

    cert.alpha = alpha.eval(0.0, fam.env);
    cert.beta_plus = -rate.eval(0.0, fam.env);
    cert.beta_minus = rate.eval(0.0, fam.env);
    return cert;
}

/// First Betti number of the block mapping torus and the parity obstruction:
/// b1 = 1 + dim ker(rho1 - Id) + dim ker(psi1 - Id). Odd b1 rules out Kahler
/// metrics and the dd^c lemma.
struct B1ParityReport {
    std::size_t rho_fixed = 0;
    std::size_t psi_fixed = 0;
    std::size_t b1 = 0;
    bool odd = false;
    bool oddness_forced = false;      // base has no fixed classes, fiber count even
    bool kahler_obstruction = false;
};

inline B1ParityReport b1_parity_report(const PullbackAction& rho, const PullbackAction& psi) {
    B1ParityReport r;
    QMatrix mr = rho.h1 - QMatrix::identity(rho.h1.rows());
    QMatrix mp = psi.h1 - QMatrix::identity(psi.h1.rows());
    r.rho_fixed = kernel_basis(mr).size();
    r.psi_fixed = kernel_basis(mp).size();
    r.b1 = 1 + r.rho_fixed + r.psi_fixed;
    r.odd = r.b1 % 2 == 1;
    r.oddness_forced = r.rho_fixed == 0 && r.psi_fixed % 2 == 0;
    r.kahler_obstruction = r.odd;
    return r;
}

}  // namespace gktorus
