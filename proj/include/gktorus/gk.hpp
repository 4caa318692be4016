// Bihermitian structure pairs on mapping-torus charts: assembly from a frame
// family and a flat fiber, residual certification of the defining identities,
// and the split / non-split classification through the operator commutator.
#pragma once

#include <gktorus/fiber.hpp>
#include <gktorus/frame.hpp>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace gktorus {

struct GKAssemblyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline Matrix<ScalarExpr> to_expr_matrix(const QMatrix& m) {
    Matrix<ScalarExpr> r(m.rows(), m.cols(), ScalarExpr(0));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = ScalarExpr(m(i, j));
    }
    return r;
}

inline QMatrix submatrix(const QMatrix& m, std::size_t r0, std::size_t c0, std::size_t nr,
                         std::size_t nc) {
    QMatrix r(nr, nc, Rational(0));
    for (std::size_t i = 0; i < nr; ++i) {
        for (std::size_t j = 0; j < nc; ++j) r(i, j) = m(r0 + i, c0 + j);
    }
    return r;
}

inline Matrix<ScalarExpr> normalized_entries(const Matrix<ScalarExpr>& m) {
    Matrix<ScalarExpr> r(m.rows(), m.cols(), ScalarExpr(0));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).normalized();
    }
    return r;
}

}  // namespace detail

/// Assembled pair of complex structures with common metric on the chart
/// (x1,x2,x3, fiber block, t). Operator matrices are written in the moving
/// frame (e1,e2,e3, fiber basis, unit t direction), column convention.
struct GKStructure {
    ChartSpace chart;
    FrameFamily frame;
    FlatFiber fiber;
    FiberMap map;

    QMatrix i_plus, i_minus;
    QMatrix omega_plus_gram, omega_minus_gram;  // moving-frame Grams of omega_+-
    RealForm omega_plus, omega_minus;           // chart 2-forms
    RealForm torsion;                           // H = dc_+ omega_+

    Matrix<ScalarExpr> e_full, e_inv_full;          // chart/frame change of basis
    Matrix<ScalarExpr> chart_j_plus, chart_j_minus;  // operators in chart coordinates
    bool split = false;

    std::size_t frame_dim() const { return chart.dim(); }
    std::size_t time_index() const { return chart.time_slot(); }

    /// Chart matrices follow the operator matrices; call after editing
    /// i_plus or i_minus in place.
    void refresh_charts() {
        chart_j_plus = detail::normalized_entries(
            e_inv_full * detail::to_expr_matrix(i_plus) * e_full);
        chart_j_minus = detail::normalized_entries(
            e_inv_full * detail::to_expr_matrix(i_minus) * e_full);
    }
};

/// Substitution action of an operator on a form: dx^mu -> sum_nu M(mu,nu) dx^nu
/// per wedge factor.
inline RealForm apply_operator(const RealForm& a, const Matrix<ScalarExpr>& m) {
    return substitute(a, m);
}

/// Twisted differential J^{-1} d (J a); for our operators J^{-1} = -J exactly.
inline RealForm dc(const RealForm& a, const Matrix<ScalarExpr>& j) {
    return substitute(exterior_d(substitute(a, j)), -j);
}

inline QMatrix frame_operator_matrix(const FlatFiber& fiber, bool plus) {
    std::size_t fd = fiber.dimension;
    std::size_t n = 4 + fd;
    std::size_t ti = n - 1;
    QMatrix c(n, n, Rational(0));
    c(ti, 0) = 1;   // e1 -> unit t direction
    c(0, ti) = -1;  // unit t direction -> -e1
    if (plus) {
        c(2, 1) = 1;   // e2 -> e3
        c(1, 2) = -1;  // e3 -> -e2
    } else {
        c(2, 1) = -1;
        c(1, 2) = 1;
    }
    if (fd > 0) {
        const QMatrix& j =
            (plus || fiber.mode == FiberMode::kahler) ? fiber.j1 : fiber.j2;
        for (std::size_t a = 0; a < fd; ++a) {
            for (std::size_t b = 0; b < fd; ++b) c(3 + a, 3 + b) = j(a, b);
        }
    }
    return c;
}

inline QMatrix frame_gram_matrix(const FlatFiber& fiber, bool plus) {
    std::size_t fd = fiber.dimension;
    std::size_t n = 4 + fd;
    std::size_t ti = n - 1;
    QMatrix g(n, n, Rational(0));
    g(0, ti) = 1;  // e^1 wedge theta
    g(ti, 0) = -1;
    Rational s = plus ? 1 : -1;  // F_+- = +-e^2 wedge e^3
    g(1, 2) = s;
    g(2, 1) = -s;
    if (fd > 0) {
        QMatrix w = (plus || fiber.mode == FiberMode::kahler) ? fiber.gram(1) : fiber.gram(2);
        for (std::size_t a = 0; a < fd; ++a) {
            for (std::size_t b = 0; b < fd; ++b) g(3 + a, 3 + b) = w(a, b);
        }
    }
    return g;
}

/// Build the structure pair; throws GKAssemblyError listing every failed
/// precondition (frame conditions, fiber structure constants, lattice map).
inline GKStructure assemble_gk(const FrameFamily& frame, const FlatFiber& fiber,
                               const FiberMap& map, int grid = 33) {
    std::vector<std::string> problems;
    for (const std::string& d : fiber_defects(fiber)) problems.push_back("fiber: " + d);
    FiberMapReport psi_report = check_fiber_map(fiber, map);
    for (const std::string& fail : psi_report.failures()) {
        problems.push_back("fiber map: " + fail);
    }
    FrameConditionReport conditions = check_frame_conditions(frame, grid);
    for (const auto& item : conditions.items) {
        if (!item.pass) {
            problems.push_back("frame " + item.name + ": residual " +
                               std::to_string(item.residual));
        }
    }
    if (!problems.empty()) {
        std::string msg = "structure preconditions failed:";
        for (const std::string& p : problems) msg += "\n  " + p;
        throw GKAssemblyError(msg);
    }

    Coframe cof = build_coframe(frame, fiber.dimension, grid);
    GKStructure s{cof.chart,
                  frame,
                  fiber,
                  map,
                  frame_operator_matrix(fiber, true),
                  frame_operator_matrix(fiber, false),
                  frame_gram_matrix(fiber, true),
                  frame_gram_matrix(fiber, false),
                  RealForm(cof.chart, 2),
                  RealForm(cof.chart, 2),
                  RealForm(cof.chart, 3),
                  Matrix<ScalarExpr>(),
                  Matrix<ScalarExpr>(),
                  Matrix<ScalarExpr>(),
                  Matrix<ScalarExpr>(),
                  false};

    RealForm area = wedge(cof.e1, cof.theta);
    s.omega_plus = area + cof.f_plus;
    s.omega_minus = area + cof.f_minus;
    if (fiber.dimension > 0) {
        s.omega_plus = s.omega_plus + gram_to_form(fiber.gram(1), s.chart, 3);
        QMatrix w_minus = fiber.mode == FiberMode::kahler ? fiber.gram(1) : fiber.gram(2);
        s.omega_minus = s.omega_minus + gram_to_form(w_minus, s.chart, 3);
    }

    std::size_t n = s.frame_dim();
    Matrix<ScalarExpr> e3 = spatial_coframe_matrix(frame);
    Matrix<ScalarExpr> e3inv = spatial_frame_matrix(frame);
    s.e_full = Matrix<ScalarExpr>(n, n, ScalarExpr(0));
    s.e_inv_full = Matrix<ScalarExpr>(n, n, ScalarExpr(0));
    for (std::size_t i = 0; i < n; ++i) {
        s.e_full(i, i) = ScalarExpr(1);
        s.e_inv_full(i, i) = ScalarExpr(1);
    }
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            s.e_full(i, j) = e3(i, j);
            s.e_inv_full(i, j) = e3inv(i, j);
        }
    }
    s.refresh_charts();
    s.torsion = dc(s.omega_plus, s.chart_j_plus);

    QMatrix commutator = s.i_plus * s.i_minus - s.i_minus * s.i_plus;
    s.split = commutator == QMatrix(n, n, Rational(0));
    return s;
}

struct CertificateItem {
    std::string name;
    std::string description;
    double max_residual = std::numeric_limits<double>::infinity();
    double tolerance = 1e-9;
    bool pass = false;
};

struct GKCertificate {
    std::vector<CertificateItem> items;
    bool torsion_free = false;      // H vanishes identically
    bool torsion_symbolic = false;  // H matches (2v/l) e^123 term for term
    bool h_class_nonzero = false;   // 2v/l does not vanish on [0, period]

    bool all_pass() const {
        for (const auto& it : items) {
            if (!it.pass) return false;
        }
        return true;
    }

    const CertificateItem& item(const std::string& name) const {
        for (const auto& it : items) {
            if (it.name == name) return it;
        }
        throw std::out_of_range("no certificate item named " + name);
    }
};

namespace detail {

inline double form_grid_residual(const RealForm& a, double period, const ParamEnv& env,
                                 int grid) {
    double worst = 0.0;
    for (const auto& [idx, c] : a.terms()) {
        (void)idx;
        for (int i = 0; i < grid; ++i) {
            double t = period * static_cast<double>(i) / static_cast<double>(grid - 1);
            worst = std::max(worst, std::fabs(c.eval(t, env)));
        }
    }
    return worst;
}

/// Bracket of two frame fields as coefficients in the frame basis. The only
/// nonzero brackets pair the unit t direction with e1, e2, e3.
inline std::vector<ScalarExpr> frame_bracket(const GKStructure& s, std::size_t a,
                                             std::size_t b) {
    std::size_t n = s.frame_dim();
    std::size_t ti = s.time_index();
    std::vector<ScalarExpr> out(n, ScalarExpr(0));
    if (a == b) return out;
    if (a != ti && b != ti) return out;
    std::size_t other = a == ti ? b : a;
    ScalarExpr sign(a == ti ? 1 : -1);
    const FrameFamily& f = s.frame;
    if (other == 0) {
        out[0] = sign * (f.a1.derivative() / f.a1);
    } else if (other == 1) {
        ScalarExpr l = f.l();
        out[1] = sign * (f.v() / l);
        out[2] = sign * (f.w() / l);
    } else if (other == 2) {
        ScalarExpr l = f.l();
        out[1] = -(sign * (f.w() / l));
        out[2] = sign * (f.v() / l);
    }
    return out;
}

inline std::vector<ScalarExpr> apply_frame_operator(const QMatrix& c,
                                                    const std::vector<ScalarExpr>& v) {
    std::vector<ScalarExpr> out(v.size(), ScalarExpr(0));
    for (std::size_t i = 0; i < c.rows(); ++i) {
        for (std::size_t j = 0; j < c.cols(); ++j) {
            if (c(i, j) == 0) continue;
            out[i] += ScalarExpr(c(i, j)) * v[j];
        }
    }
    return out;
}

/// Nijenhuis tensor of the operator on a frame pair, expanded through the
/// closed-form bracket table.
inline std::vector<ScalarExpr> nijenhuis_pair(const GKStructure& s, const QMatrix& c,
                                              std::size_t a, std::size_t b) {
    std::size_t n = s.frame_dim();
    std::vector<ScalarExpr> total(n, ScalarExpr(0));
    auto accumulate = [&](const std::vector<ScalarExpr>& v, const ScalarExpr& scale) {
        for (std::size_t i = 0; i < n; ++i) total[i] += scale * v[i];
    };

    for (std::size_t ca = 0; ca < n; ++ca) {
        if (c(ca, a) == 0) continue;
        for (std::size_t cb = 0; cb < n; ++cb) {
            if (c(cb, b) == 0) continue;
            accumulate(frame_bracket(s, ca, cb), ScalarExpr(c(ca, a) * c(cb, b)));
        }
    }
    for (std::size_t ca = 0; ca < n; ++ca) {
        if (c(ca, a) == 0) continue;
        auto img = apply_frame_operator(c, frame_bracket(s, ca, b));
        accumulate(img, ScalarExpr(-c(ca, a)));
    }
    for (std::size_t cb = 0; cb < n; ++cb) {
        if (c(cb, b) == 0) continue;
        auto img = apply_frame_operator(c, frame_bracket(s, a, cb));
        accumulate(img, ScalarExpr(-c(cb, b)));
    }
    auto plain = frame_bracket(s, a, b);
    for (std::size_t i = 0; i < n; ++i) total[i] -= plain[i];
    return total;
}

}  // namespace detail

/// Residual certificate over a uniform t-grid. Items:
///   (a) both operators square to -Id (exact),
///   (b) operators are isometries and calibrate the common metric (exact),
///   (c) Nijenhuis tensors vanish on all frame pairs,
///   (d) dc_+ omega_+ + dc_- omega_- = 0,
///   (e) the torsion 3-form is closed,
///   (f) the torsion matches -(1/l)'(1/a1) dx^1^dx^2^dx^3.
inline GKCertificate verify_gk(const GKStructure& s, int grid = 33, double tol = 1e-9) {
    if (grid < 2) throw std::invalid_argument("grid must have at least 2 points");
    GKCertificate cert;
    auto add = [&](const std::string& name, const std::string& description, double residual) {
        cert.items.push_back({name, description, residual, tol, residual <= tol});
    };
    std::size_t n = s.frame_dim();
    const ParamEnv& env = s.frame.env;
    double period = s.frame.period;

    QMatrix id = QMatrix::identity(n);
    double sq = std::max(to_double(max_abs(s.i_plus * s.i_plus + id)),
                         to_double(max_abs(s.i_minus * s.i_minus + id)));
    add("complex_squares", "I_+^2 = I_-^2 = -Id", sq);

    double iso = std::max(to_double(max_abs(s.i_plus.transposed() * s.i_plus - id)),
                          to_double(max_abs(s.i_minus.transposed() * s.i_minus - id)));
    double calib = std::max(to_double(max_abs(s.omega_plus_gram * s.i_plus - id)),
                            to_double(max_abs(s.omega_minus_gram * s.i_minus - id)));
    add("metric_compatibility", "g preserved and g = omega(., I .)", std::max(iso, calib));

    double nij = 0.0;
    for (const QMatrix* op : {&s.i_plus, &s.i_minus}) {
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a + 1; b < n; ++b) {
                auto comps = detail::nijenhuis_pair(s, *op, a, b);
                for (const auto& comp : comps) {
                    if (comp.is_structural_zero()) continue;
                    for (int i = 0; i < grid; ++i) {
                        double t =
                            period * static_cast<double>(i) / static_cast<double>(grid - 1);
                        nij = std::max(nij, std::fabs(comp.eval(t, env)));
                    }
                }
            }
        }
    }
    add("nijenhuis", "Nijenhuis tensors vanish on frame pairs", nij);

    RealForm dc_minus = dc(s.omega_minus, s.chart_j_minus);
    RealForm opposition = s.torsion + dc_minus;
    add("dc_opposition", "dc_+ omega_+ = -dc_- omega_-",
        detail::form_grid_residual(opposition, period, env, grid));

    add("torsion_closed", "dH = 0",
        detail::form_grid_residual(exterior_d(s.torsion), period, env, grid));

    ScalarExpr l = s.frame.l();
    ScalarExpr closed_coeff = -((ScalarExpr(1) / l).derivative() * (ScalarExpr(1) / s.frame.a1));
    RealForm closed_form = RealForm::monomial(s.chart, {0, 1, 2}, closed_coeff);
    add("torsion_chart_form", "H = -(1/l)'(1/a1) dx^123",
        detail::form_grid_residual(s.torsion - closed_form, period, env, grid));

    FormZeroCheck h_zero = s.torsion.zero_report(0.0, period, env);
    cert.torsion_free = h_zero.zero;

    ScalarExpr two_vl = ScalarExpr(2) * s.frame.v() / l;
    cert.h_class_nonzero = !two_vl.zero_check(0.0, period, env).is_zero();

    Coframe cof = build_coframe(s.frame, s.fiber.dimension, grid);
    RealForm e123 = wedge(wedge(cof.e1, cof.e2), cof.e3);
    RealForm symbolic_diff = (s.torsion - e123.scaled(two_vl)).pruned();
    cert.torsion_symbolic = symbolic_diff.terms().empty();

    return cert;
}

enum class SplitKind { split, non_split };

struct SplitClassification {
    SplitKind kind = SplitKind::split;
    QMatrix sigma;                 // (1/2)[I_+, I_-] g^{-1} in the moving frame
    bool sigma_matches_fiber = false;  // fiber block equals -omega_3^{-1}

    bool is_split() const { return kind == SplitKind::split; }
};

/// Split test through the exact operator commutator; in the non-split case
/// the Poisson bivector is compared against -omega_3^{-1} on the fiber block.
inline SplitClassification classify_split(const GKStructure& s) {
    std::size_t n = s.frame_dim();
    QMatrix commutator = s.i_plus * s.i_minus - s.i_minus * s.i_plus;
    SplitClassification out;
    out.sigma = commutator.scaled(rat(1, 2));  // moving-frame metric is the identity
    if (commutator == QMatrix(n, n, Rational(0))) {
        out.kind = SplitKind::split;
        return out;
    }
    out.kind = SplitKind::non_split;
    if (s.fiber.mode == FiberMode::hyperkahler && s.fiber.dimension > 0) {
        std::size_t fd = s.fiber.dimension;
        QMatrix expected(n, n, Rational(0));
        QMatrix minus_w3_inv = -inverse(s.fiber.gram(3).transposed());
        for (std::size_t a = 0; a < fd; ++a) {
            for (std::size_t b = 0; b < fd; ++b) expected(3 + a, 3 + b) = minus_w3_inv(a, b);
        }
        out.sigma_matches_fiber = out.sigma == expected;
    }
    return out;
}

}  // namespace gktorus
