// Time-periodic coframes on the 3-torus block of a mapping torus: coefficient
// families (a1, b2, b3) on [0, period], gluing and boundary checks, and the
// derived coframe, frame fields, and area 2-forms.
#pragma once

#include <gktorus/forms.hpp>
#include <gktorus/inoue.hpp>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace gktorus {

struct DegenerateFrameError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Coefficient family of the coframe e^1 = dx^1/a1,
/// e^2 = (b2 dx^2 + b3 dx^3)/l, e^3 = (-b3 dx^2 + b2 dx^3)/l.
struct FrameFamily {
    ScalarExpr a1 = ScalarExpr(1);
    ScalarExpr b2 = ScalarExpr(1);
    ScalarExpr b3 = ScalarExpr(0);
    double period = 1.0;
    ParamEnv env;
    DMatrix glue = DMatrix::identity(3);  // target of E(period) * glue = E(0)

    ScalarExpr l() const { return b2 * b2 + b3 * b3; }
    ScalarExpr v() const { return b2 * b2.derivative() + b3 * b3.derivative(); }
    ScalarExpr w() const { return b2 * b3.derivative() - b3 * b2.derivative(); }
};

/// Exponential frame attached to an admissible matrix: a1 = e^t,
/// b2 = e^{-t/2} cos(pt), b3 = -e^{-t/2} sin(pt) on [0, t0].
inline FrameFamily example31_frame(const InoueData& data) {
    ScalarExpr t = ScalarExpr::t();
    ScalarExpr p = ScalarExpr::param("p");
    FrameFamily f;
    f.a1 = exp_of(t);
    f.b2 = exp_of(-(t / 2)) * cos_of(p * t);
    f.b3 = -(exp_of(-(t / 2)) * sin_of(p * t));
    f.period = data.t0;
    f.env = {{"p", data.p}};
    f.glue = rho_at(data.p, data.t0);
    return f;
}

/// Wider family gluing along the same rho(t0): amplitude and phase of the
/// rotating pair and an overall stretch of a1 are free.
inline FrameFamily scaled_exponential_frame(const InoueData& data, double amplitude,
                                            double phase, double stretch) {
    ScalarExpr t = ScalarExpr::t();
    ScalarExpr p = ScalarExpr::param("p");
    ScalarExpr amp = ScalarExpr::param("amp");
    ScalarExpr phi = ScalarExpr::param("phi");
    ScalarExpr c = ScalarExpr::param("c");
    ScalarExpr arg = p * t + phi;
    FrameFamily f;
    f.a1 = c * exp_of(t);
    f.b2 = amp * exp_of(-(t / 2)) * cos_of(arg);
    f.b3 = -(amp * exp_of(-(t / 2)) * sin_of(arg));
    f.period = data.t0;
    f.env = {{"p", data.p}, {"amp", amplitude}, {"phi", phase}, {"c", stretch}};
    f.glue = rho_at(data.p, data.t0);
    return f;
}

/// Rows are the coefficients of e^1, e^2, e^3 in the dx basis.
inline Matrix<ScalarExpr> spatial_coframe_matrix(const FrameFamily& f) {
    ScalarExpr zero(0), one(1);
    ScalarExpr l = f.l();
    Matrix<ScalarExpr> e(3, 3, zero);
    e(0, 0) = one / f.a1;
    e(1, 1) = f.b2 / l;
    e(1, 2) = f.b3 / l;
    e(2, 1) = -f.b3 / l;
    e(2, 2) = f.b2 / l;
    return e;
}

/// Columns are the frame fields e_1, e_2, e_3 in the coordinate basis;
/// exact inverse of spatial_coframe_matrix.
inline Matrix<ScalarExpr> spatial_frame_matrix(const FrameFamily& f) {
    Matrix<ScalarExpr> m(3, 3, ScalarExpr(0));
    m(0, 0) = f.a1;
    m(1, 1) = f.b2;
    m(1, 2) = -f.b3;
    m(2, 1) = f.b3;
    m(2, 2) = f.b2;
    return m;
}

inline DMatrix eval_matrix(const Matrix<ScalarExpr>& m, double t, const ParamEnv& env) {
    DMatrix r(m.rows(), m.cols(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j).eval(t, env);
    }
    return r;
}

/// Coframe package over a mapping-torus chart with an optional flat fiber
/// block between the three x slots and the t slot.
struct Coframe {
    ChartSpace chart;
    RealForm e1, e2, e3;  // frame 1-forms
    RealForm theta;       // dt
    RealForm f_plus, f_minus;
    ChartVector vec1, vec2, vec3;
};

inline Coframe build_coframe(const FrameFamily& f, std::size_t fiber_dim = 0,
                             int grid = 33) {
    ScalarExpr l = f.l();
    for (int i = 0; i < grid; ++i) {
        double t = f.period * static_cast<double>(i) / static_cast<double>(grid - 1);
        double a1v = f.a1.eval(t, f.env);
        double lv = l.eval(t, f.env);
        if (std::fabs(a1v) <= 1e-12) {
            throw DegenerateFrameError("a1 vanishes at t = " + std::to_string(t));
        }
        if (lv <= 1e-12) {
            throw DegenerateFrameError("l = b2^2 + b3^2 is not positive at t = " +
                                       std::to_string(t));
        }
    }

    ChartSpace chart = ChartSpace::mapping_torus(fiber_dim);
    ScalarExpr one(1), zero(0);
    RealForm e1 = RealForm::monomial(chart, {0}, one / f.a1);
    RealForm e2(chart, 1), e3(chart, 1);
    e2.add_term(Index{1} << 1, f.b2 / l);
    e2.add_term(Index{1} << 2, f.b3 / l);
    e3.add_term(Index{1} << 1, -f.b3 / l);
    e3.add_term(Index{1} << 2, f.b2 / l);
    RealForm theta = RealForm::monomial(chart, {chart.time_slot()}, one);
    RealForm fp = RealForm::monomial(chart, {1, 2}, one / l);

    std::vector<ScalarExpr> c1(chart.dim(), zero), c2(chart.dim(), zero), c3(chart.dim(), zero);
    c1[0] = f.a1;
    c2[1] = f.b2;
    c2[2] = f.b3;
    c3[1] = -f.b3;
    c3[2] = f.b2;

    return Coframe{chart,
                   std::move(e1),
                   std::move(e2),
                   std::move(e3),
                   std::move(theta),
                   fp,
                   -fp,
                   ChartVector(chart, std::move(c1)),
                   ChartVector(chart, std::move(c2)),
                   ChartVector(chart, std::move(c3))};
}

struct FrameConditionItem {
    std::string name;
    bool pass = false;
    double residual = std::numeric_limits<double>::infinity();
};

struct FrameConditionReport {
    std::vector<FrameConditionItem> items;
    double constant_value = 0.0;  // (1/l)' * (1/a1) at t = 0

    bool all_pass() const {
        for (const auto& it : items) {
            if (!it.pass) return false;
        }
        return true;
    }

    const FrameConditionItem& item(const std::string& name) const {
        for (const auto& it : items) {
            if (it.name == name) return it;
        }
        throw std::out_of_range("no frame condition item named " + name);
    }
};

/// Three checks with one residual each: (i) the coframe glues through the
/// matrix in FrameFamily::glue, (ii) v/l and w/l match at the interval ends,
/// (iii) (1/l)' * (1/a1) is constant; its value is reported but may be zero.
inline FrameConditionReport check_frame_conditions(const FrameFamily& f, int grid = 33,
                                                   double tol = 1e-9) {
    FrameConditionReport report;
    auto add = [&](const std::string& name, double residual) {
        report.items.push_back({name, residual <= tol, residual});
    };
    Matrix<ScalarExpr> e = spatial_coframe_matrix(f);

    double glue_res = std::numeric_limits<double>::infinity();
    try {
        DMatrix end = eval_matrix(e, f.period, f.env);
        DMatrix start = eval_matrix(e, 0.0, f.env);
        glue_res = max_abs(end * f.glue - start);
    } catch (const DomainError&) {
    }
    add("glue", glue_res);

    ScalarExpr l = f.l();
    ScalarExpr vl = f.v() / l;
    ScalarExpr wl = f.w() / l;
    double boundary_res = std::numeric_limits<double>::infinity();
    try {
        boundary_res = std::max(std::fabs(vl.eval(f.period, f.env) - vl.eval(0.0, f.env)),
                                std::fabs(wl.eval(f.period, f.env) - wl.eval(0.0, f.env)));
    } catch (const DomainError&) {
    }
    add("boundary", boundary_res);

    ScalarExpr c = (ScalarExpr(1) / l).derivative() * (ScalarExpr(1) / f.a1);
    double constancy_res = std::numeric_limits<double>::infinity();
    try {
        double base = c.eval(0.0, f.env);
        report.constant_value = base;
        double worst = 0.0;
        for (int i = 0; i < grid; ++i) {
            double t = f.period * static_cast<double>(i) / static_cast<double>(grid - 1);
            worst = std::max(worst, std::fabs(c.eval(t, f.env) - base));
        }
        constancy_res = worst;
    } catch (const DomainError&) {
    }
    add("constancy", constancy_res);

    return report;
}

inline FrameConditionReport check_frame_conditions(const FrameFamily& f, const InoueData& data,
                                                   int grid = 33, double tol = 1e-9) {
    FrameFamily g = f;
    g.glue = rho_at(data.p, data.t0);
    return check_frame_conditions(g, grid, tol);
}

}  // namespace gktorus
