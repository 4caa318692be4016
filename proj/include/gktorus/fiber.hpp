// Flat torus fibers carrying constant complex structures, the associated
// constant 2-forms, and integer lattice maps that preserve them. All checks
// in this header are exact rational arithmetic.
#pragma once

#include <gktorus/forms.hpp>
#include <gktorus/matrix.hpp>

#include <string>
#include <vector>

namespace gktorus {

enum class FiberMode { none, kahler, hyperkahler };

inline std::string to_string(FiberMode m) {
    switch (m) {
        case FiberMode::none: return "none";
        case FiberMode::kahler: return "kahler";
        case FiberMode::hyperkahler: return "hyperkahler";
    }
    return "?";
}

/// Flat torus fiber of dimension 4k with the standard quaternionic triple of
/// constant complex structures. In kahler mode only j1 is in play; in none
/// mode the fiber is empty.
struct FlatFiber {
    FiberMode mode = FiberMode::none;
    std::size_t dimension = 0;
    QMatrix j1, j2, j3;

    static FlatFiber none() { return {}; }

    static FlatFiber standard(std::size_t quaternionic_blocks, FiberMode mode) {
        if (mode == FiberMode::none || quaternionic_blocks == 0) return {};
        QMatrix b1 = QMatrix::from_rows({{rat(0), rat(-1), rat(0), rat(0)},
                                         {rat(1), rat(0), rat(0), rat(0)},
                                         {rat(0), rat(0), rat(0), rat(1)},
                                         {rat(0), rat(0), rat(-1), rat(0)}});
        QMatrix b2 = QMatrix::from_rows({{rat(0), rat(0), rat(0), rat(1)},
                                         {rat(0), rat(0), rat(-1), rat(0)},
                                         {rat(0), rat(1), rat(0), rat(0)},
                                         {rat(-1), rat(0), rat(0), rat(0)}});
        FlatFiber f;
        f.mode = mode;
        f.dimension = 4 * quaternionic_blocks;
        f.j1 = b1;
        f.j2 = b2;
        for (std::size_t k = 1; k < quaternionic_blocks; ++k) {
            f.j1 = block_diag(f.j1, b1);
            f.j2 = block_diag(f.j2, b2);
        }
        f.j3 = f.j1 * f.j2;
        return f;
    }

    /// Gram matrix of omega_i against the flat metric: W_i = J_i^T.
    QMatrix gram(int i) const {
        const QMatrix& j = i == 1 ? j1 : (i == 2 ? j2 : j3);
        return j.transposed();
    }
};

/// Structure constants sanity: J_i^2 = -Id and the quaternion relations.
/// Exact; returns a list of violated identities (empty = good).
inline std::vector<std::string> fiber_defects(const FlatFiber& f) {
    std::vector<std::string> bad;
    if (f.mode == FiberMode::none) {
        if (f.dimension != 0) bad.push_back("empty fiber with nonzero dimension");
        return bad;
    }
    QMatrix id = QMatrix::identity(f.dimension);
    if (!(f.j1 * f.j1 == -id)) bad.push_back("j1^2 != -Id");
    if (f.mode == FiberMode::hyperkahler) {
        if (!(f.j2 * f.j2 == -id)) bad.push_back("j2^2 != -Id");
        if (!(f.j3 * f.j3 == -id)) bad.push_back("j3^2 != -Id");
        if (!(f.j1 * f.j2 == f.j3)) bad.push_back("j1 j2 != j3");
        if (!(f.j2 * f.j1 == -f.j3)) bad.push_back("j2 j1 != -j3");
    }
    return bad;
}

/// Constant 2-form of the Gram matrix w on the fiber slots of a chart,
/// starting at the given slot offset.
inline RealForm gram_to_form(const QMatrix& w, const ChartSpace& chart, std::size_t offset) {
    RealForm r(chart, 2);
    for (std::size_t a = 0; a < w.rows(); ++a) {
        for (std::size_t b = a + 1; b < w.cols(); ++b) {
            if (w(a, b) == 0) continue;
            r.add_term((Index{1} << (offset + a)) | (Index{1} << (offset + b)),
                       ScalarExpr(w(a, b)));
        }
    }
    return r;
}

/// Integer lattice map on the fiber coordinates.
struct FiberMap {
    QMatrix psi;

    static FiberMap identity(const FlatFiber& f) {
        return {QMatrix::identity(f.dimension)};
    }

    /// Simultaneous rotation of both coordinate pairs; commutes with the
    /// whole quaternionic triple on a standard 4k fiber.
    static FiberMap pair_rotation(const FlatFiber& f) {
        QMatrix b = QMatrix::from_rows({{rat(0), rat(1), rat(0), rat(0)},
                                        {rat(-1), rat(0), rat(0), rat(0)},
                                        {rat(0), rat(0), rat(0), rat(1)},
                                        {rat(0), rat(0), rat(-1), rat(0)}});
        QMatrix psi = b;
        for (std::size_t k = 4; k < f.dimension; k += 4) psi = block_diag(psi, b);
        return {psi};
    }
};

struct FiberMapCheck {
    std::string name;
    bool pass = false;
};

struct FiberMapReport {
    std::vector<FiberMapCheck> checks;

    bool all_pass() const {
        for (const auto& c : checks) {
            if (!c.pass) return false;
        }
        return true;
    }

    std::vector<std::string> failures() const {
        std::vector<std::string> out;
        for (const auto& c : checks) {
            if (!c.pass) out.push_back(c.name);
        }
        return out;
    }
};

/// Exact verification that psi preserves the lattice, the metric, and every
/// complex structure and 2-form the fiber mode claims.
inline FiberMapReport check_fiber_map(const FlatFiber& f, const FiberMap& map) {
    FiberMapReport report;
    auto add = [&](const std::string& name, bool ok) { report.checks.push_back({name, ok}); };

    if (f.mode == FiberMode::none) {
        add("empty", map.psi.rows() == 0 && map.psi.cols() == 0);
        return report;
    }
    const QMatrix& psi = map.psi;
    if (psi.rows() != f.dimension || psi.cols() != f.dimension) {
        add("shape", false);
        return report;
    }
    bool integral = true;
    for (std::size_t i = 0; i < psi.rows(); ++i) {
        for (std::size_t j = 0; j < psi.cols(); ++j) {
            if (!is_integer(psi(i, j))) integral = false;
        }
    }
    add("integer entries", integral);
    Rational d = det(psi);
    add("determinant +-1", d == 1 || d == -1);

    QMatrix id = QMatrix::identity(f.dimension);
    add("isometry", psi.transposed() * psi == id);

    int top = f.mode == FiberMode::hyperkahler ? 3 : 1;
    for (int i = 1; i <= top; ++i) {
        const QMatrix& j = i == 1 ? f.j1 : (i == 2 ? f.j2 : f.j3);
        std::string tag = std::to_string(i);
        add("commutes with j" + tag, psi * j == j * psi);
        add("preserves omega" + tag, psi.transposed() * f.gram(i) * psi == f.gram(i));
    }
    return report;
}

}  // namespace gktorus
