// Aggregated verification runs: every headline reproduction this library
// makes, grouped into numbered criteria with one record per verified fact.
// The command line front end and the acceptance runner both drive this.
#pragma once

#include <gktorus/bfm.hpp>
#include <gktorus/cdga.hpp>
#include <gktorus/cohomology.hpp>
#include <gktorus/fiber.hpp>
#include <gktorus/frame.hpp>
#include <gktorus/gk.hpp>
#include <gktorus/inoue.hpp>
#include <gktorus/matrix.hpp>
#include <gktorus/models.hpp>
#include <gktorus/report.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace gktorus {

struct CriterionResult {
    int index = 0;
    std::string name;
    std::vector<CheckRecord> items;
    double wall_s = 0.0;

    bool pass() const {
        for (const auto& c : items) {
            if (!c.pass) return false;
        }
        return true;
    }

    /// True when every failing item is a registered deviation.
    bool attainable_pass() const {
        for (const auto& c : items) {
            if (!c.pass && !c.expected_fail) return false;
        }
        return true;
    }
};

struct PaperChecks {
    int grid = 33;
    double tol = 1e-9;
    std::vector<CriterionResult> criteria;

    bool pass() const {
        for (const auto& c : criteria) {
            if (!c.pass()) return false;
        }
        return true;
    }

    bool attainable_pass() const {
        for (const auto& c : criteria) {
            if (!c.attainable_pass()) return false;
        }
        return true;
    }
};

namespace detail {

inline CheckRecord make_check(std::string name, bool pass, std::string note = "") {
    CheckRecord r;
    r.name = std::move(name);
    r.pass = pass;
    r.note = std::move(note);
    return r;
}

inline CheckRecord make_residual_check(std::string name, double residual, double tolerance,
                                       std::string note = "") {
    CheckRecord r;
    r.name = std::move(name);
    r.pass = residual <= tolerance;
    r.residual = residual;
    r.tolerance = tolerance;
    r.note = std::move(note);
    return r;
}

inline std::string dims_text(const std::vector<std::size_t>& dims) {
    std::string s = "(";
    for (std::size_t k = 0; k < dims.size(); ++k) {
        if (k) s += ",";
        s += std::to_string(dims[k]);
    }
    return s + ")";
}

inline QMatrix random_int_qmatrix(std::mt19937& gen, std::size_t rows, std::size_t cols, int lo,
                                  int hi) {
    std::uniform_int_distribution<int> entry(lo, hi);
    QMatrix m(rows, cols, Rational(0));
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rat(entry(gen));
    }
    return m;
}

/// Integer fraction-free elimination; the rank oracle kept deliberately
/// separate from the library's rational reduction.
inline std::size_t bareiss_int_rank(const QMatrix& q) {
    std::size_t rows = q.rows(), cols = q.cols();
    std::vector<std::vector<BigInt>> m(rows, std::vector<BigInt>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) m[i][j] = numerator(q(i, j));
    }
    BigInt prev(1);
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t lead = rank;
        while (lead < rows && m[lead][col] == 0) ++lead;
        if (lead == rows) continue;
        std::swap(m[rank], m[lead]);
        for (std::size_t i = rank + 1; i < rows; ++i) {
            for (std::size_t j = col + 1; j < cols; ++j) {
                m[i][j] = (m[rank][col] * m[i][j] - m[i][col] * m[rank][j]) / prev;
            }
            m[i][col] = 0;
        }
        prev = m[rank][col];
        ++rank;
    }
    return rank;
}

/// Random product of integer shears and rotation units commuting with the
/// standard complex structure of the flat four-torus; determinant one.
inline QMatrix random_complex_unimodular(std::mt19937& gen, int ops = 10) {
    std::uniform_int_distribution<int> small(-2, 2);
    std::uniform_int_distribution<int> kind(0, 3);
    auto block_entry = [](int x, int y) {
        QMatrix c(2, 2, Rational(0));
        c(0, 0) = rat(x);
        c(0, 1) = rat(y);
        c(1, 0) = rat(y);
        c(1, 1) = rat(-x);
        return c;
    };
    QMatrix psi = QMatrix::identity(4);
    for (int step = 0; step < ops; ++step) {
        QMatrix g = QMatrix::identity(4);
        switch (kind(gen)) {
            case 0: {  // upper shear
                QMatrix c = block_entry(small(gen), small(gen));
                for (std::size_t i = 0; i < 2; ++i) {
                    for (std::size_t j = 0; j < 2; ++j) g(i, 2 + j) = c(i, j);
                }
                break;
            }
            case 1: {  // lower shear
                QMatrix c = block_entry(small(gen), small(gen));
                for (std::size_t i = 0; i < 2; ++i) {
                    for (std::size_t j = 0; j < 2; ++j) g(2 + i, j) = c(i, j);
                }
                break;
            }
            case 2: {  // rotation unit on the first pair
                g(0, 0) = rat(0);
                g(0, 1) = rat(-1);
                g(1, 0) = rat(1);
                g(1, 1) = rat(0);
                break;
            }
            default: {  // rotation unit on the second pair
                g(2, 2) = rat(0);
                g(2, 3) = rat(1);
                g(3, 2) = rat(-1);
                g(3, 3) = rat(0);
                break;
            }
        }
        psi = psi * g;
    }
    return psi;
}

/// Frame whose third condition value (1/l)'(1/a1) is genuinely nonconstant.
inline FrameFamily nonconstant_condition_frame(const InoueData& data) {
    ScalarExpr t = ScalarExpr::t();
    ScalarExpr p = ScalarExpr::param("p");
    FrameFamily f;
    f.a1 = exp_of(t);
    f.b2 = exp_of(-(t / 4)) * cos_of(p * t);
    f.b3 = -(exp_of(-(t / 4)) * sin_of(p * t));
    f.period = data.t0;
    f.env = {{"p", data.p}};
    f.glue = rho_at(data.p, data.t0);
    return f;
}

}  // namespace detail

/// Criterion 1: the seven-torus block table computed three independent ways.
inline CriterionResult check_block_table_three_ways() {
    auto start = std::chrono::steady_clock::now();
    CriterionResult c;
    c.index = 1;
    c.name = "block mapping-torus table three ways";

    const std::vector<std::size_t> expected{1, 1, 4, 5, 2, 5, 4, 1, 1};
    InoueData data = parameters_from_matrix(companion_matrix(1, 0));
    FlatFiber fiber = FlatFiber::standard(1, FiberMode::kahler);
    QMatrix psi_coords = FiberMap::pair_rotation(fiber).psi;
    QMatrix block = block_diag(data.a, psi_coords);

    CohomologyTable torus =
        mapping_torus_cohomology(PullbackAction::from_coordinate_map(block));
    CheckRecord& t1 = c.items.emplace_back(
        detail::make_check("exterior-power table", torus.dims == expected));
    t1.dims = torus.dims;

    PullbackAction rho = PullbackAction::from_coordinate_map(data.a);
    PullbackAction psi = PullbackAction::from_coordinate_map(psi_coords);
    std::vector<std::size_t> tensor_dims;
    bool factorized = true;
    std::vector<std::size_t> fixed_by_degree(9, 0);
    for (std::size_t r = 0; r <= 8; ++r) {
        TensorFixedReport rep = tensor_fixed_spaces(rho, psi, r);
        factorized = factorized && rep.factorization_consistent;
        fixed_by_degree[r] = rep.total_direct;
        tensor_dims.push_back(rep.total_direct + (r == 0 ? 0 : fixed_by_degree[r - 1]));
    }
    CheckRecord& t2 = c.items.emplace_back(detail::make_check(
        "tensor fixed-space table", tensor_dims == expected && factorized,
        factorized ? "" : "bidegree factorization mismatch"));
    t2.dims = tensor_dims;

    CDGA model = block_mapping_torus_model();
    CohomologyTable alg = cdga_cohomology(model, 8);
    bool low = true;
    for (std::size_t k = 0; k <= 4; ++k) low = low && alg.dims[k] == expected[k];
    c.items.push_back(detail::make_check("algebra table degrees 0..4", low));

    CheckRecord tail = detail::make_check(
        "algebra table degrees 5..8", alg.dims == expected,
        "free algebra on the listed generators measures " + detail::dims_text(alg.dims) +
            "; closed products of the degree-three generators are unbounded from degree five");
    tail.expected_fail = true;
    tail.dims = alg.dims;
    c.items.push_back(std::move(tail));

    c.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.items.push_back(detail::make_residual_check("runtime under 5 s", c.wall_s, 5.0));
    return c;
}

/// Criterion 2: every admissible pair with |m|, |n| <= 6 solves exactly.
inline CriterionResult check_admissible_scan() {
    auto start = std::chrono::steady_clock::now();
    CriterionResult c;
    c.index = 2;
    c.name = "admissible scan solves and reproduces the surface table";

    auto list = enumerate_admissible(-6, 6, -6, 6);
    bool has_base = false;
    for (const auto& e : list) has_base = has_base || (e.m == 1 && e.n == 0);
    c.items.push_back(detail::make_check("scan nonempty and contains (1,0)",
                                         !list.empty() && has_base,
                                         std::to_string(list.size()) + " pairs"));

    const std::vector<std::size_t> table{1, 1, 0, 1, 1};
    bool b1_ok = true, table_ok = true;
    double worst_residual = 0.0, worst_lattice = 0.0;
    for (const auto& e : list) {
        InoueData data = parameters_from_matrix(e.companion);
        PullbackAction action = PullbackAction::from_coordinate_map(data.a);
        std::size_t fixed =
            kernel_basis(action.h1 - QMatrix::identity(3)).size();
        b1_ok = b1_ok && fixed == 0;
        table_ok = table_ok && mapping_torus_cohomology(action).dims == table;
        worst_residual = std::max(worst_residual, data.residual);
        worst_lattice = std::max(worst_lattice, lattice_residual(data));
    }
    c.items.push_back(detail::make_check("first Betti number equals one", b1_ok));
    c.items.push_back(detail::make_check("de Rham table (1,1,0,1,1)", table_ok));
    c.items.push_back(
        detail::make_residual_check("conjugacy residual", worst_residual, 1e-8));
    c.items.push_back(
        detail::make_residual_check("lattice rounding residual", worst_lattice, 1e-6));

    c.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.items.push_back(detail::make_residual_check("runtime under 10 s", c.wall_s, 10.0));
    return c;
}

/// Criterion 3: the full identity suite in both fiber modes over the scan.
inline CriterionResult check_gk_suite(int grid, double tol) {
    auto start = std::chrono::steady_clock::now();
    CriterionResult c;
    c.index = 3;
    c.name = "generalized Kahler identity suite in both modes";

    auto list = enumerate_admissible(-6, 6, -6, 6);
    FlatFiber split_fiber = FlatFiber::standard(1, FiberMode::kahler);
    FlatFiber hk_fiber = FlatFiber::standard(1, FiberMode::hyperkahler);

    double worst = 0.0;
    bool all_pass = true, split_ok = true, sigma_ok = true, torsion_form_ok = true;
    for (const auto& e : list) {
        InoueData data = parameters_from_matrix(e.companion);
        FrameFamily frame = example31_frame(data);

        GKStructure s = assemble_gk(frame, split_fiber, FiberMap::identity(split_fiber), grid);
        GKCertificate cert = verify_gk(s, grid, tol);
        for (const auto& item : cert.items) {
            worst = std::max(worst, item.max_residual);
            all_pass = all_pass && item.pass;
        }
        torsion_form_ok = torsion_form_ok && cert.torsion_symbolic;
        split_ok = split_ok && classify_split(s).is_split();

        GKStructure h = assemble_gk(frame, hk_fiber, FiberMap::identity(hk_fiber), grid);
        GKCertificate hcert = verify_gk(h, grid, tol);
        for (const auto& item : hcert.items) {
            worst = std::max(worst, item.max_residual);
            all_pass = all_pass && item.pass;
        }
        torsion_form_ok = torsion_form_ok && hcert.torsion_symbolic;
        SplitClassification cls = classify_split(h);
        split_ok = split_ok && !cls.is_split();
        sigma_ok = sigma_ok && cls.sigma_matches_fiber;
    }
    c.items.push_back(detail::make_residual_check(
        "all identity residuals", worst, tol,
        std::to_string(2 * list.size()) + " structures at grid " + std::to_string(grid)));
    c.items.push_back(detail::make_check("every certificate item passes", all_pass));
    c.items.push_back(detail::make_check(
        "torsion matches the chart formula", torsion_form_ok));
    c.items.push_back(detail::make_check(
        "one-structure mode splits, two-structure mode does not", split_ok));
    c.items.push_back(detail::make_check(
        "Poisson block equals the inverse third form with flipped sign", sigma_ok));

    // Exact chart form of the torsion on the base example.
    InoueData base = parameters_from_matrix(companion_matrix(1, 0));
    GKStructure s =
        assemble_gk(example31_frame(base), split_fiber, FiberMap::identity(split_fiber), grid);
    RealForm expected = RealForm::monomial(s.chart, {0, 1, 2}, ScalarExpr(-1));
    c.items.push_back(detail::make_check(
        "base torsion equals minus dx^123 exactly",
        (s.torsion - expected).pruned().terms().empty()));

    c.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return c;
}

/// Criterion 4: corrupted inputs fail loudly.
inline CriterionResult check_negative_controls() {
    auto start = std::chrono::steady_clock::now();
    CriterionResult c;
    c.index = 4;
    c.name = "negative controls are rejected";

    InoueData base = parameters_from_matrix(companion_matrix(1, 0));
    FrameConditionReport bad =
        check_frame_conditions(detail::nonconstant_condition_frame(base));
    c.items.push_back(detail::make_check(
        "nonconstant third condition fails the frame check",
        !bad.item("constancy").pass && !bad.all_pass()));

    FlatFiber fiber = FlatFiber::standard(1, FiberMode::kahler);
    GKStructure s = assemble_gk(example31_frame(base), fiber, FiberMap::identity(fiber), 9);
    s.i_plus(s.time_index(), 0) = rat(-1);
    s.refresh_charts();
    GKCertificate cert = verify_gk(s, 9, 1e-9);
    double residual = 0.0;
    for (const auto& item : cert.items) {
        if (!item.pass) residual = std::max(residual, item.max_residual);
    }
    CheckRecord corrupt = detail::make_check(
        "sign-corrupted operator fails with a large residual",
        !cert.all_pass() && residual >= 0.1);
    corrupt.residual = residual;
    c.items.push_back(std::move(corrupt));

    FlatFiber hk = FlatFiber::standard(1, FiberMode::hyperkahler);
    bool rejected = false;
    std::string message;
    try {
        assemble_gk(example31_frame(base), hk, FiberMap{hk.j1}, 9);
    } catch (const GKAssemblyError& e) {
        message = e.what();
        rejected = message.find("preserves omega2") != std::string::npos;
    }
    c.items.push_back(detail::make_check(
        "map preserving only the first form is rejected in two-structure mode", rejected));

    c.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return c;
}

/// Criterion 5: parity of the first Betti number over random pairs.
inline CriterionResult check_b1_parity() {
    auto start = std::chrono::steady_clock::now();
    CriterionResult c;
    c.index = 5;
    c.name = "first Betti number parity over random pairs";

    auto list = enumerate_admissible(-6, 6, -6, 6);
    FlatFiber fiber = FlatFiber::standard(1, FiberMode::kahler);
    std::mt19937 gen(40961);
    std::uniform_int_distribution<std::size_t> pick(0, list.size() - 1);

    bool odd_ok = true, even_ok = true, sane = true;
    for (int trial = 0; trial < 50; ++trial) {
        const auto& e = list[pick(gen)];
        QMatrix psi_coords = detail::random_complex_unimodular(gen);
        sane = sane && psi_coords * fiber.j1 == fiber.j1 * psi_coords &&
               det(psi_coords) == Rational(1);
        B1ParityReport r =
            b1_parity_report(PullbackAction::from_coordinate_map(e.companion),
                             PullbackAction::from_coordinate_map(psi_coords));
        odd_ok = odd_ok && r.odd && r.kahler_obstruction;
        even_ok = even_ok && r.psi_fixed % 2 == 0;
    }
    c.items.push_back(detail::make_check(
        "random fiber maps commute with the complex structure and are unimodular", sane));
    c.items.push_back(detail::make_check("first Betti number odd in all 50 trials", odd_ok));
    c.items.push_back(
        detail::make_check("fiber fixed space even-dimensional in all 50 trials", even_ok));

    c.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return c;
}

/// Criterion 6: formality certificates and the synthetic eigenvalue tests.
inline CriterionResult check_formality() {
    auto start = std::chrono::steady_clock::now();
    CriterionResult c;
    c.index = 6;
    c.name = "formality certificates and eigenvalue criteria";

    CDGA simple = inoue_mapping_torus_model();
    CohomologyTable simple_table = cdga_cohomology(simple, 4);
    std::map<std::string, AlgebraElement> simple_nu;
    for (const auto& g : simple.generators()) {
        simple_nu[g.name] = simple.generator_element(g.name);
    }
    QuasiIsoReport simple_cert = check_quasi_iso(simple, simple_nu, 4);
    CheckRecord& r1 = c.items.emplace_back(detail::make_check(
        "surface model table and certificate",
        simple_table.dims == std::vector<std::size_t>{1, 1, 0, 1, 1} && simple_cert.quasi_iso));
    r1.dims = simple_table.dims;

    CDGA model = block_mapping_torus_model();
    auto classes = block_model_classes(model);
    QuasiIsoReport low = check_quasi_iso(model, classes, 4);
    c.items.push_back(detail::make_check(
        "block model certificate through degree 4", low.quasi_iso));

    QuasiIsoReport full = check_quasi_iso(model, classes, 8);
    CheckRecord deep = detail::make_check(
        "block model certificate to degree 8", full.quasi_iso,
        "certified in degrees 0..4 only; at degree five the induced map has rank " +
            std::to_string(full.at(5).rank) + " on a " +
            std::to_string(full.at(5).source_dim) + "-dimensional space");
    deep.expected_fail = true;
    c.items.push_back(std::move(deep));

    QMatrix degree_one_free = QMatrix::from_rows({{rat(2), rat(1)}, {rat(1), rat(1)}});
    QMatrix unipotent = QMatrix::from_rows({{rat(1), rat(1)}, {rat(0), rat(1)}});
    FormalityTestResult crit1 = bfm_formality_test(
        {QMatrix::identity(1), degree_one_free, unipotent});
    c.items.push_back(detail::make_check(
        "unipotent two-block reports the first criterion",
        crit1.verdict == "non-formal (criterion 1)" && crit1.criterion_degree == 2));

    QMatrix jordan3 = QMatrix::from_rows(
        {{rat(1), rat(1), rat(0)}, {rat(0), rat(1), rat(1)}, {rat(0), rat(0), rat(1)}});
    FormalityTestResult crit2 = bfm_formality_test(
        {QMatrix::identity(1), degree_one_free, jordan3});
    bool crit2_ok = crit2.verdict == "non-formal (r>=2)" &&
                    crit2.at(2).nilpotency_index == 3;
    c.items.push_back(detail::make_check(
        "size-three Jordan block reports nilpotency three", crit2_ok));

    MinimalModelFragment frag = minimal_model_low_degree(
        {QMatrix::identity(1), degree_one_free, jordan3}, 2);
    bool frag_ok = frag.non_formal && frag.nilpotency_index == 3;
    try {
        frag.algebra.check_differential();
    } catch (const AlgebraError&) {
        frag_ok = false;
    }
    c.items.push_back(
        detail::make_check("minimal-model fragment squares to zero", frag_ok));

    c.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return c;
}

/// Criterion 7: Dolbeault tables, structure equations, and the product page.
inline CriterionResult check_borel(double tol) {
    auto start = std::chrono::steady_clock::now();
    CriterionResult c;
    c.index = 7;
    c.name = "Dolbeault tables and the fibration second page";

    HodgeTable surface = inoue_hodge();
    bool entries_ok = surface.total() == 4 && surface.at(0, 0) == 1 &&
                      surface.at(0, 1) == 1 && surface.at(2, 1) == 1 && surface.at(2, 2) == 1;
    c.items.push_back(detail::make_check("surface Hodge table has the four unit entries",
                                         entries_ok));

    InoueData base = parameters_from_matrix(companion_matrix(1, 0));
    DolbeaultFrameCertificate frame_cert = verify_inoue_dolbeault_frame(base, tol);
    double worst = 0.0;
    for (const auto& item : frame_cert.items) worst = std::max(worst, item.residual);
    CheckRecord& eq = c.items.emplace_back(detail::make_check(
        "complex coframe structure equations", frame_cert.all_pass()));
    eq.residual = worst;
    eq.tolerance = tol;

    HodgeTable fiber = torus_hodge(2);
    CollapsedHodge collapsed = collapse(borel_e2(surface, fiber), true, "product bundle");
    bool kunneth_ok = true;
    for (long long p = 0; p <= 4; ++p) {
        for (long long q = 0; q <= 4; ++q) {
            std::size_t expect = 0;
            for (long long a = 0; a <= 2; ++a) {
                for (long long b = 0; b <= 2; ++b) {
                    if (p - a < 0 || q - b < 0) continue;
                    expect += surface.at(a, b) * fiber.at(p - a, q - b);
                }
            }
            kunneth_ok = kunneth_ok && collapsed.table.at(p, q) == expect;
        }
    }
    c.items.push_back(detail::make_check(
        "collapsed product page equals the bigraded convolution", kunneth_ok));
    c.items.push_back(detail::make_check("h^{0,1} of the product equals three",
                                         collapsed.table.at(0, 1) == 3));

    c.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return c;
}

/// Criterion 8: independent oracles agree with the library primitives.
inline CriterionResult check_oracles() {
    auto start = std::chrono::steady_clock::now();
    CriterionResult c;
    c.index = 8;
    c.name = "oracle equivalences";

    std::mt19937 gen(52711);
    std::uniform_int_distribution<std::size_t> size(1, 8);
    bool kc_ok = true;
    for (int trial = 0; trial < 500; ++trial) {
        std::size_t rows = size(gen), cols = size(gen);
        QMatrix m = detail::random_int_qmatrix(gen, rows, cols, -3, 3);
        KerCoker kc = ker_coker(m);
        std::size_t rank = detail::bareiss_int_rank(m);
        kc_ok = kc_ok && kc.rank == rank && kc.kernel_dim() == cols - rank &&
                kc.coker_dim == rows - rank;
    }
    c.items.push_back(detail::make_check(
        "kernel and cokernel match fraction-free elimination on 500 matrices", kc_ok));

    bool functorial = true;
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = 2 + static_cast<std::size_t>(trial % 4);
        QMatrix a = detail::random_int_qmatrix(gen, n, n, -3, 3);
        QMatrix b = detail::random_int_qmatrix(gen, n, n, -3, 3);
        for (std::size_t k = 2; k <= std::min<std::size_t>(n, 3); ++k) {
            functorial = functorial &&
                         exterior_power_map(a * b, k) ==
                             exterior_power_map(a, k) * exterior_power_map(b, k);
        }
    }
    c.items.push_back(detail::make_check(
        "exterior powers functorial on 200 random products", functorial));

    ScalarExpr t = ScalarExpr::t();
    ScalarExpr p = ScalarExpr::param("p");
    std::vector<ScalarExpr> family = {
        exp_of(t / 3) * cos_of(p * t) + t * t * sin_of(t),
        (ScalarExpr(1) + t * t).pow(-2) * sin_of(p * t),
        exp_of(-(t / 2)) * (cos_of(t) + sin_of(p * t)) * t,
    };
    ParamEnv env{{"p", 0.7}};
    double worst_rel = 0.0;
    const double h = 1e-5;
    for (const ScalarExpr& f : family) {
        for (int i = 0; i <= 20; ++i) {
            double x = 0.1 + 0.15 * i;
            auto [value, dv] = f.eval_with_derivative(x, env);
            (void)value;
            double central = (f.eval(x + h, env) - f.eval(x - h, env)) / (2 * h);
            double rel = std::fabs(dv - central) / std::max(1.0, std::fabs(dv));
            worst_rel = std::max(worst_rel, rel);
        }
    }
    c.items.push_back(detail::make_residual_check(
        "exact derivative versus central differences", worst_rel, 1e-6));

    c.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return c;
}

/// Every aggregated criterion at the given grid and tolerance.
inline PaperChecks run_all_paper_checks(int grid = 33, double tol = 1e-9) {
    PaperChecks all;
    all.grid = grid;
    all.tol = tol;
    all.criteria.push_back(check_block_table_three_ways());
    all.criteria.push_back(check_admissible_scan());
    all.criteria.push_back(check_gk_suite(grid, tol));
    all.criteria.push_back(check_negative_controls());
    all.criteria.push_back(check_b1_parity());
    all.criteria.push_back(check_formality());
    all.criteria.push_back(check_borel(tol));
    all.criteria.push_back(check_oracles());
    return all;
}

inline JsonValue json_of(const CriterionResult& c) {
    JsonValue j = JsonValue::object();
    j["index"] = c.index;
    j["name"] = c.name;
    j["status"] = c.pass() ? "pass" : "fail";
    j["attainable_status"] = c.attainable_pass() ? "pass" : "fail";
    JsonValue items = JsonValue::array();
    for (const auto& item : c.items) items.push_back(json_of(item));
    j["items"] = std::move(items);
    return j;
}

inline JsonValue json_of(const PaperChecks& all) {
    JsonValue j = JsonValue::object();
    j["grid"] = all.grid;
    j["tolerance"] = all.tol;
    j["overall"] = all.pass() ? "pass" : "fail";
    j["attainable"] = all.attainable_pass() ? "pass" : "fail";
    JsonValue rows = JsonValue::array();
    for (const auto& c : all.criteria) rows.push_back(json_of(c));
    j["criteria"] = std::move(rows);
    return j;
}

}  // namespace gktorus
