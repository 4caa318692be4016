// Command line front end. Every subcommand produces a RunReport: one record
// per verified fact, printed as text and optionally written as deterministic
// JSON. Exit codes: 0 all checks pass, 1 a check failed, 2 the input matrix
// is not admissible, 64 bad usage or a malformed config.
#include <CLI11.hpp>

#include <gktorus/checks.hpp>
#include <gktorus/config.hpp>
#include <gktorus/report.hpp>

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitNotAdmissible = 2;
constexpr int kExitUsage = 64;

struct GlobalOptions {
    int grid = 33;
    double tol = 1e-9;
    std::string json_path;
    long threads = 1;
};

long threads_from_env() {
    const char* env = std::getenv("GKTORUS_THREADS");
    if (env == nullptr || *env == '\0') return 1;
    char* end = nullptr;
    long value = std::strtol(env, &end, 10);
    if (end == nullptr || *end != '\0' || value <= 0) {
        throw gktorus::ConfigError("GKTORUS_THREADS must be a positive integer");
    }
    return value;
}

/// Prints the text report, writes the JSON file when requested, and maps the
/// outcome to an exit code. Strict mode counts registered deviations as
/// failures; the default only fails on unexpected ones.
int finish(gktorus::RunReport& report, const GlobalOptions& opt,
           std::chrono::steady_clock::time_point start, bool strict = true) {
    report.threads = opt.threads;
    report.wall_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    std::cout << text_of(report);
    if (!opt.json_path.empty()) {
        std::ofstream out(opt.json_path, std::ios::binary);
        if (!out) throw gktorus::ConfigError("cannot write JSON report: " + opt.json_path);
        out << json_of(report).dump();
    }
    bool ok = strict ? report.overall_pass() : report.attainable_pass();
    return ok ? kExitPass : kExitCheckFailure;
}

gktorus::cfg::Json load_config(const std::string& path, gktorus::RunReport& report) {
    std::string text = gktorus::cfg::read_file(path);
    report.input_digest = gktorus::digest(text);
    return gktorus::cfg::parse_json(text, path);
}

int run_solve_inoue(const GlobalOptions& opt, const std::string& matrix_path,
                    const std::vector<std::int64_t>& range) {
    using namespace gktorus;
    auto start = std::chrono::steady_clock::now();
    RunReport report;
    report.command = "solve-inoue";

    if (matrix_path.empty() == range.empty()) {
        std::cerr << "solve-inoue takes a matrix file or --enumerate, not both\n";
        return kExitUsage;
    }

    if (!range.empty()) {
        std::string seed = "enumerate";
        for (std::int64_t v : range) seed += " " + std::to_string(v);
        report.input_digest = digest(seed);
        auto list = enumerate_admissible(range[0], range[1], range[2], range[3]);
        JsonValue pairs = JsonValue::array();
        double worst_conj = 0.0, worst_lat = 0.0;
        for (const auto& e : list) {
            InoueData data = parameters_from_matrix(e.companion);
            worst_conj = std::max(worst_conj, data.residual);
            worst_lat = std::max(worst_lat, lattice_residual(data));
            JsonValue row = JsonValue::object();
            row["m"] = e.m;
            row["n"] = e.n;
            row["alpha"] = data.alpha;
            row["conjugacy_residual"] = data.residual;
            pairs.push_back(std::move(row));
            std::cout << "admissible: (" << e.m << "," << e.n << ")\n";
        }
        report.data["pair_count"] = static_cast<std::int64_t>(list.size());
        report.data["pairs"] = std::move(pairs);
        report.add("scan found admissible pairs", !list.empty(),
                   std::to_string(list.size()) + " pairs");
        if (!list.empty()) {
            report.add_residual("conjugacy residual", worst_conj, 1e-8);
            report.add_residual("lattice rounding residual", worst_lat, 1e-6);
        }
        return finish(report, opt, start);
    }

    cfg::Json j = load_config(matrix_path, report);
    QMatrix q = cfg::matrix_from(j);
    SpectrumClassification cls = classify_spectrum(q);
    if (!cls.admissible) {
        std::cout << "not admissible: " << cls.reason << "\n";
        return kExitNotAdmissible;
    }
    InoueData data = parameters_from_matrix(q);
    report.data["solution"] = json_of(data);
    report.add("spectrum admissible", true,
               "m=" + std::to_string(cls.m) + " n=" + std::to_string(cls.n));
    report.add_residual("conjugacy residual", data.residual, 1e-8);
    report.add_residual("lattice rounding residual", lattice_residual(data), 1e-6);
    return finish(report, opt, start);
}

int run_verify_gk(const GlobalOptions& opt, const std::string& config_path) {
    using namespace gktorus;
    auto start = std::chrono::steady_clock::now();
    RunReport report;
    report.command = "verify-gk";

    cfg::Json j = load_config(config_path, report);
    QMatrix q = cfg::matrix_from(j);
    InoueData data = parameters_from_matrix(q);
    FrameFamily frame =
        j.contains("frame") ? cfg::frame_from(j.at("frame"), data) : example31_frame(data);
    FlatFiber fiber = cfg::fiber_from(j.contains("fiber") ? j.at("fiber") : cfg::Json());
    FiberMap map = cfg::fiber_map_from(j.contains("map") ? j.at("map") : cfg::Json(), fiber);

    try {
        GKStructure s = assemble_gk(frame, fiber, map, opt.grid);
        report.add("assembly", true);
        GKCertificate cert = verify_gk(s, opt.grid, opt.tol);
        for (const auto& item : cert.items) {
            report.add_residual(item.name, item.max_residual, item.tolerance);
        }
        report.data["certificate"] = json_of(cert);
        report.data["torsion"] = json_of(s.torsion);

        SplitClassification cls = classify_split(s);
        JsonValue c = JsonValue::object();
        c["split"] = cls.is_split();
        c["sigma_matches_fiber"] = cls.sigma_matches_fiber;
        report.data["classification"] = std::move(c);

        if (j.contains("expect")) {
            const cfg::Json& e = j.at("expect");
            if (e.contains("split")) {
                report.add("split classification matches expectation",
                           cls.is_split() == e.at("split").get<bool>(),
                           cls.is_split() ? "split" : "non-split");
            }
            if (e.contains("sigma_matches_fiber")) {
                report.add("Poisson block matches the fiber form",
                           cls.sigma_matches_fiber == e.at("sigma_matches_fiber").get<bool>());
            }
            if (e.contains("torsion_is_minus_dx123") &&
                e.at("torsion_is_minus_dx123").get<bool>()) {
                RealForm expected = RealForm::monomial(s.chart, {0, 1, 2}, ScalarExpr(-1));
                report.add("torsion equals minus dx^123 exactly",
                           (s.torsion - expected).pruned().terms().empty());
            }
            if (e.contains("h_class_nonzero")) {
                report.add("torsion class nonvanishing matches expectation",
                           cert.h_class_nonzero == e.at("h_class_nonzero").get<bool>());
            }
        }
    } catch (const GKAssemblyError& e) {
        report.add("assembly", false, e.what());
    }
    return finish(report, opt, start);
}

int run_cohomology(const GlobalOptions& opt, const std::string& config_path) {
    using namespace gktorus;
    auto start = std::chrono::steady_clock::now();
    RunReport report;
    report.command = "cohomology";

    cfg::Json j = load_config(config_path, report);
    QMatrix base = cfg::matrix_from(j);
    CohomologyTable table;
    if (j.contains("fiber_map") && !j.at("fiber_map").is_null()) {
        QMatrix psi = cfg::matrix_from(j.at("fiber_map"));
        table = mapping_torus_cohomology(
            PullbackAction::from_coordinate_map(block_diag(base, psi)));

        PullbackAction rho = PullbackAction::from_coordinate_map(base);
        PullbackAction psi_action = PullbackAction::from_coordinate_map(psi);
        bool factorized = true, totals_match = true;
        std::vector<std::size_t> fixed(table.dims.size(), 0);
        for (std::size_t r = 0; r + 1 < table.dims.size(); ++r) {
            TensorFixedReport rep = tensor_fixed_spaces(rho, psi_action, r);
            factorized = factorized && rep.factorization_consistent;
            fixed[r] = rep.total_direct;
            std::size_t expect = fixed[r] + (r == 0 ? 0 : fixed[r - 1]);
            totals_match = totals_match && table.dims[r] == expect;
        }
        report.add("fixed-space cross-check", factorized && totals_match);
        report.data["parity"] = json_of(b1_parity_report(rho, psi_action));
    } else {
        table = mapping_torus_cohomology(PullbackAction::from_coordinate_map(base));
    }
    report.data["table"] = json_of(table, true);
    report.add("Euler characteristic vanishes", table.euler_characteristic() == 0);
    if (j.contains("expect_dims")) {
        std::vector<std::size_t> expected = cfg::dims_from(j, "expect_dims");
        CheckRecord& c = report.add("table matches expectation", table.dims == expected);
        c.dims = table.dims;
    }
    return finish(report, opt, start);
}

int run_formality(const GlobalOptions& opt, const std::string& config_path) {
    using namespace gktorus;
    auto start = std::chrono::steady_clock::now();
    RunReport report;
    report.command = "formality";

    cfg::Json j = load_config(config_path, report);
    if (j.contains("cdga")) {
        CDGA m = cfg::cdga_from(j.at("cdga"));
        std::size_t max_degree = j.value("max_degree", std::size_t{4});
        bool closes = true;
        std::string why;
        try {
            m.check_differential();
        } catch (const AlgebraError& e) {
            closes = false;
            why = e.what();
        }
        report.add("differential squares to zero", closes, why);
        CohomologyTable table = cdga_cohomology(m, max_degree);
        report.data["table"] = json_of(table, true);
        if (j.contains("expect_dims")) {
            std::vector<std::size_t> expected = cfg::dims_from(j, "expect_dims");
            CheckRecord& c = report.add("table matches expectation", table.dims == expected);
            c.dims = table.dims;
        }
        if (j.contains("classes")) {
            auto nu = cfg::classes_from(m, j.at("classes"));
            QuasiIsoReport cert = check_quasi_iso(m, nu, max_degree);
            report.data["certificate"] = json_of(cert);
            report.add("classifying map is a quasi-isomorphism up to degree " +
                           std::to_string(max_degree),
                       cert.quasi_iso);
        }
    } else if (j.contains("actions")) {
        std::vector<QMatrix> actions = {QMatrix::identity(1)};
        for (const cfg::Json& row : j.at("actions")) actions.push_back(cfg::matrix_from(row));
        FormalityTestResult res = bfm_formality_test(actions);
        report.data["eigenvalue_test"] = json_of(res);
        report.add("eigenvalue test ran", true, res.verdict);
        if (j.contains("expect_verdict")) {
            report.add("verdict matches expectation",
                       res.verdict == j.at("expect_verdict").get<std::string>(), res.verdict);
        }
    } else {
        throw ConfigError("formality config needs a cdga or an actions list");
    }
    return finish(report, opt, start);
}

gktorus::HodgeTable hodge_from_spec(const gktorus::cfg::Json& j) {
    using namespace gktorus;
    if (j.is_string()) {
        if (j.get<std::string>() == "inoue-surface") return inoue_hodge();
        throw ConfigError("unknown Hodge table name: " + j.get<std::string>());
    }
    if (j.is_object() && j.contains("torus")) {
        return torus_hodge(j.at("torus").get<std::size_t>());
    }
    throw ConfigError("Hodge table spec must be \"inoue-surface\" or {\"torus\": n}");
}

int run_borel(const GlobalOptions& opt, const std::string& config_path, bool degenerate,
              const std::string& justification) {
    using namespace gktorus;
    auto start = std::chrono::steady_clock::now();
    RunReport report;
    report.command = "borel";

    cfg::Json j = load_config(config_path, report);
    HodgeTable base = hodge_from_spec(cfg::require(j, "base"));
    HodgeTable fiber = hodge_from_spec(cfg::require(j, "fiber"));
    BorelPage page = borel_e2(base, fiber);
    report.data["page"] = json_of(page);

    CollapsedHodge collapsed = collapse(page, degenerate, justification);
    JsonValue c = JsonValue::object();
    c["table"] = json_of(collapsed.table);
    c["exact"] = collapsed.exact;
    c["note"] = collapsed.note;
    report.data["collapsed"] = std::move(c);

    bool kunneth_ok = true;
    long long n = static_cast<long long>(collapsed.table.complex_dim);
    for (long long p = 0; p <= n; ++p) {
        for (long long q = 0; q <= n; ++q) {
            std::size_t expect = 0;
            for (long long a = 0; a <= p; ++a) {
                for (long long b = 0; b <= q; ++b) {
                    expect += base.at(a, b) * fiber.at(p - a, q - b);
                }
            }
            kunneth_ok = kunneth_ok && collapsed.table.at(p, q) == expect;
        }
    }
    report.add("second page totals the bigraded convolution", kunneth_ok);

    if (j.contains("expect")) {
        const cfg::Json& e = j.at("expect");
        if (e.contains("h01")) {
            report.add("h^{0,1} matches expectation",
                       collapsed.table.at(0, 1) == e.at("h01").get<std::size_t>(),
                       "measured " + std::to_string(collapsed.table.at(0, 1)));
        }
        if (e.contains("exact")) {
            report.add("degeneration status matches expectation",
                       collapsed.exact == e.at("exact").get<bool>(), collapsed.note);
        }
    }
    return finish(report, opt, start);
}

int run_all_checks(const GlobalOptions& opt, bool strict) {
    using namespace gktorus;
    auto start = std::chrono::steady_clock::now();
    RunReport report;
    report.command = "all-paper-checks";
    report.input_digest =
        digest("grid=" + std::to_string(opt.grid) + " tol=" + std::to_string(opt.tol));

    PaperChecks all = run_all_paper_checks(opt.grid, opt.tol);
    for (const auto& criterion : all.criteria) {
        for (const auto& item : criterion.items) {
            CheckRecord c = item;
            c.name = std::to_string(criterion.index) + ": " + item.name;
            report.add(std::move(c));
        }
    }
    report.data["criteria"] = json_of(all);
    return finish(report, opt, start, strict);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mapping-torus solvers, bihermitian verification, and cohomology tables"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions opt;
    app.add_option("--grid", opt.grid, "sample points per period for numeric checks")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--tol", opt.tol, "residual tolerance for numeric checks")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--json", opt.json_path, "write the run report as JSON to this path");

    auto* solve = app.add_subcommand("solve-inoue", "solve an integer matrix into torus data");
    std::string matrix_path;
    std::vector<std::int64_t> range;
    solve->add_option("matrix", matrix_path, "JSON file holding the 3x3 integer matrix");
    solve->add_option("--enumerate", range, "scan traces: m_lo m_hi n_lo n_hi")->expected(4);

    auto* verify = app.add_subcommand("verify-gk", "assemble and verify a bihermitian pair");
    std::string verify_config;
    verify->add_option("config", verify_config, "JSON config")->required();

    auto* coh = app.add_subcommand("cohomology", "mapping-torus cohomology tables");
    std::string coh_config;
    coh->add_option("config", coh_config, "JSON config")->required();

    auto* form = app.add_subcommand("formality", "algebra cohomology and formality tests");
    std::string form_config;
    form->add_option("config", form_config, "JSON config")->required();

    auto* borel = app.add_subcommand("borel", "fibration second page and Hodge numbers");
    std::string borel_config;
    bool degenerate = false;
    std::string justification;
    borel->add_option("config", borel_config, "JSON config")->required();
    auto* just_opt =
        borel->add_option("--justification", justification, "why the page degenerates");
    borel->add_flag("--degenerate", degenerate, "assert the page degenerates at E2")
        ->needs(just_opt);

    auto* all = app.add_subcommand("all-paper-checks", "run every aggregated criterion");
    bool strict = false;
    all->add_flag("--strict", strict, "count registered deviations as failures");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        opt.threads = threads_from_env();
        if (solve->parsed()) return run_solve_inoue(opt, matrix_path, range);
        if (verify->parsed()) return run_verify_gk(opt, verify_config);
        if (coh->parsed()) return run_cohomology(opt, coh_config);
        if (form->parsed()) return run_formality(opt, form_config);
        if (borel->parsed()) return run_borel(opt, borel_config, degenerate, justification);
        if (all->parsed()) return run_all_checks(opt, strict);
        std::cerr << "no subcommand selected\n";
        return kExitUsage;
    } catch (const gktorus::NotAdmissibleError& e) {
        std::cout << "not admissible: " << e.what() << "\n";
        return kExitNotAdmissible;
    } catch (const gktorus::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
