#include <catch2/catch_amalgamated.hpp>

#include <gktorus/gk.hpp>

#include <cmath>
#include <random>

using namespace gktorus;

namespace {

InoueData base_data() {
    static InoueData data = parameters_from_matrix(companion_matrix(1, 0));
    return data;
}

FrameFamily constant_frame() {
    FrameFamily f;  // a1 = b2 = 1, b3 = 0, period 1, glue Id
    return f;
}

}  // namespace

TEST_CASE("coframe of the exponential frame matches the closed forms") {
    FrameFamily f = example31_frame(base_data());
    Coframe cof = build_coframe(f);

    ScalarExpr t = ScalarExpr::t();
    CHECK((cof.e1.coefficient(Index{1} << 0) - exp_of(-t)).is_structural_zero());
    CHECK((cof.f_plus.coefficient(0b110) - exp_of(t)).is_structural_zero());
    CHECK((cof.f_minus.coefficient(0b110) + exp_of(t)).is_structural_zero());

    CHECK((pairing(cof.e1, cof.vec1) - ScalarExpr(1)).is_structural_zero());
    CHECK((pairing(cof.e2, cof.vec2) - ScalarExpr(1)).is_structural_zero());
    CHECK((pairing(cof.e3, cof.vec3) - ScalarExpr(1)).is_structural_zero());
    CHECK(pairing(cof.e1, cof.vec2).is_structural_zero());
    CHECK(pairing(cof.e2, cof.vec3).is_structural_zero());
    CHECK(pairing(cof.e3, cof.vec1).is_structural_zero());
}

TEST_CASE("coframe duality on a frame with polynomial coefficients") {
    ScalarExpr t = ScalarExpr::t();
    FrameFamily f;
    f.a1 = ScalarExpr(1) + t * t;
    f.b2 = ScalarExpr(1) + t;
    f.b3 = t * ScalarExpr(rat(1, 2));
    Coframe cof = build_coframe(f);

    const ChartVector* vecs[3] = {&cof.vec1, &cof.vec2, &cof.vec3};
    const RealForm* forms[3] = {&cof.e1, &cof.e2, &cof.e3};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            ScalarExpr p = pairing(*forms[i], *vecs[j]) - ScalarExpr(i == j ? 1 : 0);
            auto z = p.zero_check(0.0, 1.0, f.env);
            INFO("pairing e^" << i + 1 << "(e_" << j + 1 << ")");
            CHECK(z.max_abs <= 1e-12);
        }
    }
}

TEST_CASE("degenerate frames are refused") {
    ScalarExpr t = ScalarExpr::t();
    FrameFamily vanishing_a1;
    vanishing_a1.a1 = t - ScalarExpr(rat(1, 2));
    CHECK_THROWS_AS(build_coframe(vanishing_a1), DegenerateFrameError);

    FrameFamily vanishing_l;
    vanishing_l.b2 = t - ScalarExpr(rat(1, 2));
    vanishing_l.b3 = ScalarExpr(0);
    CHECK_THROWS_AS(build_coframe(vanishing_l), DegenerateFrameError);
}

TEST_CASE("frame ratios of the exponential frame are the pinned constants") {
    FrameFamily f = example31_frame(base_data());
    ScalarExpr l = f.l();
    CHECK((f.v() / l + ScalarExpr(rat(1, 2))).is_structural_zero());
    CHECK((f.w() / l + ScalarExpr::param("p")).is_structural_zero());
}

TEST_CASE("frame conditions hold for the exponential frame") {
    FrameFamily f = example31_frame(base_data());
    FrameConditionReport report = check_frame_conditions(f);
    CHECK(report.all_pass());
    CHECK(report.item("glue").residual <= 1e-9);
    CHECK(report.item("boundary").residual <= 1e-12);
    CHECK(report.constant_value == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("frame conditions hold for every enumerated matrix") {
    for (const auto& entry : enumerate_admissible(-6, 6, -6, 6)) {
        InoueData data = parameters_from_matrix(entry.companion);
        FrameConditionReport report = check_frame_conditions(example31_frame(data));
        INFO("m = " << entry.m << ", n = " << entry.n);
        CHECK(report.all_pass());
        CHECK(report.constant_value == Catch::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("scaled exponential frames glue along the same flow") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> amp(0.5, 2.0);
    std::uniform_real_distribution<double> phase(0.0, 6.28);
    for (int trial = 0; trial < 5; ++trial) {
        FrameFamily f = scaled_exponential_frame(base_data(), amp(rng), phase(rng), amp(rng));
        FrameConditionReport report = check_frame_conditions(f);
        CHECK(report.all_pass());
        CHECK(report.item("constancy").residual <= 1e-9);
    }
}

TEST_CASE("frame with growing b2 fails glue and constancy") {
    ScalarExpr t = ScalarExpr::t();
    FrameFamily f;
    f.b2 = ScalarExpr(1) + t;
    FrameConditionReport report = check_frame_conditions(f);
    CHECK(!report.item("glue").pass);
    CHECK(!report.item("constancy").pass);
    CHECK(!report.item("boundary").pass);
    CHECK(report.item("constancy").residual > 0.1);
}

TEST_CASE("constant frame passes with constant value zero") {
    FrameConditionReport report = check_frame_conditions(constant_frame());
    CHECK(report.all_pass());
    CHECK(report.constant_value == 0.0);
}

TEST_CASE("split structure over a flat 4-torus in one-structure mode") {
    FrameFamily f = example31_frame(base_data());
    FlatFiber fiber = FlatFiber::standard(1, FiberMode::kahler);
    GKStructure s = assemble_gk(f, fiber, FiberMap::identity(fiber));
    CHECK(s.split);

    GKCertificate cert = verify_gk(s, 33);
    for (const auto& item : cert.items) {
        INFO(item.name << " residual " << item.max_residual);
        CHECK(item.pass);
    }
    CHECK(!cert.torsion_free);
    CHECK(cert.h_class_nonzero);
    CHECK(cert.torsion_symbolic);

    // torsion is exactly -dx^1^dx^2^dx^3
    RealForm expected = RealForm::monomial(s.chart, {0, 1, 2}, ScalarExpr(-1));
    RealForm diff = (s.torsion - expected).pruned();
    CHECK(diff.terms().empty());

    SplitClassification cls = classify_split(s);
    CHECK(cls.is_split());
    CHECK(max_abs(cls.sigma) == 0);
}

TEST_CASE("two-structure mode is non-split with the quaternionic bivector") {
    FrameFamily f = example31_frame(base_data());
    FlatFiber fiber = FlatFiber::standard(1, FiberMode::hyperkahler);
    FiberMap psi = FiberMap::pair_rotation(fiber);
    REQUIRE(check_fiber_map(fiber, psi).all_pass());

    GKStructure s = assemble_gk(f, fiber, psi);
    CHECK(!s.split);

    GKCertificate cert = verify_gk(s, 33);
    for (const auto& item : cert.items) {
        INFO(item.name << " residual " << item.max_residual);
        CHECK(item.pass);
    }

    SplitClassification cls = classify_split(s);
    CHECK(!cls.is_split());
    CHECK(cls.sigma_matches_fiber);
    // fiber block of sigma is j3 = -omega_3^{-1}; everything else vanishes
    for (std::size_t a = 0; a < 4; ++a) {
        for (std::size_t b = 0; b < 4; ++b) {
            CHECK(cls.sigma(3 + a, 3 + b) == fiber.j3(a, b));
        }
    }
    CHECK(cls.sigma(0, 0) == 0);
    CHECK(cls.sigma(0, 7) == 0);
    CHECK(cls.sigma(7, 0) == 0);
}

TEST_CASE("empty fiber reduces to the three-torus structure") {
    FrameFamily f = example31_frame(base_data());
    GKStructure s = assemble_gk(f, FlatFiber::none(), FiberMap{});
    CHECK(s.chart.dim() == 4);
    CHECK(s.split);
    GKCertificate cert = verify_gk(s, 33);
    CHECK(cert.all_pass());
    CHECK(cert.h_class_nonzero);
}

TEST_CASE("verification over every enumerated matrix, both modes") {
    auto list = enumerate_admissible(-6, 6, -6, 6);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> amp(0.5, 2.0);
    for (const auto& entry : list) {
        InoueData data = parameters_from_matrix(entry.companion);
        FrameFamily f = scaled_exponential_frame(data, amp(rng), amp(rng), amp(rng));

        FlatFiber split_fiber = FlatFiber::standard(1, FiberMode::kahler);
        GKStructure split_s = assemble_gk(f, split_fiber, FiberMap::identity(split_fiber));
        GKCertificate split_cert = verify_gk(split_s, 9);
        INFO("m = " << entry.m << ", n = " << entry.n << " (one-structure)");
        CHECK(split_cert.all_pass());
        CHECK(split_s.split);

        FlatFiber hk = FlatFiber::standard(1, FiberMode::hyperkahler);
        GKStructure hk_s = assemble_gk(f, hk, FiberMap::pair_rotation(hk));
        GKCertificate hk_cert = verify_gk(hk_s, 9);
        INFO("m = " << entry.m << ", n = " << entry.n << " (two-structure)");
        CHECK(hk_cert.all_pass());
        CHECK(!hk_s.split);
        CHECK(classify_split(hk_s).sigma_matches_fiber);
    }
}

TEST_CASE("corrupted operator fails the certificate loudly") {
    FrameFamily f = example31_frame(base_data());
    FlatFiber fiber = FlatFiber::standard(1, FiberMode::kahler);
    GKStructure s = assemble_gk(f, fiber, FiberMap::identity(fiber));

    SECTION("sign flip on the e1 image breaks the square") {
        s.i_plus(s.time_index(), 0) = rat(-1);
        s.refresh_charts();
        GKCertificate cert = verify_gk(s, 9);
        CHECK(!cert.item("complex_squares").pass);
        CHECK(cert.item("complex_squares").max_residual >= 1.0);
    }

    SECTION("reversed rotation block keeps the square but breaks the metric pairing") {
        s.i_plus(2, 1) = rat(-1);
        s.i_plus(1, 2) = rat(1);
        s.refresh_charts();
        GKCertificate cert = verify_gk(s, 9);
        CHECK(cert.item("complex_squares").pass);
        CHECK(!cert.item("metric_compatibility").pass);
        CHECK(cert.item("metric_compatibility").max_residual >= 1.0);
    }
}

TEST_CASE("lattice map preserving only the first structure is rejected in two-structure mode") {
    FlatFiber hk = FlatFiber::standard(1, FiberMode::hyperkahler);
    FiberMap j1_map{hk.j1};
    FiberMapReport hk_report = check_fiber_map(hk, j1_map);
    CHECK(!hk_report.all_pass());
    bool omega2_failed = false;
    for (const auto& c : hk_report.checks) {
        if (c.name == "preserves omega2" && !c.pass) omega2_failed = true;
        if (c.name == "preserves omega1") CHECK(c.pass);
        if (c.name == "commutes with j1") CHECK(c.pass);
    }
    CHECK(omega2_failed);

    FlatFiber k = FlatFiber::standard(1, FiberMode::kahler);
    CHECK(check_fiber_map(k, FiberMap{k.j1}).all_pass());

    FrameFamily f = example31_frame(base_data());
    CHECK_THROWS_AS(assemble_gk(f, hk, j1_map), GKAssemblyError);
    CHECK_THROWS_WITH(assemble_gk(f, hk, j1_map),
                      Catch::Matchers::ContainsSubstring("preserves omega2"));
}

TEST_CASE("bad frame is rejected at assembly with the failing items") {
    ScalarExpr t = ScalarExpr::t();
    FrameFamily f;
    f.b2 = ScalarExpr(1) + t;
    FlatFiber fiber = FlatFiber::standard(1, FiberMode::kahler);
    CHECK_THROWS_WITH(assemble_gk(f, fiber, FiberMap::identity(fiber)),
                      Catch::Matchers::ContainsSubstring("frame glue"));
    CHECK_THROWS_WITH(assemble_gk(f, fiber, FiberMap::identity(fiber)),
                      Catch::Matchers::ContainsSubstring("frame constancy"));
}

TEST_CASE("constant frame yields a torsion-free structure") {
    FlatFiber fiber = FlatFiber::standard(1, FiberMode::kahler);
    GKStructure s = assemble_gk(constant_frame(), fiber, FiberMap::identity(fiber));
    GKCertificate cert = verify_gk(s, 33);
    CHECK(cert.all_pass());
    CHECK(cert.torsion_free);
    CHECK(!cert.h_class_nonzero);
    CHECK(s.torsion.pruned().terms().empty());
}

TEST_CASE("bracket table agrees with central differences") {
    FrameFamily fam = example31_frame(base_data());
    FlatFiber fiber = FlatFiber::standard(1, FiberMode::hyperkahler);
    GKStructure s = assemble_gk(fam, fiber, FiberMap::pair_rotation(fiber));

    const double h = 1e-5;
    std::size_t n = s.frame_dim();
    std::size_t ti = s.time_index();
    for (double frac : {0.25, 0.5, 0.8}) {
        double t = frac * fam.period;
        for (std::size_t c = 0; c < 3; ++c) {
            auto table = detail::frame_bracket(s, ti, c);
            for (std::size_t mu = 0; mu < n; ++mu) {
                double fd = (s.e_inv_full(mu, c).eval(t + h, fam.env) -
                             s.e_inv_full(mu, c).eval(t - h, fam.env)) /
                            (2.0 * h);
                double closed = 0.0;
                for (std::size_t d = 0; d < n; ++d) {
                    if (table[d].is_structural_zero()) continue;
                    closed += table[d].eval(t, fam.env) * s.e_inv_full(mu, d).eval(t, fam.env);
                }
                CHECK(std::fabs(fd - closed) <= 1e-5);
            }
        }
    }
}

TEST_CASE("lattice map pullback fixes the fiber forms it preserves") {
    FlatFiber fiber = FlatFiber::standard(1, FiberMode::hyperkahler);
    FiberMap psi = FiberMap::pair_rotation(fiber);
    ChartSpace chart = ChartSpace::mapping_torus(4);
    QMatrix full = block_diag(QMatrix::identity(3), psi.psi);
    for (int i = 1; i <= 3; ++i) {
        RealForm w = gram_to_form(fiber.gram(i), chart, 3);
        RealForm diff = (pullback_linear(w, full) - w).pruned();
        INFO("omega_" << i);
        CHECK(diff.terms().empty());
    }
}
