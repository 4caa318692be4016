#include <gktorus/cohomology.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace gktorus;

namespace {

QMatrix random_int_matrix(std::mt19937& gen, std::size_t rows, std::size_t cols, int lo,
                          int hi) {
    std::uniform_int_distribution<int> dist(lo, hi);
    QMatrix m(rows, cols, Rational(0));
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = dist(gen);
    }
    return m;
}

// Product of random integer shears, so the determinant is exactly 1.
QMatrix random_unimodular(std::mt19937& gen, std::size_t n, int ops = 12) {
    std::uniform_int_distribution<int> pick(0, static_cast<int>(n) - 1);
    std::uniform_int_distribution<int> coeff(-2, 2);
    QMatrix m = QMatrix::identity(n);
    for (int s = 0; s < ops; ++s) {
        int i = pick(gen), j = pick(gen);
        if (i == j) continue;
        Rational k(coeff(gen));
        for (std::size_t c = 0; c < n; ++c) m(i, c) += k * m(j, c);
    }
    return m;
}

// Fraction-free Bareiss elimination rank, kept independent of the library's
// rational row reduction.
std::size_t bareiss_rank(const QMatrix& q) {
    std::size_t rows = q.rows(), cols = q.cols();
    std::vector<std::vector<BigInt>> m(rows, std::vector<BigInt>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            REQUIRE(is_integer(q(i, j)));
            m[i][j] = numerator(q(i, j));
        }
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

QMatrix pair_rotation_coordinates() {
    QMatrix psi(4, 4, Rational(0));
    psi(0, 1) = 1;
    psi(1, 0) = -1;
    psi(2, 3) = 1;
    psi(3, 2) = -1;
    return psi;
}

const InoueData& base_inoue() {
    static InoueData data = parameters_from_matrix(companion_matrix(1, 0));
    return data;
}

PullbackAction base_action() { return PullbackAction::from_coordinate_map(base_inoue().a); }

std::vector<Rational> column_of(const QMatrix& m, const std::vector<Rational>& v) {
    std::vector<Rational> out(m.rows(), Rational(0));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) out[i] += m(i, j) * v[j];
    }
    return out;
}

bool in_kernel(const QMatrix& m, const std::vector<Rational>& v) {
    for (const Rational& x : column_of(m, v)) {
        if (x != 0) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("exterior powers are functorial and top-degree equals the determinant") {
    std::mt19937 gen(4242);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = 2 + static_cast<std::size_t>(trial % 4);
        QMatrix a = random_int_matrix(gen, n, n, -3, 3);
        QMatrix b = random_int_matrix(gen, n, n, -3, 3);
        for (std::size_t k = 0; k <= n; ++k) {
            QMatrix lhs = exterior_power_map(a * b, k);
            QMatrix rhs = exterior_power_map(a, k) * exterior_power_map(b, k);
            REQUIRE(max_abs(lhs - rhs) == Rational(0));
        }
        QMatrix top = exterior_power_map(a, n);
        REQUIRE(top.rows() == 1);
        REQUIRE(top(0, 0) == det(a));
    }
    REQUIRE(max_abs(exterior_power_map(QMatrix::identity(4), 2) - QMatrix::identity(6)) ==
            Rational(0));
    REQUIRE_THROWS_AS(exterior_power_map(QMatrix::identity(3), 4), std::invalid_argument);
}

TEST_CASE("kernel and cokernel dimensions match a fraction-free elimination oracle") {
    std::mt19937 gen(977);
    std::uniform_int_distribution<std::size_t> size(1, 8);
    for (int trial = 0; trial < 500; ++trial) {
        std::size_t rows = size(gen), cols = size(gen);
        QMatrix m = random_int_matrix(gen, rows, cols, -3, 3);
        KerCoker kc = ker_coker(m);
        std::size_t rank = bareiss_rank(m);
        REQUIRE(kc.rank == rank);
        REQUIRE(kc.kernel_dim() == cols - rank);
        REQUIRE(kc.coker_dim == rows - rank);
        REQUIRE(kc.coker_reps.size() == kc.coker_dim);
        for (const auto& v : kc.kernel) REQUIRE(in_kernel(m, v));

        // The representatives together with the columns must span everything.
        QMatrix aug(rows, cols + kc.coker_reps.size(), Rational(0));
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t j = 0; j < cols; ++j) aug(i, j) = m(i, j);
        }
        for (std::size_t j = 0; j < kc.coker_reps.size(); ++j) {
            aug(kc.coker_reps[j], cols + j) = 1;
        }
        REQUIRE(bareiss_rank(aug) == rows);
    }
}

TEST_CASE("zero map has full kernel and cokernel with lowest-index representatives") {
    KerCoker kc = ker_coker(QMatrix(3, 3, Rational(0)));
    REQUIRE(kc.kernel_dim() == 3);
    REQUIRE(kc.coker_dim == 3);
    REQUIRE(kc.coker_reps == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("admissible degree-one action fixes nothing") {
    PullbackAction rho = base_action();
    KerCoker kc = ker_coker(rho.h1 - QMatrix::identity(3));
    REQUIRE(kc.kernel_dim() == 0);
    REQUIRE(kc.coker_dim == 0);
}

TEST_CASE("rotation action on the flat four-torus fixes the expected forms") {
    PullbackAction psi = PullbackAction::from_coordinate_map(pair_rotation_coordinates());

    QMatrix m1 = psi.degree(1) - QMatrix::identity(4);
    REQUIRE(kernel_basis(m1).empty());

    QMatrix m2 = psi.degree(2) - QMatrix::identity(6);
    auto kernel2 = kernel_basis(m2);
    REQUIRE(kernel2.size() == 4);
    // Lexicographic pair basis: 45, 46, 47, 56, 57, 67.
    auto vec = [](std::initializer_list<int> entries) {
        std::vector<Rational> v;
        for (int e : entries) v.emplace_back(e);
        return v;
    };
    REQUIRE(in_kernel(m2, vec({1, 0, 0, 0, 0, 0})));
    REQUIRE(in_kernel(m2, vec({0, 1, 0, 0, 1, 0})));
    REQUIRE(in_kernel(m2, vec({0, 0, 1, -1, 0, 0})));
    REQUIRE(in_kernel(m2, vec({0, 0, 0, 0, 0, 1})));
    REQUIRE_FALSE(in_kernel(m2, vec({0, 1, 0, 0, 0, 0})));

    REQUIRE(kernel_basis(psi.degree(3) - QMatrix::identity(4)).empty());
    REQUIRE(kernel_basis(psi.degree(4) - QMatrix::identity(1)).size() == 1);
}

TEST_CASE("three-torus mapping-torus table") {
    CohomologyTable table = mapping_torus_cohomology(base_action());
    REQUIRE(table.dims == std::vector<std::size_t>{1, 1, 0, 1, 1});
    REQUIRE(table.euler_characteristic() == 0);
    REQUIRE(table.poincare_symmetric());
    REQUIRE(table.reps[0] == std::vector<std::string>{"1"});
    REQUIRE(table.reps[1] == std::vector<std::string>{"theta"});
    REQUIRE(table.reps[2].empty());
    REQUIRE(table.reps[3] == std::vector<std::string>{"dx^{123}"});
    REQUIRE(table.reps[4] == std::vector<std::string>{"theta^dx^{123}"});

    CohomologyTable same = mapping_torus_cohomology(base_action().all_degrees());
    REQUIRE(same.dims == table.dims);
}

TEST_CASE("seven-torus block mapping-torus table") {
    QMatrix block = block_diag(base_inoue().a.transposed(),
                               pair_rotation_coordinates().transposed());
    CohomologyTable table = mapping_torus_cohomology(PullbackAction(block));
    REQUIRE(table.dims == std::vector<std::size_t>{1, 1, 4, 5, 2, 5, 4, 1, 1});
    REQUIRE(table.euler_characteristic() == 0);
    REQUIRE(table.poincare_symmetric());

    auto& h3 = table.reps[3];
    REQUIRE(h3.size() == 5);
    REQUIRE(std::count(h3.begin(), h3.end(), "dx^{123}") == 1);
    std::size_t theta_classes = 0;
    for (const auto& label : h3) {
        if (label.rfind("theta^", 0) == 0) ++theta_classes;
    }
    REQUIRE(theta_classes == 4);
}

TEST_CASE("trivial mapping torus of a torus has binomial Betti numbers") {
    CohomologyTable table = mapping_torus_cohomology(PullbackAction(QMatrix::identity(3)));
    REQUIRE(table.dims == std::vector<std::size_t>{1, 4, 6, 4, 1});
}

TEST_CASE("kunneth convolution") {
    CohomologyTable four_torus = mapping_torus_cohomology(PullbackAction(QMatrix::identity(3)));
    CohomologyTable base = mapping_torus_cohomology(base_action());
    CohomologyTable product = kunneth(four_torus, base);
    REQUIRE(product.dims ==
            std::vector<std::size_t>{1, 5, 10, 11, 10, 11, 10, 5, 1});
    REQUIRE(product.euler_characteristic() ==
            four_torus.euler_characteristic() * base.euler_characteristic());

    CohomologyTable point;
    point.dims = {1};
    point.reps = {{"1"}};
    REQUIRE(kunneth(base, point).dims == base.dims);

    // Labels combine degreewise when both factors carry them.
    REQUIRE(product.reps.size() == product.dims.size());
    for (std::size_t r = 0; r < product.dims.size(); ++r) {
        REQUIRE(product.reps[r].size() == product.dims[r]);
    }
}

TEST_CASE("random unimodular mapping tori have zero Euler characteristic and duality") {
    std::mt19937 gen(31337);
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t n = 2 + static_cast<std::size_t>(trial % 3);
        PullbackAction f(random_unimodular(gen, n));
        CohomologyTable table = mapping_torus_cohomology(f);
        REQUIRE(table.euler_characteristic() == 0);
        REQUIRE(table.poincare_symmetric());
    }
}

TEST_CASE("tensor fixed spaces agree with the factorized form on the block example") {
    PullbackAction rho = base_action();
    PullbackAction psi = PullbackAction::from_coordinate_map(pair_rotation_coordinates());
    QMatrix block = block_diag(rho.h1, psi.h1);

    for (std::size_t r = 0; r <= 7; ++r) {
        TensorFixedReport report = tensor_fixed_spaces(rho, psi, r);
        REQUIRE(report.factorization_consistent);
        QMatrix m = exterior_power_map(block, r);
        std::size_t direct_total = kernel_basis(m - QMatrix::identity(m.rows())).size();
        REQUIRE(report.total_direct == direct_total);
        REQUIRE(report.total_factorized == direct_total);
    }

    TensorFixedReport degree5 = tensor_fixed_spaces(rho, psi, 5);
    bool found = false;
    for (const auto& b : degree5.bidegrees) {
        if (b.i == 3 && b.j == 2) {
            found = true;
            REQUIRE(b.direct_dim == 4);
            REQUIRE(b.factorized_dim == 4);
        } else {
            REQUIRE(b.direct_dim == 0);
        }
    }
    REQUIRE(found);
}

TEST_CASE("tensor fixed spaces of identities give full binomial dimensions") {
    PullbackAction id3(QMatrix::identity(3)), id4(QMatrix::identity(4));
    TensorFixedReport report = tensor_fixed_spaces(id3, id4, 3);
    for (const auto& b : report.bidegrees) {
        REQUIRE(b.direct_dim ==
                detail::binomial(3, b.i) * detail::binomial(4, b.j));
        REQUIRE(b.agree);
    }
}

TEST_CASE("hodge tables") {
    HodgeTable inoue = inoue_hodge();
    REQUIRE(inoue.total() == 4);
    REQUIRE(inoue.at(0, 0) == 1);
    REQUIRE(inoue.at(0, 1) == 1);
    REQUIRE(inoue.at(2, 1) == 1);
    REQUIRE(inoue.at(2, 2) == 1);
    REQUIRE(inoue.at(1, 1) == 0);

    HodgeTable t2 = torus_hodge(2);
    REQUIRE(t2.at(1, 1) == 4);
    REQUIRE(t2.total() == 16);
    REQUIRE_THROWS_AS(t2.at(-1, 0), std::out_of_range);
}

TEST_CASE("borel second page and collapse") {
    BorelPage page = borel_e2(inoue_hodge(), torus_hodge(2));
    CollapsedHodge bound = collapse(page);
    REQUIRE_FALSE(bound.exact);
    REQUIRE(bound.table.at(0, 1) == 3);

    CollapsedHodge exact = collapse(page, true, "next differential acts only on the fiber factor");
    REQUIRE(exact.exact);
    REQUIRE(exact.table.at(0, 1) == 3);
    REQUIRE_THROWS_AS(collapse(page, true), std::invalid_argument);

    // Point fiber reproduces the base table.
    BorelPage trivial = borel_e2(inoue_hodge(), torus_hodge(0));
    CollapsedHodge same = collapse(trivial);
    for (std::size_t p = 0; p <= 2; ++p) {
        for (std::size_t q = 0; q <= 2; ++q) {
            REQUIRE(same.table.at(static_cast<long long>(p), static_cast<long long>(q)) ==
                    inoue_hodge().at(static_cast<long long>(p), static_cast<long long>(q)));
        }
    }

    REQUIRE_THROWS_AS(page.at(0, 0, -1, 0), std::out_of_range);
}

TEST_CASE("collapsed page of a product equals the bigraded kunneth sum") {
    HodgeTable base = inoue_hodge();
    HodgeTable fiber = torus_hodge(2);
    CollapsedHodge c = collapse(borel_e2(base, fiber), true, "product bundle");
    for (long long p = 0; p <= 4; ++p) {
        for (long long q = 0; q <= 4; ++q) {
            std::size_t expect = 0;
            for (long long a = 0; a <= 2; ++a) {
                for (long long b = 0; b <= 2; ++b) {
                    if (p - a < 0 || q - b < 0) continue;
                    expect += base.at(a, b) * fiber.at(p - a, q - b);
                }
            }
            REQUIRE(c.table.at(p, q) == expect);
        }
    }
}

TEST_CASE("complex coframe structure equations certify for the base example") {
    DolbeaultFrameCertificate cert = verify_inoue_dolbeault_frame(base_inoue());
    for (const auto& item : cert.items) {
        INFO(item.name << " residual " << item.residual);
        REQUIRE(item.pass);
    }
    REQUIRE(cert.alpha == Catch::Approx(-0.5).margin(1e-12));
    REQUIRE(cert.beta_plus == Catch::Approx(base_inoue().p).margin(1e-12));
    REQUIRE(cert.beta_minus == Catch::Approx(-base_inoue().p).margin(1e-12));
    REQUIRE(cert.item("alpha equals minus one half").pass);
    REQUIRE(cert.item("beta equals rotation rate").pass);
}

TEST_CASE("complex coframe structure equations certify for every enumerated matrix") {
    for (const auto& pair : enumerate_admissible(-4, 4, -4, 4)) {
        InoueData data = parameters_from_matrix(pair.companion);
        DolbeaultFrameCertificate cert = verify_inoue_dolbeault_frame(data);
        INFO("m = " << pair.m << ", n = " << pair.n);
        REQUIRE(cert.all_pass());
    }
}

TEST_CASE("first Betti parity and the Kahler obstruction") {
    PullbackAction rho = base_action();
    PullbackAction psi = PullbackAction::from_coordinate_map(pair_rotation_coordinates());

    B1ParityReport block = b1_parity_report(rho, psi);
    REQUIRE(block.b1 == 1);
    REQUIRE(block.odd);
    REQUIRE(block.oddness_forced);
    REQUIRE(block.kahler_obstruction);

    B1ParityReport product = b1_parity_report(rho, PullbackAction(QMatrix::identity(4)));
    REQUIRE(product.b1 == 5);
    REQUIRE(product.odd);
    REQUIRE(product.kahler_obstruction);

    // Diagnostic mode: identity base fixes all three classes, no parity claim.
    B1ParityReport diag = b1_parity_report(PullbackAction(QMatrix::identity(3)), psi);
    REQUIRE(diag.b1 == 4);
    REQUIRE_FALSE(diag.odd);
    REQUIRE_FALSE(diag.oddness_forced);
    REQUIRE_FALSE(diag.kahler_obstruction);
}

TEST_CASE("random fixed-space parity stays odd for admissible bases") {
    std::mt19937 gen(2026);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t n = 2 + static_cast<std::size_t>(trial % 4);
        QMatrix candidate = random_unimodular(gen, n);
        PullbackAction psi(candidate);
        B1ParityReport r = b1_parity_report(base_action(), psi);
        REQUIRE(r.b1 == 1 + r.psi_fixed);
        if (r.oddness_forced) {
            REQUIRE(r.odd);
        }
    }
}
