#include <gktorus/bfm.hpp>
#include <gktorus/cdga.hpp>
#include <gktorus/models.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

using namespace gktorus;

namespace {

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

std::vector<QMatrix> block_actions() {
    QMatrix block = block_diag(base_inoue().a, pair_rotation_coordinates());
    return PullbackAction::from_coordinate_map(block).all_degrees();
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

// Upper-triangular Jordan block with the given diagonal value.
QMatrix jordan_block(std::size_t n, const Rational& lambda) {
    QMatrix m(n, n, Rational(0));
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = lambda;
        if (i + 1 < n) m(i, i + 1) = 1;
    }
    return m;
}

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

QMatrix matrix_power(const QMatrix& m, std::size_t k) {
    QMatrix p = QMatrix::identity(m.rows());
    for (std::size_t i = 0; i < k; ++i) p = p * m;
    return p;
}

std::map<std::string, AlgebraElement> identity_assignment(const CDGA& m) {
    std::map<std::string, AlgebraElement> nu;
    for (const auto& g : m.generators()) nu.emplace(g.name, m.generator_element(g.name));
    return nu;
}

}  // namespace

TEST_CASE("words multiply with graded signs and canonical ordering") {
    CDGA m;
    m.add_generator("a", 1);
    m.add_generator("b", 2);
    m.add_generator("c", 3);

    AlgebraElement a = m.generator_element("a");
    AlgebraElement b = m.generator_element("b");
    AlgebraElement c = m.generator_element("c");

    REQUIRE(m.multiply(a, a).empty());
    REQUIRE(m.multiply(c, c).empty());
    REQUIRE(m.to_string(m.multiply(b, b)) == "b*b");
    REQUIRE(m.to_string(m.multiply(c, a)) == "-a*c");
    REQUIRE(m.multiply(c, a) == m.multiply(m.multiply(a, c), AlgebraElement{{Word{}, -1}}));
    REQUIRE(m.multiply(b, a) == m.multiply(a, b));
    REQUIRE(m.to_string(m.multiply(b, a)) == "a*b");

    for (std::size_t p = 0; p <= 4; ++p) {
        for (std::size_t q = 0; q <= 4; ++q) {
            for (const auto& u : m.monomial_basis(p)) {
                for (const auto& v : m.monomial_basis(q)) {
                    AlgebraElement uv =
                        m.multiply(AlgebraElement{{u, Rational(1)}}, AlgebraElement{{v, Rational(1)}});
                    AlgebraElement vu =
                        m.multiply(AlgebraElement{{v, Rational(1)}}, AlgebraElement{{u, Rational(1)}});
                    Rational sign = (p * q) % 2 == 0 ? 1 : -1;
                    AlgebraElement flipped;
                    add_scaled(flipped, vu, sign);
                    REQUIRE(uv == flipped);
                }
            }
        }
    }

    AlgebraElement left = m.multiply(m.multiply(a, b), c);
    AlgebraElement right = m.multiply(a, m.multiply(b, c));
    REQUIRE(left == right);
}

TEST_CASE("the differential satisfies the graded Leibniz rule") {
    CDGA m = block_mapping_torus_model();
    for (std::size_t p = 1; p <= 4; ++p) {
        for (std::size_t q = 1; q + p <= 6; ++q) {
            for (const auto& u : m.monomial_basis(p)) {
                for (const auto& v : m.monomial_basis(q)) {
                    AlgebraElement x{{u, Rational(1)}};
                    AlgebraElement y{{v, Rational(1)}};
                    AlgebraElement lhs = m.differential(m.multiply(x, y));
                    AlgebraElement rhs = m.multiply(m.differential(x), y);
                    add_scaled(rhs, m.multiply(x, m.differential(y)),
                               p % 2 == 0 ? Rational(1) : Rational(-1));
                    REQUIRE(lhs == rhs);
                }
            }
        }
    }
}

TEST_CASE("polynomial parsing round-trips and rejects malformed input") {
    CDGA m = block_mapping_torus_model();

    AlgebraElement e = m.parse("b1*b2 - b2*b3");
    REQUIRE(m.to_string(e) == "b1*b2 - b2*b3");
    REQUIRE(m.parse(m.to_string(e)) == e);

    AlgebraElement f = m.parse("-2*a*c + 1/2*b1^2");
    REQUIRE(m.to_string(f) == "-2*a*c + 1/2*b1*b1");
    REQUIRE(m.parse(m.to_string(f)) == f);

    REQUIRE(m.parse("").empty());
    REQUIRE(m.parse("0").empty());
    REQUIRE(m.parse("c^2").empty());
    REQUIRE(m.parse("a^0") == m.unit());
    REQUIRE(m.parse("b1*b2 - b2*b1").empty());
    REQUIRE(m.parse("a*c + c*a").empty());

    REQUIRE_THROWS_AS(m.parse("q1*b2"), std::out_of_range);
    REQUIRE_THROWS_AS(m.parse("b1 b2"), std::invalid_argument);
    REQUIRE_THROWS_AS(m.parse("2//3*b1"), std::invalid_argument);
    REQUIRE_THROWS_AS(m.parse("b1^"), std::invalid_argument);
    REQUIRE_THROWS_AS(m.parse("b1*"), std::invalid_argument);
    REQUIRE_THROWS_AS(m.parse("(b1)"), std::invalid_argument);

    std::mt19937 gen(7121);
    std::uniform_int_distribution<int> coeff(-3, 3);
    for (int trial = 0; trial < 25; ++trial) {
        AlgebraElement r;
        for (std::size_t deg = 1; deg <= 4; ++deg) {
            auto basis = m.monomial_basis(deg);
            std::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1);
            add_scaled(r, AlgebraElement{{basis[pick(gen)], Rational(1)}},
                       Rational(coeff(gen)));
        }
        REQUIRE(m.parse(m.to_string(r)) == r);
    }
}

TEST_CASE("algebra presentations are validated") {
    CDGA m;
    m.add_generator("x", 1);
    m.add_generator("y", 2);
    m.add_generator("z", 3);

    REQUIRE_THROWS_AS(m.add_generator("x", 2), AlgebraError);
    REQUIRE_THROWS_AS(m.add_generator("w", 0), AlgebraError);
    REQUIRE_THROWS_AS(m.add_generator("2w", 1), AlgebraError);
    REQUIRE_THROWS_AS(m.set_differential("x", m.generator_element("z")), AlgebraError);
    REQUIRE_THROWS_AS(m.set_differential("x", AlgebraElement{{Word{1, 0}, Rational(1)}}),
                      AlgebraError);

    m.set_differential("x", m.generator_element("y"));
    m.set_differential("y", m.generator_element("z"));
    try {
        m.check_differential();
        FAIL("expected a failure of d*d = 0");
    } catch (const AlgebraError& err) {
        REQUIRE(err.generator() == "x");
        REQUIRE(std::string(err.what()).find("square to zero") != std::string::npos);
    }
    REQUIRE_THROWS_AS(cdga_cohomology(m, 2), AlgebraError);

    m.set_differential("y", AlgebraElement{});
    m.check_differential();

    m.set_cutoff(3);
    REQUIRE_THROWS_AS(m.monomial_basis(4), std::invalid_argument);
    REQUIRE_THROWS_AS(cdga_cohomology(m, 3), std::invalid_argument);
}

TEST_CASE("free odd generator gives the circle table") {
    CDGA m = circle_model();
    CohomologyTable t = cdga_cohomology(m, 2);
    REQUIRE(t.dims == std::vector<std::size_t>{1, 1, 0});
    REQUIRE(t.reps[0] == std::vector<std::string>{"1"});
    REQUIRE(t.reps[1] == std::vector<std::string>{"a"});
}

TEST_CASE("two odd generators reproduce the four-manifold table") {
    CDGA m = inoue_mapping_torus_model();
    CohomologyTable t = cdga_cohomology(m, 4);
    REQUIRE(t.dims == std::vector<std::size_t>{1, 1, 0, 1, 1});
    REQUIRE(t.reps[1] == std::vector<std::string>{"a"});
    REQUIRE(t.reps[3] == std::vector<std::string>{"b"});
    REQUIRE(t.reps[4] == std::vector<std::string>{"a*b"});

    CohomologyTable torus = mapping_torus_cohomology(
        PullbackAction::from_coordinate_map(base_inoue().a).all_degrees());
    REQUIRE(t.dims == torus.dims);
}

TEST_CASE("block model matches the seven-torus mapping torus through degree four") {
    CDGA m = block_mapping_torus_model();
    REQUIRE(m.generators().size() == 15);
    REQUIRE(block_model_pairs().size() == 9);
    REQUIRE(m.monomial_basis(8).size() == 315);

    // Exact table of the free algebra itself. From degree five on it is
    // strictly larger than the mapping-torus table: the 36 words b_k*l_ij
    // hit the 20 cubics in the b's with rank 20, so 16 closed combinations
    // such as b2*l11 - b1*l12 survive, while the only degree-five boundaries
    // are the nine a*b_i*b_j.
    CohomologyTable t = cdga_cohomology(m, 8);
    std::vector<std::size_t> expected{1, 1, 4, 5, 2, 21, 20, 20, 56};
    REQUIRE(t.dims == expected);

    CohomologyTable torus = mapping_torus_cohomology(block_actions());
    for (std::size_t k = 0; k <= 4; ++k) {
        REQUIRE(t.dims[k] == torus.dims[k]);
    }
    REQUIRE(torus.dims[5] == 5);
    REQUIRE(t.dims[5] == 21);

    std::set<std::string> degree_two(t.reps[2].begin(), t.reps[2].end());
    REQUIRE(degree_two == std::set<std::string>{"b1", "b2", "b3", "b4"});
    std::set<std::string> degree_four(t.reps[4].begin(), t.reps[4].end());
    REQUIRE(degree_four == std::set<std::string>{"a*c", "b1*b4"});

    std::set<std::string> degree_five(t.reps[5].begin(), t.reps[5].end());
    REQUIRE(degree_five.count("b2*l11-b1*l12") == 1);
    REQUIRE(degree_five.count("a*b1*b4") == 1);
    REQUIRE(degree_five.count("b1*c") == 1);
}

TEST_CASE("classifying assignment certifies formality of the block model through degree four") {
    CDGA m = block_mapping_torus_model();
    QuasiIsoReport rep = check_quasi_iso(m, block_model_classes(m), 4);
    REQUIRE(rep.quasi_iso);
    std::vector<std::size_t> expected{1, 1, 4, 5, 2};
    for (std::size_t k = 0; k <= 4; ++k) {
        REQUIRE(rep.at(k).source_dim == expected[k]);
        REQUIRE(rep.at(k).rank == expected[k]);
        REQUIRE(rep.at(k).iso);
    }

    // The certificate cannot extend to degree five: the classifying map
    // kills every l_ij, so the sixteen syzygy classes map to zero and the
    // induced rank collapses to the five classes with c or a*b1*b4 parts.
    QuasiIsoReport probe = check_quasi_iso(m, block_model_classes(m), 5);
    REQUIRE_FALSE(probe.quasi_iso);
    REQUIRE(probe.at(5).source_dim == 21);
    REQUIRE(probe.at(5).target_dim == 21);
    REQUIRE(probe.at(5).rank == 5);
    REQUIRE_FALSE(probe.at(5).iso);
}

TEST_CASE("classifying assignment failures are detected") {
    CDGA m = block_mapping_torus_model();

    auto broken = block_model_classes(m);
    broken["c"] = AlgebraElement{};
    QuasiIsoReport rep = check_quasi_iso(m, broken, 4);
    REQUIRE_FALSE(rep.quasi_iso);
    REQUIRE(rep.at(0).iso);
    REQUIRE(rep.at(1).iso);
    REQUIRE(rep.at(2).iso);
    REQUIRE_FALSE(rep.at(3).iso);
    REQUIRE(rep.at(3).source_dim == 5);
    REQUIRE(rep.at(3).rank == 4);

    auto open = block_model_classes(m);
    open["l12"] = m.generator_element("l12");
    try {
        check_quasi_iso(m, open, 2);
        FAIL("expected a non-closed image to be rejected");
    } catch (const AlgebraError& err) {
        REQUIRE(err.generator() == "l12");
        REQUIRE(std::string(err.what()).find("not closed") != std::string::npos);
    }

    CDGA simple = inoue_mapping_torus_model();
    QuasiIsoReport ok = check_quasi_iso(simple, identity_assignment(simple), 4);
    REQUIRE(ok.quasi_iso);
}

TEST_CASE("morphism checks compare two algebras in cohomology") {
    CDGA m = block_mapping_torus_model();

    QuasiIsoReport id = check_quasi_iso(m, m, identity_assignment(m), 4);
    REQUIRE(id.quasi_iso);

    auto collapse = identity_assignment(m);
    collapse["b1"] = AlgebraElement{};
    collapse["l11"] = AlgebraElement{};
    collapse["l12"] = AlgebraElement{};
    collapse["l13"] = AlgebraElement{};
    QuasiIsoReport rep = check_quasi_iso(m, m, collapse, 3);
    REQUIRE_FALSE(rep.quasi_iso);
    REQUIRE(rep.at(0).iso);
    REQUIRE(rep.at(1).iso);
    REQUIRE_FALSE(rep.at(2).iso);
    REQUIRE(rep.at(2).source_dim == 4);
    REQUIRE(rep.at(2).target_dim == 4);
    REQUIRE(rep.at(2).rank == 3);

    auto broken = identity_assignment(m);
    broken["b1"] = AlgebraElement{};
    broken["l11"] = AlgebraElement{};
    broken["l13"] = AlgebraElement{};
    try {
        check_quasi_iso(m, m, broken, 2);
        FAIL("expected a chain-map violation");
    } catch (const AlgebraError& err) {
        REQUIRE(err.generator() == "l12");
        REQUIRE(std::string(err.what()).find("chain-map") != std::string::npos);
    }

    auto missing = identity_assignment(m);
    missing.erase("c");
    REQUIRE_THROWS_AS(check_quasi_iso(m, m, missing, 2), AlgebraError);

    auto shifted = identity_assignment(m);
    shifted["b1"] = m.generator_element("a");
    REQUIRE_THROWS_AS(check_quasi_iso(m, m, shifted, 2), AlgebraError);
}

TEST_CASE("kernel filtrations match a fraction-free oracle") {
    SECTION("zero map") {
        JordanData jd = jordan_filtration(QMatrix(3, 3, Rational(0)));
        REQUIRE(jd.nilpotency_index == 1);
        REQUIRE(jd.filtration_dims == std::vector<std::size_t>{3});
        REQUIRE(jd.layer_dim(1) == 3);
        REQUIRE(jd.layer_maps.empty());
    }

    SECTION("invertible map has an empty filtration") {
        JordanData jd = jordan_filtration(QMatrix::identity(4));
        REQUIRE(jd.nilpotency_index == 0);
        REQUIRE(jd.filtration_dims.empty());
    }

    SECTION("single nilpotent block") {
        JordanData jd = jordan_filtration(jordan_block(3, Rational(0)));
        REQUIRE(jd.nilpotency_index == 3);
        REQUIRE(jd.filtration_dims == std::vector<std::size_t>{1, 2, 3});
        REQUIRE(jd.layer_dim(1) == 1);
        REQUIRE(jd.layer_dim(2) == 1);
        REQUIRE(jd.layer_dim(3) == 1);
        REQUIRE(jd.induced_map(2) == QMatrix::from_rows({{Rational(1)}}));
        REQUIRE(jd.induced_map(3) == QMatrix::from_rows({{Rational(1)}}));
        REQUIRE_THROWS_AS(jd.induced_map(1), std::out_of_range);
        REQUIRE_THROWS_AS(jd.induced_map(4), std::out_of_range);
    }

    SECTION("random nilpotent matrices") {
        std::mt19937 gen(90210);
        std::uniform_int_distribution<int> entry(-2, 2);
        for (int trial = 0; trial < 100; ++trial) {
            QMatrix f(4, 4, Rational(0));
            for (std::size_t i = 0; i < 4; ++i) {
                for (std::size_t j = i + 1; j < 4; ++j) f(i, j) = entry(gen);
            }
            JordanData jd = jordan_filtration(f);
            for (std::size_t j = 1; j <= jd.nilpotency_index; ++j) {
                REQUIRE(jd.filtration_dims[j - 1] == 4 - bareiss_rank(matrix_power(f, j)));
            }
            REQUIRE(jd.filtration_dims.back() == 4);
            for (std::size_t j = 2; j <= jd.nilpotency_index; ++j) {
                const QMatrix& drop = jd.induced_map(j);
                REQUIRE(drop.rows() == jd.layer_dim(j - 1));
                REQUIRE(drop.cols() == jd.layer_dim(j));
                REQUIRE(rank(drop) == jd.layer_dim(j));

                QMatrix image = f * jd.layer_reps[j - 1];
                std::size_t below_dim = jd.filtration_dims[j - 2];
                QMatrix below(4, below_dim, Rational(0));
                std::size_t filled = 0;
                for (std::size_t layer = 0; layer + 1 < j; ++layer) {
                    const QMatrix& reps = jd.layer_reps[layer];
                    for (std::size_t c = 0; c < reps.cols(); ++c, ++filled) {
                        for (std::size_t i = 0; i < 4; ++i) below(i, filled) = reps(i, c);
                    }
                }
                REQUIRE(filled == below_dim);
                REQUIRE(solve_columns(below, image).has_value());
            }
        }
    }
}

TEST_CASE("eigenvalue criteria fire on the right actions") {
    SECTION("a single two-dimensional unipotent block in degree two") {
        std::vector<QMatrix> actions{QMatrix::from_rows({{Rational(1)}}),
                                     QMatrix(1, 1, Rational(0)),
                                     jordan_block(2, Rational(1))};
        FormalityTestResult r = bfm_formality_test(actions);
        REQUIRE(r.first_eigen_degree == 2);
        REQUIRE(r.criterion == "criterion 1");
        REQUIRE(r.criterion_degree == 2);
        REQUIRE(r.verdict == "non-formal (criterion 1)");
        REQUIRE(r.non_formal);
        REQUIRE(r.at(2).algebraic_multiplicity == 2);
        REQUIRE(r.at(2).geometric_multiplicity == 1);
        REQUIRE(r.at(2).nilpotency_index == 2);
    }

    SECTION("admissible base actions are inconclusive") {
        FormalityTestResult r = bfm_formality_test(
            PullbackAction::from_coordinate_map(base_inoue().a).all_degrees());
        REQUIRE(r.verdict == "inconclusive");
        REQUIRE_FALSE(r.non_formal);
        REQUIRE(r.criterion == "none");
        REQUIRE(r.at(1).algebraic_multiplicity == 0);
        REQUIRE(r.at(2).algebraic_multiplicity == 0);
        REQUIRE(r.first_eigen_degree == 3);
        REQUIRE(r.at(3).algebraic_multiplicity == 1);
    }

    SECTION("identity in degree one defeats both hypotheses") {
        std::vector<QMatrix> one{QMatrix::from_rows({{Rational(1)}}),
                                 QMatrix::identity(1)};
        REQUIRE(bfm_formality_test(one).verdict == "inconclusive");

        std::vector<QMatrix> two{QMatrix::from_rows({{Rational(1)}}),
                                 QMatrix::identity(2)};
        FormalityTestResult r = bfm_formality_test(two);
        REQUIRE(r.verdict == "inconclusive");
        REQUIRE(r.at(1).algebraic_multiplicity == 2);
        REQUIRE(r.at(1).geometric_multiplicity == 2);
        REQUIRE(r.first_eigen_degree == 1);
    }

    SECTION("the block mapping torus is not flagged") {
        FormalityTestResult r = bfm_formality_test(block_actions());
        REQUIRE(r.verdict == "inconclusive");
        REQUIRE(r.first_eigen_degree == 2);
        REQUIRE(r.at(2).algebraic_multiplicity == 4);
        REQUIRE(r.at(2).geometric_multiplicity == 4);
        REQUIRE(r.at(2).nilpotency_index == 1);
    }

    SECTION("random Jordan shapes") {
        std::mt19937 gen(5150);
        std::uniform_int_distribution<int> count(1, 3);
        std::uniform_int_distribution<int> size(1, 3);
        std::uniform_int_distribution<int> pad(0, 2);
        for (int trial = 0; trial < 30; ++trial) {
            std::vector<std::size_t> sizes;
            int blocks = count(gen);
            for (int b = 0; b < blocks; ++b) sizes.push_back(size(gen));
            std::size_t total = 0;
            for (std::size_t s : sizes) total += s;
            std::size_t padding = static_cast<std::size_t>(pad(gen));
            QMatrix m(total + padding, total + padding, Rational(0));
            std::size_t at = 0;
            for (std::size_t s : sizes) {
                QMatrix blockm = jordan_block(s, Rational(1));
                for (std::size_t i = 0; i < s; ++i) {
                    for (std::size_t j = 0; j < s; ++j) m(at + i, at + j) = blockm(i, j);
                }
                at += s;
            }
            for (std::size_t i = 0; i < padding; ++i) {
                m(at + i, at + i) = 2;
                if (i + 1 < padding) m(at + i, at + i + 1) = 1;
            }
            QMatrix s = random_unimodular(gen, total + padding);
            QMatrix conj = s * m * inverse(s);

            std::vector<QMatrix> actions{QMatrix::from_rows({{Rational(1)}}),
                                         QMatrix(1, 1, Rational(0)), conj};
            FormalityTestResult r = bfm_formality_test(actions);

            std::size_t alg = total;
            std::size_t geom = sizes.size();
            std::size_t index = *std::max_element(sizes.begin(), sizes.end());
            REQUIRE(r.at(2).algebraic_multiplicity == alg);
            REQUIRE(r.at(2).geometric_multiplicity == geom);
            REQUIRE(r.at(2).nilpotency_index == index);

            bool crit1 = alg == 2 && geom == 1;
            bool crit2 = !crit1 && index >= 2;
            if (crit1) {
                REQUIRE(r.verdict == "non-formal (criterion 1)");
            } else if (crit2) {
                REQUIRE(r.verdict == "non-formal (r>=2)");
            } else {
                REQUIRE(r.verdict == "inconclusive");
            }
            REQUIRE(r.non_formal == (crit1 || crit2));
        }
    }
}

TEST_CASE("minimal model fragments realize the filtration") {
    SECTION("two-dimensional unipotent block") {
        std::vector<QMatrix> actions{QMatrix::from_rows({{Rational(1)}}),
                                     QMatrix(1, 1, Rational(0)),
                                     jordan_block(2, Rational(1))};
        MinimalModelFragment frag = minimal_model_low_degree(actions, 2);
        REQUIRE(frag.nilpotency_index == 2);
        REQUIRE(frag.non_formal);
        REQUIRE(frag.layer_of == std::vector<std::size_t>{1, 2});
        const CDGA& m = frag.algebra;
        REQUIRE(m.generators().size() == 3);
        REQUIRE(m.differential_of(m.generator_index("v1")).empty());
        REQUIRE(m.to_string(m.differential_of(m.generator_index("v2"))) == "a*v1");
        CohomologyTable t = cdga_cohomology(m, 2);
        REQUIRE(t.dims == std::vector<std::size_t>{1, 1, 1});
    }

    SECTION("fixed line with no nilpotency") {
        std::vector<QMatrix> actions{QMatrix::from_rows({{Rational(1)}}),
                                     QMatrix(1, 1, Rational(0)), QMatrix::identity(1)};
        MinimalModelFragment frag = minimal_model_low_degree(actions, 2);
        REQUIRE(frag.nilpotency_index == 1);
        REQUIRE_FALSE(frag.non_formal);
        const CDGA& m = frag.algebra;
        REQUIRE(m.generators().size() == 2);
        REQUIRE(m.differential_of(m.generator_index("v1")).empty());
        REQUIRE(cdga_cohomology(m, 2).dims == std::vector<std::size_t>{1, 1, 1});
    }

    SECTION("three-dimensional unipotent block") {
        std::vector<QMatrix> actions{QMatrix::from_rows({{Rational(1)}}),
                                     QMatrix(1, 1, Rational(0)),
                                     jordan_block(3, Rational(1))};
        MinimalModelFragment frag = minimal_model_low_degree(actions, 2);
        REQUIRE(frag.nilpotency_index == 3);
        REQUIRE(frag.non_formal);
        REQUIRE(frag.layer_of == std::vector<std::size_t>{1, 2, 3});
        const CDGA& m = frag.algebra;
        REQUIRE(m.to_string(m.differential_of(m.generator_index("v2"))) == "a*v1");
        REQUIRE(m.to_string(m.differential_of(m.generator_index("v3"))) == "a*v2");
    }

    SECTION("block mapping torus fragment agrees with the torus table") {
        MinimalModelFragment frag = minimal_model_low_degree(block_actions(), 2);
        REQUIRE(frag.nilpotency_index == 1);
        REQUIRE_FALSE(frag.non_formal);
        REQUIRE(frag.layer_of == std::vector<std::size_t>{1, 1, 1, 1});
        CohomologyTable t = cdga_cohomology(frag.algebra, 2);
        CohomologyTable torus = mapping_torus_cohomology(block_actions());
        REQUIRE(t.dims.size() == 3);
        for (std::size_t k = 0; k <= 2; ++k) REQUIRE(t.dims[k] == torus.dims[k]);
        REQUIRE(t.dims == std::vector<std::size_t>{1, 1, 4});
    }

    SECTION("hypothesis violations") {
        std::vector<QMatrix> fixed_line{QMatrix::from_rows({{Rational(1)}}),
                                        QMatrix::identity(1), jordan_block(2, Rational(1))};
        REQUIRE_THROWS_AS(minimal_model_low_degree(fixed_line, 2), std::invalid_argument);

        REQUIRE_THROWS_AS(minimal_model_low_degree(
                              PullbackAction::from_coordinate_map(base_inoue().a).all_degrees(), 2),
                          std::invalid_argument);

        std::vector<QMatrix> actions{QMatrix::from_rows({{Rational(1)}}),
                                     QMatrix(1, 1, Rational(0)),
                                     jordan_block(2, Rational(1))};
        REQUIRE_THROWS_AS(minimal_model_low_degree(actions, 1), std::invalid_argument);
        REQUIRE_THROWS_AS(minimal_model_low_degree(actions, 5), std::invalid_argument);
    }
}
