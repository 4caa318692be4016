// Kernel filtrations of nilpotent parts and the two mapping-torus
// non-formality criteria, plus low-degree minimal-model fragments.
#pragma once

#include <gktorus/cdga.hpp>
#include <gktorus/matrix.hpp>
#include <gktorus/rational.hpp>

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace gktorus {

/// Kernel filtration of a square matrix F: K^j = ker F^j grows until it
/// stabilizes at j = r, the nilpotency index of F on its generalized kernel.
/// Layer j holds representatives of the quotient K^j / K^{j-1}, and F drops
/// every layer into the one below.
struct JordanData {
    QMatrix f;
    std::vector<std::size_t> filtration_dims;  // dim K^j for j = 1..r
    std::vector<QMatrix> layer_reps;           // columns represent K^j mod K^{j-1}
    std::vector<QMatrix> layer_maps;           // induced F from layer j+1 into layer j
    std::size_t nilpotency_index = 0;          // r; zero when F has trivial kernel

    std::size_t layer_dim(std::size_t j) const {
        if (j == 0 || j > filtration_dims.size()) return 0;
        return filtration_dims[j - 1] - (j >= 2 ? filtration_dims[j - 2] : 0);
    }

    /// Matrix of F from layer j into layer j-1, for j = 2..r.
    const QMatrix& induced_map(std::size_t j) const {
        if (j < 2 || j > nilpotency_index) {
            throw std::out_of_range("induced map requested outside the filtration");
        }
        return layer_maps[j - 2];
    }
};

inline JordanData jordan_filtration(const QMatrix& f) {
    if (f.rows() != f.cols()) {
        throw std::invalid_argument("kernel filtration needs a square matrix");
    }
    std::size_t n = f.rows();
    JordanData out;
    out.f = f;
    std::vector<std::vector<std::vector<Rational>>> kernels;
    QMatrix power = QMatrix::identity(n);
    std::size_t prev = 0;
    while (true) {
        power = power * f;
        auto kb = kernel_basis(power);
        if (kb.size() == prev) break;
        out.filtration_dims.push_back(kb.size());
        prev = kb.size();
        kernels.push_back(std::move(kb));
        if (prev == n) break;
    }
    out.nilpotency_index = kernels.size();
    detail::Span span(n);
    for (std::size_t j = 0; j < kernels.size(); ++j) {
        std::vector<std::vector<Rational>> reps;
        for (auto& v : kernels[j]) {
            if (span.insert(v)) reps.push_back(std::move(v));
        }
        QMatrix m(n, reps.size(), Rational(0));
        for (std::size_t c = 0; c < reps.size(); ++c) {
            for (std::size_t i = 0; i < n; ++i) m(i, c) = reps[c][i];
        }
        out.layer_reps.push_back(std::move(m));
    }
    for (std::size_t j = 2; j <= out.nilpotency_index; ++j) {
        const QMatrix& upper = out.layer_reps[j - 1];
        const QMatrix& lower = out.layer_reps[j - 2];
        QMatrix dropped = f * upper;
        std::size_t below = j >= 3 ? out.filtration_dims[j - 3] : 0;
        QMatrix span_cols(n, lower.cols() + below, Rational(0));
        for (std::size_t c = 0; c < lower.cols(); ++c) {
            for (std::size_t i = 0; i < n; ++i) span_cols(i, c) = lower(i, c);
        }
        std::size_t filled = lower.cols();
        for (std::size_t layer = 0; layer + 2 < j; ++layer) {
            const QMatrix& reps = out.layer_reps[layer];
            for (std::size_t c = 0; c < reps.cols(); ++c, ++filled) {
                for (std::size_t i = 0; i < n; ++i) span_cols(i, filled) = reps(i, c);
            }
        }
        auto solved = solve_columns(span_cols, dropped);
        if (!solved) {
            throw std::logic_error("filtration layer escaped the kernel below it");
        }
        QMatrix induced(lower.cols(), upper.cols(), Rational(0));
        for (std::size_t i = 0; i < lower.cols(); ++i) {
            for (std::size_t c = 0; c < upper.cols(); ++c) induced(i, c) = (*solved)(i, c);
        }
        out.layer_maps.push_back(std::move(induced));
    }
    return out;
}

/// Eigenvalue-one data of one pullback degree: multiplicities are exact,
/// computed from kernels of powers of f - Id.
struct DegreeEigenReport {
    std::size_t degree = 0;
    std::size_t space_dim = 0;
    std::size_t algebraic_multiplicity = 0;
    std::size_t geometric_multiplicity = 0;
    std::size_t nilpotency_index = 0;
};

/// Outcome of the two non-formality criteria over per-degree pullbacks.
struct FormalityTestResult {
    std::vector<DegreeEigenReport> degrees;  // degrees 1..n
    std::size_t first_eigen_degree = 0;      // smallest positive degree fixing a class
    std::size_t criterion_degree = 0;        // degree where a criterion fired
    std::string criterion = "none";
    std::string verdict = "inconclusive";
    bool non_formal = false;

    const DegreeEigenReport& at(std::size_t degree) const {
        for (const auto& d : degrees) {
            if (d.degree == degree) return d;
        }
        throw std::out_of_range("degree missing from the formality record");
    }
};

/// Scans the pullback actions for the two sufficient non-formality
/// conditions. actions[k] is the matrix on degree-k cohomology; the entry
/// for degree zero always fixes the unit class and is skipped. The first
/// criterion looks for an eigenvalue one carried by a single two-dimensional
/// Jordan block in any positive degree. The second applies when the lowest
/// positive degree fixing a class is at least two and the filtration there
/// has nilpotency index r >= 2. Neither firing leaves the verdict
/// inconclusive; these conditions are sufficient, not necessary.
inline FormalityTestResult bfm_formality_test(const std::vector<QMatrix>& actions) {
    FormalityTestResult out;
    for (std::size_t k = 1; k < actions.size(); ++k) {
        const QMatrix& m = actions[k];
        if (m.rows() != m.cols()) {
            throw std::invalid_argument("pullback action in degree " + std::to_string(k) +
                                        " is not square");
        }
        JordanData jd = jordan_filtration(m - QMatrix::identity(m.rows()));
        DegreeEigenReport rep;
        rep.degree = k;
        rep.space_dim = m.rows();
        rep.geometric_multiplicity = jd.filtration_dims.empty() ? 0 : jd.filtration_dims[0];
        rep.algebraic_multiplicity =
            jd.filtration_dims.empty() ? 0 : jd.filtration_dims.back();
        rep.nilpotency_index = jd.nilpotency_index;
        if (rep.algebraic_multiplicity > 0 && out.first_eigen_degree == 0) {
            out.first_eigen_degree = k;
        }
        out.degrees.push_back(rep);
    }
    for (const auto& rep : out.degrees) {
        if (rep.algebraic_multiplicity == 2 && rep.geometric_multiplicity == 1) {
            out.criterion = "criterion 1";
            out.criterion_degree = rep.degree;
            out.verdict = "non-formal (criterion 1)";
            out.non_formal = true;
            return out;
        }
        if (rep.degree == out.first_eigen_degree && rep.degree >= 2 &&
            rep.nilpotency_index >= 2) {
            out.criterion = "criterion 2";
            out.criterion_degree = rep.degree;
            out.verdict = "non-formal (r>=2)";
            out.non_formal = true;
            return out;
        }
    }
    return out;
}

/// Low-degree minimal-model fragment built from the filtration in degree p.
struct MinimalModelFragment {
    CDGA algebra;
    JordanData filtration;
    std::size_t degree = 0;              // p
    std::size_t nilpotency_index = 0;    // r
    std::vector<std::size_t> layer_of;   // filtration layer of each degree-p generator
    bool non_formal = false;             // r >= 2
};

/// Builds the fragment with one odd generator a in degree one and the layers
/// G^1..G^r in degree p, where dv = a * F(v) lowers the layer by one.
/// Requires eigenvalue one to be absent in degrees 1..p-1 and present in
/// degree p; violations throw.
inline MinimalModelFragment minimal_model_low_degree(const std::vector<QMatrix>& actions,
                                                     std::size_t p) {
    if (p < 2 || p >= actions.size()) {
        throw std::invalid_argument(
            "hypothesis violation: fragment degree must lie in 2..top");
    }
    for (std::size_t k = 1; k < p; ++k) {
        const QMatrix& m = actions[k];
        if (m.rows() != m.cols()) {
            throw std::invalid_argument("pullback action in degree " + std::to_string(k) +
                                        " is not square");
        }
        if (!kernel_basis(m - QMatrix::identity(m.rows())).empty()) {
            throw std::invalid_argument("hypothesis violation: eigenvalue one in degree " +
                                        std::to_string(k));
        }
    }
    const QMatrix& mp = actions[p];
    if (mp.rows() != mp.cols()) {
        throw std::invalid_argument("pullback action in degree " + std::to_string(p) +
                                    " is not square");
    }
    MinimalModelFragment out;
    out.filtration = jordan_filtration(mp - QMatrix::identity(mp.rows()));
    out.degree = p;
    out.nilpotency_index = out.filtration.nilpotency_index;
    out.non_formal = out.nilpotency_index >= 2;
    if (out.nilpotency_index == 0) {
        throw std::invalid_argument("hypothesis violation: eigenvalue one absent in degree " +
                                    std::to_string(p));
    }
    CDGA& m = out.algebra;
    m.set_cutoff(std::max<std::size_t>(10, 2 * p + 2));
    m.add_generator("a", 1);
    std::vector<std::vector<std::size_t>> layer_gen_indices(out.nilpotency_index);
    std::size_t counter = 0;
    for (std::size_t j = 1; j <= out.nilpotency_index; ++j) {
        for (std::size_t c = 0; c < out.filtration.layer_dim(j); ++c) {
            ++counter;
            std::size_t idx = m.add_generator("v" + std::to_string(counter), p);
            layer_gen_indices[j - 1].push_back(idx);
            out.layer_of.push_back(j);
        }
    }
    for (std::size_t j = 2; j <= out.nilpotency_index; ++j) {
        const QMatrix& drop = out.filtration.induced_map(j);
        for (std::size_t c = 0; c < layer_gen_indices[j - 1].size(); ++c) {
            AlgebraElement image;
            for (std::size_t i = 0; i < layer_gen_indices[j - 2].size(); ++i) {
                if (drop(i, c) == 0) continue;
                add_scaled(image, m.generator_element(layer_gen_indices[j - 2][i]),
                           drop(i, c));
            }
            AlgebraElement dv = m.multiply(m.generator_element("a"), image);
            m.set_differential(m.generators()[layer_gen_indices[j - 1][c]].name, dv);
        }
    }
    m.check_differential();
    return out;
}

}  // namespace gktorus
