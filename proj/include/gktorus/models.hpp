// Ready-made algebra presentations for the mapping-torus families handled by
// this library, together with their classifying assignments.
#pragma once

#include <gktorus/cdga.hpp>

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace gktorus {

/// Free algebra on one odd degree-one generator with zero differential; the
/// smallest sanity model, with one class in each of degrees zero and one.
inline CDGA circle_model() {
    CDGA m;
    m.add_generator("a", 1);
    return m;
}

/// Model of the mapping torus of the invariant three-torus: one odd
/// generator each in degrees one and three, zero differential. Its
/// cohomology runs (1, 1, 0, 1, 1).
inline CDGA inoue_mapping_torus_model() {
    CDGA m;
    m.add_generator("a", 1);
    m.add_generator("b", 3);
    return m;
}

/// Unordered index pairs (i, j) over {1..4} with (1, 4) removed; these are
/// the products of the degree-two generators that bound a degree-three
/// generator in the block model. The surviving product is b1*b4.
inline const std::vector<std::pair<int, int>>& block_model_pairs() {
    static const std::vector<std::pair<int, int>> pairs = {
        {1, 1}, {1, 2}, {1, 3}, {2, 2}, {2, 3}, {2, 4}, {3, 3}, {3, 4}, {4, 4}};
    return pairs;
}

/// Low-degree model of the seven-torus block mapping torus: an odd
/// degree-one generator a, four even degree-two generators b1..b4, an odd
/// degree-three generator c, and nine odd degree-three generators l<ij>
/// with d(l<ij>) = bi*bj over block_model_pairs(). Its cohomology equals
/// the mapping-torus table (1, 1, 4, 5, 2) in degrees zero through four.
/// From degree five on the free algebra is strictly larger, starting with
/// the sixteen closed syzygy combinations of the words b_k*l<ij>; the full
/// table to degree eight is (1, 1, 4, 5, 2, 21, 20, 20, 56).
inline CDGA block_mapping_torus_model() {
    CDGA m;
    m.add_generator("a", 1);
    for (int i = 1; i <= 4; ++i) m.add_generator("b" + std::to_string(i), 2);
    m.add_generator("c", 3);
    for (const auto& [i, j] : block_model_pairs()) {
        m.add_generator("l" + std::to_string(i) + std::to_string(j), 3);
    }
    for (const auto& [i, j] : block_model_pairs()) {
        m.set_differential("l" + std::to_string(i) + std::to_string(j),
                           m.parse("b" + std::to_string(i) + "*b" + std::to_string(j)));
    }
    return m;
}

/// Classifying assignment for the block model: closed generators represent
/// their own classes and every l<ij> maps to zero. Feeding this to
/// check_quasi_iso(model, classes, 4) yields the formality certificate on
/// the degrees the model covers; at degree five the induced map drops rank
/// because the syzygy classes map to zero.
inline std::map<std::string, AlgebraElement> block_model_classes(const CDGA& m) {
    std::map<std::string, AlgebraElement> nu;
    for (const auto& g : m.generators()) {
        if (g.name.size() > 1 && g.name[0] == 'l') {
            nu.emplace(g.name, AlgebraElement{});
        } else {
            nu.emplace(g.name, m.generator_element(g.name));
        }
    }
    return nu;
}

}  // namespace gktorus
