// Config layer: JSON documents describing a run (matrices, frames, fibers,
// algebra presentations) parsed into the library types, with every shape
// problem reported as a usage error.
#pragma once

#include <gktorus/cdga.hpp>
#include <gktorus/fiber.hpp>
#include <gktorus/frame.hpp>
#include <gktorus/inoue.hpp>
#include <gktorus/matrix.hpp>
#include <gktorus/rational.hpp>
#include <gktorus/scalar_expr.hpp>

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gktorus {

/// Malformed input: unreadable file, bad JSON, missing or mistyped keys.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

namespace cfg {

using Json = nlohmann::json;

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

inline Json parse_json(const std::string& text, const std::string& origin) {
    try {
        return Json::parse(text);
    } catch (const Json::exception& e) {
        throw ConfigError(origin + ": " + e.what());
    }
}

inline const Json& require(const Json& j, const std::string& key) {
    if (!j.is_object() || !j.contains(key)) {
        throw ConfigError("missing required key: " + key);
    }
    return j.at(key);
}

inline Rational rational_entry(const Json& v) {
    if (v.is_number_integer()) return Rational(v.get<long long>());
    if (v.is_string()) {
        try {
            return parse_rational(v.get<std::string>());
        } catch (const std::exception& e) {
            throw ConfigError(std::string("bad rational entry: ") + e.what());
        }
    }
    throw ConfigError("matrix entries must be integers or rational strings");
}

/// Square or rectangular matrix from an array of equal-length rows; also
/// accepts an object wrapping the rows under "matrix".
inline QMatrix matrix_from(const Json& j) {
    const Json& rows = j.is_object() ? require(j, "matrix") : j;
    if (!rows.is_array() || rows.empty()) throw ConfigError("matrix must be a nonempty array");
    std::size_t nc = 0;
    std::vector<std::vector<Rational>> data;
    for (const Json& row : rows) {
        if (!row.is_array() || row.empty()) throw ConfigError("matrix rows must be arrays");
        if (nc == 0) nc = row.size();
        if (row.size() != nc) throw ConfigError("matrix rows have unequal lengths");
        std::vector<Rational> r;
        for (const Json& v : row) r.push_back(rational_entry(v));
        data.push_back(std::move(r));
    }
    QMatrix m(data.size(), nc, Rational(0));
    for (std::size_t i = 0; i < data.size(); ++i) {
        for (std::size_t j2 = 0; j2 < nc; ++j2) m(i, j2) = data[i][j2];
    }
    return m;
}

inline ScalarExpr expr_entry(const Json& v, const std::string& key) {
    if (!v.is_string()) throw ConfigError("frame entry " + key + " must be an s-expression string");
    try {
        return ScalarExpr::parse_sexpr(v.get<std::string>());
    } catch (const std::exception& e) {
        throw ConfigError("frame entry " + key + ": " + e.what());
    }
}

/// Frame family over solved mapping-torus data. Two forms: explicit
/// s-expressions under a1, b2, b3 (params merged over the solved p), or the
/// parametric family {"family": "exponential", amplitude, phase, stretch}.
inline FrameFamily frame_from(const Json& j, const InoueData& data) {
    if (!j.is_object()) throw ConfigError("frame must be an object");
    if (j.contains("family")) {
        if (j.at("family") != "exponential") {
            throw ConfigError("unknown frame family: " + j.at("family").dump());
        }
        double amplitude = j.value("amplitude", 1.0);
        double phase = j.value("phase", 0.0);
        double stretch = j.value("stretch", 1.0);
        return scaled_exponential_frame(data, amplitude, phase, stretch);
    }
    FrameFamily f;
    f.a1 = expr_entry(require(j, "a1"), "a1");
    f.b2 = expr_entry(require(j, "b2"), "b2");
    f.b3 = expr_entry(require(j, "b3"), "b3");
    f.period = data.t0;
    f.env = {{"p", data.p}};
    if (j.contains("params")) {
        const Json& params = j.at("params");
        if (!params.is_object()) throw ConfigError("frame params must be an object");
        for (const auto& [name, value] : params.items()) {
            if (!value.is_number()) throw ConfigError("frame param " + name + " must be a number");
            f.env[name] = value.get<double>();
        }
    }
    f.glue = rho_at(data.p, data.t0);
    return f;
}

inline FlatFiber fiber_from(const Json& j) {
    if (j.is_null()) return FlatFiber::none();
    if (!j.is_object()) throw ConfigError("fiber must be an object");
    std::string mode = require(j, "mode").get<std::string>();
    std::size_t blocks = j.value("blocks", std::size_t{1});
    if (mode == "none") return FlatFiber::none();
    if (mode == "kahler") return FlatFiber::standard(blocks, FiberMode::kahler);
    if (mode == "hyperkahler") return FlatFiber::standard(blocks, FiberMode::hyperkahler);
    throw ConfigError("unknown fiber mode: " + mode);
}

inline FiberMap fiber_map_from(const Json& j, const FlatFiber& fiber) {
    if (j.is_null()) return fiber.dimension == 0 ? FiberMap{} : FiberMap::identity(fiber);
    if (j.is_string()) {
        std::string name = j.get<std::string>();
        if (name == "identity") return FiberMap::identity(fiber);
        if (name == "pair_rotation") return FiberMap::pair_rotation(fiber);
        throw ConfigError("unknown fiber map: " + name);
    }
    QMatrix psi = matrix_from(j);
    if (psi.rows() != fiber.dimension || psi.cols() != fiber.dimension) {
        throw ConfigError("fiber map size does not match the fiber dimension");
    }
    return FiberMap{std::move(psi)};
}

/// Algebra presentation from the exchange schema
/// {generators: [{name, degree}], differential: {name: polynomial string}}.
inline CDGA cdga_from(const Json& j) {
    if (!j.is_object()) throw ConfigError("cdga must be an object");
    CDGA a;
    const Json& gens = require(j, "generators");
    if (!gens.is_array()) throw ConfigError("generators must be an array");
    for (const Json& g : gens) {
        std::string name = require(g, "name").get<std::string>();
        const Json& deg = require(g, "degree");
        if (!deg.is_number_integer() || deg.get<long long>() <= 0) {
            throw ConfigError("generator " + name + " needs a positive integer degree");
        }
        try {
            a.add_generator(name, deg.get<std::size_t>());
        } catch (const AlgebraError& e) {
            throw ConfigError(e.what());
        }
    }
    if (j.contains("cutoff")) {
        const Json& c = j.at("cutoff");
        if (!c.is_number_integer() || c.get<long long>() <= 0) {
            throw ConfigError("cutoff must be a positive integer");
        }
        a.set_cutoff(c.get<std::size_t>());
    }
    if (j.contains("differential")) {
        const Json& diff = j.at("differential");
        if (!diff.is_object()) throw ConfigError("differential must be an object");
        for (const auto& [name, poly] : diff.items()) {
            if (!poly.is_string()) {
                throw ConfigError("differential of " + name + " must be a polynomial string");
            }
            try {
                a.set_differential(name, a.parse(poly.get<std::string>()));
            } catch (const std::exception& e) {
                throw ConfigError("differential of " + name + ": " + e.what());
            }
        }
    }
    return a;
}

/// Generator assignment: polynomial string per generator name; "0" or the
/// empty string is the zero class.
inline std::map<std::string, AlgebraElement> classes_from(const CDGA& a, const Json& j) {
    if (!j.is_object()) throw ConfigError("classes must be an object");
    std::map<std::string, AlgebraElement> nu;
    for (const auto& [name, poly] : j.items()) {
        if (!poly.is_string()) throw ConfigError("class of " + name + " must be a string");
        std::string text = poly.get<std::string>();
        try {
            nu[name] = (text.empty() || text == "0") ? AlgebraElement{} : a.parse(text);
        } catch (const std::exception& e) {
            throw ConfigError("class of " + name + ": " + e.what());
        }
    }
    return nu;
}

inline std::vector<std::size_t> dims_from(const Json& j, const std::string& key) {
    const Json& arr = require(j, key);
    if (!arr.is_array()) throw ConfigError(key + " must be an array of dimensions");
    std::vector<std::size_t> out;
    for (const Json& v : arr) {
        if (!v.is_number_integer() || v.get<long long>() < 0) {
            throw ConfigError(key + " entries must be nonnegative integers");
        }
        out.push_back(v.get<std::size_t>());
    }
    return out;
}

}  // namespace cfg
}  // namespace gktorus
