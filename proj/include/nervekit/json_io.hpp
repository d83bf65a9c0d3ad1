#pragma once

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "errors.hpp"
#include "metric_space.hpp"
#include "model_space.hpp"
#include "nerve.hpp"

namespace nervekit {

using json = nlohmann::json;

// Deterministic dump: object keys already sort (std::map storage); floats get
// a fixed 17-significant-digit format so identical inputs give identical
// bytes while doubles stay round-trip exact.
inline void dump_deterministic(const json& j, std::string& out) {
    switch (j.type()) {
        case json::value_t::object: {
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ',';
                first = false;
                out += json(it.key()).dump();
                out += ':';
                dump_deterministic(it.value(), out);
            }
            out += '}';
            return;
        }
        case json::value_t::array: {
            out += '[';
            bool first = true;
            for (const auto& v : j) {
                if (!first) out += ',';
                first = false;
                dump_deterministic(v, out);
            }
            out += ']';
            return;
        }
        case json::value_t::number_float: {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", j.get<double>());
            out += buf;
            return;
        }
        default:
            out += j.dump();
            return;
    }
}

inline std::string dump_deterministic(const json& j) {
    std::string out;
    dump_deterministic(j, out);
    out += '\n';
    return out;
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw IoError("cannot parse " + path + ": " + e.what());
    }
    return j;
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << text;
    if (!out) throw IoError("write failed for " + path);
}

// --- spaces -----------------------------------------------------------------

inline json space_to_json(const FiniteMetricSpace& X) {
    json j;
    j["labels"] = X.labels();
    json rows = json::array();
    for (int i = 0; i < X.size(); ++i) {
        json row = json::array();
        for (int k = 0; k < X.size(); ++k) row.push_back(X.dist(i, k));
        rows.push_back(std::move(row));
    }
    j["dist"] = std::move(rows);
    return j;
}

inline json model_to_json(const ModelSpace& M) {
    json j = space_to_json(M.space());
    json m;
    m["kind"] = kind_name(M.kind);
    m["n"] = M.n;
    switch (M.kind) {
        case ModelKind::circle:
            m["radius"] = M.params.radius;
            m["jitter"] = M.params.jitter;
            m["seed"] = M.params.seed;
            break;
        case ModelKind::sphere:
            m["radius"] = M.params.radius;
            break;
        case ModelKind::flat_torus:
            m["a"] = M.params.a;
            m["b"] = M.params.b;
            m["nu"] = M.params.nu;
            m["nv"] = M.params.nv;
            break;
        case ModelKind::interval:
            m["length"] = M.params.length;
            break;
    }
    j["model"] = std::move(m);
    return j;
}

struct LoadedSpace {
    FiniteMetricSpace space;
    std::shared_ptr<ModelSpace> model;  // present when the file carries a model block
};

inline ModelSpace regenerate_model(const json& m) {
    const std::string kind = m.at("kind").get<std::string>();
    const int n = m.at("n").get<int>();
    switch (kind_from_name(kind)) {
        case ModelKind::circle:
            return generate_circle(m.at("radius").get<double>(), n,
                                   m.value("jitter", 0.0), m.value("seed", std::uint64_t{0}));
        case ModelKind::sphere:
            return generate_sphere(m.at("radius").get<double>(), n);
        case ModelKind::flat_torus:
            return generate_flat_torus(m.at("a").get<double>(), m.at("b").get<double>(),
                                       m.at("nu").get<int>(), m.at("nv").get<int>());
        case ModelKind::interval:
            return generate_interval(m.at("length").get<double>(), n);
    }
    throw UnsupportedKind(kind);
}

inline LoadedSpace load_space(const json& j) {
    if (!j.contains("dist") || !j["dist"].is_array())
        throw MetricFormatError("space json needs a square dist matrix");
    std::vector<std::vector<double>> rows;
    for (const auto& row : j["dist"]) {
        if (!row.is_array()) throw MetricFormatError("dist rows must be arrays");
        rows.push_back(row.get<std::vector<double>>());
    }
    std::vector<std::string> labels;
    if (j.contains("labels")) labels = j["labels"].get<std::vector<std::string>>();
    LoadedSpace out;
    out.space = FiniteMetricSpace::from_rows(rows, std::move(labels));
    validate_metric(out.space);
    if (j.contains("model")) {
        auto M = std::make_shared<ModelSpace>(regenerate_model(j["model"]));
        if (M->n != out.space.size())
            throw MetricFormatError("model block disagrees with the dist matrix size");
        for (int a = 0; a < M->n; ++a)
            for (int b = 0; b < M->n; ++b)
                if (std::fabs(M->dist(a, b) - out.space.dist(a, b)) > 1e-9)
                    throw MetricFormatError("model block disagrees with the dist matrix at (" +
                                            std::to_string(a) + "," + std::to_string(b) + ")");
        out.model = std::move(M);
    }
    return out;
}

inline LoadedSpace load_space_file(const std::string& path) { return load_space(read_json_file(path)); }

// --- coverings and complexes ------------------------------------------------

inline json covering_to_json(const Covering& cov) {
    json j;
    j["centers"] = cov.centers;
    j["radius"] = cov.radius;
    j["scale"] = cov.scale;
    j["elements"] = cov.elements;
    return j;
}

// Rebuild from centers/radius/scale and require the stored element lists to
// match; a stale file fails loudly instead of shipping wrong members.
inline Covering load_covering(const json& j, const FiniteMetricSpace& X) {
    Covering cov = covering_from_centers(X, j.at("centers").get<std::vector<int>>(),
                                         j.at("radius").get<double>(), j.at("scale").get<double>());
    if (j.contains("elements")) {
        auto stored = j.at("elements").get<std::vector<std::vector<int>>>();
        if (stored != cov.elements)
            throw MetricFormatError("covering elements in file disagree with centers and radius");
    }
    return cov;
}

inline json complex_to_json(const NerveComplex& K) {
    json j;
    j["n_vertices"] = K.n_vertices;
    j["simplices"] = K.maximal();
    return j;
}

inline NerveComplex load_complex(const json& j) {
    NerveComplex K;
    K.n_vertices = j.at("n_vertices").get<int>();
    for (const auto& s : j.at("simplices")) K.insert(s.get<Simplex>());
    return K;
}

}  // namespace nervekit
