#pragma once

#include <fstream>
#include <optional>
#include <string>

#include <json.hpp>

#include "nildyn/field_params.hpp"
#include "nildyn/util.hpp"

namespace nildyn {

using ordered_json = nlohmann::ordered_json;

/// On-disk schema: rationals are "p/q" strings or integers, never floats.
struct ParamsDocument {
    std::string schema_version = "1";
    std::vector<std::string> P1, P2; // ascending coefficients
    std::string a10 = "0", a11 = "0", a12 = "0";
    std::string a20 = "0", a21 = "0";
    std::string A3 = "0";
    std::optional<std::string> label;
    std::optional<std::string> notes;
};

namespace detail {

inline std::string rational_field(const nlohmann::json& j, const std::string& path) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer()) return std::to_string(j.get<long long>());
    throw validation_error(path + ": expected a rational \"p/q\" string or an integer");
}

inline Rational parse_rational_field(const std::string& text, const std::string& path) {
    const auto q = parse_rational(text);
    if (!q) throw validation_error(path + ": invalid rational '" + text + "'");
    return *q;
}

} // namespace detail

inline ParamsDocument parse_params_document(const nlohmann::json& j) {
    if (!j.is_object()) throw validation_error("params document: expected a JSON object");
    ParamsDocument doc;
    if (j.contains("schema_version")) {
        if (!j["schema_version"].is_string())
            throw validation_error("schema_version: expected a string");
        doc.schema_version = j["schema_version"].get<std::string>();
    }
    for (const char* key : {"P1", "P2"}) {
        if (!j.contains(key) || !j[key].is_array() || j[key].empty())
            throw validation_error(std::string(key) + ": expected a non-empty coefficient array");
        auto& dst = (std::string(key) == "P1") ? doc.P1 : doc.P2;
        std::size_t idx = 0;
        for (const auto& e : j[key]) {
            dst.push_back(detail::rational_field(e, std::string(key) + "[" + std::to_string(idx) + "]"));
            ++idx;
        }
    }
    if (j.contains("A1")) {
        const auto& a1 = j["A1"];
        if (!a1.is_object()) throw validation_error("A1: expected an object {a10, a11, a12}");
        if (a1.contains("a10")) doc.a10 = detail::rational_field(a1["a10"], "A1.a10");
        if (a1.contains("a11")) doc.a11 = detail::rational_field(a1["a11"], "A1.a11");
        if (a1.contains("a12")) doc.a12 = detail::rational_field(a1["a12"], "A1.a12");
    }
    if (j.contains("A2")) {
        const auto& a2 = j["A2"];
        if (!a2.is_object()) throw validation_error("A2: expected an object {a20, a21}");
        if (a2.contains("a20")) doc.a20 = detail::rational_field(a2["a20"], "A2.a20");
        if (a2.contains("a21")) doc.a21 = detail::rational_field(a2["a21"], "A2.a21");
    }
    if (j.contains("A3")) doc.A3 = detail::rational_field(j["A3"], "A3");
    if (j.contains("label")) doc.label = j["label"].get<std::string>();
    if (j.contains("notes")) doc.notes = j["notes"].get<std::string>();
    return doc;
}

inline FieldParams to_field_params(const ParamsDocument& doc) {
    FieldParams p;
    std::vector<Rational> c1, c2;
    for (std::size_t i = 0; i < doc.P1.size(); ++i)
        c1.push_back(detail::parse_rational_field(doc.P1[i], "P1[" + std::to_string(i) + "]"));
    for (std::size_t i = 0; i < doc.P2.size(); ++i)
        c2.push_back(detail::parse_rational_field(doc.P2[i], "P2[" + std::to_string(i) + "]"));
    p.P1 = UniPoly(std::move(c1));
    p.P2 = UniPoly(std::move(c2));
    p.a10 = detail::parse_rational_field(doc.a10, "A1.a10");
    p.a11 = detail::parse_rational_field(doc.a11, "A1.a11");
    p.a12 = detail::parse_rational_field(doc.a12, "A1.a12");
    p.a20 = detail::parse_rational_field(doc.a20, "A2.a20");
    p.a21 = detail::parse_rational_field(doc.a21, "A2.a21");
    p.A3 = detail::parse_rational_field(doc.A3, "A3");
    p.validate();
    return p;
}

inline ordered_json to_json(const ParamsDocument& doc) {
    ordered_json j;
    j["schema_version"] = doc.schema_version;
    j["P1"] = doc.P1;
    j["P2"] = doc.P2;
    j["A1"] = ordered_json{{"a10", doc.a10}, {"a11", doc.a11}, {"a12", doc.a12}};
    j["A2"] = ordered_json{{"a20", doc.a20}, {"a21", doc.a21}};
    j["A3"] = doc.A3;
    if (doc.label) j["label"] = *doc.label;
    if (doc.notes) j["notes"] = *doc.notes;
    return j;
}

inline ParamsDocument from_field_params(const FieldParams& p, std::optional<std::string> label = {}) {
    ParamsDocument doc;
    for (const auto& c : p.P1.coefficients()) doc.P1.push_back(to_string(c));
    for (const auto& c : p.P2.coefficients()) doc.P2.push_back(to_string(c));
    doc.a10 = to_string(p.a10);
    doc.a11 = to_string(p.a11);
    doc.a12 = to_string(p.a12);
    doc.a20 = to_string(p.a20);
    doc.a21 = to_string(p.a21);
    doc.A3 = to_string(p.A3);
    doc.label = std::move(label);
    return doc;
}

/// Stable digest over the canonical serialized form.
inline std::string params_digest(const ParamsDocument& doc) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "fnv1a:%016llx",
                  static_cast<unsigned long long>(fnv1a(to_json(doc).dump())));
    return buf;
}

struct LoadedParams {
    ParamsDocument document;
    FieldParams params;
    std::string digest;
};

inline LoadedParams load_params_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open params file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw validation_error("params file " + path + ": " + e.what());
    }
    LoadedParams lp;
    lp.document = parse_params_document(j);
    lp.params = to_field_params(lp.document);
    lp.digest = params_digest(lp.document);
    return lp;
}

} // namespace nildyn
