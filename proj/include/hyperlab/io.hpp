#pragma once

#include <algorithm>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "hyperlab/element_set.hpp"
#include "hyperlab/errors.hpp"
#include "hyperlab/multiset.hpp"
#include "hyperlab/structure.hpp"

namespace hyperlab {

namespace detail {

inline std::vector<std::string> split_key(const std::string& key) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream is(key);
    while (std::getline(is, cur, ',')) parts.push_back(cur);
    if (!key.empty() && key.back() == ',') parts.emplace_back();
    return parts;
}

inline std::string join_names(const HyperStructure& a, std::span<const Element> t) {
    std::string out;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) out += ",";
        out += a.name_of(t[i]);
    }
    return out;
}

inline const nlohmann::json& require_key(const nlohmann::json& doc, const char* key) {
    if (!doc.contains(key)) throw LoadError(LoadError::Kind::MissingKey, std::string("missing key '") + key + "'");
    return doc.at(key);
}

}  // namespace detail

/// Builds a structure from a document of the form
///   {"name", "m", "n", "carrier": [names], "zero", "one"?,
///    "f": {"a,b": [names]}, "g": {"a,b,c,d": name}}
/// where tuple keys may list arguments in any order. Two keys naming the same
/// multiset must agree, and every multiset must be covered.
inline HyperStructure structure_from_json(const nlohmann::json& doc) {
    using Kind = LoadError::Kind;
    if (!doc.is_object()) throw LoadError(Kind::Schema, "structure document must be a JSON object");
    try {
        const std::string name = detail::require_key(doc, "name").get<std::string>();
        const std::size_t m = detail::require_key(doc, "m").get<std::size_t>();
        const std::size_t n = detail::require_key(doc, "n").get<std::size_t>();
        const auto carrier = detail::require_key(doc, "carrier").get<std::vector<std::string>>();
        if (m < 2 || m > kMaxArity || n < 2 || n > kMaxArity)
            throw LoadError(Kind::Schema, "arities must lie in [2, " + std::to_string(kMaxArity) + "]");
        if (carrier.empty() || carrier.size() > kMaxCarrier)
            throw LoadError(Kind::Schema, "carrier must have between 1 and 64 elements");
        if (multiset_count(carrier.size(), m) > HyperStructure::kMaxTableEntries ||
            multiset_count(carrier.size(), n) > HyperStructure::kMaxTableEntries)
            throw CapacityExceeded("operation table too large");
        std::unordered_map<std::string, Element> index;
        for (std::size_t i = 0; i < carrier.size(); ++i) {
            if (carrier[i].find(',') != std::string::npos)
                throw LoadError(Kind::Schema, "element name '" + carrier[i] + "' contains ','");
            if (!index.emplace(carrier[i], static_cast<Element>(i)).second)
                throw LoadError(Kind::Schema, "duplicate element name '" + carrier[i] + "'");
        }
        auto resolve = [&](const std::string& nm) {
            auto it = index.find(nm);
            if (it == index.end()) throw LoadError(Kind::UnknownName, "unknown element name '" + nm + "'");
            return it->second;
        };
        auto rank_key = [&](const std::string& key, std::size_t arity, const char* op) {
            const auto parts = detail::split_key(key);
            if (parts.size() != arity)
                throw LoadError(Kind::Schema, std::string(op) + " key '" + key + "' needs " + std::to_string(arity) +
                                                  " arguments");
            std::vector<Element> t;
            for (const auto& p : parts) t.push_back(resolve(p));
            std::sort(t.begin(), t.end());
            return static_cast<std::size_t>(multiset_rank(t));
        };

        const Element zero = resolve(detail::require_key(doc, "zero").get<std::string>());
        std::optional<Element> one;
        if (doc.contains("one") && !doc.at("one").is_null()) one = resolve(doc.at("one").get<std::string>());

        const auto& fdoc = detail::require_key(doc, "f");
        const auto& gdoc = detail::require_key(doc, "g");
        if (!fdoc.is_object() || !gdoc.is_object()) throw LoadError(Kind::Schema, "'f' and 'g' must be objects");

        std::vector<std::optional<ElementSet>> f(multiset_count(carrier.size(), m));
        std::vector<std::optional<std::string>> f_key(f.size());
        for (const auto& [key, value] : fdoc.items()) {
            const std::size_t r = rank_key(key, m, "f");
            ElementSet v;
            for (const auto& nm : value.get<std::vector<std::string>>()) v.insert(resolve(nm));
            if (v.empty()) throw LoadError(Kind::EmptyValue, "f(" + key + ") is empty");
            if (f[r] && *f[r] != v)
                throw LoadError(Kind::Conflict, "f keys '" + *f_key[r] + "' and '" + key + "' disagree");
            f[r] = v;
            f_key[r] = key;
        }
        std::vector<std::optional<Element>> g(multiset_count(carrier.size(), n));
        std::vector<std::optional<std::string>> g_key(g.size());
        for (const auto& [key, value] : gdoc.items()) {
            const std::size_t r = rank_key(key, n, "g");
            const Element v = resolve(value.get<std::string>());
            if (g[r] && *g[r] != v)
                throw LoadError(Kind::Conflict, "g keys '" + *g_key[r] + "' and '" + key + "' disagree");
            g[r] = v;
            g_key[r] = key;
        }

        auto missing = [&](std::size_t arity, auto& table, const char* op) {
            for_each_multiset(ElementSet::full(carrier.size()), arity, [&](std::span<const Element> t) {
                if (table[multiset_rank(t)]) return;
                std::string key;
                for (std::size_t i = 0; i < t.size(); ++i) key += (i ? "," : "") + carrier[t[i]];
                throw LoadError(Kind::MissingKey, std::string("missing ") + op + " entry '" + key + "'");
            });
        };
        missing(m, f, "f");
        missing(n, g, "g");

        std::vector<ElementSet> f_table;
        f_table.reserve(f.size());
        for (const auto& v : f) f_table.push_back(*v);
        std::vector<Element> g_table;
        g_table.reserve(g.size());
        for (const auto& v : g) g_table.push_back(*v);
        return HyperStructure(name, m, n, carrier, zero, one, std::move(f_table), std::move(g_table));
    } catch (const nlohmann::json::exception& e) {
        throw LoadError(Kind::Schema, std::string("malformed structure document: ") + e.what());
    }
}

inline HyperStructure parse_structure(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw LoadError(LoadError::Kind::Parse, std::string("JSON parse error: ") + e.what());
    }
    return structure_from_json(doc);
}

inline HyperStructure load_structure(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw LoadError(LoadError::Kind::Parse, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_structure(ss.str());
}

/// Document with one key per multiset, arguments in carrier order.
inline nlohmann::ordered_json structure_to_json(const HyperStructure& a) {
    nlohmann::ordered_json doc;
    doc["name"] = a.name();
    doc["m"] = a.m();
    doc["n"] = a.n();
    doc["carrier"] = a.names();
    doc["zero"] = a.name_of(a.zero());
    if (a.one()) doc["one"] = a.name_of(*a.one());
    nlohmann::ordered_json f = nlohmann::ordered_json::object();
    for_each_multiset(a.carrier_set(), a.m(), [&](std::span<const Element> t) {
        std::vector<std::string> names;
        for (Element e : a.f(t)) names.push_back(a.name_of(e));
        f[detail::join_names(a, t)] = names;
    });
    doc["f"] = std::move(f);
    nlohmann::ordered_json g = nlohmann::ordered_json::object();
    for_each_multiset(a.carrier_set(), a.n(), [&](std::span<const Element> t) {
        g[detail::join_names(a, t)] = a.name_of(a.g(t));
    });
    doc["g"] = std::move(g);
    return doc;
}

inline std::string serialize_structure(const HyperStructure& a) { return structure_to_json(a).dump(2) + "\n"; }

}  // namespace hyperlab
