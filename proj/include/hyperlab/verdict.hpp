#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hyperlab/element_set.hpp"

namespace hyperlab {

/// Per-s failure record, used when no single tuple defeats every s.
struct Refutation {
    Element s{};
    std::vector<Element> tuple;
    std::vector<std::size_t> ideals;

    bool operator==(const Refutation&) const = default;
};

/// Outcome of a predicate check together with its certificate.
///
/// A positive S-flavoured verdict names the s that works (absent when the
/// antecedent never fires). A negative verdict carries either one tuple
/// (`counterexample` over elements, or `counterexample_ideals` over lattice
/// indices) that defeats every candidate s, or one refutation per s.
struct Verdict {
    bool holds = false;
    std::optional<Element> witness_s;
    std::vector<Element> counterexample;
    std::vector<std::size_t> counterexample_ideals;
    std::vector<Refutation> refutations;
    std::string note;

    explicit operator bool() const { return holds; }

    static Verdict yes(std::optional<Element> s = std::nullopt, std::string note = {}) {
        Verdict v;
        v.holds = true;
        v.witness_s = s;
        v.note = std::move(note);
        return v;
    }
    static Verdict vacuous() { return yes(std::nullopt, "vacuously true"); }
    static Verdict no(std::vector<Element> tuple, std::string note = {}) {
        Verdict v;
        v.counterexample = std::move(tuple);
        v.note = std::move(note);
        return v;
    }
};

/// Counterexample ordering: tuples touching more distinct elements come
/// first, ties broken lexicographically. Inputs are sorted tuples.
template <class T>
bool counterexample_less(std::span<const T> a, std::span<const T> b) {
    auto distinct = [](std::span<const T> t) {
        std::size_t d = t.empty() ? 0 : 1;
        for (std::size_t i = 1; i < t.size(); ++i)
            if (t[i] != t[i - 1]) ++d;
        return d;
    };
    const std::size_t da = distinct(a), db = distinct(b);
    if (da != db) return da > db;
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

template <class T>
bool counterexample_less(const std::vector<T>& a, const std::vector<T>& b) {
    return counterexample_less(std::span<const T>(a), std::span<const T>(b));
}

}  // namespace hyperlab
