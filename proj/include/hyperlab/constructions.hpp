#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hyperlab/axioms.hpp"
#include "hyperlab/element_set.hpp"
#include "hyperlab/errors.hpp"
#include "hyperlab/multiset.hpp"
#include "hyperlab/structure.hpp"

namespace hyperlab {

/// A1 x A2 with componentwise f (setwise) and g. Elements are ordered
/// row-major and named "(a;b)".
inline HyperStructure product(const HyperStructure& a1, const HyperStructure& a2) {
    if (a1.m() != a2.m() || a1.n() != a2.n())
        throw ArityMismatch("product needs equal arities, got (" + std::to_string(a1.m()) + "," +
                            std::to_string(a1.n()) + ") and (" + std::to_string(a2.m()) + "," +
                            std::to_string(a2.n()) + ")");
    const std::size_t w = a2.size();
    if (a1.size() * w > kMaxCarrier)
        throw CapacityExceeded("product carrier of " + std::to_string(a1.size() * w) + " elements exceeds 64");
    std::vector<std::string> names;
    for (Element x = 0; x < a1.size(); ++x)
        for (Element y = 0; y < w; ++y) names.push_back("(" + a1.name_of(x) + ";" + a2.name_of(y) + ")");
    auto split = [w](std::span<const Element> t, std::vector<Element>& left, std::vector<Element>& right) {
        left.resize(t.size());
        right.resize(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) {
            left[i] = static_cast<Element>(t[i] / w);
            right[i] = static_cast<Element>(t[i] % w);
        }
    };
    std::optional<Element> one;
    if (a1.one() && a2.one()) one = static_cast<Element>(*a1.one() * w + *a2.one());
    std::vector<Element> left, right;
    return HyperStructure::tabulate(
        a1.name() + "*" + a2.name(), a1.m(), a1.n(), std::move(names),
        static_cast<Element>(a1.zero() * w + a2.zero()), one,
        [&](std::span<const Element> t) {
            split(t, left, right);
            ElementSet out;
            const ElementSet r = a2.f(right);
            for (Element x : a1.f(left))
                for (Element y : r) out.insert(static_cast<Element>(x * w + y));
            return out;
        },
        [&](std::span<const Element> t) {
            split(t, left, right);
            return static_cast<Element>(a1.g(left) * w + a2.g(right));
        });
}

/// X1 x X2 inside product(A1, A2); used for hyperideals and multiplicative sets.
inline ElementSet pair_set(const HyperStructure& a1, const HyperStructure& a2, ElementSet x1, ElementSet x2) {
    if (!x1.subset_of(a1.carrier_set()) || !x2.subset_of(a2.carrier_set()))
        throw UnknownElement("set outside the factor carrier");
    ElementSet out;
    for (Element x : x1)
        for (Element y : x2) out.insert(static_cast<Element>(x * a2.size() + y));
    return out;
}

inline ElementSet product_ideal(const HyperStructure& a1, const HyperStructure& a2, ElementSet q1, ElementSet q2) {
    return pair_set(a1, a2, q1, q2);
}

inline ElementSet product_mult_set(const HyperStructure& a1, const HyperStructure& a2, ElementSet s1, ElementSet s2) {
    return pair_set(a1, a2, s1, s2);
}

/// A total map between carriers checked against conditions (i)-(iii).
class Homomorphism {
public:
    /// Throws NotAHomomorphism naming the first failing condition.
    static Homomorphism make(const HyperStructure& source, const HyperStructure& target, std::vector<Element> map) {
        if (auto why = violation(source, target, map)) throw NotAHomomorphism(*why);
        Homomorphism h;
        h.source_ = source.name();
        h.target_ = target.name();
        h.map_ = std::move(map);
        h.identity_incomplete_ = !(source.one() && target.one());
        ElementSet seen;
        h.injective_ = true;
        for (Element v : h.map_) {
            if (seen.contains(v)) h.injective_ = false;
            seen.insert(v);
        }
        return h;
    }

    /// Description of the first failing condition, if any.
    static std::optional<std::string> violation(const HyperStructure& source, const HyperStructure& target,
                                                const std::vector<Element>& map) {
        if (map.size() != source.size()) return "map must be total on the source carrier";
        for (Element v : map)
            if (v >= target.size()) return "map value outside the target carrier";
        auto image = [&](ElementSet x) {
            ElementSet out;
            for (Element e : x) out.insert(map[e]);
            return out;
        };
        std::optional<std::string> why;
        std::vector<Element> mapped;
        for_each_multiset(source.carrier_set(), source.m(), [&](std::span<const Element> t) {
            mapped.clear();
            for (Element e : t) mapped.push_back(map[e]);
            if (image(source.f(t)) == target.f(mapped)) return true;
            why = "condition (i) fails at f" + source.format(t);
            return false;
        });
        if (why) return why;
        for_each_multiset(source.carrier_set(), source.n(), [&](std::span<const Element> t) {
            mapped.clear();
            for (Element e : t) mapped.push_back(map[e]);
            if (map[source.g(t)] == target.g(mapped)) return true;
            why = "condition (ii) fails at g" + source.format(t);
            return false;
        });
        if (why) return why;
        if (source.one() && target.one() && map[*source.one()] != *target.one())
            return std::string("condition (iii) fails: h(1) != 1");
        return std::nullopt;
    }

    const std::string& source() const { return source_; }
    const std::string& target() const { return target_; }
    const std::vector<Element>& map() const { return map_; }
    Element operator()(Element x) const { return map_.at(x); }
    bool injective() const { return injective_; }
    /// Condition (iii) was not checked because an identity is missing.
    bool identity_incomplete() const { return identity_incomplete_; }

    ElementSet image(ElementSet x) const {
        ElementSet out;
        for (Element e : x) out.insert(map_.at(e));
        return out;
    }
    ElementSet preimage(ElementSet y) const {
        ElementSet out;
        for (Element a = 0; a < map_.size(); ++a)
            if (y.contains(map_[a])) out.insert(a);
        return out;
    }

private:
    std::string source_;
    std::string target_;
    std::vector<Element> map_;
    bool injective_ = false;
    bool identity_incomplete_ = false;
};

/// h^{-1}(Q2).
inline ElementSet preimage_ideal(const Homomorphism& h, ElementSet q2) { return h.preimage(q2); }

/// Restriction of A to B when B contains zero and is closed under f and g.
/// The result keeps A's element names; its identity is A's when it lies in B.
inline std::optional<HyperStructure> subhyperring(const HyperStructure& a, ElementSet b) {
    if (!b.subset_of(a.carrier_set()) || !b.contains(a.zero())) return std::nullopt;
    bool closed = for_each_multiset(b, a.m(), [&](std::span<const Element> t) { return a.f(t).subset_of(b); }) &&
                  for_each_multiset(b, a.n(), [&](std::span<const Element> t) { return b.contains(a.g(t)); });
    if (!closed) return std::nullopt;
    const std::vector<Element> members = b.to_vector();
    std::vector<Element> local(a.size(), 0);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < members.size(); ++i) {
        local[members[i]] = static_cast<Element>(i);
        names.push_back(a.name_of(members[i]));
    }
    std::optional<Element> one;
    if (a.one() && b.contains(*a.one())) one = local[*a.one()];
    std::vector<Element> global;
    return HyperStructure::tabulate(
        a.name() + "|" + a.format(b), a.m(), a.n(), std::move(names), local[a.zero()], one,
        [&](std::span<const Element> t) {
            ElementSet out;
            global.assign(t.size(), 0);
            for (std::size_t i = 0; i < t.size(); ++i) global[i] = members[t[i]];
            for (Element e : a.f(global)) out.insert(local[e]);
            return out;
        },
        [&](std::span<const Element> t) {
            global.assign(t.size(), 0);
            for (std::size_t i = 0; i < t.size(); ++i) global[i] = members[t[i]];
            return local[a.g(global)];
        });
}

/// The inclusion of subhyperring(a, b) into a.
inline Homomorphism inclusion(const HyperStructure& sub, const HyperStructure& a, ElementSet b) {
    return Homomorphism::make(sub, a, b.to_vector());
}

/// Every scalar element x != 0 has some y with g(x, y, 1^(n-2)) = 1.
inline bool is_hyperfield(const HyperStructure& a) {
    if (!a.one() || *a.one() == a.zero()) return false;
    for (Element x = 0; x < a.size(); ++x) {
        if (x == a.zero()) continue;
        bool unit = false;
        for (Element y = 0; y < a.size() && !unit; ++y) unit = a.scaled(x, y) == *a.one();
        if (!unit) return false;
    }
    return true;
}

/// No n-ary zero divisors: g(a_1^n) = 0 forces some a_i = 0.
inline bool is_hyperintegral_domain(const HyperStructure& a) {
    return for_each_multiset(a.carrier_set() - ElementSet::singleton(a.zero()), a.n(),
                             [&](std::span<const Element> t) { return a.g(t) != a.zero(); });
}

/// A named structure plus the hyperideal / multiplicative set the source
/// example designates, if any.
struct Fixture {
    HyperStructure structure;
    std::optional<ElementSet> q;
    std::optional<ElementSet> s;
    /// False for fixtures that are a guess at the intended data rather than the
    /// data as printed.
    bool canonical = true;
};

namespace detail {

inline HyperStructure four_element_fixture() {
    const Element zero = 0, one = 1, two = 2, three = 3;
    const ElementSet I{zero, one}, J{two, three};
    auto f = [&](std::span<const Element> t) -> ElementSet {
        const Element x = t[0], y = t[1];
        if (x == 0) return ElementSet::singleton(y);
        if (x == 1 && y == 1) return I;
        if (x == 1 && y == 2) return ElementSet::singleton(three);
        if (x == 1 && y == 3) return J;
        if (x == 2 && y == 2) return ElementSet::singleton(zero);
        if (x == 2 && y == 3) return ElementSet::singleton(one);
        return I;
    };
    auto g = [&](std::span<const Element> t) -> Element {
        for (Element e : t)
            if (!J.contains(e)) return zero;
        return two;
    };
    return HyperStructure::tabulate("paper-2-4", 2, 4, {"0", "1", "2", "3"}, zero, std::nullopt, f, g);
}

inline HyperStructure three_element_fixture(std::string name) {
    const ElementSet all = ElementSet::full(3);
    auto f = [&](std::span<const Element> t) -> ElementSet {
        const int key = t[0] * 100 + t[1] * 10 + t[2];
        switch (key) {
            case 0: return {0};
            case 1: return {1};
            case 2: return {2};
            case 11: return {1};
            case 22: return {2};
            case 111: return {1};
            case 222: return {2};
            default: return all;
        }
    };
    auto g = [](std::span<const Element> t) -> Element {
        if (t[0] == 0) return 0;
        return (t[1] == 1 && t[2] == 1) ? 1 : 2;
    };
    return HyperStructure::tabulate(std::move(name), 3, 3, {"0", "1", "2"}, 0, Element{1}, f, g);
}

inline HyperStructure ring_fixture(std::size_t k) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < k; ++i) names.push_back(std::to_string(i));
    return HyperStructure::tabulate(
        "ring:Z" + std::to_string(k), 2, 2, std::move(names), 0, static_cast<Element>(1 % k),
        [k](std::span<const Element> t) { return ElementSet::singleton(static_cast<Element>((t[0] + t[1]) % k)); },
        [k](std::span<const Element> t) { return static_cast<Element>((t[0] * t[1]) % k); });
}

}  // namespace detail

/// Ring modulus of a "ring:Zk" name, if it is one.
inline std::optional<std::size_t> ring_modulus(std::string_view name) {
    constexpr std::string_view prefix = "ring:Z";
    if (name.substr(0, prefix.size()) != prefix) return std::nullopt;
    const std::string_view digits = name.substr(prefix.size());
    std::size_t k = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || digits.empty() || digits[0] == '0')
        return std::nullopt;
    return k;
}

/// Factor names of a product fixture name "A*B*C" (left-nested).
inline std::vector<std::string> product_factors(std::string_view name) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
        const std::size_t star = name.find('*', start);
        parts.emplace_back(name.substr(start, star == std::string_view::npos ? std::string_view::npos : star - start));
        if (star == std::string_view::npos) break;
        start = star + 1;
    }
    return parts;
}

/// Fixture by name: "paper-2-4", "paper-3-3", "paper-3-3-s1", "ring:Zk"
/// (1 <= k <= 64), or a product "A*B[*C...]" of those.
inline Fixture fixture(std::string_view name) {
    const auto parts = product_factors(name);
    if (parts.size() > 1) {
        HyperStructure acc = fixture(parts[0]).structure;
        for (std::size_t i = 1; i < parts.size(); ++i) acc = product(acc, fixture(parts[i]).structure);
        return Fixture{std::move(acc), std::nullopt, std::nullopt, true};
    }
    if (name == "paper-2-4") return Fixture{detail::four_element_fixture(), ElementSet{0}, ElementSet{2, 3}, true};
    if (name == "paper-3-3")
        return Fixture{detail::three_element_fixture("paper-3-3"), ElementSet{0, 2}, ElementSet{1, 2}, true};
    if (name == "paper-3-3-s1")
        return Fixture{detail::three_element_fixture("paper-3-3-s1"), ElementSet{0, 2}, ElementSet{1}, false};
    if (auto k = ring_modulus(name); k && *k >= 1 && *k <= kMaxCarrier)
        return Fixture{detail::ring_fixture(*k), std::nullopt, std::nullopt, true};
    throw UnknownFixture("unknown fixture '" + std::string(name) + "'");
}

}  // namespace hyperlab
