#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "hyperlab/axioms.hpp"
#include "hyperlab/element_set.hpp"
#include "hyperlab/errors.hpp"
#include "hyperlab/multiset.hpp"
#include "hyperlab/structure.hpp"
#include "hyperlab/verdict.hpp"

namespace hyperlab {

namespace detail {

inline void require_subset(const HyperStructure& a, ElementSet q) {
    if (!q.subset_of(a.carrier_set()))
        throw UnknownElement("set contains elements outside the carrier of '" + a.name() + "'");
}

inline std::vector<Element> cons(Element head, std::span<const Element> tail) {
    std::vector<Element> out{head};
    out.insert(out.end(), tail.begin(), tail.end());
    return out;
}

}  // namespace detail

/// Subhypergroup under f (zero, f-closure, inverses, solvability inside Q)
/// plus g-absorption. A negative verdict names the failing clause in `note`
/// and carries the offending tuple.
inline Verdict is_hyperideal(const HyperStructure& a, ElementSet q) {
    detail::require_subset(a, q);
    const std::size_t m = a.m();
    const std::size_t n = a.n();
    if (!q.contains(a.zero())) return Verdict::no({a.zero()}, "zero not in Q");

    std::optional<Verdict> out;
    for_each_multiset(q, m, [&](std::span<const Element> t) {
        if (a.f(t).subset_of(q)) return true;
        out = Verdict::no({t.begin(), t.end()}, "f-closure");
        return false;
    });
    if (out) return *out;

    std::array<Element, kMaxArity> args{};
    for (Element x : q) {
        bool found = false;
        for (Element y : q) {
            args.fill(a.zero());
            args[0] = x;
            args[1] = y;
            if (a.f(std::span<const Element>(args.data(), m)).contains(a.zero())) {
                found = true;
                break;
            }
        }
        if (!found) return Verdict::no({x}, "inverse");
    }

    for_each_multiset(q, m - 1, [&](std::span<const Element> t) {
        std::copy(t.begin(), t.end(), args.begin());
        ElementSet reach;
        for (Element x : q) {
            args[m - 1] = x;
            reach |= a.f(std::span<const Element>(args.data(), m));
        }
        const ElementSet missing = q - reach;
        if (missing.empty()) return true;
        std::vector<Element> w(t.begin(), t.end());
        w.push_back(missing.min());
        out = Verdict::no(std::move(w), "solvability");
        return false;
    });
    if (out) return *out;

    for (Element x : q) {
        for_each_multiset(a.carrier_set(), n - 1, [&](std::span<const Element> rest) {
            args[0] = x;
            std::copy(rest.begin(), rest.end(), args.begin() + 1);
            if (q.contains(a.g(std::span<const Element>(args.data(), n)))) return true;
            out = Verdict::no(detail::cons(x, rest), "absorption");
            return false;
        });
        if (out) return *out;
    }
    return Verdict::yes();
}

/// Elementwise primality counterexample: the best-ordered n-multiset outside
/// Q whose product lands in Q, if any.
inline std::optional<std::vector<Element>> prime_counterexample(const HyperStructure& a, ElementSet q) {
    std::optional<std::vector<Element>> best;
    for_each_multiset(q.complement(a.size()), a.n(), [&](std::span<const Element> t) {
        if (!q.contains(a.g(t))) return;
        if (!best || counterexample_less(t, std::span<const Element>(*best))) best.emplace(t.begin(), t.end());
    });
    return best;
}

struct EnumerateOptions {
    /// Cap on the number of distinct closed candidate sets visited.
    std::uint64_t max_candidates = std::uint64_t{1} << 20;
};

/// All hyperideals of one structure, ascending by cardinality then mask,
/// with cached primality flags.
class IdealLattice {
public:
    IdealLattice() = default;
    IdealLattice(std::string structure, std::vector<ElementSet> ideals, std::vector<bool> prime)
        : structure_(std::move(structure)), ideals_(std::move(ideals)), prime_(std::move(prime)) {}

    const std::string& structure() const { return structure_; }
    const std::vector<ElementSet>& ideals() const& { return ideals_; }
    std::vector<ElementSet> ideals() && { return std::move(ideals_); }
    const std::vector<bool>& prime_flags() const { return prime_; }
    std::size_t size() const { return ideals_.size(); }
    ElementSet operator[](std::size_t i) const { return ideals_.at(i); }
    bool is_prime(std::size_t i) const { return prime_.at(i); }

    std::optional<std::size_t> index_of(ElementSet q) const {
        auto it = std::lower_bound(ideals_.begin(), ideals_.end(), q);
        if (it == ideals_.end() || *it != q) return std::nullopt;
        return static_cast<std::size_t>(it - ideals_.begin());
    }
    bool contains(ElementSet q) const { return index_of(q).has_value(); }

private:
    std::string structure_;
    std::vector<ElementSet> ideals_;
    std::vector<bool> prime_;
};

namespace detail {

/// Smallest superset of `seed` closed under zero, f-images, g-absorption and
/// (unique) inverses. Every hyperideal containing `seed` contains it.
class IdealCloser {
public:
    explicit IdealCloser(const HyperStructure& a) : a_(a), inv_(inverses(a)), absorb_(a.size()) {
        std::vector<ElementSet> args(a.n(), a.carrier_set());
        for (Element x = 0; x < a.size(); ++x) {
            args[0] = ElementSet::singleton(x);
            absorb_[x] = a.g_sets(args);
        }
    }

    ElementSet close(ElementSet seed) const {
        ElementSet x = seed;
        x.insert(a_.zero());
        for (;;) {
            ElementSet next = x;
            for (Element e : x) {
                next |= absorb_[e];
                if (inv_[e]) next.insert(*inv_[e]);
            }
            for_each_multiset(x, a_.m(), [&](std::span<const Element> t) { next |= a_.f(t); });
            if (next == x) return x;
            x = next;
        }
    }

private:
    const HyperStructure& a_;
    std::vector<std::optional<Element>> inv_;
    std::vector<ElementSet> absorb_;
};

}  // namespace detail

/// Enumerates hyperideals by growing closed sets one element at a time from
/// the closure of {zero}; every hyperideal is such a closed set, so filtering
/// the closed sets with is_hyperideal is exhaustive.
inline IdealLattice enumerate_hyperideals(const HyperStructure& a, const EnumerateOptions& opts = {}) {
    const detail::IdealCloser closer(a);
    std::unordered_set<std::uint64_t> seen;
    std::vector<ElementSet> stack;
    std::vector<ElementSet> closed;
    auto visit = [&](ElementSet c) {
        if (!seen.insert(c.bits()).second) return;
        if (seen.size() > opts.max_candidates)
            throw CapacityExceeded("hyperideal enumeration exceeded " + std::to_string(opts.max_candidates) +
                                   " candidate subsets");
        closed.push_back(c);
        stack.push_back(c);
    };
    visit(closer.close(ElementSet{}));
    while (!stack.empty()) {
        const ElementSet c = stack.back();
        stack.pop_back();
        for (Element x : c.complement(a.size())) {
            ElementSet grown = c;
            grown.insert(x);
            visit(closer.close(grown));
        }
    }
    std::vector<ElementSet> ideals;
    for (ElementSet c : closed)
        if (is_hyperideal(a, c).holds) ideals.push_back(c);
    std::sort(ideals.begin(), ideals.end());
    std::vector<bool> prime;
    prime.reserve(ideals.size());
    for (ElementSet q : ideals) prime.push_back(q != a.carrier_set() && !prime_counterexample(a, q));
    return IdealLattice(a.name(), std::move(ideals), std::move(prime));
}

/// <x> = { g(r, x, 1^(n-2)) : r in A }.
inline ElementSet generated_hyperideal(const HyperStructure& a, Element x) {
    a.check_element(x);
    ElementSet out;
    for (Element r = 0; r < a.size(); ++r) out.insert(a.scaled(r, x));
    return out;
}

/// (Q : x) = { a : g(a, x, 1^(n-2)) in Q }.
inline ElementSet colon(const HyperStructure& a, ElementSet q, Element x) {
    detail::require_subset(a, q);
    a.check_element(x);
    ElementSet out;
    for (Element r = 0; r < a.size(); ++r)
        if (q.contains(a.scaled(r, x))) out.insert(r);
    return out;
}

/// Annihilator (0 : x).
inline ElementSet colon_zero(const HyperStructure& a, Element x) {
    return colon(a, ElementSet::singleton(a.zero()), x);
}

/// Raw setwise g-image of n sets (not its ideal closure).
inline ElementSet set_product(const HyperStructure& a, std::span<const ElementSet> qs) { return a.g_sets(qs); }
inline ElementSet set_product(const HyperStructure& a, std::initializer_list<ElementSet> qs) {
    return a.g_sets(qs);
}

/// g(Q^(n)).
inline ElementSet set_power(const HyperStructure& a, ElementSet q) {
    const std::vector<ElementSet> args(a.n(), q);
    return a.g_sets(args);
}

/// Intersection of the prime hyperideals of L containing Q; the carrier when
/// there are none.
inline ElementSet radical(const HyperStructure& a, ElementSet q, const IdealLattice& lattice) {
    detail::require_subset(a, q);
    ElementSet out = a.carrier_set();
    for (std::size_t i = 0; i < lattice.size(); ++i)
        if (lattice.is_prime(i) && q.subset_of(lattice[i])) out &= lattice[i];
    return out;
}

/// Power test: g(x^(u), 1^(n-u)) in Q for some u <= n, or g_(l)(x^(l(n-1)+1))
/// in Q for some l. Powers are iterated until a value repeats.
inline bool radical_membership(const HyperStructure& a, ElementSet q, Element x) {
    detail::require_subset(a, q);
    a.check_element(x);
    const std::size_t n = a.n();
    if (n > 2 && !a.has_one()) throw IdentityRequired("radical membership needs 1_A when n > 2");
    std::vector<Element> xs(n, x);
    for (std::size_t u = 1; u <= n; ++u)
        if (q.contains(a.g_padded(std::span<const Element>(xs.data(), u)))) return true;
    ElementSet seen;
    Element power = a.g(xs);
    std::array<Element, kMaxArity> args{};
    while (!seen.contains(power)) {
        if (q.contains(power)) return true;
        seen.insert(power);
        args.fill(x);
        args[0] = power;
        power = a.g(std::span<const Element>(args.data(), n));
    }
    return false;
}

}  // namespace hyperlab
