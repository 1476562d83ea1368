#pragma once

// Brute-force reference implementations. They read the raw tables through
// HyperStructure::f/g on ordered tuples and share no search code with the
// library.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "hyperlab/multiset.hpp"
#include "hyperlab/structure.hpp"

namespace oracle {

using hyperlab::Element;
using hyperlab::ElementSet;
using hyperlab::HyperStructure;
using Tuple = std::vector<Element>;

/// Every ordered k-tuple over {0..size-1}; stops when fn returns false.
inline bool each_tuple(std::size_t size, std::size_t k, const std::function<bool(const Tuple&)>& fn) {
    Tuple t(k, 0);
    if (size == 0) return true;
    for (;;) {
        if (!fn(t)) return false;
        std::size_t i = k;
        while (i > 0) {
            --i;
            if (++t[i] < size) break;
            t[i] = 0;
            if (i == 0) return true;
        }
        if (k == 0) return true;
    }
}

inline std::set<Element> to_std(ElementSet s) { return {s.begin(), s.end()}; }

inline ElementSet from_std(const std::set<Element>& s) {
    ElementSet out;
    for (Element e : s) out.insert(e);
    return out;
}

inline ElementSet f_on_sets(const HyperStructure& a, const std::vector<ElementSet>& args) {
    std::set<Element> out;
    std::vector<std::vector<Element>> pools;
    for (ElementSet s : args) pools.push_back(s.to_vector());
    Tuple t(args.size());
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == args.size()) {
            for (Element e : a.f(t)) out.insert(e);
            return;
        }
        for (Element e : pools[i]) {
            t[i] = e;
            rec(i + 1);
        }
    };
    rec(0);
    return from_std(out);
}

inline ElementSet g_on_sets(const HyperStructure& a, const std::vector<ElementSet>& args) {
    std::set<Element> out;
    std::vector<std::vector<Element>> pools;
    for (ElementSet s : args) pools.push_back(s.to_vector());
    Tuple t(args.size());
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == args.size()) {
            out.insert(a.g(t));
            return;
        }
        for (Element e : pools[i]) {
            t[i] = e;
            rec(i + 1);
        }
    };
    rec(0);
    return from_std(out);
}

/// g(s, x, 1, ..., 1) written out by hand.
inline Element scaled(const HyperStructure& a, Element s, Element x) {
    Tuple t(a.n(), a.one() ? *a.one() : Element{0});
    t[0] = s;
    t[1] = x;
    return a.g(t);
}

inline bool is_hyperideal(const HyperStructure& a, ElementSet q) {
    const std::size_t m = a.m(), n = a.n(), N = a.size();
    if (!q.contains(a.zero())) return false;
    const Tuple qs = q.to_vector();
    // f-closure over Q^m.
    bool ok = each_tuple(qs.size(), m, [&](const Tuple& idx) {
        Tuple t;
        for (Element i : idx) t.push_back(qs[i]);
        return a.f(t).subset_of(q);
    });
    if (!ok) return false;
    // The unique inverse of each member is a member.
    for (Element x : qs) {
        std::vector<Element> inv;
        for (Element y = 0; y < N; ++y) {
            Tuple t(m, a.zero());
            t[0] = x;
            t[1] = y;
            if (a.f(t).contains(a.zero())) inv.push_back(y);
        }
        if (inv.size() == 1 && !q.contains(inv[0])) return false;
    }
    // Solvability inside Q at every position.
    ok = each_tuple(qs.size(), m, [&](const Tuple& idx) {
        const Element b = qs[idx[0]];
        for (std::size_t pos = 0; pos < m; ++pos) {
            bool found = false;
            for (Element x : qs) {
                Tuple t;
                for (std::size_t j = 1; j < m; ++j) t.push_back(qs[idx[j]]);
                t.insert(t.begin() + static_cast<std::ptrdiff_t>(pos), x);
                if (a.f(t).contains(b)) {
                    found = true;
                    break;
                }
            }
            if (!found) return false;
        }
        return true;
    });
    if (!ok) return false;
    // Absorption at every position.
    return each_tuple(N, n, [&](const Tuple& t) {
        for (Element x : t)
            if (q.contains(x)) return q.contains(a.g(t));
        return true;
    });
}

inline std::vector<ElementSet> hyperideals(const HyperStructure& a) {
    std::vector<ElementSet> out;
    const std::size_t N = a.size();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << N); ++mask) {
        const ElementSet q(mask);
        if (q.contains(a.zero()) && oracle::is_hyperideal(a, q)) out.push_back(q);
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline bool is_multiplicative(const HyperStructure& a, ElementSet s) {
    const Tuple ss = s.to_vector();
    return each_tuple(ss.size(), a.n(), [&](const Tuple& idx) {
        Tuple t;
        for (Element i : idx) t.push_back(ss[i]);
        return s.contains(a.g(t));
    });
}

inline bool is_prime(const HyperStructure& a, ElementSet q) {
    if (q == a.carrier_set()) return false;
    return each_tuple(a.size(), a.n(), [&](const Tuple& t) {
        if (!q.contains(a.g(t))) return true;
        for (Element x : t)
            if (q.contains(x)) return true;
        return false;
    });
}

/// Exists s in S such that every tuple with g in Q (and g != 0 when weakly)
/// has some i with g(s, x_i, 1^(n-2)) in Q.
inline bool s_flavoured(const HyperStructure& a, ElementSet q, ElementSet s_set, bool weakly) {
    for (Element s : s_set) {
        const bool good = each_tuple(a.size(), a.n(), [&](const Tuple& t) {
            const Element v = a.g(t);
            if (!q.contains(v) || (weakly && v == a.zero())) return true;
            for (Element x : t)
                if (q.contains(oracle::scaled(a, s, x))) return true;
            return false;
        });
        if (good) return true;
    }
    return false;
}

/// True iff some tuple satisfies the antecedent (no identity needed to decide).
inline bool antecedent_fires(const HyperStructure& a, ElementSet q, bool weakly) {
    return !each_tuple(a.size(), a.n(), [&](const Tuple& t) {
        const Element v = a.g(t);
        return !(q.contains(v) && !(weakly && v == a.zero()));
    });
}

inline bool strongly_weakly(const HyperStructure& a, ElementSet q, ElementSet s_set,
                            const std::vector<ElementSet>& ideals) {
    const ElementSet zero = ElementSet::singleton(a.zero());
    for (Element s : s_set) {
        const bool good = each_tuple(ideals.size(), a.n(), [&](const Tuple& idx) {
            std::vector<ElementSet> qs;
            for (Element i : idx) qs.push_back(ideals[i]);
            const ElementSet img = oracle::g_on_sets(a, qs);
            if (img == zero || !img.subset_of(q)) return true;
            for (ElementSet qi : qs) {
                ElementSet scaled_set;
                for (Element x : qi) scaled_set.insert(oracle::scaled(a, s, x));
                if (scaled_set.subset_of(q)) return true;
            }
            return false;
        });
        if (good) return true;
    }
    return false;
}

inline ElementSet colon(const HyperStructure& a, ElementSet q, Element x) {
    ElementSet out;
    for (Element r = 0; r < a.size(); ++r)
        if (q.contains(oracle::scaled(a, r, x))) out.insert(r);
    return out;
}

inline ElementSet radical_by_primes(const HyperStructure& a, ElementSet q) {
    ElementSet out = a.carrier_set();
    for (ElementSet p : oracle::hyperideals(a))
        if (q.subset_of(p) && oracle::is_prime(a, p)) out &= p;
    return out;
}

/// Powers x, g(x, x, 1..), g(g(x, x, 1..), x, 1..), ... until they cycle.
inline ElementSet radical_by_powers(const HyperStructure& a, ElementSet q) {
    ElementSet out;
    for (Element x = 0; x < a.size(); ++x) {
        Element p = x;
        std::set<Element> seen;
        while (seen.insert(p).second) {
            if (q.contains(p)) {
                out.insert(x);
                break;
            }
            p = oracle::scaled(a, p, x);
        }
    }
    return out;
}

/// Divisor ideals dZ_k of Z_k.
inline std::vector<ElementSet> ring_ideals(std::size_t k) {
    std::vector<ElementSet> out;
    for (std::size_t d = 1; d <= k; ++d) {
        if (k % d) continue;
        ElementSet s;
        for (std::size_t x = 0; x < k; x += d) s.insert(static_cast<Element>(x));
        out.push_back(s);
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Random structure with arbitrary (usually non-Krasner) tables.
inline HyperStructure random_structure(std::mt19937& rng, std::size_t size, std::size_t m, std::size_t n) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < size; ++i) names.push_back("e" + std::to_string(i));
    std::uniform_int_distribution<std::uint64_t> mask(1, (std::uint64_t{1} << size) - 1);
    std::uniform_int_distribution<int> elem(0, static_cast<int>(size) - 1);
    std::optional<Element> one;
    if (elem(rng) % 2 == 0) one = static_cast<Element>(elem(rng));
    return HyperStructure::tabulate(
        "random", m, n, names, static_cast<Element>(elem(rng)), one,
        [&](std::span<const Element>) { return ElementSet(mask(rng)); },
        [&](std::span<const Element>) { return static_cast<Element>(elem(rng)); });
}

/// Unique inverse of x, if exactly one y has zero in f(x, y, 0^(m-2)).
inline std::optional<Element> inverse(const HyperStructure& a, Element x) {
    std::optional<Element> out;
    int count = 0;
    for (Element y = 0; y < a.size(); ++y) {
        Tuple t(a.m(), a.zero());
        t[0] = x;
        t[1] = y;
        if (a.f(t).contains(a.zero())) {
            out = y;
            ++count;
        }
    }
    return count == 1 ? out : std::nullopt;
}

/// Direct Krasner check over ordered tuples and every position. Exponential
/// in the arities; meant for carriers of a dozen elements or fewer.
inline bool is_krasner(const HyperStructure& a) {
    const std::size_t m = a.m(), n = a.n(), N = a.size();
    bool ok = each_tuple(N, m, [&](const Tuple& t) { return !a.f(t).empty(); });
    if (!ok) return false;
    // Associativity of f: every bracket position yields the same set.
    ok = each_tuple(N, 2 * m - 1, [&](const Tuple& t) {
        std::optional<ElementSet> first;
        for (std::size_t i = 0; i < m; ++i) {
            std::vector<ElementSet> args;
            for (std::size_t j = 0; j < i; ++j) args.push_back(ElementSet::singleton(t[j]));
            args.push_back(a.f(Tuple(t.begin() + static_cast<std::ptrdiff_t>(i),
                                     t.begin() + static_cast<std::ptrdiff_t>(i + m))));
            for (std::size_t j = i + m; j < t.size(); ++j) args.push_back(ElementSet::singleton(t[j]));
            const ElementSet v = oracle::f_on_sets(a, args);
            if (!first) first = v;
            if (*first != v) return false;
        }
        return true;
    });
    if (!ok) return false;
    for (Element x = 0; x < N; ++x) {
        Tuple t(m, a.zero());
        t[0] = x;
        if (a.f(t) != ElementSet::singleton(x)) return false;
        if (!oracle::inverse(a, x)) return false;
    }
    // Reversibility: x in f(x_1..x_m) gives x_i in f(x, -x_j for j != i).
    ok = each_tuple(N, m, [&](const Tuple& t) {
        for (Element x : a.f(t)) {
            for (std::size_t i = 0; i < m; ++i) {
                Tuple u{x};
                for (std::size_t j = 0; j < m; ++j)
                    if (j != i) u.push_back(*oracle::inverse(a, t[j]));
                if (!a.f(u).contains(t[i])) return false;
            }
        }
        return true;
    });
    if (!ok) return false;
    // Solvability: every b is reachable with one free argument.
    ok = each_tuple(N, m, [&](const Tuple& t) {
        const Element b = t[0];
        ElementSet reach;
        for (Element x = 0; x < N; ++x) {
            Tuple u(t.begin() + 1, t.end());
            u.push_back(x);
            reach |= a.f(u);
        }
        return reach.contains(b);
    });
    if (!ok) return false;
    ok = each_tuple(N, 2 * n - 1, [&](const Tuple& t) {
        std::optional<Element> first;
        for (std::size_t i = 0; i < n; ++i) {
            Tuple args(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(i));
            args.push_back(a.g(Tuple(t.begin() + static_cast<std::ptrdiff_t>(i),
                                     t.begin() + static_cast<std::ptrdiff_t>(i + n))));
            args.insert(args.end(), t.begin() + static_cast<std::ptrdiff_t>(i + n), t.end());
            const Element v = a.g(args);
            if (!first) first = v;
            if (*first != v) return false;
        }
        return true;
    });
    if (!ok) return false;
    // Distributivity at every position.
    ok = each_tuple(N, n - 1 + m, [&](const Tuple& t) {
        const Tuple others(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(n - 1));
        const Tuple xs(t.begin() + static_cast<std::ptrdiff_t>(n - 1), t.end());
        for (std::size_t pos = 0; pos < n; ++pos) {
            auto with = [&](ElementSet v) {
                std::vector<ElementSet> args;
                for (Element o : others) args.push_back(ElementSet::singleton(o));
                args.insert(args.begin() + static_cast<std::ptrdiff_t>(pos), v);
                return oracle::g_on_sets(a, args);
            };
            const ElementSet lhs = with(a.f(xs));
            std::vector<ElementSet> prods;
            for (Element x : xs) prods.push_back(with(ElementSet::singleton(x)));
            if (lhs != oracle::f_on_sets(a, prods)) return false;
        }
        return true;
    });
    if (!ok) return false;
    ok = each_tuple(N, n - 1, [&](const Tuple& t) {
        Tuple u(t);
        u.push_back(a.zero());
        return a.g(u) == a.zero();
    });
    if (!ok) return false;
    if (a.one()) {
        for (Element x = 0; x < N; ++x) {
            Tuple u(n - 1, *a.one());
            u.push_back(x);
            if (a.g(u) != x) return false;
        }
    }
    return true;
}

/// Copy of `a` with one f entry (sorted multiset `key`) replaced.
inline HyperStructure with_f(const HyperStructure& a, const Tuple& key, ElementSet value) {
    auto f = a.f_table();
    f[hyperlab::multiset_rank(key)] = value;
    return HyperStructure(a.name(), a.m(), a.n(), a.names(), a.zero(), a.one(), std::move(f), a.g_table());
}

inline HyperStructure with_g(const HyperStructure& a, const Tuple& key, Element value) {
    auto g = a.g_table();
    g[hyperlab::multiset_rank(key)] = value;
    return HyperStructure(a.name(), a.m(), a.n(), a.names(), a.zero(), a.one(), a.f_table(), std::move(g));
}

}  // namespace oracle
