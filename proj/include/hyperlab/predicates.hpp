#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "hyperlab/element_set.hpp"
#include "hyperlab/errors.hpp"
#include "hyperlab/ideals.hpp"
#include "hyperlab/multiset.hpp"
#include "hyperlab/structure.hpp"
#include "hyperlab/verdict.hpp"

namespace hyperlab {

/// Closure of S under g over all n-multisets drawn from S.
inline Verdict is_multiplicative(const HyperStructure& a, ElementSet s) {
    detail::require_subset(a, s);
    if (s.empty()) throw EmptyArgument("multiplicative set must be non-empty");
    std::optional<std::vector<Element>> best;
    for_each_multiset(s, a.n(), [&](std::span<const Element> t) {
        if (s.contains(a.g(t))) return;
        if (!best || counterexample_less(t, std::span<const Element>(*best))) best.emplace(t.begin(), t.end());
    });
    if (best) return Verdict::no(std::move(*best));
    return Verdict::yes();
}

/// A set that has been checked to be a hyperideal of its structure.
class Hyperideal {
public:
    Hyperideal(const HyperStructure& a, ElementSet q) : elements_(q), structure_(a.name()) {
        const Verdict v = is_hyperideal(a, q);
        if (!v.holds)
            throw NotAHyperideal(a.format(q) + " is not a hyperideal of '" + a.name() + "' (" + v.note +
                                 " fails at " + a.format(v.counterexample) + ")");
    }
    ElementSet elements() const { return elements_; }
    const std::string& structure() const { return structure_; }

private:
    ElementSet elements_;
    std::string structure_;
};

/// A non-empty set that has been checked to be closed under g.
class MultiplicativeSet {
public:
    MultiplicativeSet(const HyperStructure& a, ElementSet s) : elements_(s), structure_(a.name()) {
        const Verdict v = is_multiplicative(a, s);
        if (!v.holds)
            throw NotMultiplicative(a.format(s) + " is not multiplicative in '" + a.name() + "': g" +
                                    a.format(v.counterexample) + " leaves the set");
    }
    ElementSet elements() const { return elements_; }
    const std::string& structure() const { return structure_; }

private:
    ElementSet elements_;
    std::string structure_;
};

struct PredicateOptions {
    /// Largest number of hyperideal n-multisets the strongly weakly scan may visit.
    std::uint64_t ideal_tuple_budget = 10'000'000;
};

namespace detail {

inline void require_proper(const HyperStructure& a, ElementSet q) {
    if (q == a.carrier_set()) throw NotProper();
}

inline void require_disjoint(const HyperStructure& a, ElementSet q, ElementSet s) {
    require_subset(a, q);
    require_subset(a, s);
    if (q.intersects(s))
        throw DisjointnessViolated("Q " + a.format(q) + " meets S " + a.format(s) + " in " + a.format(q & s));
}

/// Precondition order: disjointness, hyperideal, properness, closure of S.
inline void require_ideal_pair(const HyperStructure& a, ElementSet q, ElementSet s) {
    require_disjoint(a, q, s);
    const Hyperideal checked_q(a, q);
    require_proper(a, q);
    const MultiplicativeSet checked_s(a, s);
}

/// Antecedent instances that do not already satisfy the consequent through
/// absorption. `defeats(s, i)` says whether candidate i fails the consequent
/// for s; it is only called once a candidate exists.
struct CandidateScan {
    bool antecedent_seen = false;
    std::size_t count = 0;
};

template <class Defeats, class Record>
Verdict search_s(ElementSet s_set, const CandidateScan& scan, Defeats&& defeats, Record&& record) {
    if (!scan.antecedent_seen) return Verdict::vacuous();
    if (scan.count == 0) return Verdict::yes(s_set.min());
    Verdict out;
    std::vector<std::size_t> first_failure;
    for (Element s : s_set) {
        std::optional<std::size_t> failure;
        for (std::size_t i = 0; i < scan.count; ++i) {
            if (defeats(s, i)) {
                failure = i;
                break;
            }
        }
        if (!failure) return Verdict::yes(s);
        first_failure.push_back(*failure);
    }
    for (std::size_t i = 0; i < scan.count; ++i) {
        bool all = true;
        for (Element s : s_set) {
            if (!defeats(s, i)) {
                all = false;
                break;
            }
        }
        if (all) {
            record(out, i);
            return out;
        }
    }
    std::size_t k = 0;
    for (Element s : s_set) {
        Verdict one;
        record(one, first_failure[k++]);
        out.refutations.push_back({s, one.counterexample, one.counterexample_ideals});
    }
    return out;
}

/// Element tuples with g(t) in Q (and != 0 when `weakly`), deduplicated by
/// support and sorted best first; tuples meeting Q are absorbed and dropped.
inline std::pair<CandidateScan, std::vector<std::vector<Element>>> element_candidates(const HyperStructure& a,
                                                                                     ElementSet q, bool weakly) {
    CandidateScan scan;
    std::unordered_map<std::uint64_t, std::vector<Element>> by_support;
    for_each_multiset(a.carrier_set(), a.n(), [&](std::span<const Element> t) {
        const Element v = a.g(t);
        if (!q.contains(v) || (weakly && v == a.zero())) return;
        scan.antecedent_seen = true;
        ElementSet support;
        for (Element e : t) support.insert(e);
        if (support.intersects(q)) return;
        auto [it, fresh] = by_support.try_emplace(support.bits(), t.begin(), t.end());
        if (!fresh && counterexample_less(t, std::span<const Element>(it->second))) it->second.assign(t.begin(), t.end());
    });
    std::vector<std::vector<Element>> cands;
    cands.reserve(by_support.size());
    for (auto& [bits, t] : by_support) cands.push_back(std::move(t));
    std::sort(cands.begin(), cands.end(),
              [](const auto& x, const auto& y) { return counterexample_less(x, y); });
    scan.count = cands.size();
    return {scan, std::move(cands)};
}

inline Verdict element_s_predicate(const HyperStructure& a, ElementSet q, ElementSet s_set, bool weakly) {
    require_ideal_pair(a, q, s_set);
    auto [scan, cands] = element_candidates(a, q, weakly);
    std::vector<std::optional<ElementSet>> colons(a.size());
    auto colon_of = [&](Element s) -> ElementSet {
        if (!colons[s]) colons[s] = colon(a, q, s);
        return *colons[s];
    };
    auto defeats = [&](Element s, std::size_t i) {
        const ElementSet c = colon_of(s);
        for (Element e : cands[i])
            if (c.contains(e)) return false;
        return true;
    };
    auto record = [&](Verdict& v, std::size_t i) { v.counterexample = cands[i]; };
    return search_s(s_set, scan, defeats, record);
}

}  // namespace detail

/// g(x_1^n) in Q implies some x_i in Q. Scans n-multisets outside Q.
inline Verdict is_prime(const HyperStructure& a, ElementSet q) {
    const Hyperideal checked(a, q);
    detail::require_proper(a, q);
    if (auto c = prime_counterexample(a, q)) return Verdict::no(std::move(*c));
    return Verdict::yes();
}

/// g(x_1^n) in Q implies, for every i with x_i not in Q, that the product with
/// x_i replaced by 1_A lies in rad(Q). For n = 2 the replaced product is the
/// other factor and no identity is needed.
inline Verdict is_primary(const HyperStructure& a, ElementSet q, const IdealLattice& lattice) {
    const Hyperideal checked(a, q);
    detail::require_proper(a, q);
    const ElementSet rad = radical(a, q, lattice);
    const std::size_t n = a.n();
    std::optional<std::vector<Element>> best;
    std::vector<Element> rest(n - 1);
    for_each_multiset(a.carrier_set(), n, [&](std::span<const Element> t) {
        if (!q.contains(a.g(t))) return;
        for (std::size_t i = 0; i < n; ++i) {
            if (q.contains(t[i]) || (i > 0 && t[i] == t[i - 1])) continue;
            std::size_t k = 0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) rest[k++] = t[j];
            if (rad.contains(a.g_padded(rest))) continue;
            if (!best || counterexample_less(t, std::span<const Element>(*best))) best.emplace(t.begin(), t.end());
            return;
        }
    });
    if (best) return Verdict::no(std::move(*best));
    return Verdict::yes();
}

/// Some s in S works for every n-tuple with g in Q: g(s, a_i, 1^(n-2)) in Q
/// for some i.
inline Verdict is_S_prime(const HyperStructure& a, ElementSet q, ElementSet s) {
    return detail::element_s_predicate(a, q, s, false);
}

/// As is_S_prime, with the antecedent restricted to 0 != g(a_1^n) in Q.
inline Verdict is_weakly_S_prime(const HyperStructure& a, ElementSet q, ElementSet s) {
    return detail::element_s_predicate(a, q, s, true);
}

/// 0 != g(a_1^n) in Q implies some a_i in Q. Stated without 1_A, so it is
/// defined on every structure; with an identity it agrees with
/// is_weakly_S_prime for S = {1}.
inline Verdict is_weakly_prime(const HyperStructure& a, ElementSet q) {
    const Hyperideal checked(a, q);
    detail::require_proper(a, q);
    auto [scan, cands] = detail::element_candidates(a, q, true);
    if (!scan.antecedent_seen) return Verdict::vacuous();
    if (!cands.empty()) return Verdict::no(cands.front());
    return Verdict::yes();
}

namespace detail {

struct IdealCandidates {
    CandidateScan scan;
    std::vector<std::vector<std::size_t>> tuples;
};

/// Hyperideal n-multisets from L with {0} != g(Q_1^n) subset of Q, none of
/// whose members already lies inside Q.
inline IdealCandidates ideal_candidates(const HyperStructure& a, ElementSet q, const IdealLattice& lattice,
                                        const PredicateOptions& opts) {
    const std::size_t n = a.n();
    const std::uint64_t total = multiset_count(lattice.size(), n);
    if (total > opts.ideal_tuple_budget)
        throw CapacityExceeded(std::to_string(total) + " hyperideal tuples exceed the budget of " +
                               std::to_string(opts.ideal_tuple_budget));
    IdealCandidates out;
    const ElementSet zero = ElementSet::singleton(a.zero());
    std::vector<ElementSet> args(n);
    for_each_multiset(ElementSet::full(lattice.size()), n, [&](std::span<const Element> idx) {
        for (std::size_t i = 0; i < n; ++i) args[i] = lattice[idx[i]];
        const ElementSet image = a.g_sets(args);
        if (image == zero || !image.subset_of(q)) return;
        out.scan.antecedent_seen = true;
        for (std::size_t i = 0; i < n; ++i)
            if (args[i].subset_of(q)) return;
        out.tuples.emplace_back(idx.begin(), idx.end());
    });
    std::sort(out.tuples.begin(), out.tuples.end(),
              [](const auto& x, const auto& y) { return counterexample_less(x, y); });
    out.scan.count = out.tuples.size();
    return out;
}

}  // namespace detail

/// Some s in S works for every hyperideal tuple with {0} != g(Q_1^n) subset
/// of Q: g(s, Q_i, 1^(n-2)) subset of Q for some i. Quantifies over L.
inline Verdict is_strongly_weakly_S_prime(const HyperStructure& a, ElementSet q, ElementSet s_set,
                                          const IdealLattice& lattice, const PredicateOptions& opts = {}) {
    detail::require_ideal_pair(a, q, s_set);
    const auto cands = detail::ideal_candidates(a, q, lattice, opts);
    std::vector<std::optional<ElementSet>> colons(a.size());
    auto defeats = [&](Element s, std::size_t i) {
        if (!colons[s]) colons[s] = colon(a, q, s);
        for (std::size_t idx : cands.tuples[i])
            if (lattice[idx].subset_of(*colons[s])) return false;
        return true;
    };
    auto record = [&](Verdict& v, std::size_t i) { v.counterexample_ideals = cands.tuples[i]; };
    return detail::search_s(s_set, cands.scan, defeats, record);
}

/// Every s in S to which Q is associated, i.e. for which the strongly weakly
/// condition holds with that s.
inline ElementSet associated_elements(const HyperStructure& a, ElementSet q, ElementSet s_set,
                                      const IdealLattice& lattice, const PredicateOptions& opts = {}) {
    detail::require_ideal_pair(a, q, s_set);
    const auto cands = detail::ideal_candidates(a, q, lattice, opts);
    ElementSet out;
    for (Element s : s_set) {
        if (cands.tuples.empty()) {
            out.insert(s);
            continue;
        }
        const ElementSet c = colon(a, q, s);
        bool ok = true;
        for (const auto& tuple : cands.tuples) {
            bool rescued = false;
            for (std::size_t idx : tuple) rescued = rescued || lattice[idx].subset_of(c);
            if (!rescued) {
                ok = false;
                break;
            }
        }
        if (ok) out.insert(s);
    }
    return out;
}

/// Colon characterisation: some s in S such that every a outside (Q : s)
/// has (Q : a) inside (Q : s) or (Q : a) = (0 : a). Failing elements are
/// reported as one-element tuples.
inline Verdict is_strongly_weakly_S_prime_colon(const HyperStructure& a, ElementSet q, ElementSet s_set) {
    detail::require_ideal_pair(a, q, s_set);
    std::vector<ElementSet> colon_a(a.size()), zero_a(a.size());
    for (Element x = 0; x < a.size(); ++x) {
        colon_a[x] = colon(a, q, x);
        zero_a[x] = colon_zero(a, x);
    }
    auto defeats_with = [&](Element s, Element x) {
        const ElementSet cs = colon_a[s];
        if (cs.contains(x)) return false;
        return !colon_a[x].subset_of(cs) && colon_a[x] != zero_a[x];
    };
    detail::CandidateScan scan{true, a.size()};
    auto defeats = [&](Element s, std::size_t i) { return defeats_with(s, static_cast<Element>(i)); };
    auto record = [&](Verdict& v, std::size_t i) { v.counterexample = {static_cast<Element>(i)}; };
    Verdict v = detail::search_s(s_set, scan, defeats, record);
    return v;
}

/// Result slot for one predicate inside a classification record.
struct Outcome {
    std::optional<Verdict> verdict;
    /// Set when the predicate could not be evaluated.
    std::string error;

    bool evaluable() const { return verdict.has_value(); }
    bool holds() const { return verdict && verdict->holds; }
};

struct Classification {
    Outcome prime;
    Outcome primary;
    Outcome weakly_prime;
    Outcome s_prime;
    Outcome weakly_s_prime;
    Outcome strongly_weakly_s_prime;
    Outcome strongly_weakly_s_prime_colon;
};

namespace detail {

template <class Fn>
Outcome capture(Fn&& fn) {
    Outcome o;
    try {
        o.verdict = fn();
    } catch (const IdentityRequired& e) {
        o.error = std::string("identity-required: ") + e.what();
    } catch (const NotProper& e) {
        o.error = std::string("not-proper: ") + e.what();
    } catch (const CapacityExceeded& e) {
        o.error = std::string("capacity: ") + e.what();
    }
    return o;
}

}  // namespace detail

/// All predicates at once. Only the preconditions on (Q, S) themselves raise;
/// per-predicate evaluation problems become notes in the record.
inline Classification classify(const HyperStructure& a, ElementSet q, ElementSet s_set, const IdealLattice& lattice,
                               const PredicateOptions& opts = {}) {
    detail::require_disjoint(a, q, s_set);
    const Hyperideal checked_q(a, q);
    const MultiplicativeSet checked_s(a, s_set);
    Classification c;
    c.prime = detail::capture([&] { return is_prime(a, q); });
    c.primary = detail::capture([&] { return is_primary(a, q, lattice); });
    c.weakly_prime = detail::capture([&] { return is_weakly_prime(a, q); });
    c.s_prime = detail::capture([&] { return is_S_prime(a, q, s_set); });
    c.weakly_s_prime = detail::capture([&] { return is_weakly_S_prime(a, q, s_set); });
    c.strongly_weakly_s_prime =
        detail::capture([&] { return is_strongly_weakly_S_prime(a, q, s_set, lattice, opts); });
    c.strongly_weakly_s_prime_colon = detail::capture([&] { return is_strongly_weakly_S_prime_colon(a, q, s_set); });
    return c;
}

}  // namespace hyperlab
