#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "hyperlab/constructions.hpp"
#include "hyperlab/corpus.hpp"
#include "hyperlab/ideals.hpp"
#include "hyperlab/predicates.hpp"
#include "hyperlab/structure.hpp"

namespace hyperlab {

enum class PropertyId {
    P1 = 1, P2, P3, P4, P5, P6, P7, P8, P9, P10,
    P11, P12, P13, P14, P15, P16, P17, P18, P19,
};

inline constexpr int kPropertyCount = 19;

inline std::string to_string(PropertyId id) { return "P" + std::to_string(static_cast<int>(id)); }

inline PropertyId property_from_string(const std::string& s) {
    if (s.size() >= 2 && (s[0] == 'P' || s[0] == 'p')) {
        try {
            std::size_t used = 0;
            const int k = std::stoi(s.substr(1), &used);
            if (used == s.size() - 1 && k >= 1 && k <= kPropertyCount) return static_cast<PropertyId>(k);
        } catch (const std::exception&) {
        }
    }
    throw Error("unknown property id '" + s + "'");
}

enum class Status { Verified, Counterexample, Skipped };

inline std::string to_string(Status s) {
    switch (s) {
        case Status::Verified: return "VERIFIED";
        case Status::Counterexample: return "COUNTEREXAMPLE";
        case Status::Skipped: return "SKIPPED";
    }
    return "?";
}

/// A named subset of one of the instance's structures.
struct Slot {
    std::string label;
    std::size_t owner = 0;
    ElementSet set;
};

/// Input of one property evaluation. `entries[0]` is the main structure; the
/// meaning of further entries and of the slots is fixed per property.
struct Case {
    std::vector<EntryPtr> entries;
    std::vector<Slot> slots;
    std::optional<Homomorphism> hom;

    const HyperStructure& a(std::size_t i = 0) const { return entries.at(i)->a(); }
    const CorpusEntry& entry(std::size_t i = 0) const { return *entries.at(i); }

    ElementSet get(const std::string& label) const {
        for (const auto& s : slots)
            if (s.label == label) return s.set;
        throw Error("instance has no slot '" + label + "'");
    }

    std::string describe() const {
        std::string out;
        if (hom) {
            out = hom->source() + " -> " + hom->target();
        } else {
            for (std::size_t i = 0; i < entries.size(); ++i) out += (i ? ", " : "") + entries[i]->name;
        }
        for (const auto& s : slots) out += " " + s.label + "=" + entries.at(s.owner)->a().format(s.set);
        return out;
    }
};

/// Evidence attached to a report: the certifying s, a witnessing tuple
/// (elements of the main structure, or lattice indices when `ideal_tuple`),
/// positions and a rendering.
struct Evidence {
    std::optional<Element> s;
    std::vector<Element> tuple;
    std::vector<std::size_t> ideal_tuple;
    std::vector<std::size_t> positions;
    std::string detail;

    bool operator==(const Evidence& o) const {
        return s == o.s && tuple == o.tuple && ideal_tuple == o.ideal_tuple && positions == o.positions &&
               detail == o.detail;
    }
};

struct PropertyReport {
    PropertyId id{};
    Case instance;
    Status status = Status::Skipped;
    std::string reason;
    Evidence certificate;
};

namespace detail {

struct Outcome3 {
    Status status;
    std::string reason;
    Evidence evidence;
};

inline Outcome3 skipped(std::string reason) { return {Status::Skipped, std::move(reason), {}}; }
inline Outcome3 verified(Evidence e = {}) { return {Status::Verified, {}, std::move(e)}; }
inline Outcome3 refuted(std::string reason, Evidence e = {}) {
    return {Status::Counterexample, std::move(reason), std::move(e)};
}

inline Evidence from_verdict(const Verdict& v, std::string detail) {
    Evidence e;
    e.s = v.witness_s;
    e.tuple = v.counterexample;
    e.ideal_tuple = v.counterexample_ideals;
    e.detail = std::move(detail);
    return e;
}

inline std::string yes_no(bool b) { return b ? "true" : "false"; }

inline const IdealLattice& lattice_of(const CorpusEntry& e) {
    if (!e.lattice) throw CapacityExceeded("no hyperideal lattice for '" + e.name + "'");
    return *e.lattice;
}

inline bool weakly(const HyperStructure& a, ElementSet q, ElementSet s) { return is_weakly_S_prime(a, q, s).holds; }

inline bool strongly_weakly(const CorpusEntry& e, ElementSet q, ElementSet s, const CorpusSpec& spec) {
    return is_strongly_weakly_S_prime(e.a(), q, s, lattice_of(e), PredicateOptions{spec.budget}).holds;
}

/// False instead of throwing when Q is not proper or meets S.
inline bool s_prime_or_false(const HyperStructure& a, ElementSet q, ElementSet s) {
    if (q == a.carrier_set() || q.intersects(s)) return false;
    return is_S_prime(a, q, s).holds;
}

inline bool weakly_or_false(const HyperStructure& a, ElementSet q, ElementSet s) {
    if (q == a.carrier_set() || q.intersects(s)) return false;
    return is_weakly_S_prime(a, q, s).holds;
}

inline ElementSet radical_zero(const CorpusEntry& e) {
    return radical(e.a(), ElementSet::singleton(e.a().zero()), lattice_of(e));
}

inline ElementSet scale_set(const HyperStructure& a, Element s, ElementSet x) {
    ElementSet out;
    for (Element e : x) out.insert(a.scaled(s, e));
    return out;
}

/// g(X, Q^(n-1)).
inline ElementSet with_power(const HyperStructure& a, ElementSet x, ElementSet q) {
    std::vector<ElementSet> args(a.n(), q);
    args[0] = x;
    return a.g_sets(args);
}

inline Outcome3 eval_p1(const Case& c, const CorpusSpec&) {
    const HyperStructure& a = c.a();
    const ElementSet q = c.get("Q"), s = c.get("S");
    std::vector<ElementSet> args;
    for (std::size_t j = 1; j < a.n(); ++j) {
        const ElementSet qj = c.get("Q_" + std::to_string(j));
        if (!qj.intersects(s)) return skipped("hypothesis: Q_" + std::to_string(j) + " does not meet S");
        args.push_back(qj);
    }
    if (!weakly(a, q, s)) return skipped("hypothesis: Q is not weakly S-prime");
    args.push_back(q);
    const ElementSet image = a.g_sets(args);
    if (!is_hyperideal(a, image).holds) return skipped("image " + a.format(image) + " is not a hyperideal");
    const Verdict v = is_weakly_S_prime(a, image, s);
    if (v.holds) return verified(from_verdict(v, "image " + a.format(image)));
    return refuted("image " + a.format(image) + " is not weakly S-prime", from_verdict(v, a.format(image)));
}

inline Outcome3 eval_p2(const Case& c, const CorpusSpec&) {
    const HyperStructure& a = c.a();
    const ElementSet q = c.get("Q"), s = c.get("S"), p = c.get("P");
    if (!p.intersects(s)) return skipped("hypothesis: P does not meet S");
    if (!weakly(a, q, s)) return skipped("hypothesis: Q is not weakly S-prime");
    const Verdict v = is_weakly_S_prime(a, q & p, s);
    if (v.holds) return verified(from_verdict(v, "Q meet P = " + a.format(q & p)));
    return refuted("Q meet P is not weakly S-prime", from_verdict(v, a.format(q & p)));
}

inline Outcome3 eval_p3(const Case& c, const CorpusSpec&) {
    const HyperStructure& a = c.a();
    const ElementSet q = c.get("Q"), s_set = c.get("S");
    std::optional<Element> chosen;
    for (Element s : s_set) {
        const ElementSet cs = colon(a, q, s);
        if (cs == a.carrier_set() || !is_hyperideal(a, cs).holds) continue;
        if (is_weakly_prime(a, cs).holds) {
            chosen = s;
            break;
        }
    }
    if (!chosen) return skipped("hypothesis: no (Q : s) is a weakly prime hyperideal");
    const Verdict v = is_weakly_S_prime(a, q, s_set);
    Evidence e = from_verdict(v, "(Q : s) weakly prime for s = " + a.name_of(*chosen));
    e.s = chosen;
    if (v.holds) return verified(e);
    return refuted("Q is not weakly S-prime", e);
}

inline Outcome3 eval_p4(const Case& c, const CorpusSpec&) {
    const CorpusEntry& en = c.entry();
    const HyperStructure& a = c.a();
    const ElementSet s = c.get("S");
    if (s.contains(a.zero())) return skipped("hypothesis: S contains zero");
    bool lhs = true, every_s_prime_prime = true;
    std::optional<ElementSet> lhs_witness, rhs_witness;
    for (ElementSet q : en.proper_ideals()) {
        if (q.intersects(s)) continue;
        const bool prime = is_prime(a, q).holds;
        if (!prime && is_weakly_S_prime(a, q, s).holds && lhs) {
            lhs = false;
            lhs_witness = q;
        }
        if (!prime && is_S_prime(a, q, s).holds && every_s_prime_prime) {
            every_s_prime_prime = false;
            rhs_witness = q;
        }
    }
    const bool domain = is_hyperintegral_domain(a);
    const bool rhs = domain && every_s_prime_prime;
    Evidence e;
    e.detail = "every weakly S-prime is prime: " + yes_no(lhs) + "; domain: " + yes_no(domain) +
               "; every S-prime is prime: " + yes_no(every_s_prime_prime);
    if (lhs_witness) e.detail += "; weakly S-prime non-prime " + a.format(*lhs_witness);
    if (rhs_witness) e.detail += "; S-prime non-prime " + a.format(*rhs_witness);
    if (lhs == rhs) return verified(e);
    return refuted("the two sides differ", e);
}

/// For every t in T some t' in T has g(t^(n-1), t') in S.
inline bool transfer_condition(const HyperStructure& a, ElementSet s, ElementSet t) {
    std::vector<Element> args(a.n());
    for (Element x : t) {
        bool found = false;
        for (Element y : t) {
            std::fill(args.begin(), args.end(), x);
            args.back() = y;
            if (s.contains(a.g(args))) {
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

inline Outcome3 eval_p5(const Case& c, const CorpusSpec&) {
    const HyperStructure& a = c.a();
    const ElementSet q = c.get("Q"), s = c.get("S"), t = c.get("T");
    if (!s.subset_of(t)) return skipped("hypothesis: S is not contained in T");
    if (!transfer_condition(a, s, t)) return skipped("hypothesis: transfer condition fails");
    if (!weakly(a, q, t)) return skipped("hypothesis: Q is not weakly T-prime");
    const Verdict v = is_weakly_S_prime(a, q, s);
    if (v.holds) return verified(from_verdict(v, ""));
    return refuted("Q is not weakly S-prime", from_verdict(v, ""));
}

inline Outcome3 eval_p6(const Case& c, const CorpusSpec& spec) {
    const CorpusEntry& en = c.entry();
    const HyperStructure& a = c.a();
    const ElementSet q = c.get("Q"), s_set = c.get("S");
    if (!strongly_weakly(en, q, s_set, spec)) return skipped("hypothesis: Q is not strongly weakly S-prime");
    const ElementSet assoc = associated_elements(a, q, s_set, lattice_of(en), PredicateOptions{spec.budget});
    const std::size_t n = a.n();
    std::size_t checked = 0;
    std::optional<Outcome3> failure;
    const ElementSet zero = ElementSet::singleton(a.zero());
    for (Element s : assoc) {
        for_each_multiset(a.carrier_set(), n, [&](std::span<const Element> t) {
            if (a.g(t) != a.zero()) return true;
            for (Element x : t)
                if (q.contains(a.scaled(s, x))) return true;
            ++checked;
            std::vector<ElementSet> args(n);
            for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
                std::vector<std::size_t> positions;
                for (std::size_t i = 0; i < n; ++i) {
                    const bool replaced = (mask >> i) & 1U;
                    args[i] = replaced ? q : ElementSet::singleton(t[i]);
                    if (replaced) positions.push_back(i + 1);
                }
                const ElementSet image = a.g_sets(args);
                if (image == zero) continue;
                Evidence e;
                e.s = s;
                e.tuple.assign(t.begin(), t.end());
                e.positions = positions;
                e.detail = "substituted image " + a.format(image);
                failure = refuted("a Q-substitution of the tuple has a nonzero image", e);
                return false;
            }
            return true;
        });
        if (failure) return *failure;
    }
    if (checked == 0) return skipped("hypothesis: no zero-product tuple fails every consequent");
    Evidence e;
    e.detail = std::to_string(checked) + " tuples, all substitutions zero";
    return verified(e);
}

inline Outcome3 eval_p7(const Case& c, const CorpusSpec& spec) {
    const HyperStructure& a = c.a();
    const ElementSet q = c.get("Q"), s = c.get("S");
    if (!strongly_weakly(c.entry(), q, s, spec)) return skipped("hypothesis: Q is not strongly weakly S-prime");
    if (is_S_prime(a, q, s).holds) return skipped("hypothesis: Q is S-prime");
    const ElementSet power = set_power(a, q);
    Evidence e;
    e.detail = "g(Q^(n)) = " + a.format(power);
    if (power == ElementSet::singleton(a.zero())) return verified(e);
    return refuted("g(Q^(n)) is not zero", e);
}

inline Outcome3 eval_p8(const Case& c, const CorpusSpec& spec) {
    const HyperStructure& a = c.a();
    const ElementSet q = c.get("Q"), s_set = c.get("S");
    if (!strongly_weakly(c.entry(), q, s_set, spec)) return skipped("hypothesis: Q is not strongly weakly S-prime");
    const ElementSet rad0 = radical_zero(c.entry());
    Evidence e;
    e.detail = "rad(0) = " + a.format(rad0);
    if (q.subset_of(rad0)) return verified(e);
    for (Element s : s_set) {
        if (scale_set(a, s, rad0).subset_of(q)) {
            e.s = s;
            return verified(e);
        }
    }
    return refuted("Q is not inside rad(0) and no s scales rad(0) into Q", e);
}

inline Outcome3 eval_p9(const Case& c, const CorpusSpec& spec) {
    const HyperStructure& a = c.a();
    if (!a.one()) return skipped("no scalar identity");
    const ElementSet q = c.get("Q"), one = ElementSet::singleton(*a.one());
    if (!strongly_weakly(c.entry(), q, one, spec)) return skipped("hypothesis: Q is not strongly weakly prime");
    if (is_prime(a, q).holds) return skipped("hypothesis: Q is prime");
    const ElementSet power = set_power(a, q);
    Evidence e;
    e.detail = "g(Q^(n)) = " + a.format(power);
    if (power == ElementSet::singleton(a.zero())) return verified(e);
    return refuted("g(Q^(n)) is not zero", e);
}

inline Outcome3 eval_p10(const Case& c, const CorpusSpec& spec) {
    const HyperStructure& a = c.a();
    const ElementSet q = c.get("Q"), s = c.get("S");
    const Verdict def = is_strongly_weakly_S_prime(a, q, s, lattice_of(c.entry()), PredicateOptions{spec.budget});
    const Verdict col = is_strongly_weakly_S_prime_colon(a, q, s);
    Evidence e = from_verdict(def.holds ? col : def, "definition " + yes_no(def.holds) + ", colon " + yes_no(col.holds));
    if (def.holds == col.holds) return verified(e);
    return refuted("the two characterisations disagree", e);
}

inline Outcome3 eval_p11(const Case& c, const CorpusSpec& spec) {
    const HyperStructure& a = c.a();
    if (!a.one()) return skipped("no scalar identity");
    const ElementSet q = c.get("Q"), one = ElementSet::singleton(*a.one());
    const bool def = strongly_weakly(c.entry(), q, one, spec);
    bool literal = true, inclusion = true;
    std::optional<Element> bad;
    for (Element x : q.complement(a.size())) {
        const ElementSet cq = colon(a, q, x), cz = colon_zero(a, x);
        if (!(cq == q || cq == cz)) {
            literal = false;
            if (!bad) bad = x;
        }
        if (!(cq.subset_of(q) || cq == cz)) inclusion = false;
    }
    Evidence e;
    if (bad) e.tuple = {*bad};
    e.detail = "definition " + yes_no(def) + ", (Q:a) = Q reading " + yes_no(literal) + ", (Q:a) in Q reading " +
               yes_no(inclusion);
    if (def == literal && literal == inclusion) return verified(e);
    return refuted("the characterisations disagree", e);
}

inline Outcome3 eval_p12(const Case& c, const CorpusSpec& spec) {
    const HyperStructure& a = c.a();
    const ElementSet q = c.get("Q"), s_set = c.get("S");
    if (!strongly_weakly(c.entry(), q, s_set, spec)) return skipped("hypothesis: Q is not strongly weakly S-prime");
    if (is_S_prime(a, q, s_set).holds) return skipped("hypothesis: Q is S-prime");
    const ElementSet rad0 = radical_zero(c.entry());
    const ElementSet zero = ElementSet::singleton(a.zero());
    for (Element s : s_set) {
        if (with_power(a, scale_set(a, s, rad0), q) == zero) {
            Evidence e;
            e.s = s;
            e.detail = "rad(0) = " + a.format(rad0);
            return verified(e);
        }
    }
    Evidence e;
    e.detail = "rad(0) = " + a.format(rad0);
    return refuted("no s in S annihilates", e);
}

inline Outcome3 eval_p13(const Case& c, const CorpusSpec& spec) {
    const HyperStructure& a = c.a();
    const ElementSet q1 = c.get("Q_1"), q2 = c.get("Q_2"), s_set = c.get("S");
    if (s_set.contains(a.zero())) return skipped("hypothesis: S contains zero");
    for (ElementSet q : {q1, q2}) {
        if (!strongly_weakly(c.entry(), q, s_set, spec))
            return skipped("hypothesis: " + a.format(q) + " is not strongly weakly S-prime");
        if (is_S_prime(a, q, s_set).holds) return skipped("hypothesis: " + a.format(q) + " is S-prime");
    }
    const ElementSet zero = ElementSet::singleton(a.zero());
    for (Element s : s_set) {
        if (with_power(a, scale_set(a, s, q1), q2) == zero && with_power(a, scale_set(a, s, q2), q1) == zero) {
            Evidence e;
            e.s = s;
            return verified(e);
        }
    }
    return refuted("no s in S annihilates both ways");
}

inline Outcome3 eval_p14(const Case& c, const CorpusSpec& spec) {
    const HyperStructure& a = c.a();
    if (!a.one()) return skipped("no scalar identity");
    const ElementSet q = c.get("Q"), one = ElementSet::singleton(*a.one());
    if (!strongly_weakly(c.entry(), q, one, spec)) return skipped("hypothesis: Q is not strongly weakly prime");
    if (is_prime(a, q).holds) return skipped("hypothesis: Q is prime");
    const ElementSet rad0 = radical_zero(c.entry());
    const ElementSet image = with_power(a, rad0, q);
    Evidence e;
    e.detail = "g(rad(0), Q^(n-1)) = " + a.format(image);
    if (image == ElementSet::singleton(a.zero())) return verified(e);
    return refuted("g(rad(0), Q^(n-1)) is not zero", e);
}

/// Shared by P15 and P16: entries = {source, target}, slots S (source) and
/// Q_2 (target).
inline Outcome3 eval_preimage(const Case& c) {
    const HyperStructure& src = c.a(0);
    const HyperStructure& tgt = c.a(1);
    const Homomorphism& h = *c.hom;
    const ElementSet s = c.get("S"), q2 = c.get("Q_2");
    if (!h.injective()) return skipped("hypothesis: h is not injective");
    const ElementSet hs = h.image(s);
    if (hs.intersects(q2)) return skipped("hypothesis: h(S) meets Q_2");
    if (!weakly(tgt, q2, hs)) return skipped("hypothesis: Q_2 is not weakly h(S)-prime");
    const ElementSet pre = h.preimage(q2);
    if (!is_hyperideal(src, pre).holds)
        return refuted("preimage " + src.format(pre) + " is not a hyperideal");
    if (pre == src.carrier_set()) return skipped("preimage is the whole carrier");
    const Verdict v = is_weakly_S_prime(src, pre, s);
    if (v.holds) return verified(from_verdict(v, "preimage " + src.format(pre)));
    return refuted("preimage is not weakly S-prime", from_verdict(v, "preimage " + src.format(pre)));
}

inline Outcome3 eval_p15(const Case& c, const CorpusSpec&) { return eval_preimage(c); }

inline Outcome3 eval_p16(const Case& c, const CorpusSpec&) {
    if (!c.hom) return skipped("no inclusion");
    return eval_preimage(c);
}

/// entries = {product, A1, A2}; slots Q_1, S_1 (A1) and Q_2, S_2 (A2).
inline Outcome3 eval_p17(const Case& c, const CorpusSpec&) {
    const HyperStructure& p = c.a(0);
    const HyperStructure& a1 = c.a(1);
    const HyperStructure& a2 = c.a(2);
    const ElementSet q1 = c.get("Q_1"), q2 = c.get("Q_2"), s1 = c.get("S_1"), s2 = c.get("S_2");
    if (q1 == ElementSet::singleton(a1.zero()) || q2 == ElementSet::singleton(a2.zero()))
        return skipped("hypothesis: the hyperideals must be nonzero");
    const ElementSet q = product_ideal(a1, a2, q1, q2), s = product_mult_set(a1, a2, s1, s2);
    const bool i = weakly_or_false(p, q, s);
    const bool ii = (s_prime_or_false(a1, q1, s1) && q2.intersects(s2)) ||
                    (s_prime_or_false(a2, q2, s2) && q1.intersects(s1));
    const bool iii = s_prime_or_false(p, q, s);
    Evidence e;
    e.detail = "(i) " + yes_no(i) + ", (ii) " + yes_no(ii) + ", (iii) " + yes_no(iii);
    if (i == ii && ii == iii) return verified(e);
    return refuted("the three statements differ", e);
}

/// entries = {triple product, A1, A2, A3}; slots Q_i, S_i owned by entry i.
inline Outcome3 eval_p18(const Case& c, const CorpusSpec&) {
    const HyperStructure& p = c.a(0);
    std::vector<ElementSet> qs, ss;
    for (std::size_t i = 1; i <= 3; ++i) {
        qs.push_back(c.get("Q_" + std::to_string(i)));
        ss.push_back(c.get("S_" + std::to_string(i)));
        if (qs.back() == ElementSet::singleton(c.a(i).zero()))
            return skipped("hypothesis: the hyperideals must be nonzero");
    }
    const ElementSet q = product_ideal(p, c.a(3), product_ideal(c.a(1), c.a(2), qs[0], qs[1]), qs[2]);
    const ElementSet s = product_mult_set(p, c.a(3), product_mult_set(c.a(1), c.a(2), ss[0], ss[1]), ss[2]);
    const bool lhs = weakly_or_false(p, q, s);
    bool rhs = false;
    for (std::size_t i = 0; i < 3 && !rhs; ++i) {
        if (!s_prime_or_false(c.a(i + 1), qs[i], ss[i])) continue;
        bool others = true;
        for (std::size_t j = 0; j < 3; ++j)
            if (j != i && !qs[j].intersects(ss[j])) others = false;
        rhs = others;
    }
    Evidence e;
    e.detail = "product weakly S-prime " + yes_no(lhs) + ", factor condition " + yes_no(rhs);
    if (lhs == rhs) return verified(e);
    return refuted("the two sides differ", e);
}

/// entries = {product, A1, A2}; slots Q and S in the product.
inline Outcome3 eval_p19(const Case& c, const CorpusSpec&) {
    if (!is_hyperfield(c.a(1)) || !is_hyperfield(c.a(2))) return skipped("hypothesis: factors are not hyperfields");
    const HyperStructure& p = c.a(0);
    const ElementSet q = c.get("Q"), s = c.get("S");
    const Verdict v = is_weakly_S_prime(p, q, s);
    if (v.holds) return verified(from_verdict(v, ""));
    return refuted("proper hyperideal is not weakly S-prime", from_verdict(v, ""));
}

}  // namespace detail

/// Evaluates one property on one instance. Evaluation problems (missing
/// identity, budget overruns) become SKIPPED reports.
inline PropertyReport run_property(PropertyId id, const Case& instance, const CorpusSpec& spec = {}) {
    using Fn = detail::Outcome3 (*)(const Case&, const CorpusSpec&);
    static constexpr Fn table[] = {
        detail::eval_p1,  detail::eval_p2,  detail::eval_p3,  detail::eval_p4,  detail::eval_p5,
        detail::eval_p6,  detail::eval_p7,  detail::eval_p8,  detail::eval_p9,  detail::eval_p10,
        detail::eval_p11, detail::eval_p12, detail::eval_p13, detail::eval_p14, detail::eval_p15,
        detail::eval_p16, detail::eval_p17, detail::eval_p18, detail::eval_p19,
    };
    const int k = static_cast<int>(id);
    if (k < 1 || k > kPropertyCount) throw Error("unknown property id");
    PropertyReport r;
    r.id = id;
    r.instance = instance;
    detail::Outcome3 o{Status::Skipped, {}, {}};
    try {
        o = table[k - 1](instance, spec);
    } catch (const IdentityRequired& e) {
        o = detail::skipped(std::string("identity-required: ") + e.what());
    } catch (const CapacityExceeded& e) {
        o = detail::skipped(std::string("capacity: ") + e.what());
    } catch (const NotProper& e) {
        o = detail::skipped(std::string("not-proper: ") + e.what());
    }
    r.status = o.status;
    r.reason = std::move(o.reason);
    r.certificate = std::move(o.evidence);
    return r;
}

/// Re-runs the report's property on its own instance and checks that the
/// status and evidence come out the same.
inline bool replay(const PropertyReport& r, const CorpusSpec& spec = {}) {
    const PropertyReport again = run_property(r.id, r.instance, spec);
    return again.status == r.status && again.certificate == r.certificate && again.reason == r.reason;
}

namespace detail {

inline Slot slot(std::string label, ElementSet set, std::size_t owner = 0) { return {std::move(label), owner, set}; }

/// (Q, S) with Q proper and S a multiplicative set disjoint from Q.
template <class Fn>
void for_each_pair(const CorpusEntry& e, Fn&& fn) {
    for (ElementSet q : e.proper_ideals())
        for (ElementSet s : e.mult_sets)
            if (!q.intersects(s)) fn(q, s);
}

inline bool usable(const EntryPtr& e) { return e->valid() && e->lattice.has_value(); }

inline std::vector<Case> cases_for(PropertyId id, const Corpus& corpus) {
    std::vector<Case> out;
    auto simple = [&](const EntryPtr& e, std::vector<Slot> slots) { out.push_back(Case{{e}, std::move(slots), {}}); };
    switch (id) {
        case PropertyId::P1:
            for (const auto& e : corpus.entries) {
                if (!usable(e)) continue;
                const auto& ideals = e->lattice->ideals();
                for_each_pair(*e, [&](ElementSet q, ElementSet s) {
                    std::vector<std::size_t> meeting;
                    for (std::size_t i = 0; i < ideals.size(); ++i)
                        if (ideals[i].intersects(s)) meeting.push_back(i);
                    if (meeting.empty()) return;
                    ElementSet pool;
                    for (std::size_t i : meeting) pool.insert(static_cast<Element>(i));
                    for_each_multiset(pool, e->a().n() - 1, [&](std::span<const Element> idx) {
                        std::vector<Slot> slots{slot("Q", q), slot("S", s)};
                        for (std::size_t j = 0; j < idx.size(); ++j)
                            slots.push_back(slot("Q_" + std::to_string(j + 1), ideals[idx[j]]));
                        simple(e, std::move(slots));
                    });
                });
            }
            break;
        case PropertyId::P2:
            for (const auto& e : corpus.entries) {
                if (!usable(e)) continue;
                for_each_pair(*e, [&](ElementSet q, ElementSet s) {
                    for (ElementSet p : e->lattice->ideals())
                        if (p.intersects(s)) simple(e, {slot("Q", q), slot("S", s), slot("P", p)});
                });
            }
            break;
        case PropertyId::P3:
        case PropertyId::P6:
        case PropertyId::P7:
        case PropertyId::P8:
        case PropertyId::P10:
        case PropertyId::P12:
            for (const auto& e : corpus.entries) {
                if (!usable(e)) continue;
                for_each_pair(*e, [&](ElementSet q, ElementSet s) { simple(e, {slot("Q", q), slot("S", s)}); });
            }
            break;
        case PropertyId::P4:
            for (const auto& e : corpus.entries) {
                if (!usable(e)) continue;
                for (ElementSet s : e->mult_sets) simple(e, {slot("S", s)});
            }
            break;
        case PropertyId::P5:
            for (const auto& e : corpus.entries) {
                if (!usable(e)) continue;
                for_each_pair(*e, [&](ElementSet q, ElementSet t) {
                    for (ElementSet s : e->mult_sets)
                        if (s != t && s.subset_of(t)) simple(e, {slot("Q", q), slot("S", s), slot("T", t)});
                });
            }
            break;
        case PropertyId::P9:
        case PropertyId::P11:
        case PropertyId::P14:
            for (const auto& e : corpus.entries) {
                if (!usable(e) || !e->a().one()) continue;
                for (ElementSet q : e->proper_ideals()) simple(e, {slot("Q", q)});
            }
            break;
        case PropertyId::P13:
            for (const auto& e : corpus.entries) {
                if (!usable(e)) continue;
                const auto ideals = e->proper_ideals();
                for (ElementSet s : e->mult_sets)
                    for (std::size_t i = 0; i < ideals.size(); ++i)
                        for (std::size_t j = i; j < ideals.size(); ++j)
                            if (!ideals[i].intersects(s) && !ideals[j].intersects(s))
                                simple(e, {slot("Q_1", ideals[i]), slot("Q_2", ideals[j]), slot("S", s)});
            }
            break;
        case PropertyId::P15:
        case PropertyId::P16:
            for (const auto& hom : corpus.homs) {
                if (id == PropertyId::P16 && !hom.inclusion) continue;
                if (!usable(hom.source) || !usable(hom.target)) continue;
                for (ElementSet s : hom.source->mult_sets)
                    for (ElementSet q2 : hom.target->proper_ideals())
                        out.push_back(Case{{hom.source, hom.target}, {slot("S", s, 0), slot("Q_2", q2, 1)}, hom.h});
            }
            break;
        case PropertyId::P17:
            for (const auto& pe : corpus.products) {
                if (!pe.left->a().one() || !pe.right->a().one() || !usable(pe.left) || !usable(pe.right)) continue;
                for (ElementSet q1 : pe.left->lattice->ideals())
                    for (ElementSet q2 : pe.right->lattice->ideals())
                        for (ElementSet s1 : pe.left->mult_sets)
                            for (ElementSet s2 : pe.right->mult_sets)
                                out.push_back(Case{{pe.product, pe.left, pe.right},
                                                   {slot("Q_1", q1, 1), slot("S_1", s1, 1), slot("Q_2", q2, 2),
                                                    slot("S_2", s2, 2)},
                                                   {}});
            }
            break;
        case PropertyId::P18:
            for (const auto& te : corpus.triples) {
                bool ok = true;
                for (const auto& f : te.factors) ok = ok && usable(f) && f->a().one();
                if (!ok) continue;
                const auto& f = te.factors;
                for (ElementSet q1 : f[0]->lattice->ideals())
                    for (ElementSet q2 : f[1]->lattice->ideals())
                        for (ElementSet q3 : f[2]->lattice->ideals())
                            for (ElementSet s1 : f[0]->mult_sets)
                                for (ElementSet s2 : f[1]->mult_sets)
                                    for (ElementSet s3 : f[2]->mult_sets)
                                        out.push_back(Case{{te.product, f[0], f[1], f[2]},
                                                           {slot("Q_1", q1, 1), slot("S_1", s1, 1), slot("Q_2", q2, 2),
                                                            slot("S_2", s2, 2), slot("Q_3", q3, 3), slot("S_3", s3, 3)},
                                                           {}});
            }
            break;
        case PropertyId::P19:
            for (const auto& pe : corpus.products) {
                if (!usable(pe.product)) continue;
                for_each_pair(*pe.product, [&](ElementSet q, ElementSet s) {
                    out.push_back(Case{{pe.product, pe.left, pe.right}, {slot("Q", q), slot("S", s)}, {}});
                });
            }
            break;
    }
    return out;
}

}  // namespace detail

struct SuiteResult {
    std::vector<PropertyReport> reports;
    std::vector<std::string> discrepancies;
    /// Entry names whose counterexamples do not count against the suite.
    std::vector<std::string> non_canonical;

    std::size_t count(Status s) const {
        return static_cast<std::size_t>(
            std::count_if(reports.begin(), reports.end(), [s](const PropertyReport& r) { return r.status == s; }));
    }
    /// Non-skipped reports per property.
    std::map<int, std::size_t> coverage() const {
        std::map<int, std::size_t> out;
        for (int k = 1; k <= kPropertyCount; ++k) out[k] = 0;
        for (const auto& r : reports)
            if (r.status != Status::Skipped) ++out[static_cast<int>(r.id)];
        return out;
    }
    /// Counterexamples on canonical instances.
    std::size_t failures() const {
        std::size_t k = 0;
        for (const auto& r : reports) {
            if (r.status != Status::Counterexample) continue;
            const bool canonical = std::all_of(r.instance.entries.begin(), r.instance.entries.end(),
                                               [](const EntryPtr& e) { return e->canonical; });
            if (canonical) ++k;
        }
        return k;
    }
};

struct SuiteOptions {
    std::vector<PropertyId> properties;
    /// 0 picks the hardware concurrency.
    unsigned threads = 0;
};

/// Runs every selected property over every generated instance of the
/// corpus. Work is split per property and merged in property order, so the
/// result does not depend on scheduling.
inline SuiteResult run_suite(const Corpus& corpus, const SuiteOptions& opts = {}) {
    std::vector<PropertyId> ids = opts.properties;
    if (ids.empty())
        for (int k = 1; k <= kPropertyCount; ++k) ids.push_back(static_cast<PropertyId>(k));
    std::vector<std::vector<PropertyReport>> per(ids.size());
    std::vector<std::exception_ptr> errors(ids.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < ids.size(); i = next++) {
            try {
                for (const Case& c : detail::cases_for(ids[i], corpus))
                    per[i].push_back(run_property(ids[i], c, corpus.spec));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    unsigned threads = opts.threads ? opts.threads : std::max(1U, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(ids.size()));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    SuiteResult out;
    out.discrepancies = corpus.discrepancies;
    for (const auto& e : corpus.entries)
        if (!e->canonical) out.non_canonical.push_back(e->name);
    for (auto& v : per)
        for (auto& r : v) out.reports.push_back(std::move(r));
    return out;
}

inline SuiteResult run_suite(const CorpusSpec& spec, const SuiteOptions& opts = {}) {
    return run_suite(build_corpus(spec), opts);
}

/// Predicate names as used by classify records and the CLI.
inline const std::vector<std::string>& predicate_names() {
    static const std::vector<std::string> names = {
        "prime", "primary", "weakly-prime", "s-prime", "weakly-s-prime", "strongly-weakly-s-prime",
        "strongly-weakly-s-prime-colon",
    };
    return names;
}

inline const Outcome& outcome_of(const Classification& c, const std::string& name) {
    if (name == "prime") return c.prime;
    if (name == "primary") return c.primary;
    if (name == "weakly-prime") return c.weakly_prime;
    if (name == "s-prime") return c.s_prime;
    if (name == "weakly-s-prime") return c.weakly_s_prime;
    if (name == "strongly-weakly-s-prime") return c.strongly_weakly_s_prime;
    if (name == "strongly-weakly-s-prime-colon") return c.strongly_weakly_s_prime_colon;
    throw Error("unknown predicate '" + name + "'");
}

struct SeparatingInstance {
    std::string structure;
    ElementSet q;
    ElementSet s;
    std::string rendering;
};

/// Every corpus instance (A, Q, S) where `holds` is true and `fails` is
/// false; instances where either side cannot be evaluated are left out.
inline std::vector<SeparatingInstance> search_separating_instances(const Corpus& corpus, const std::string& holds,
                                                                   const std::string& fails) {
    Classification probe;
    (void)outcome_of(probe, holds);
    (void)outcome_of(probe, fails);
    std::vector<SeparatingInstance> out;
    for (const auto& e : corpus.entries) {
        if (!detail::usable(e)) continue;
        detail::for_each_pair(*e, [&](ElementSet q, ElementSet s) {
            const Classification c = classify(e->a(), q, s, *e->lattice, PredicateOptions{corpus.spec.budget});
            const Outcome& h = outcome_of(c, holds);
            const Outcome& f = outcome_of(c, fails);
            if (h.evaluable() && f.evaluable() && h.holds() && !f.holds())
                out.push_back({e->name, q, s, e->name + " Q=" + e->a().format(q) + " S=" + e->a().format(s)});
        });
    }
    return out;
}

inline nlohmann::ordered_json to_json(const PropertyReport& r) {
    nlohmann::ordered_json j;
    j["propertyId"] = to_string(r.id);
    j["instance"] = r.instance.describe();
    j["status"] = to_string(r.status);
    j["reason"] = r.reason;
    nlohmann::ordered_json cert;
    nlohmann::ordered_json structures = nlohmann::ordered_json::array();
    for (const auto& e : r.instance.entries) structures.push_back(e->name);
    cert["structures"] = structures;
    nlohmann::ordered_json slots = nlohmann::ordered_json::object();
    for (const auto& s : r.instance.slots) {
        std::vector<std::string> names;
        const HyperStructure& owner = r.instance.a(s.owner);
        for (Element x : s.set) names.push_back(owner.name_of(x));
        slots[s.label] = names;
    }
    cert["slots"] = slots;
    if (r.instance.hom) {
        std::vector<std::string> map;
        const HyperStructure& tgt = r.instance.a(1);
        for (Element v : r.instance.hom->map()) map.push_back(tgt.name_of(v));
        cert["map"] = map;
    }
    const HyperStructure& a = r.instance.a();
    if (r.certificate.s) cert["s"] = a.name_of(*r.certificate.s);
    if (!r.certificate.tuple.empty()) {
        std::vector<std::string> t;
        for (Element x : r.certificate.tuple) t.push_back(a.name_of(x));
        cert["tuple"] = t;
    }
    if (!r.certificate.ideal_tuple.empty()) cert["idealTuple"] = r.certificate.ideal_tuple;
    if (!r.certificate.positions.empty()) cert["positions"] = r.certificate.positions;
    if (!r.certificate.detail.empty()) cert["detail"] = r.certificate.detail;
    j["certificate"] = cert;
    return j;
}

inline nlohmann::ordered_json to_json(const SuiteResult& s) {
    nlohmann::ordered_json j;
    j["discrepancies"] = s.discrepancies;
    nlohmann::ordered_json reports = nlohmann::ordered_json::array();
    for (const auto& r : s.reports) reports.push_back(to_json(r));
    j["reports"] = reports;
    nlohmann::ordered_json summary;
    summary["verified"] = s.count(Status::Verified);
    summary["counterexample"] = s.count(Status::Counterexample);
    summary["skipped"] = s.count(Status::Skipped);
    nlohmann::ordered_json cov = nlohmann::ordered_json::object();
    for (const auto& [k, v] : s.coverage()) cov["P" + std::to_string(k)] = v;
    summary["coverage"] = cov;
    j["summary"] = summary;
    return j;
}

/// One line per report: "P7 VERIFIED ring:Z4 Q={0} S={1} [reason]".
inline std::string to_text(const PropertyReport& r) {
    std::string line = to_string(r.id) + " " + to_string(r.status) + " " + r.instance.describe();
    if (!r.reason.empty()) line += " [" + r.reason + "]";
    if (r.status == Status::Counterexample && !r.certificate.detail.empty()) line += " {" + r.certificate.detail + "}";
    return line;
}

}  // namespace hyperlab
