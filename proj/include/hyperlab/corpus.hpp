#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hyperlab/axioms.hpp"
#include "hyperlab/constructions.hpp"
#include "hyperlab/ideals.hpp"
#include "hyperlab/predicates.hpp"
#include "hyperlab/structure.hpp"

namespace hyperlab {

struct CorpusSpec {
    std::vector<std::string> fixtures;
    /// Multiplicative sets are drawn among subsets of at most this size.
    std::size_t max_mult_set_size = 3;
    /// Ideal-tuple budget per strongly weakly evaluation.
    std::uint64_t budget = 10'000'000;
    std::uint64_t enumerate_cap = std::uint64_t{1} << 20;
    /// Subhyperrings are searched only on carriers up to this size.
    std::size_t subhyperring_max_carrier = 12;

    static CorpusSpec default_corpus() {
        CorpusSpec spec;
        spec.fixtures = {"paper-2-4", "ring:Z4", "ring:Z6", "ring:Z12", "ring:Z2*ring:Z3", "ring:Z4*ring:Z3"};
        return spec;
    }
};

/// One structure with everything the properties quantify over.
struct CorpusEntry {
    std::string name;
    std::shared_ptr<const HyperStructure> structure;
    bool canonical = true;
    std::optional<ElementSet> designated_q;
    std::optional<ElementSet> designated_s;
    std::vector<AxiomViolation> violations;
    std::optional<IdealLattice> lattice;
    std::string lattice_error;
    /// Non-empty multiplicative subsets up to the size cap, by size then mask.
    std::vector<ElementSet> mult_sets;

    const HyperStructure& a() const { return *structure; }
    bool valid() const { return violations.empty(); }
    std::vector<ElementSet> proper_ideals() const {
        std::vector<ElementSet> out;
        if (!lattice) return out;
        for (ElementSet q : lattice->ideals())
            if (q != structure->carrier_set()) out.push_back(q);
        return out;
    }
};

using EntryPtr = std::shared_ptr<const CorpusEntry>;

struct HomEntry {
    EntryPtr source;
    EntryPtr target;
    Homomorphism h;
    /// Inclusion of a subhyperring (the identity map counts as one).
    bool inclusion = false;
};

/// A product entry of the corpus together with its two (left-nested) factors.
struct ProductEntry {
    EntryPtr product;
    EntryPtr left;
    EntryPtr right;
};

/// A threefold product built from a binary product X*Y as X*Y*X.
struct TripleEntry {
    EntryPtr product;
    std::vector<EntryPtr> factors;
};

struct Corpus {
    CorpusSpec spec;
    std::vector<EntryPtr> entries;
    std::vector<HomEntry> homs;
    std::vector<ProductEntry> products;
    std::vector<TripleEntry> triples;
    std::vector<std::string> discrepancies;
};

namespace detail {

inline std::vector<ElementSet> small_mult_sets(const HyperStructure& a, std::size_t cap) {
    std::vector<ElementSet> out;
    for (std::size_t k = 1; k <= cap && k <= a.size(); ++k) {
        for_each_combination(a.size(), k, [&](std::span<const std::size_t> idx) {
            ElementSet s;
            for (std::size_t i : idx) s.insert(static_cast<Element>(i));
            if (is_multiplicative(a, s).holds) out.push_back(s);
        });
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline EntryPtr make_entry(std::string name, HyperStructure a, bool canonical, std::optional<ElementSet> q,
                           std::optional<ElementSet> s, const CorpusSpec& spec, bool with_lattice = true) {
    auto e = std::make_shared<CorpusEntry>();
    e->name = std::move(name);
    e->structure = std::make_shared<const HyperStructure>(std::move(a));
    e->canonical = canonical;
    e->designated_q = q;
    e->designated_s = s;
    e->violations = check_krasner(*e->structure, CheckOptions{true});
    if (e->valid() && with_lattice) {
        try {
            e->lattice = enumerate_hyperideals(*e->structure, EnumerateOptions{spec.enumerate_cap});
        } catch (const CapacityExceeded& ex) {
            e->lattice_error = ex.what();
        }
        e->mult_sets = small_mult_sets(*e->structure, spec.max_mult_set_size);
    }
    return e;
}

inline std::string join(const std::vector<std::string>& parts, std::size_t count, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < count; ++i) out += (i ? sep : "") + parts[i];
    return out;
}

inline void note_designated(Corpus& corpus, const CorpusEntry& e) {
    if (!e.designated_q || !e.designated_s) return;
    const HyperStructure& a = e.a();
    const std::string tag = e.name + ": designated Q=" + a.format(*e.designated_q) + ", S=" + a.format(*e.designated_s);
    try {
        require_ideal_pair(a, *e.designated_q, *e.designated_s);
    } catch (const DisjointnessViolated& ex) {
        corpus.discrepancies.push_back(tag + ": DisjointnessViolated (Q meets S in " +
                                       a.format(*e.designated_q & *e.designated_s) + ")");
        return;
    } catch (const Error& ex) {
        corpus.discrepancies.push_back(tag + ": " + ex.what());
        return;
    }
    if (!e.valid()) return;
    try {
        const Verdict v = is_weakly_S_prime(a, *e.designated_q, *e.designated_s);
        if (!v.holds) corpus.discrepancies.push_back(tag + ": not weakly S-prime");
    } catch (const Error& ex) {
        corpus.discrepancies.push_back(tag + ": " + ex.what());
    }
}

/// a mod j for every ring factor of a product of rings, as an element name.
inline std::optional<std::string> residue_name(std::size_t a, const std::vector<std::string>& factors) {
    std::vector<std::string> parts;
    for (const auto& f : factors) {
        auto k = ring_modulus(f);
        if (!k) return std::nullopt;
        parts.push_back(std::to_string(a % *k));
    }
    std::string acc = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) acc = "(" + acc + ";" + parts[i] + ")";
    return acc;
}

inline void add_homs(Corpus& corpus) {
    for (const auto& e : corpus.entries) {
        if (!e->valid()) continue;
        std::vector<Element> id(e->a().size());
        for (Element x = 0; x < id.size(); ++x) id[x] = x;
        corpus.homs.push_back({e, e, Homomorphism::make(e->a(), e->a(), id), true});
    }
    // Reductions Zk -> Zj1 x Zj2 x ..., kept when they are injective homomorphisms.
    for (const auto& src : corpus.entries) {
        if (!src->valid() || !ring_modulus(src->name)) continue;
        for (const auto& tgt : corpus.entries) {
            if (!tgt->valid()) continue;
            const auto factors = product_factors(tgt->name);
            if (factors.size() < 2) continue;
            std::vector<Element> map;
            bool ok = true;
            for (std::size_t x = 0; x < src->a().size() && ok; ++x) {
                auto nm = residue_name(x, factors);
                if (!nm) {
                    ok = false;
                    break;
                }
                try {
                    map.push_back(tgt->a().element(*nm));
                } catch (const UnknownElement&) {
                    ok = false;
                }
            }
            if (!ok || Homomorphism::violation(src->a(), tgt->a(), map)) continue;
            Homomorphism h = Homomorphism::make(src->a(), tgt->a(), map);
            if (h.injective()) corpus.homs.push_back({src, tgt, std::move(h), false});
        }
    }
    // Proper subhyperrings found by closure; with an identity they must contain it.
    const std::size_t entry_count = corpus.entries.size();
    for (std::size_t i = 0; i < entry_count; ++i) {
        const auto tgt = corpus.entries[i];
        const HyperStructure& a = tgt->a();
        if (!tgt->valid() || a.size() > corpus.spec.subhyperring_max_carrier) continue;
        const ElementSet rest = a.carrier_set() - ElementSet::singleton(a.zero());
        const std::vector<Element> others = rest.to_vector();
        for (std::uint64_t mask = 0; mask + 1 < (std::uint64_t{1} << others.size()); ++mask) {
            ElementSet b = ElementSet::singleton(a.zero());
            for (std::size_t j = 0; j < others.size(); ++j)
                if ((mask >> j) & 1U) b.insert(others[j]);
            if (a.one() && !b.contains(*a.one())) continue;
            auto sub = subhyperring(a, b);
            if (!sub || !check_krasner(*sub, CheckOptions{true}).empty()) continue;
            auto src = make_entry(sub->name(), *sub, tgt->canonical, std::nullopt, std::nullopt, corpus.spec);
            corpus.homs.push_back({src, tgt, inclusion(src->a(), a, b), true});
        }
    }
}

}  // namespace detail

/// Loads the fixtures, validates them, enumerates lattices and multiplicative
/// sets, and derives homomorphisms, product factorisations and threefold
/// products. Fixtures that fail the axioms or whose designated instance is
/// inconsistent are recorded as discrepancies.
inline Corpus build_corpus(const CorpusSpec& spec) {
    Corpus corpus;
    corpus.spec = spec;
    for (const auto& name : spec.fixtures) {
        Fixture f = fixture(name);
        auto e = detail::make_entry(name, std::move(f.structure), f.canonical, f.q, f.s, spec);
        if (!e->valid()) {
            const auto& v = e->violations.front();
            corpus.discrepancies.push_back(name + ": fails the Krasner axioms (" + std::string(to_string(v.axiom)) +
                                           " at " + e->a().format(v.witness) + ")");
        } else if (!e->lattice) {
            corpus.discrepancies.push_back(name + ": hyperideal enumeration skipped (" + e->lattice_error + ")");
        }
        detail::note_designated(corpus, *e);
        corpus.entries.push_back(std::move(e));
    }
    detail::add_homs(corpus);

    for (const auto& e : corpus.entries) {
        const auto parts = product_factors(e->name);
        if (parts.size() < 2 || !e->valid()) continue;
        const std::string left_name = detail::join(parts, parts.size() - 1, "*");
        auto left = detail::make_entry(left_name, fixture(left_name).structure, true, std::nullopt, std::nullopt, spec);
        auto right = detail::make_entry(parts.back(), fixture(parts.back()).structure, true, std::nullopt,
                                        std::nullopt, spec);
        if (!left->valid() || !right->valid()) continue;
        corpus.products.push_back({e, left, right});
        if (parts.size() == 2 && e->a().size() * left->a().size() <= kMaxCarrier) {
            HyperStructure triple = product(e->a(), left->a());
            auto t = detail::make_entry(triple.name(), std::move(triple), true, std::nullopt, std::nullopt, spec,
                                        false);
            corpus.triples.push_back({t, {left, right, left}});
        }
    }
    return corpus;
}

}  // namespace hyperlab
