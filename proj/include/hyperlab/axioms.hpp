#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "hyperlab/element_set.hpp"
#include "hyperlab/errors.hpp"
#include "hyperlab/multiset.hpp"
#include "hyperlab/structure.hpp"

namespace hyperlab {

enum class Axiom {
    FValueEmpty,
    AssocF,
    Neutral,
    InverseUnique,
    Reversibility,
    QuasiSolvable,
    AssocG,
    Distrib,
    ZeroAbsorb,
    OneIdentity,
};

inline std::string_view to_string(Axiom a) {
    switch (a) {
        case Axiom::FValueEmpty: return "F_VALUE_EMPTY";
        case Axiom::AssocF: return "ASSOC_F";
        case Axiom::Neutral: return "NEUTRAL";
        case Axiom::InverseUnique: return "INVERSE_UNIQUE";
        case Axiom::Reversibility: return "REVERSIBILITY";
        case Axiom::QuasiSolvable: return "QUASI_SOLVABLE";
        case Axiom::AssocG: return "ASSOC_G";
        case Axiom::Distrib: return "DISTRIB";
        case Axiom::ZeroAbsorb: return "ZERO_ABSORB";
        case Axiom::OneIdentity: return "ONE_IDENTITY";
    }
    return "?";
}

/// One failed quantifier instance. The witness layout depends on the axiom:
///
///   F_VALUE_EMPTY   witness = m-tuple with f(witness) empty
///   ASSOC_F/ASSOC_G witness = (2k-1)-tuple, positions = {i, j}: nesting the
///                   inner operation at i and at j gives different values
///   NEUTRAL         clause 0: witness = (x), f(x, 0^(m-1)) != {x}
///                   clause 1: witness = (e), e != 0 is also scalar neutral
///   INVERSE_UNIQUE  clause 0: witness = (x), x has no inverse
///                   clause 1: witness = (x, y, z), y and z both invert x
///   REVERSIBILITY   witness = (x_1..x_m, z), positions = {i}: z in f(x) but
///                   x_i not in f(z, inverses of the other x_j)
///   QUASI_SOLVABLE  witness = (a_1..a_{m-1}, b): b in f(a, x) has no solution
///   DISTRIB         witness = (a_1..a_{n-1}, x_1..x_m), positions = {i}:
///                   g with f(x) at position i differs from f of the g's
///   ZERO_ABSORB     witness = (x_2..x_n): g(0, x_2..x_n) != 0
///   ONE_IDENTITY    witness = (x): g(1^(n-1), x) != x
struct AxiomViolation {
    Axiom axiom{};
    std::vector<Element> witness;
    std::vector<std::size_t> positions;
    int clause = 0;
    std::string detail;

    bool operator==(const AxiomViolation& o) const {
        return axiom == o.axiom && witness == o.witness && positions == o.positions && clause == o.clause;
    }
};

struct CheckOptions {
    /// Stop at the first violation found.
    bool first_only = false;
};

namespace detail {

class ViolationSink {
public:
    explicit ViolationSink(const CheckOptions& opts) : opts_(opts) {}

    /// Returns false when scanning should stop.
    bool add(AxiomViolation v) {
        out_.push_back(std::move(v));
        return !opts_.first_only;
    }
    bool done() const { return opts_.first_only && !out_.empty(); }
    std::vector<AxiomViolation> take() {
        std::stable_sort(out_.begin(), out_.end(), [](const AxiomViolation& a, const AxiomViolation& b) {
            return std::tie(a.axiom, a.witness, a.positions, a.clause) <
                   std::tie(b.axiom, b.witness, b.positions, b.clause);
        });
        return std::move(out_);
    }

private:
    const CheckOptions& opts_;
    std::vector<AxiomViolation> out_;
};

inline ElementSet f_with_first(const HyperStructure& a, ElementSet first, std::span<const Element> rest) {
    std::array<ElementSet, kMaxArity> args{};
    args[0] = first;
    for (std::size_t i = 0; i < rest.size(); ++i) args[i + 1] = ElementSet::singleton(rest[i]);
    return a.f_sets(std::span<const ElementSet>(args.data(), rest.size() + 1));
}

/// Value of the outer operation with the inner one applied to the window
/// starting at 1-based position `pos` of `tuple`.
inline ElementSet nested_f(const HyperStructure& a, std::span<const Element> tuple, std::size_t pos) {
    const std::size_t k = a.m();
    std::array<ElementSet, kMaxArity> args{};
    std::size_t out = 0;
    for (std::size_t i = 0; i + 1 < pos; ++i) args[out++] = ElementSet::singleton(tuple[i]);
    args[out++] = a.f(tuple.subspan(pos - 1, k));
    for (std::size_t i = pos - 1 + k; i < tuple.size(); ++i) args[out++] = ElementSet::singleton(tuple[i]);
    return a.f_sets(std::span<const ElementSet>(args.data(), out));
}

inline Element nested_g(const HyperStructure& a, std::span<const Element> tuple, std::size_t pos) {
    const std::size_t k = a.n();
    std::array<Element, kMaxArity> args{};
    std::size_t out = 0;
    for (std::size_t i = 0; i + 1 < pos; ++i) args[out++] = tuple[i];
    args[out++] = a.g(tuple.subspan(pos - 1, k));
    for (std::size_t i = pos - 1 + k; i < tuple.size(); ++i) args[out++] = tuple[i];
    return a.g(std::span<const Element>(args.data(), out));
}

inline std::vector<std::uint32_t> split_masks(std::size_t k) {
    std::vector<std::uint32_t> masks;
    for_each_combination(2 * k - 1, k, [&](std::span<const std::size_t> idx) {
        std::uint32_t mask = 0;
        for (std::size_t i : idx) mask |= std::uint32_t{1} << i;
        masks.push_back(mask);
    });
    return masks;
}

/// Associativity over sorted (2k-1)-multisets. With commutative tables, all
/// position pairs agree on every tuple iff, for every multiset, the nested value
/// does not depend on which k elements form the inner block. When it does, two
/// blocks differing in a single element also disagree, and those two blocks
/// are adjacent windows (positions 1 and 2) of an explicit tuple.
template <class Value, class BlockValue>
void check_assoc(const HyperStructure& a, std::size_t k, Axiom axiom, ViolationSink& sink,
                 BlockValue&& block_value) {
    const std::size_t len = 2 * k - 1;
    const std::vector<std::uint32_t> masks = split_masks(k);
    std::vector<Value> values(masks.size());
    std::array<Element, kMaxArity> block{};
    std::array<Element, 2 * kMaxArity> rest{};
    for_each_multiset(a.carrier_set(), len, [&](std::span<const Element> t) {
        bool uniform = true;
        for (std::size_t s = 0; s < masks.size(); ++s) {
            std::size_t nb = 0, nr = 0;
            for (std::size_t i = 0; i < len; ++i) {
                if ((masks[s] >> i) & 1U)
                    block[nb++] = t[i];
                else
                    rest[nr++] = t[i];
            }
            values[s] = block_value(std::span<const Element>(block.data(), nb),
                                    std::span<const Element>(rest.data(), nr));
            if (values[s] != values[0]) uniform = false;
        }
        if (uniform) return true;
        for (std::size_t x = 0; x < masks.size(); ++x) {
            for (std::size_t y = 0; y < masks.size(); ++y) {
                const std::uint32_t diff = masks[x] ^ masks[y];
                if (std::popcount(diff) != 2 || values[x] == values[y]) continue;
                const std::size_t p = static_cast<std::size_t>(std::countr_zero(masks[x] & diff));
                const std::size_t q = static_cast<std::size_t>(std::countr_zero(masks[y] & diff));
                std::vector<Element> tuple;
                tuple.push_back(t[p]);
                for (std::size_t i = 0; i < len; ++i)
                    if (((masks[x] >> i) & 1U) && i != p) tuple.push_back(t[i]);
                tuple.push_back(t[q]);
                for (std::size_t i = 0; i < len; ++i)
                    if (!(((masks[x] | masks[y]) >> i) & 1U)) tuple.push_back(t[i]);
                AxiomViolation v{axiom, tuple, {1, 2}, 0,
                                 "nesting at positions 1 and 2 of " + a.format(tuple) + " disagree"};
                return sink.add(std::move(v));
            }
        }
        return true;
    });
}

inline std::vector<std::optional<Element>> inverses(const HyperStructure& a) {
    std::vector<std::optional<Element>> inv(a.size());
    std::array<Element, kMaxArity> args{};
    for (Element x = 0; x < a.size(); ++x) {
        int count = 0;
        for (Element y = 0; y < a.size(); ++y) {
            args.fill(a.zero());
            args[0] = x;
            args[1] = y;
            if (a.f(std::span<const Element>(args.data(), a.m())).contains(a.zero())) {
                if (count++ == 0) inv[x] = y;
            }
        }
        if (count != 1) inv[x].reset();
    }
    return inv;
}

inline bool is_neutral(const HyperStructure& a, Element e) {
    std::array<Element, kMaxArity> args{};
    for (Element x = 0; x < a.size(); ++x) {
        args.fill(e);
        args[0] = x;
        if (a.f(std::span<const Element>(args.data(), a.m())) != ElementSet::singleton(x)) return false;
    }
    return true;
}

inline void check_hypergroup_into(const HyperStructure& a, ViolationSink& sink) {
    const std::size_t m = a.m();
    const ElementSet all = a.carrier_set();

    bool empty_value = false;
    for_each_multiset(all, m, [&](std::span<const Element> t) {
        if (!a.f(t).empty()) return true;
        empty_value = true;
        std::vector<Element> w(t.begin(), t.end());
        return sink.add({Axiom::FValueEmpty, w, {}, 0, "f" + a.format(w) + " is empty"});
    });
    // Setwise evaluation is undefined past an empty value.
    if (empty_value || sink.done()) return;

    check_assoc<ElementSet>(a, m, Axiom::AssocF, sink,
                            [&](std::span<const Element> block, std::span<const Element> rest) {
                                return f_with_first(a, a.f(block), rest);
                            });
    if (sink.done()) return;

    std::array<Element, kMaxArity> args{};
    for (Element x = 0; x < a.size(); ++x) {
        args.fill(a.zero());
        args[0] = x;
        if (a.f(std::span<const Element>(args.data(), m)) != ElementSet::singleton(x)) {
            if (!sink.add({Axiom::Neutral, {x}, {}, 0,
                           "f(" + a.name_of(x) + ", 0^(m-1)) != {" + a.name_of(x) + "}"}))
                return;
        }
    }
    for (Element e = 0; e < a.size(); ++e) {
        if (e != a.zero() && is_neutral(a, e)) {
            if (!sink.add({Axiom::Neutral, {e}, {}, 1,
                           a.name_of(e) + " is a second scalar neutral element"}))
                return;
        }
    }

    const auto inv = inverses(a);
    for (Element x = 0; x < a.size(); ++x) {
        if (inv[x]) continue;
        std::vector<Element> found;
        for (Element y = 0; y < a.size(); ++y) {
            args.fill(a.zero());
            args[0] = x;
            args[1] = y;
            if (a.f(std::span<const Element>(args.data(), m)).contains(a.zero())) found.push_back(y);
        }
        AxiomViolation v{Axiom::InverseUnique, {x}, {}, 0, a.name_of(x) + " has no inverse"};
        if (found.size() >= 2) {
            v.clause = 1;
            v.witness = {x, found[0], found[1]};
            v.detail = a.name_of(x) + " has inverses " + a.name_of(found[0]) + " and " + a.name_of(found[1]);
        }
        if (!sink.add(std::move(v))) return;
    }

    for_each_multiset(all, m, [&](std::span<const Element> t) {
        for (Element z : a.f(t)) {
            for (std::size_t i = 0; i < m; ++i) {
                if (i > 0 && t[i] == t[i - 1]) continue;
                bool defined = true;
                std::size_t out = 0;
                args[out++] = z;
                for (std::size_t j = 0; j < m; ++j) {
                    if (j == i) continue;
                    if (!inv[t[j]]) defined = false;
                    else args[out++] = *inv[t[j]];
                }
                if (!defined) continue;
                if (a.f(std::span<const Element>(args.data(), m)).contains(t[i])) continue;
                std::vector<Element> w(t.begin(), t.end());
                w.push_back(z);
                if (!sink.add({Axiom::Reversibility, w, {i + 1}, 0,
                               a.name_of(z) + " in f" + a.format(t) + " but " + a.name_of(t[i]) +
                                   " not recovered at position " + std::to_string(i + 1)}))
                    return false;
            }
        }
        return true;
    });
    if (sink.done()) return;

    for_each_multiset(all, m - 1, [&](std::span<const Element> t) {
        ElementSet reach;
        std::copy(t.begin(), t.end(), args.begin());
        for (Element x = 0; x < a.size(); ++x) {
            args[m - 1] = x;
            reach |= a.f(std::span<const Element>(args.data(), m));
        }
        for (Element b : all - reach) {
            std::vector<Element> w(t.begin(), t.end());
            w.push_back(b);
            if (!sink.add({Axiom::QuasiSolvable, w, {m}, 0,
                           a.name_of(b) + " = f(" + a.format(t).substr(1, a.format(t).size() - 2) +
                               ", x) has no solution x"}))
                return false;
        }
        return true;
    });
}

}  // namespace detail

/// Canonical m-ary hypergroup axioms for (A, f) with e = zero, plus
/// quasihypergroup solvability. Violations come back sorted by axiom, then
/// witness.
inline std::vector<AxiomViolation> check_canonical_hypergroup(const HyperStructure& a,
                                                              const CheckOptions& opts = {}) {
    detail::ViolationSink sink(opts);
    detail::check_hypergroup_into(a, sink);
    return sink.take();
}

/// Full Krasner (m,n)-hyperring check: the canonical hypergroup axioms,
/// associativity of g, distributivity, absorbing zero and (when declared)
/// the scalar identity of g.
inline std::vector<AxiomViolation> check_krasner(const HyperStructure& a, const CheckOptions& opts = {}) {
    detail::ViolationSink sink(opts);
    detail::check_hypergroup_into(a, sink);
    const auto& ft = a.f_table();
    if (sink.done() || std::any_of(ft.begin(), ft.end(), [](ElementSet v) { return v.empty(); })) return sink.take();

    const std::size_t n = a.n();
    const std::size_t m = a.m();
    const ElementSet all = a.carrier_set();

    detail::check_assoc<Element>(a, n, Axiom::AssocG, sink,
                                 [&](std::span<const Element> block, std::span<const Element> rest) {
                                     std::array<Element, kMaxArity> args{};
                                     args[0] = a.g(block);
                                     std::copy(rest.begin(), rest.end(), args.begin() + 1);
                                     return a.g(std::span<const Element>(args.data(), n));
                                 });
    if (sink.done()) return sink.take();

    std::array<Element, kMaxArity> gargs{};
    std::array<Element, kMaxArity> fargs{};
    for_each_multiset(all, n - 1, [&](std::span<const Element> prefix) {
        std::copy(prefix.begin(), prefix.end(), gargs.begin() + 1);
        const std::span<const Element> gspan(gargs.data(), n);
        return for_each_multiset(all, m, [&](std::span<const Element> xs) {
            ElementSet lhs;
            for (Element y : a.f(xs)) {
                gargs[0] = y;
                lhs.insert(a.g(gspan));
            }
            for (std::size_t j = 0; j < m; ++j) {
                gargs[0] = xs[j];
                fargs[j] = a.g(gspan);
            }
            const ElementSet rhs = a.f(std::span<const Element>(fargs.data(), m));
            if (lhs == rhs) return true;
            std::vector<Element> w(prefix.begin(), prefix.end());
            w.insert(w.end(), xs.begin(), xs.end());
            return sink.add({Axiom::Distrib, w, {1}, 0,
                             "g(f" + a.format(xs) + ", " + a.format(prefix).substr(1) + " = " + a.format(lhs) +
                                 " but f of the products = " + a.format(rhs)});
        });
    });
    if (sink.done()) return sink.take();

    for_each_multiset(all, n - 1, [&](std::span<const Element> rest) {
        gargs[0] = a.zero();
        std::copy(rest.begin(), rest.end(), gargs.begin() + 1);
        if (a.g(std::span<const Element>(gargs.data(), n)) == a.zero()) return true;
        std::vector<Element> w(rest.begin(), rest.end());
        return sink.add({Axiom::ZeroAbsorb, w, {1}, 0, "g(0, " + a.format(w).substr(1) + " != 0"});
    });
    if (sink.done()) return sink.take();

    if (a.one()) {
        for (Element x = 0; x < a.size(); ++x) {
            gargs.fill(*a.one());
            gargs[n - 1] = x;
            if (a.g(std::span<const Element>(gargs.data(), n)) == x) continue;
            if (!sink.add({Axiom::OneIdentity, {x}, {}, 0,
                           "g(1^(n-1), " + a.name_of(x) + ") != " + a.name_of(x)}))
                break;
        }
    }
    return sink.take();
}

/// Re-evaluates a reported violation directly against the tables, using the
/// explicit tuple and positions rather than multiset shortcuts.
inline bool replays(const HyperStructure& a, const AxiomViolation& v) {
    const std::size_t m = a.m();
    const std::size_t n = a.n();
    const auto& w = v.witness;
    auto inverse_count = [&](Element x, std::vector<Element>* found) {
        int count = 0;
        for (Element y = 0; y < a.size(); ++y) {
            std::vector<Element> args(m, a.zero());
            args[0] = x;
            args[1] = y;
            if (a.f(args).contains(a.zero())) {
                ++count;
                if (found) found->push_back(y);
            }
        }
        return count;
    };
    try {
        switch (v.axiom) {
            case Axiom::FValueEmpty:
                return w.size() == m && a.f(w).empty();
            case Axiom::AssocF:
            case Axiom::AssocG: {
                const std::size_t k = v.axiom == Axiom::AssocF ? m : n;
                if (w.size() != 2 * k - 1 || v.positions.size() != 2) return false;
                const std::size_t i = v.positions[0], j = v.positions[1];
                if (i < 1 || j < 1 || i > k || j > k || i == j) return false;
                if (v.axiom == Axiom::AssocF) return detail::nested_f(a, w, i) != detail::nested_f(a, w, j);
                return detail::nested_g(a, w, i) != detail::nested_g(a, w, j);
            }
            case Axiom::Neutral: {
                if (w.size() != 1) return false;
                if (v.clause == 0) {
                    std::vector<Element> args(m, a.zero());
                    args[0] = w[0];
                    return a.f(args) != ElementSet::singleton(w[0]);
                }
                return w[0] != a.zero() && detail::is_neutral(a, w[0]);
            }
            case Axiom::InverseUnique: {
                std::vector<Element> found;
                const int count = inverse_count(w.at(0), &found);
                if (v.clause == 0) return w.size() == 1 && count == 0;
                return w.size() == 3 && count >= 2 && w[1] != w[2] &&
                       std::find(found.begin(), found.end(), w[1]) != found.end() &&
                       std::find(found.begin(), found.end(), w[2]) != found.end();
            }
            case Axiom::Reversibility: {
                if (w.size() != m + 1 || v.positions.size() != 1) return false;
                const std::size_t i = v.positions[0] - 1;
                std::vector<Element> xs(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(m));
                const Element z = w[m];
                if (!a.f(xs).contains(z)) return false;
                std::vector<Element> args{z};
                for (std::size_t j = 0; j < m; ++j) {
                    if (j == i) continue;
                    std::vector<Element> found;
                    if (inverse_count(xs[j], &found) != 1) return false;
                    args.push_back(found[0]);
                }
                return !a.f(args).contains(xs[i]);
            }
            case Axiom::QuasiSolvable: {
                if (w.size() != m) return false;
                std::vector<Element> args(w.begin(), w.end());
                for (Element x = 0; x < a.size(); ++x) {
                    args[m - 1] = x;
                    if (a.f(args).contains(w[m - 1])) return false;
                }
                return true;
            }
            case Axiom::Distrib: {
                if (w.size() != n - 1 + m || v.positions.size() != 1) return false;
                const std::size_t pos = v.positions[0] - 1;
                std::vector<Element> prefix(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(n - 1));
                std::vector<Element> xs(w.begin() + static_cast<std::ptrdiff_t>(n - 1), w.end());
                std::vector<ElementSet> lhs_args;
                for (Element e : prefix) lhs_args.push_back(ElementSet::singleton(e));
                lhs_args.insert(lhs_args.begin() + static_cast<std::ptrdiff_t>(pos), a.f(xs));
                const ElementSet lhs = a.g_sets(lhs_args);
                std::vector<Element> prods;
                for (Element x : xs) {
                    std::vector<Element> args = prefix;
                    args.insert(args.begin() + static_cast<std::ptrdiff_t>(pos), x);
                    prods.push_back(a.g(args));
                }
                return lhs != a.f(prods);
            }
            case Axiom::ZeroAbsorb: {
                if (w.size() != n - 1) return false;
                std::vector<Element> args{a.zero()};
                args.insert(args.end(), w.begin(), w.end());
                return a.g(args) != a.zero();
            }
            case Axiom::OneIdentity: {
                if (!a.one() || w.size() != 1) return false;
                std::vector<Element> args(n, *a.one());
                args[n - 1] = w[0];
                return a.g(args) != w[0];
            }
        }
    } catch (const Error&) {
        return false;
    }
    return false;
}

/// f_(l): left-nested composition over l(m-1)+1 arguments.
inline ElementSet iterate_f(const HyperStructure& a, std::size_t l, std::span<const Element> args) {
    const std::size_t m = a.m();
    if (l == 0 || args.size() != l * (m - 1) + 1)
        throw ArityMismatch("f_(" + std::to_string(l) + ") expects " + std::to_string(l * (m - 1) + 1) +
                            " arguments, got " + std::to_string(args.size()));
    ElementSet acc = a.f(args.first(m));
    for (std::size_t step = 1; step < l; ++step)
        acc = detail::f_with_first(a, acc, args.subspan(m + (step - 1) * (m - 1), m - 1));
    return acc;
}

/// g_(l): left-nested composition over l(n-1)+1 arguments.
inline Element iterate_g(const HyperStructure& a, std::size_t l, std::span<const Element> args) {
    const std::size_t n = a.n();
    if (l == 0 || args.size() != l * (n - 1) + 1)
        throw ArityMismatch("g_(" + std::to_string(l) + ") expects " + std::to_string(l * (n - 1) + 1) +
                            " arguments, got " + std::to_string(args.size()));
    Element acc = a.g(args.first(n));
    std::array<Element, kMaxArity> buf{};
    for (std::size_t step = 1; step < l; ++step) {
        buf[0] = acc;
        auto block = args.subspan(n + (step - 1) * (n - 1), n - 1);
        std::copy(block.begin(), block.end(), buf.begin() + 1);
        acc = a.g(std::span<const Element>(buf.data(), n));
    }
    return acc;
}

}  // namespace hyperlab
