#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hyperlab/element_set.hpp"
#include "hyperlab/errors.hpp"
#include "hyperlab/multiset.hpp"

namespace hyperlab {

/// A finite commutative structure (A, f, g) with an m-ary hyperoperation f,
/// an n-ary operation g, a declared zero and an optional scalar identity.
///
/// Both tables are stored once per sorted multiset of arguments, so every
/// evaluation is invariant under argument permutation by construction.
/// Whether the tables actually satisfy the Krasner axioms is the business
/// of axioms.hpp; this class only enforces shape (totality, ranges).
/// Instances are immutable and safe to share between threads.
class HyperStructure {
public:
    static constexpr std::uint64_t kMaxTableEntries = std::uint64_t{1} << 24;

    HyperStructure(std::string name, std::size_t m, std::size_t n, std::vector<std::string> carrier,
                   Element zero, std::optional<Element> one, std::vector<ElementSet> f_table,
                   std::vector<Element> g_table)
        : name_(std::move(name)),
          m_(m),
          n_(n),
          carrier_(std::move(carrier)),
          zero_(zero),
          one_(one),
          f_(std::move(f_table)),
          g_(std::move(g_table)) {
        if (m_ < 2 || m_ > kMaxArity || n_ < 2 || n_ > kMaxArity)
            throw ArityMismatch("arities must lie in [2, " + std::to_string(kMaxArity) + "]");
        if (carrier_.empty() || carrier_.size() > kMaxCarrier)
            throw CapacityExceeded("carrier size must lie in [1, 64], got " +
                                   std::to_string(carrier_.size()));
        if (f_.size() != multiset_count(size(), m_) || g_.size() != multiset_count(size(), n_))
            throw ArityMismatch("table size does not match the number of multisets");
        check_element(zero_);
        if (one_) check_element(*one_);
        const ElementSet all = carrier_set();
        for (ElementSet v : f_)
            if (!v.subset_of(all)) throw UnknownElement("f value outside the carrier");
        for (Element v : g_) check_element(v);
        for (std::size_t i = 0; i < carrier_.size(); ++i) {
            if (!index_.emplace(carrier_[i], static_cast<Element>(i)).second)
                throw Error("duplicate element name '" + carrier_[i] + "'");
        }
    }

    /// Builds the tables by calling `f_fn` / `g_fn` once per sorted multiset.
    template <class FFn, class GFn>
    static HyperStructure tabulate(std::string name, std::size_t m, std::size_t n,
                                   std::vector<std::string> carrier, Element zero,
                                   std::optional<Element> one, FFn&& f_fn, GFn&& g_fn) {
        const std::size_t size = carrier.size();
        if (m < 2 || m > kMaxArity || n < 2 || n > kMaxArity)
            throw ArityMismatch("arities must lie in [2, " + std::to_string(kMaxArity) + "]");
        if (size == 0 || size > kMaxCarrier) throw CapacityExceeded("carrier size must lie in [1, 64]");
        if (multiset_count(size, m) > kMaxTableEntries || multiset_count(size, n) > kMaxTableEntries)
            throw CapacityExceeded("operation table would exceed " + std::to_string(kMaxTableEntries) +
                                   " entries");
        std::vector<ElementSet> f(multiset_count(size, m));
        std::vector<Element> g(multiset_count(size, n));
        const ElementSet all = ElementSet::full(size);
        for_each_multiset(all, m, [&](std::span<const Element> t) { f[multiset_rank(t)] = f_fn(t); });
        for_each_multiset(all, n, [&](std::span<const Element> t) { g[multiset_rank(t)] = g_fn(t); });
        return HyperStructure(std::move(name), m, n, std::move(carrier), zero, one, std::move(f),
                              std::move(g));
    }

    const std::string& name() const { return name_; }
    std::size_t m() const { return m_; }
    std::size_t n() const { return n_; }
    std::size_t size() const { return carrier_.size(); }
    Element zero() const { return zero_; }
    const std::optional<Element>& one() const { return one_; }
    bool has_one() const { return one_.has_value(); }
    ElementSet carrier_set() const { return ElementSet::full(size()); }
    const std::vector<std::string>& names() const { return carrier_; }

    /// f table indexed by multiset rank.
    const std::vector<ElementSet>& f_table() const { return f_; }
    const std::vector<Element>& g_table() const { return g_; }

    ElementSet f(std::span<const Element> args) const {
        return f_[rank_of(args, m_, "f")];
    }
    ElementSet f(std::initializer_list<Element> args) const {
        return f(std::span<const Element>(args.begin(), args.size()));
    }

    Element g(std::span<const Element> args) const { return g_[rank_of(args, n_, "g")]; }
    Element g(std::initializer_list<Element> args) const {
        return g(std::span<const Element>(args.begin(), args.size()));
    }

    /// f(U_1, ..., U_m): union of f over the cartesian product.
    ElementSet f_sets(std::span<const ElementSet> args) const {
        if (args.size() != m_) throw ArityMismatch(arity_message("f", m_, args.size()));
        require_nonempty(args);
        ElementSet out;
        for_each_product(args, [&](std::span<const Element> t) { out |= f_[sorted_rank(t)]; });
        return out;
    }
    ElementSet f_sets(std::initializer_list<ElementSet> args) const {
        return f_sets(std::span<const ElementSet>(args.begin(), args.size()));
    }

    /// Setwise image { g(x_1..x_n) : x_i in U_i }.
    ElementSet g_sets(std::span<const ElementSet> args) const {
        if (args.size() != n_) throw ArityMismatch(arity_message("g", n_, args.size()));
        require_nonempty(args);
        ElementSet out;
        for_each_product(args, [&](std::span<const Element> t) { out.insert(g_[sorted_rank(t)]); });
        return out;
    }
    ElementSet g_sets(std::initializer_list<ElementSet> args) const {
        return g_sets(std::span<const ElementSet>(args.begin(), args.size()));
    }

    /// g(args, 1^(n - |args|)). With no padding needed this is plain g; a
    /// single argument padded by identities is the argument itself.
    Element g_padded(std::span<const Element> args) const {
        if (args.empty() || args.size() > n_) throw ArityMismatch(arity_message("g", n_, args.size()));
        if (args.size() == n_) return g(args);
        if (args.size() == 1) {
            check_element(args[0]);
            return args[0];
        }
        if (!one_) throw IdentityRequired();
        std::array<Element, kMaxArity> buf{};
        std::copy(args.begin(), args.end(), buf.begin());
        std::fill(buf.begin() + static_cast<std::ptrdiff_t>(args.size()), buf.begin() + static_cast<std::ptrdiff_t>(n_), *one_);
        return g(std::span<const Element>(buf.data(), n_));
    }

    /// g(s, a, 1^(n-2)); for n = 2 this is g(s, a) and needs no identity.
    Element scaled(Element s, Element a) const {
        const std::array<Element, 2> args{s, a};
        return g_padded(args);
    }

    Element element(std::string_view name) const {
        auto it = index_.find(std::string(name));
        if (it == index_.end()) throw UnknownElement("unknown element '" + std::string(name) + "'");
        return it->second;
    }
    const std::string& name_of(Element e) const {
        check_element(e);
        return carrier_[e];
    }
    ElementSet set_of(const std::vector<std::string>& names) const {
        ElementSet s;
        for (const auto& nm : names) s.insert(element(nm));
        return s;
    }

    std::string format(ElementSet s) const {
        std::string out = "{";
        bool first = true;
        for (Element e : s) {
            if (!first) out += ",";
            out += carrier_[e];
            first = false;
        }
        return out + "}";
    }
    std::string format(std::span<const Element> tuple) const {
        std::string out = "(";
        for (std::size_t i = 0; i < tuple.size(); ++i) {
            if (i) out += ",";
            out += carrier_[tuple[i]];
        }
        return out + ")";
    }

    bool operator==(const HyperStructure& o) const {
        return m_ == o.m_ && n_ == o.n_ && carrier_ == o.carrier_ && zero_ == o.zero_ &&
               one_ == o.one_ && f_ == o.f_ && g_ == o.g_;
    }

    void check_element(Element e) const {
        if (e >= carrier_.size())
            throw UnknownElement("element index " + std::to_string(e) + " outside carrier of size " +
                                 std::to_string(carrier_.size()));
    }

private:
    static std::string arity_message(const char* op, std::size_t want, std::size_t got) {
        std::ostringstream os;
        os << op << " expects " << want << " arguments, got " << got;
        return os.str();
    }

    static void require_nonempty(std::span<const ElementSet> args) {
        for (ElementSet s : args)
            if (s.empty()) throw EmptyArgument("setwise evaluation with an empty argument");
    }

    std::size_t rank_of(std::span<const Element> args, std::size_t arity, const char* op) const {
        if (args.size() != arity) throw ArityMismatch(arity_message(op, arity, args.size()));
        for (Element e : args) check_element(e);
        return sorted_rank(args);
    }

    static std::size_t sorted_rank(std::span<const Element> args) {
        std::array<Element, kMaxArity> buf{};
        std::copy(args.begin(), args.end(), buf.begin());
        std::sort(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(args.size()));
        return static_cast<std::size_t>(multiset_rank(std::span<const Element>(buf.data(), args.size())));
    }

    std::string name_;
    std::size_t m_;
    std::size_t n_;
    std::vector<std::string> carrier_;
    Element zero_;
    std::optional<Element> one_;
    std::vector<ElementSet> f_;
    std::vector<Element> g_;
    std::unordered_map<std::string, Element> index_;
};

}  // namespace hyperlab
