#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <type_traits>
#include <vector>

#include "hyperlab/element_set.hpp"

namespace hyperlab {

/// Largest arity accepted for f and g.
inline constexpr std::size_t kMaxArity = 8;

namespace detail {

inline constexpr std::size_t kBinomRows = kMaxCarrier + 2 * kMaxArity + 1;

struct BinomialTable {
    std::array<std::array<std::uint64_t, 2 * kMaxArity + 1>, kBinomRows> c{};
    constexpr BinomialTable() {
        for (std::size_t n = 0; n < kBinomRows; ++n) {
            c[n][0] = 1;
            for (std::size_t k = 1; k <= 2 * kMaxArity; ++k)
                c[n][k] = n == 0 ? 0 : c[n - 1][k - 1] + c[n - 1][k];
        }
    }
};

inline constexpr BinomialTable kBinomials{};

template <class F, class Arg>
bool invoke_continue(F& fn, Arg&& arg) {
    if constexpr (std::is_same_v<std::invoke_result_t<F&, Arg>, bool>) {
        return fn(std::forward<Arg>(arg));
    } else {
        fn(std::forward<Arg>(arg));
        return true;
    }
}

}  // namespace detail

inline std::uint64_t binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    return detail::kBinomials.c[n][k];
}

/// Number of k-element multisets drawn from a carrier of size n.
inline std::uint64_t multiset_count(std::size_t n, std::size_t k) {
    if (k == 0) return 1;
    if (n == 0) return 0;
    return binomial(n + k - 1, k);
}

/// Colexicographic rank of a non-decreasing tuple among all multisets of its size.
inline std::uint64_t multiset_rank(std::span<const Element> sorted) {
    std::uint64_t rank = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i)
        rank += binomial(static_cast<std::size_t>(sorted[i]) + i, i + 1);
    return rank;
}

/// Visits every non-decreasing k-tuple over `pool` in lexicographic order.
/// `fn` receives a span that is only valid during the call; returning false
/// stops the walk. Returns false iff stopped early.
template <class F>
bool for_each_multiset(ElementSet pool, std::size_t k, F&& fn) {
    const std::vector<Element> items = pool.to_vector();
    if (k == 0) {
        std::span<const Element> none;
        return detail::invoke_continue(fn, none);
    }
    if (items.empty()) return true;
    std::vector<std::size_t> idx(k, 0);
    std::vector<Element> tuple(k, items[0]);
    for (;;) {
        if (!detail::invoke_continue(fn, std::span<const Element>(tuple))) return false;
        std::size_t pos = k;
        while (pos > 0 && idx[pos - 1] + 1 == items.size()) --pos;
        if (pos == 0) return true;
        const std::size_t next = idx[pos - 1] + 1;
        for (std::size_t j = pos - 1; j < k; ++j) {
            idx[j] = next;
            tuple[j] = items[next];
        }
    }
}

/// Visits the cartesian product of the argument sets (first coordinate slowest).
/// Any empty factor yields no tuples.
template <class F>
bool for_each_product(std::span<const ElementSet> factors, F&& fn) {
    const std::size_t k = factors.size();
    std::vector<std::vector<Element>> items;
    items.reserve(k);
    for (ElementSet s : factors) {
        if (s.empty()) return true;
        items.push_back(s.to_vector());
    }
    std::vector<std::size_t> idx(k, 0);
    std::vector<Element> tuple(k);
    for (std::size_t j = 0; j < k; ++j) tuple[j] = items[j][0];
    for (;;) {
        if (!detail::invoke_continue(fn, std::span<const Element>(tuple))) return false;
        std::size_t pos = k;
        while (pos > 0) {
            --pos;
            if (++idx[pos] < items[pos].size()) {
                tuple[pos] = items[pos][idx[pos]];
                break;
            }
            idx[pos] = 0;
            tuple[pos] = items[pos][0];
            if (pos == 0) return true;
        }
        if (k == 0) return true;
    }
}

/// Visits every k-subset of {0..n-1} as an ascending index vector.
template <class F>
bool for_each_combination(std::size_t n, std::size_t k, F&& fn) {
    if (k > n) return true;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
        if (!detail::invoke_continue(fn, std::span<const std::size_t>(idx))) return false;
        std::size_t pos = k;
        while (pos > 0 && idx[pos - 1] == n - k + pos - 1) --pos;
        if (pos == 0) return true;
        ++idx[pos - 1];
        for (std::size_t j = pos; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace hyperlab
