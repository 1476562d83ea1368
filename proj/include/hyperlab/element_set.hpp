#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <vector>

namespace hyperlab {

/// Dense index of a carrier element. Names live in the owning structure.
using Element = std::uint16_t;

/// Largest supported carrier. ElementSet is a single 64-bit mask.
inline constexpr std::size_t kMaxCarrier = 64;

/// Subset of a carrier of at most kMaxCarrier elements.
///
/// The set does not remember the carrier size; operations that need it
/// (complement, full set) take it as an argument.
class ElementSet {
public:
    class iterator {
    public:
        using iterator_category = std::forward_iterator_tag;
        using value_type = Element;
        using difference_type = std::ptrdiff_t;
        using pointer = const Element*;
        using reference = Element;

        iterator() = default;
        explicit iterator(std::uint64_t rest) : rest_(rest) {}

        Element operator*() const { return static_cast<Element>(std::countr_zero(rest_)); }
        iterator& operator++() {
            rest_ &= rest_ - 1;
            return *this;
        }
        iterator operator++(int) {
            iterator old = *this;
            ++*this;
            return old;
        }
        bool operator==(const iterator&) const = default;

    private:
        std::uint64_t rest_ = 0;
    };

    constexpr ElementSet() = default;
    constexpr explicit ElementSet(std::uint64_t bits) : bits_(bits) {}
    ElementSet(std::initializer_list<Element> elems) {
        for (Element e : elems) insert(e);
    }

    static ElementSet of(const std::vector<Element>& elems) {
        ElementSet s;
        for (Element e : elems) s.insert(e);
        return s;
    }
    static constexpr ElementSet singleton(Element e) { return ElementSet(std::uint64_t{1} << e); }
    static constexpr ElementSet full(std::size_t carrier) {
        return ElementSet(carrier >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << carrier) - 1);
    }

    constexpr std::uint64_t bits() const { return bits_; }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
    constexpr bool contains(Element e) const { return e < 64 && ((bits_ >> e) & 1U) != 0; }
    constexpr Element min() const { return static_cast<Element>(std::countr_zero(bits_)); }

    void insert(Element e) { bits_ |= std::uint64_t{1} << e; }
    void erase(Element e) { bits_ &= ~(std::uint64_t{1} << e); }

    constexpr bool subset_of(ElementSet other) const { return (bits_ & ~other.bits_) == 0; }
    constexpr bool intersects(ElementSet other) const { return (bits_ & other.bits_) != 0; }
    constexpr ElementSet complement(std::size_t carrier) const {
        return ElementSet(~bits_ & full(carrier).bits_);
    }

    constexpr ElementSet operator|(ElementSet o) const { return ElementSet(bits_ | o.bits_); }
    constexpr ElementSet operator&(ElementSet o) const { return ElementSet(bits_ & o.bits_); }
    constexpr ElementSet operator-(ElementSet o) const { return ElementSet(bits_ & ~o.bits_); }
    ElementSet& operator|=(ElementSet o) {
        bits_ |= o.bits_;
        return *this;
    }
    ElementSet& operator&=(ElementSet o) {
        bits_ &= o.bits_;
        return *this;
    }

    constexpr bool operator==(const ElementSet&) const = default;

    /// Cardinality first, then mask. This is the lattice ordering.
    friend constexpr bool operator<(ElementSet a, ElementSet b) {
        std::size_t sa = a.size(), sb = b.size();
        return sa != sb ? sa < sb : a.bits_ < b.bits_;
    }

    iterator begin() const { return iterator(bits_); }
    iterator end() const { return iterator(0); }

    std::vector<Element> to_vector() const { return {begin(), end()}; }

private:
    std::uint64_t bits_ = 0;
};

}  // namespace hyperlab
