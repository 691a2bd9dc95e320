#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <vector>

#include "feynmat/errors.hpp"

namespace feynmat {

/// Subset of a ground set of at most 64 elements, stored as a bit mask.
class ElementSet {
public:
    static constexpr std::size_t capacity = 64;

    constexpr ElementSet() = default;
    constexpr explicit ElementSet(std::uint64_t bits) : bits_(bits) {}
    static ElementSet of(std::initializer_list<std::size_t> idx) {
        ElementSet s;
        for (auto i : idx) s.insert(i);
        return s;
    }
    static ElementSet of(const std::vector<std::size_t>& idx) {
        ElementSet s;
        for (auto i : idx) s.insert(i);
        return s;
    }
    static constexpr ElementSet full(std::size_t n) {
        return ElementSet(n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1));
    }

    constexpr std::uint64_t bits() const { return bits_; }
    constexpr bool contains(std::size_t i) const { return (bits_ >> i) & 1U; }
    void insert(std::size_t i) {
        if (i >= capacity) throw DomainError("element index exceeds 64-element ground set limit");
        bits_ |= std::uint64_t{1} << i;
    }
    void erase(std::size_t i) { bits_ &= ~(std::uint64_t{1} << i); }
    constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
    constexpr bool empty() const { return bits_ == 0; }

    constexpr bool subset_of(ElementSet o) const { return (bits_ & ~o.bits_) == 0; }
    constexpr bool proper_subset_of(ElementSet o) const { return subset_of(o) && bits_ != o.bits_; }

    friend constexpr ElementSet operator|(ElementSet a, ElementSet b) { return ElementSet(a.bits_ | b.bits_); }
    friend constexpr ElementSet operator&(ElementSet a, ElementSet b) { return ElementSet(a.bits_ & b.bits_); }
    friend constexpr ElementSet operator-(ElementSet a, ElementSet b) { return ElementSet(a.bits_ & ~b.bits_); }
    friend constexpr bool operator==(ElementSet a, ElementSet b) { return a.bits_ == b.bits_; }
    friend constexpr bool operator!=(ElementSet a, ElementSet b) { return a.bits_ != b.bits_; }

    std::vector<std::size_t> indices() const {
        std::vector<std::size_t> out;
        for (std::uint64_t b = bits_; b; b &= b - 1) out.push_back(static_cast<std::size_t>(std::countr_zero(b)));
        return out;
    }

private:
    std::uint64_t bits_ = 0;
};

/// Canonical order: by size, then lexicographically on sorted indices.
struct ElementSetOrder {
    bool operator()(ElementSet a, ElementSet b) const {
        if (a.size() != b.size()) return a.size() < b.size();
        return a.indices() < b.indices();
    }
};

/// Calls fn(indices) for each k-subset of {0..n-1} in lexicographic order
/// until fn returns false.
inline void for_each_combination(std::size_t n, std::size_t k,
                                 const std::function<bool(const std::vector<std::size_t>&)>& fn) {
    if (k > n) return;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        if (!fn(idx)) return;
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace feynmat
