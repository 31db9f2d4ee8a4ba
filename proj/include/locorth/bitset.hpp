#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace locorth {

/// Fixed-width dynamic bitset over 64-bit words; the workhorse of the clique engines.
class Bitset {
public:
    Bitset() = default;
    explicit Bitset(std::size_t bits) : bits_(bits), words_((bits + 63) / 64, 0) {}

    static Bitset from_words(std::size_t bits, std::span<const std::uint64_t> words) {
        Bitset b(bits);
        for (std::size_t w = 0; w < b.words_.size(); ++w) b.words_[w] = words[w];
        return b;
    }

    std::size_t size() const { return bits_; }
    std::size_t word_count() const { return words_.size(); }
    std::span<const std::uint64_t> words() const { return words_; }
    std::span<std::uint64_t> words() { return words_; }

    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
    void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

    void set_all() {
        for (auto& w : words_) w = ~std::uint64_t{0};
        trim();
    }

    bool none() const {
        for (auto w : words_) {
            if (w) return false;
        }
        return true;
    }
    bool any() const { return !none(); }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    /// Index of the first set bit at or after `from`, or size() when there is none.
    std::size_t next(std::size_t from) const {
        if (from >= bits_) return bits_;
        std::size_t w = from >> 6;
        std::uint64_t word = words_[w] & (~std::uint64_t{0} << (from & 63));
        while (true) {
            if (word) return (w << 6) + static_cast<std::size_t>(std::countr_zero(word));
            if (++w == words_.size()) return bits_;
            word = words_[w];
        }
    }
    std::size_t first() const { return next(0); }

    Bitset& operator&=(std::span<const std::uint64_t> other) {
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= other[w];
        return *this;
    }
    Bitset& operator&=(const Bitset& other) { return *this &= other.words(); }
    Bitset& operator|=(const Bitset& other) {
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= other.words_[w];
        return *this;
    }
    /// this &= ~other
    Bitset& subtract(std::span<const std::uint64_t> other) {
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= ~other[w];
        return *this;
    }
    Bitset& subtract(const Bitset& other) { return subtract(other.words()); }

    std::size_t intersection_count(std::span<const std::uint64_t> other) const {
        std::size_t c = 0;
        for (std::size_t w = 0; w < words_.size(); ++w) c += static_cast<std::size_t>(std::popcount(words_[w] & other[w]));
        return c;
    }

    bool operator==(const Bitset&) const = default;

private:
    void trim() {
        if (bits_ & 63) words_.back() &= (std::uint64_t{1} << (bits_ & 63)) - 1;
    }

    std::size_t bits_ = 0;
    std::vector<std::uint64_t> words_;
};

template <typename F>
void for_each_bit(const Bitset& b, F&& f) {
    auto words = b.words();
    for (std::size_t w = 0; w < words.size(); ++w) {
        std::uint64_t word = words[w];
        while (word) {
            f((w << 6) + static_cast<std::size_t>(std::countr_zero(word)));
            word &= word - 1;
        }
    }
}

} // namespace locorth
