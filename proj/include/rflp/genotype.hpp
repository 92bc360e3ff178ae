#ifndef RFLP_GENOTYPE_HPP
#define RFLP_GENOTYPE_HPP

#include <bit>
#include <cassert>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace rflp {

// Binary location decision vector: bit j set means candidate site j is built.
// Packed into 64-bit words so that popcount, equality and hashing stay cheap
// when solvers keep large sets of visited genotypes.
class genotype {
public:
    genotype() = default;

    explicit genotype(std::size_t n) : size_(n), words_((n + 63) / 64, 0) {}

    // Parses "1011..." with bit 0 first.
    static genotype from_string(std::string_view s) {
        genotype g(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '1') g.set(i);
        }
        return g;
    }

    std::size_t size() const { return size_; }

    bool test(std::size_t i) const {
        assert(i < size_);
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }

    void set(std::size_t i, bool value = true) {
        assert(i < size_);
        const std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (value) {
            words_[i >> 6] |= mask;
        } else {
            words_[i >> 6] &= ~mask;
        }
    }

    void flip(std::size_t i) {
        assert(i < size_);
        words_[i >> 6] ^= std::uint64_t{1} << (i & 63);
    }

    std::size_t popcount() const {
        std::size_t c = 0;
        for (std::uint64_t w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    // Overwrites all bits from the low size() bits of `bits`. Only valid for
    // genotypes of at most 64 sites; the exact-solver enumeration uses this
    // to recycle one scratch object per thread.
    void assign_bits(std::uint64_t bits) {
        assert(size_ <= 64);
        words_[0] = size_ == 64 ? bits : (bits & ((std::uint64_t{1} << size_) - 1));
    }

    std::string to_string() const {
        std::string s(size_, '0');
        for (std::size_t i = 0; i < size_; ++i) {
            if (test(i)) s[i] = '1';
        }
        return s;
    }

    bool operator==(const genotype& other) const {
        return size_ == other.size_ && words_ == other.words_;
    }

    const std::vector<std::uint64_t>& words() const { return words_; }

private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

// FNV-1a over the packed words.
struct genotype_hash {
    std::size_t operator()(const genotype& g) const {
        std::uint64_t h = 1469598103934665603ULL;
        for (std::uint64_t w : g.words()) {
            for (int shift = 0; shift < 64; shift += 8) {
                h ^= (w >> shift) & 0xffu;
                h *= 1099511628211ULL;
            }
        }
        h ^= g.size();
        h *= 1099511628211ULL;
        return static_cast<std::size_t>(h);
    }
};

inline std::size_t hamming_distance(const genotype& a, const genotype& b) {
    assert(a.size() == b.size());
    std::size_t d = 0;
    for (std::size_t w = 0; w < a.words().size(); ++w) {
        d += static_cast<std::size_t>(std::popcount(a.words()[w] ^ b.words()[w]));
    }
    return d;
}

} // namespace rflp

#endif
