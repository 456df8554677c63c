#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace facred {

// Fixed-capacity bit string of up to 256 bits. Bit 0 is the least significant one; in text
// form the leftmost character is the most significant bit.
class BitString {
public:
    static constexpr unsigned kMaxWidth = 256;

    BitString() = default;
    explicit BitString(unsigned width);
    static BitString from_uint(std::uint64_t value, unsigned width);
    static BitString from_text(std::string_view text);
    static BitString ones(unsigned width);

    unsigned width() const { return width_; }
    bool bit(unsigned i) const { return (w_[i >> 6] >> (i & 63)) & 1U; }
    void set_bit(unsigned i, bool v);
    bool is_zero() const;
    unsigned popcount() const;
    std::uint64_t low64() const { return w_[0]; }
    std::string text() const;

    BitString operator^(const BitString& o) const;
    BitString operator&(const BitString& o) const;
    BitString operator~() const;
    // Sum modulo 2^width.
    BitString add_mod(const BitString& o) const;
    BitString negate_mod() const;
    // Sum; sets overflow when the exact result needs more than width bits.
    BitString add_exact(const BitString& o, bool& overflow) const;

    bool operator==(const BitString& o) const { return width_ == o.width_ && w_ == o.w_; }
    bool operator!=(const BitString& o) const { return !(*this == o); }
    bool operator<(const BitString& o) const;

    std::size_t hash() const;

private:
    void trim();

    std::array<std::uint64_t, 4> w_{};
    unsigned width_ = 0;
};

// a is the high part.
BitString concat(const BitString& a, const BitString& b);

struct BitStringHash {
    std::size_t operator()(const BitString& s) const { return s.hash(); }
};

}  // namespace facred
