#include "facred/bitstring.hpp"

#include <bit>

#include "facred/error.hpp"

namespace facred {

BitString::BitString(unsigned width) : width_(width) {
    if (width > kMaxWidth) throw Error(Errc::width_mismatch, "bit strings are capped at 256 bits");
}

BitString BitString::from_uint(std::uint64_t value, unsigned width) {
    BitString s(width);
    s.w_[0] = value;
    s.trim();
    return s;
}

BitString BitString::from_text(std::string_view text) {
    BitString s(static_cast<unsigned>(text.size()));
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[text.size() - 1 - i];
        if (ch != '0' && ch != '1') throw Error(Errc::parse_error, "bit strings use only 0 and 1");
        s.set_bit(static_cast<unsigned>(i), ch == '1');
    }
    return s;
}

BitString BitString::ones(unsigned width) {
    BitString s(width);
    s.w_.fill(~std::uint64_t{0});
    s.trim();
    return s;
}

void BitString::set_bit(unsigned i, bool v) {
    const std::uint64_t m = std::uint64_t{1} << (i & 63);
    if (v) {
        w_[i >> 6] |= m;
    } else {
        w_[i >> 6] &= ~m;
    }
}

bool BitString::is_zero() const { return (w_[0] | w_[1] | w_[2] | w_[3]) == 0; }

unsigned BitString::popcount() const {
    unsigned c = 0;
    for (std::uint64_t x : w_) c += static_cast<unsigned>(std::popcount(x));
    return c;
}

std::string BitString::text() const {
    std::string out(width_, '0');
    for (unsigned i = 0; i < width_; ++i) {
        if (bit(i)) out[width_ - 1 - i] = '1';
    }
    return out;
}

void BitString::trim() {
    for (unsigned k = 0; k < 4; ++k) {
        const unsigned lo = 64 * k;
        if (width_ <= lo) {
            w_[k] = 0;
        } else if (width_ < lo + 64) {
            w_[k] &= (std::uint64_t{1} << (width_ - lo)) - 1;
        }
    }
}

BitString BitString::operator^(const BitString& o) const {
    if (width_ != o.width_) throw Error(Errc::width_mismatch, "xor of different widths");
    BitString r = *this;
    for (unsigned k = 0; k < 4; ++k) r.w_[k] ^= o.w_[k];
    return r;
}

BitString BitString::operator&(const BitString& o) const {
    if (width_ != o.width_) throw Error(Errc::width_mismatch, "and of different widths");
    BitString r = *this;
    for (unsigned k = 0; k < 4; ++k) r.w_[k] &= o.w_[k];
    return r;
}

BitString BitString::operator~() const {
    BitString r = *this;
    for (auto& x : r.w_) x = ~x;
    r.trim();
    return r;
}

BitString BitString::add_mod(const BitString& o) const {
    bool overflow = false;
    return add_exact(o, overflow);
}

BitString BitString::negate_mod() const {
    BitString r = ~*this;
    return r.add_mod(BitString::from_uint(1, width_));
}

BitString BitString::add_exact(const BitString& o, bool& overflow) const {
    if (width_ != o.width_) throw Error(Errc::width_mismatch, "sum of different widths");
    BitString r(width_);
    unsigned __int128 carry = 0;
    for (unsigned k = 0; k < 4; ++k) {
        const unsigned __int128 s = static_cast<unsigned __int128>(w_[k]) + o.w_[k] + carry;
        r.w_[k] = static_cast<std::uint64_t>(s);
        carry = s >> 64;
    }
    BitString full = r;
    r.trim();
    overflow = carry != 0 || full.w_ != r.w_;
    return r;
}

bool BitString::operator<(const BitString& o) const {
    if (width_ != o.width_) return width_ < o.width_;
    for (unsigned k = 4; k-- > 0;) {
        if (w_[k] != o.w_[k]) return w_[k] < o.w_[k];
    }
    return false;
}

std::size_t BitString::hash() const {
    std::uint64_t h = width_ * 0x9e3779b97f4a7c15ULL;
    for (std::uint64_t x : w_) {
        h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
}

BitString concat(const BitString& a, const BitString& b) {
    BitString r(a.width() + b.width());
    for (unsigned i = 0; i < b.width(); ++i) {
        if (b.bit(i)) r.set_bit(i, true);
    }
    for (unsigned i = 0; i < a.width(); ++i) {
        if (a.bit(i)) r.set_bit(b.width() + i, true);
    }
    return r;
}

}  // namespace facred
