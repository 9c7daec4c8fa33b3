// padic.hpp - fixed-precision p-adic integers: exact arithmetic modulo p^N.
#pragma once

#include "flagval/core.hpp"

#include <string>

namespace flagval {

// An element of Z_p known modulo p^N. All arithmetic is exact at that
// precision; the modulus p^N must fit in a signed 64-bit integer.
class PadicInt {
  public:
    PadicInt() = default;
    PadicInt(Int p, int prec, Int value) : p_(p), prec_(prec) {
        if (prec < 1) throw std::invalid_argument("PadicInt: precision must be >= 1");
        mod_ = ipow(p, prec);
        v_ = imod(value, mod_);
    }

    Int prime() const { return p_; }
    int precision() const { return prec_; }
    Int modulus() const { return mod_; }
    Int residue() const { return v_; }
    bool is_zero() const { return v_ == 0; }

    PadicInt operator+(const PadicInt& o) const { return with(imod(v_ + o.v_, mod_)); }
    PadicInt operator-(const PadicInt& o) const { return with(imod(v_ - o.v_, mod_)); }
    PadicInt operator-() const { return with(imod(-v_, mod_)); }
    PadicInt operator*(const PadicInt& o) const { return with(imod(v_ * o.v_, mod_)); }
    PadicInt operator*(Int c) const { return with(imod(imod(c, mod_) * v_, mod_)); }

    bool is_unit() const { return v_ % p_ != 0; }
    PadicInt inv() const {
        if (!is_unit()) throw std::domain_error("PadicInt::inv: not a unit");
        return with(mod_inv(v_, mod_));
    }

    // valuation; prec_ when zero at this precision
    int val() const {
        if (v_ == 0) return prec_;
        return vp(v_, p_);
    }

    bool operator==(const PadicInt& o) const { return v_ == o.v_; }
    bool operator!=(const PadicInt& o) const { return v_ != o.v_; }

    // digits base p, little-endian, N digits
    std::string digits() const {
        std::string s;
        Int x = v_;
        for (int i = 0; i < prec_; ++i) {
            s += static_cast<char>('0' + x % p_);
            x /= p_;
        }
        return s;
    }

    static PadicInt from_digits(Int p, const std::string& s) {
        Int v = 0, pw = 1;
        for (char c : s) {
            if (c < '0' || c >= '0' + p) throw std::invalid_argument("PadicInt: bad digit");
            v += (c - '0') * pw;
            pw *= p;
        }
        return PadicInt(p, static_cast<int>(s.size()), v);
    }

  private:
    PadicInt with(Int v) const {
        PadicInt r = *this;
        r.v_ = v;
        return r;
    }
    Int p_ = 2;
    int prec_ = 1;
    Int mod_ = 2;
    Int v_ = 0;
};

} // namespace flagval
