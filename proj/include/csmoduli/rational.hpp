#pragma once

// Arbitrary-precision rationals for the exact arithmetic path.
// Sign-magnitude big integers over 32-bit limbs; schoolbook multiplication
// is plenty for the matrix sizes this project handles.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace csm {

class BigInt {
  public:
    BigInt() = default;
    BigInt(long long v) {
        if (v < 0) {
            negative_ = true;
            unsigned long long m = static_cast<unsigned long long>(-(v + 1)) + 1ull;
            push_u64(m);
        } else {
            push_u64(static_cast<unsigned long long>(v));
        }
    }

    bool is_zero() const { return limbs_.empty(); }
    bool negative() const { return negative_; }

    static int cmp_mag(const BigInt& a, const BigInt& b) {
        if (a.limbs_.size() != b.limbs_.size())
            return a.limbs_.size() < b.limbs_.size() ? -1 : 1;
        for (size_t i = a.limbs_.size(); i-- > 0;) {
            if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] < b.limbs_[i] ? -1 : 1;
        }
        return 0;
    }

    static int cmp(const BigInt& a, const BigInt& b) {
        if (a.negative_ != b.negative_) return a.negative_ ? -1 : 1;
        int c = cmp_mag(a, b);
        return a.negative_ ? -c : c;
    }

    friend bool operator==(const BigInt& a, const BigInt& b) { return cmp(a, b) == 0; }
    friend bool operator<(const BigInt& a, const BigInt& b) { return cmp(a, b) < 0; }

    BigInt operator-() const {
        BigInt r = *this;
        if (!r.is_zero()) r.negative_ = !r.negative_;
        return r;
    }

    friend BigInt operator+(const BigInt& a, const BigInt& b) {
        if (a.negative_ == b.negative_) {
            BigInt r = add_mag(a, b);
            r.negative_ = a.negative_ && !r.is_zero();
            return r;
        }
        int c = cmp_mag(a, b);
        if (c == 0) return BigInt();
        if (c > 0) {
            BigInt r = sub_mag(a, b);
            r.negative_ = a.negative_ && !r.is_zero();
            return r;
        }
        BigInt r = sub_mag(b, a);
        r.negative_ = b.negative_ && !r.is_zero();
        return r;
    }

    friend BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

    friend BigInt operator*(const BigInt& a, const BigInt& b) {
        if (a.is_zero() || b.is_zero()) return BigInt();
        BigInt r;
        r.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
        for (size_t i = 0; i < a.limbs_.size(); ++i) {
            std::uint64_t carry = 0;
            for (size_t j = 0; j < b.limbs_.size(); ++j) {
                std::uint64_t cur = static_cast<std::uint64_t>(a.limbs_[i]) * b.limbs_[j] +
                                    r.limbs_[i + j] + carry;
                r.limbs_[i + j] = static_cast<std::uint32_t>(cur);
                carry = cur >> 32;
            }
            r.limbs_[i + b.limbs_.size()] += static_cast<std::uint32_t>(carry);
        }
        r.trim();
        r.negative_ = (a.negative_ != b.negative_) && !r.is_zero();
        return r;
    }

    // Truncated division (quotient rounds toward zero), remainder has the
    // sign of the dividend.
    static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
        if (b.is_zero()) throw std::domain_error("BigInt division by zero");
        if (cmp_mag(a, b) < 0) {
            q = BigInt();
            r = a;
            return;
        }
        // Long division over limbs, binary within the trial digit.
        BigInt rem, quo;
        quo.limbs_.assign(a.limbs_.size(), 0);
        for (size_t i = a.limbs_.size(); i-- > 0;) {
            rem.shift_limbs_left(1);
            if (a.limbs_[i] != 0) {
                if (rem.limbs_.empty()) rem.limbs_.push_back(a.limbs_[i]);
                else rem.limbs_[0] = a.limbs_[i];
            }
            std::uint32_t lo = 0, hi = 0xffffffffu, digit = 0;
            while (lo <= hi) {
                std::uint32_t mid = lo + ((hi - lo) >> 1);
                BigInt t = mul_u32(b.abs(), mid);
                if (cmp_mag(t, rem) <= 0) {
                    digit = mid;
                    if (mid == 0xffffffffu) break;
                    lo = mid + 1;
                } else {
                    if (mid == 0) break;
                    hi = mid - 1;
                }
            }
            if (digit) rem = sub_mag(rem, mul_u32(b.abs(), digit));
            quo.limbs_[i] = digit;
        }
        quo.trim();
        rem.trim();
        quo.negative_ = (a.negative_ != b.negative_) && !quo.is_zero();
        rem.negative_ = a.negative_ && !rem.is_zero();
        q = quo;
        r = rem;
    }

    friend BigInt operator/(const BigInt& a, const BigInt& b) {
        BigInt q, r;
        divmod(a, b, q, r);
        return q;
    }
    friend BigInt operator%(const BigInt& a, const BigInt& b) {
        BigInt q, r;
        divmod(a, b, q, r);
        return r;
    }

    BigInt abs() const {
        BigInt r = *this;
        r.negative_ = false;
        return r;
    }

    static BigInt gcd(BigInt a, BigInt b) {
        a.negative_ = false;
        b.negative_ = false;
        while (!b.is_zero()) {
            BigInt q, r;
            divmod(a, b, q, r);
            a = b;
            b = r;
        }
        return a;
    }

    double to_double() const {
        double v = 0;
        for (size_t i = limbs_.size(); i-- > 0;) v = v * 4294967296.0 + limbs_[i];
        return negative_ ? -v : v;
    }

    long long to_ll() const {
        long long v = 0;
        for (size_t i = limbs_.size(); i-- > 0;)
            v = v * 4294967296ll + static_cast<long long>(limbs_[i]);
        return negative_ ? -v : v;
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        BigInt t = abs();
        std::string digits;
        while (!t.is_zero()) {
            std::uint32_t rem = 0;
            for (size_t i = t.limbs_.size(); i-- > 0;) {
                std::uint64_t cur = (static_cast<std::uint64_t>(rem) << 32) | t.limbs_[i];
                t.limbs_[i] = static_cast<std::uint32_t>(cur / 1000000000u);
                rem = static_cast<std::uint32_t>(cur % 1000000000u);
            }
            t.trim();
            for (int k = 0; k < 9; ++k) {
                digits.push_back(static_cast<char>('0' + rem % 10));
                rem /= 10;
            }
        }
        while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
        if (negative_) digits.push_back('-');
        std::reverse(digits.begin(), digits.end());
        return digits;
    }

    static BigInt from_string(const std::string& s) {
        BigInt r;
        size_t i = 0;
        bool neg = false;
        if (i < s.size() && (s[i] == '-' || s[i] == '+')) neg = s[i++] == '-';
        if (i >= s.size()) throw std::invalid_argument("empty integer literal");
        for (; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("bad integer literal");
            r = mul_u32(r, 10);
            BigInt d(s[i] - '0');
            r = add_mag(r, d);
        }
        r.negative_ = neg && !r.is_zero();
        return r;
    }

  private:
    std::vector<std::uint32_t> limbs_;  // little-endian, no trailing zeros
    bool negative_ = false;

    void trim() {
        while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
        if (limbs_.empty()) negative_ = false;
    }
    void push_u64(unsigned long long m) {
        while (m) {
            limbs_.push_back(static_cast<std::uint32_t>(m));
            m >>= 32;
        }
    }
    void shift_limbs_left(size_t n) {
        if (is_zero() || n == 0) return;
        limbs_.insert(limbs_.begin(), n, 0);
    }
    static BigInt add_mag(const BigInt& a, const BigInt& b) {
        BigInt r;
        const auto& x = a.limbs_.size() >= b.limbs_.size() ? a.limbs_ : b.limbs_;
        const auto& y = a.limbs_.size() >= b.limbs_.size() ? b.limbs_ : a.limbs_;
        r.limbs_.resize(x.size());
        std::uint64_t carry = 0;
        for (size_t i = 0; i < x.size(); ++i) {
            std::uint64_t cur = carry + x[i] + (i < y.size() ? y[i] : 0);
            r.limbs_[i] = static_cast<std::uint32_t>(cur);
            carry = cur >> 32;
        }
        if (carry) r.limbs_.push_back(static_cast<std::uint32_t>(carry));
        return r;
    }
    // requires |a| >= |b|
    static BigInt sub_mag(const BigInt& a, const BigInt& b) {
        BigInt r;
        r.limbs_.resize(a.limbs_.size());
        std::int64_t borrow = 0;
        for (size_t i = 0; i < a.limbs_.size(); ++i) {
            std::int64_t cur = static_cast<std::int64_t>(a.limbs_[i]) - borrow -
                               (i < b.limbs_.size() ? b.limbs_[i] : 0);
            if (cur < 0) {
                cur += (1ll << 32);
                borrow = 1;
            } else {
                borrow = 0;
            }
            r.limbs_[i] = static_cast<std::uint32_t>(cur);
        }
        r.trim();
        return r;
    }
    static BigInt mul_u32(const BigInt& a, std::uint32_t m) {
        if (a.is_zero() || m == 0) return BigInt();
        BigInt r;
        r.limbs_.resize(a.limbs_.size());
        std::uint64_t carry = 0;
        for (size_t i = 0; i < a.limbs_.size(); ++i) {
            std::uint64_t cur = static_cast<std::uint64_t>(a.limbs_[i]) * m + carry;
            r.limbs_[i] = static_cast<std::uint32_t>(cur);
            carry = cur >> 32;
        }
        while (carry) {
            r.limbs_.push_back(static_cast<std::uint32_t>(carry));
            carry >>= 32;
        }
        r.negative_ = a.negative_;
        return r;
    }
};

// Normalized rational number: gcd(num,den) = 1, den > 0.
class Rational {
  public:
    Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}
    Rational(long long n, long long d) : num_(n), den_(d) { normalize(); }
    Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    Rational operator-() const {
        Rational r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.is_zero()) throw std::domain_error("Rational division by zero");
        return Rational(a.num_ * b.den_, a.den_ * b.num_);
    }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return BigInt::cmp(a.num_ * b.den_, b.num_ * a.den_) < 0;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    Rational abs() const { return num_.negative() ? -*this : *this; }

    double to_double() const { return num_.to_double() / den_.to_double(); }

    std::string to_string() const {
        std::string s = num_.to_string();
        if (!(den_ == BigInt(1))) s += "/" + den_.to_string();
        return s;
    }

    static Rational from_string(const std::string& s) {
        auto slash = s.find('/');
        if (slash == std::string::npos) {
            auto dot = s.find('.');
            if (dot != std::string::npos) {
                // decimal literal -> exact rational
                std::string digits = s.substr(0, dot) + s.substr(dot + 1);
                size_t frac = s.size() - dot - 1;
                BigInt den(1);
                for (size_t i = 0; i < frac; ++i) den = den * BigInt(10);
                return Rational(BigInt::from_string(digits), den);
            }
            return Rational(BigInt::from_string(s), BigInt(1));
        }
        return Rational(BigInt::from_string(s.substr(0, slash)),
                        BigInt::from_string(s.substr(slash + 1)));
    }

  private:
    BigInt num_, den_;

    void normalize() {
        if (den_.is_zero()) throw std::domain_error("Rational with zero denominator");
        if (num_.is_zero()) {
            den_ = BigInt(1);
            return;
        }
        if (den_.negative()) {
            num_ = -num_;
            den_ = -den_;
        }
        BigInt g = BigInt::gcd(num_, den_);
        if (!(g == BigInt(1))) {
            num_ = num_ / g;
            den_ = den_ / g;
        }
    }
};

// Scalar traits shared by the double and exact paths.
template <class T>
struct scalar_traits;

template <>
struct scalar_traits<double> {
    static constexpr bool exact = false;
    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static double abs(double x) { return x < 0 ? -x : x; }
    static double to_double(double x) { return x; }
    static bool is_zero(double x) { return x == 0.0; }
};

template <>
struct scalar_traits<Rational> {
    static constexpr bool exact = true;
    static Rational zero() { return Rational(0); }
    static Rational one() { return Rational(1); }
    static Rational abs(const Rational& x) { return x.abs(); }
    static double to_double(const Rational& x) { return x.to_double(); }
    static bool is_zero(const Rational& x) { return x.is_zero(); }
};

}  // namespace csm
