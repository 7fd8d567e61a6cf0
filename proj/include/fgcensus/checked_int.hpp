#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fgc {

/// Thrown when an exact count would exceed the 128-bit representation.
/// Counts are never allowed to wrap silently.
struct OverflowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Signed 128-bit integer with overflow detection on every arithmetic op.
/// Covers q^m for q=3 up to m=80 and q=5 up to m=54, well past every
/// engine guard in this library.
class CheckedInt128 {
 public:
  CheckedInt128() = default;
  CheckedInt128(long long x) : v_(x) {}  // NOLINT: implicit by design
  CheckedInt128(int x) : v_(x) {}        // NOLINT

  CheckedInt128& operator+=(CheckedInt128 o) {
    if (__builtin_add_overflow(v_, o.v_, &v_)) throw OverflowError("int128 add overflow");
    return *this;
  }
  CheckedInt128& operator-=(CheckedInt128 o) {
    if (__builtin_sub_overflow(v_, o.v_, &v_)) throw OverflowError("int128 sub overflow");
    return *this;
  }
  CheckedInt128& operator*=(CheckedInt128 o) {
    if (__builtin_mul_overflow(v_, o.v_, &v_)) throw OverflowError("int128 mul overflow");
    return *this;
  }

  friend CheckedInt128 operator+(CheckedInt128 a, CheckedInt128 b) { return a += b; }
  friend CheckedInt128 operator-(CheckedInt128 a, CheckedInt128 b) { return a -= b; }
  friend CheckedInt128 operator*(CheckedInt128 a, CheckedInt128 b) { return a *= b; }
  friend CheckedInt128 operator-(CheckedInt128 a) {
    CheckedInt128 r;
    if (__builtin_sub_overflow(static_cast<__int128>(0), a.v_, &r.v_))
      throw OverflowError("int128 negate overflow");
    return r;
  }

  friend bool operator==(CheckedInt128 a, CheckedInt128 b) { return a.v_ == b.v_; }
  friend bool operator!=(CheckedInt128 a, CheckedInt128 b) { return a.v_ != b.v_; }
  friend bool operator<(CheckedInt128 a, CheckedInt128 b) { return a.v_ < b.v_; }
  friend bool operator<=(CheckedInt128 a, CheckedInt128 b) { return a.v_ <= b.v_; }
  friend bool operator>(CheckedInt128 a, CheckedInt128 b) { return a.v_ > b.v_; }
  friend bool operator>=(CheckedInt128 a, CheckedInt128 b) { return a.v_ >= b.v_; }

  bool is_zero() const { return v_ == 0; }

  double to_double() const { return static_cast<double>(v_); }

  long long to_int64() const {
    if (v_ > std::numeric_limits<long long>::max() || v_ < std::numeric_limits<long long>::min())
      throw OverflowError("int128 does not fit in 64 bits");
    return static_cast<long long>(v_);
  }

  /// q^m with overflow checking.
  static CheckedInt128 pow(long long base, int exp) {
    if (exp < 0) throw std::invalid_argument("negative exponent");
    CheckedInt128 r(1), b(base);
    while (exp > 0) {
      if (exp & 1) r *= b;
      exp >>= 1;
      if (exp > 0) b *= b;
    }
    return r;
  }

  std::string str() const {
    if (v_ == 0) return "0";
    unsigned __int128 u;
    bool neg = v_ < 0;
    if (neg) {
      u = static_cast<unsigned __int128>(-(v_ + 1)) + 1;  // avoids UB at INT128_MIN
    } else {
      u = static_cast<unsigned __int128>(v_);
    }
    char buf[48];
    int pos = 48;
    while (u > 0) {
      buf[--pos] = static_cast<char>('0' + static_cast<int>(u % 10));
      u /= 10;
    }
    std::string s;
    if (neg) s.push_back('-');
    s.append(buf + pos, buf + 48);
    return s;
  }

  static CheckedInt128 parse(std::string_view s) {
    if (s.empty()) throw std::invalid_argument("empty integer literal");
    bool neg = false;
    std::size_t i = 0;
    if (s[0] == '-' || s[0] == '+') {
      neg = s[0] == '-';
      i = 1;
    }
    if (i == s.size()) throw std::invalid_argument("sign without digits");
    CheckedInt128 r(0);
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("non-digit in integer literal");
      r *= 10;
      r += (s[i] - '0');
    }
    return neg ? -r : r;
  }

 private:
  __int128 v_ = 0;
};

}  // namespace fgc
