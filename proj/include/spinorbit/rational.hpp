#pragma once

#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>

namespace spinorbit {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Exact rational number on 64-bit numerator/denominator, always normalized
// (gcd 1, denominator positive). Intermediates run through 128-bit integers;
// results that do not fit back into 64 bits throw.
class Rational {
 public:
  Rational() = default;
  Rational(long long n) : num_(n) {}
  Rational(long long n, long long d) {
    if (d == 0) throw Error("Rational: zero denominator");
    assign(static_cast<__int128>(n), static_cast<__int128>(d));
  }

  long long num() const { return num_; }
  long long den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  bool is_one() const { return num_ == 1 && den_ == 1; }
  bool is_integer() const { return den_ == 1; }
  int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return make(i128(a.num_) * b.den_ + i128(b.num_) * a.den_,
                i128(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return make(i128(a.num_) * b.den_ - i128(b.num_) * a.den_,
                i128(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return make(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw Error("Rational: division by zero");
    return make(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
  }
  Rational operator-() const {
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  Rational inverse() const {
    if (num_ == 0) throw Error("Rational: inverse of zero");
    return make(i128(den_), i128(num_));
  }

  Rational pow(int k) const {
    if (k < 0) return inverse().pow(-k);
    Rational r(1), base = *this;
    while (k > 0) {
      if (k & 1) r *= base;
      base = (k > 1) ? base * base : base;
      k >>= 1;
    }
    return r;
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) {
    return !(a == b);
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  std::string str() const {
    std::string s = std::to_string(num_);
    if (den_ != 1) s += "/" + std::to_string(den_);
    return s;
  }

 private:
  using i128 = __int128;

  static Rational make(i128 n, i128 d) {
    Rational r;
    r.assign(n, d);
    return r;
  }

  void assign(i128 n, i128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    i128 g = gcd128(n < 0 ? -n : n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
      throw Error("Rational: 64-bit overflow");
    num_ = static_cast<long long>(n);
    den_ = static_cast<long long>(d);
    if (den_ == 0) throw Error("Rational: zero denominator");
  }

  static i128 gcd128(i128 a, i128 b) {
    while (b != 0) {
      i128 t = a % b;
      a = b;
      b = t;
    }
    return a == 0 ? 1 : a;
  }

  long long num_ = 0;
  long long den_ = 1;
};

// Gaussian rational a + b*i; the exact scalar field used by every symbolic
// coefficient in the engine.
class GaussRat {
 public:
  GaussRat() = default;
  GaussRat(long long n) : re_(n) {}
  GaussRat(const Rational& re) : re_(re) {}
  GaussRat(const Rational& re, const Rational& im) : re_(re), im_(im) {}

  static GaussRat i() { return GaussRat(Rational(0), Rational(1)); }

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }
  bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
  bool is_one() const { return re_.is_one() && im_.is_zero(); }
  bool is_real() const { return im_.is_zero(); }

  friend GaussRat operator+(const GaussRat& a, const GaussRat& b) {
    return {a.re_ + b.re_, a.im_ + b.im_};
  }
  friend GaussRat operator-(const GaussRat& a, const GaussRat& b) {
    return {a.re_ - b.re_, a.im_ - b.im_};
  }
  friend GaussRat operator*(const GaussRat& a, const GaussRat& b) {
    return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
  }
  friend GaussRat operator/(const GaussRat& a, const GaussRat& b) {
    return a * b.inverse();
  }
  GaussRat operator-() const { return {-re_, -im_}; }
  GaussRat& operator+=(const GaussRat& o) { return *this = *this + o; }
  GaussRat& operator-=(const GaussRat& o) { return *this = *this - o; }
  GaussRat& operator*=(const GaussRat& o) { return *this = *this * o; }

  GaussRat conj() const { return {re_, -im_}; }

  GaussRat inverse() const {
    Rational n = re_ * re_ + im_ * im_;
    if (n.is_zero()) throw Error("GaussRat: inverse of zero");
    return {re_ / n, -im_ / n};
  }

  GaussRat pow(int k) const {
    if (k < 0) return inverse().pow(-k);
    GaussRat r(1), base = *this;
    while (k > 0) {
      if (k & 1) r *= base;
      base = (k > 1) ? base * base : base;
      k >>= 1;
    }
    return r;
  }

  friend bool operator==(const GaussRat& a, const GaussRat& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }
  friend bool operator!=(const GaussRat& a, const GaussRat& b) {
    return !(a == b);
  }
  // Arbitrary total order, used only to make term lists deterministic.
  friend bool operator<(const GaussRat& a, const GaussRat& b) {
    if (a.re_ != b.re_) return a.re_ < b.re_;
    return a.im_ < b.im_;
  }

  std::string str() const {
    if (im_.is_zero()) return re_.str();
    std::string im;
    if (im_.is_one())
      im = "i";
    else if (im_ == Rational(-1))
      im = "-i";
    else
      im = im_.str() + "*i";
    if (re_.is_zero()) return im;
    std::string s = "(" + re_.str();
    if (im[0] == '-')
      s += im;
    else
      s += "+" + im;
    return s + ")";
  }

 private:
  Rational re_, im_;
};

}  // namespace spinorbit
