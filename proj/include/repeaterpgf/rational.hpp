// Arbitrary-precision exact rational arithmetic.
//
// ExactRational is the coefficient type of the whole analytic engine: every
// polynomial identity we verify is only meaningful if no rounding happens
// before the final evaluation boundary.  Values are always stored fully
// reduced with a positive denominator (cpp_rational maintains exactly that
// canonical form).

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace rpgf {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

class ExactRational {
public:
  ExactRational() : v_(0) {}
  ExactRational(long long n) : v_(n) {}  // NOLINT: implicit by design
  ExactRational(long long num, long long den) : v_(make_rat(BigInt(num), BigInt(den))) {}
  ExactRational(BigInt num, BigInt den) : v_(make_rat(std::move(num), std::move(den))) {}
  explicit ExactRational(BigRat v) : v_(std::move(v)) {}

  // Parses "a" or "a/b" (optionally signed).
  static ExactRational from_string(const std::string& s);

  BigInt numerator() const { return boost::multiprecision::numerator(v_); }
  BigInt denominator() const { return boost::multiprecision::denominator(v_); }

  bool is_zero() const { return v_.is_zero(); }
  bool is_one() const { return v_ == 1; }
  bool is_integer() const { return denominator() == 1; }
  int sign() const { return v_.sign(); }

  ExactRational operator-() const { return ExactRational(BigRat(-v_)); }
  ExactRational& operator+=(const ExactRational& o) { v_ += o.v_; return *this; }
  ExactRational& operator-=(const ExactRational& o) { v_ -= o.v_; return *this; }
  ExactRational& operator*=(const ExactRational& o) { v_ *= o.v_; return *this; }
  ExactRational& operator/=(const ExactRational& o) {
    if (o.is_zero()) throw std::domain_error("ExactRational: division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend ExactRational operator+(ExactRational a, const ExactRational& b) { return a += b; }
  friend ExactRational operator-(ExactRational a, const ExactRational& b) { return a -= b; }
  friend ExactRational operator*(ExactRational a, const ExactRational& b) { return a *= b; }
  friend ExactRational operator/(ExactRational a, const ExactRational& b) { return a /= b; }

  friend bool operator==(const ExactRational& a, const ExactRational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const ExactRational& a, const ExactRational& b) { return a.v_ != b.v_; }
  friend bool operator<(const ExactRational& a, const ExactRational& b) { return a.v_ < b.v_; }
  friend bool operator<=(const ExactRational& a, const ExactRational& b) { return a.v_ <= b.v_; }
  friend bool operator>(const ExactRational& a, const ExactRational& b) { return a.v_ > b.v_; }
  friend bool operator>=(const ExactRational& a, const ExactRational& b) { return a.v_ >= b.v_; }

  // x^e for any integer e (e < 0 requires x != 0).
  ExactRational pow(long long e) const;

  ExactRational inverse() const {
    if (is_zero()) throw std::domain_error("ExactRational: inverse of zero");
    return ExactRational(BigRat(1) / v_);
  }

  ExactRational abs() const { return v_ < 0 ? -*this : *this; }

  double to_double() const { return v_.convert_to<double>(); }

  // "a" for integers, "a/b" otherwise; exact round-trip with from_string.
  std::string to_string() const;

  friend std::ostream& operator<<(std::ostream& os, const ExactRational& r);

private:
  static BigRat make_rat(BigInt num, BigInt den) {
    if (den == 0) throw std::domain_error("ExactRational: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    return BigRat(std::move(num), std::move(den));
  }

  BigRat v_;
};

}  // namespace rpgf
