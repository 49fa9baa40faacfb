#include "repeaterpgf/rational.hpp"

#include <ostream>

namespace rpgf {

ExactRational ExactRational::from_string(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) {
    return ExactRational(BigRat(BigInt(s)));
  }
  BigInt num(s.substr(0, slash));
  BigInt den(s.substr(slash + 1));
  if (den == 0) throw std::domain_error("ExactRational: zero denominator in \"" + s + "\"");
  return ExactRational(std::move(num), std::move(den));
}

ExactRational ExactRational::pow(long long e) const {
  if (e < 0) return inverse().pow(-e);
  ExactRational base = *this;
  ExactRational acc = ExactRational(1);
  unsigned long long n = static_cast<unsigned long long>(e);
  while (n > 0) {
    if (n & 1ULL) acc *= base;
    base *= base;
    n >>= 1ULL;
  }
  return acc;
}

std::string ExactRational::to_string() const {
  std::string out = numerator().str();
  if (!is_integer()) {
    out += "/";
    out += denominator().str();
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const ExactRational& r) {
  return os << r.to_string();
}

}  // namespace rpgf
