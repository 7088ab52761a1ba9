#include "gcsim/rational.hpp"

#include <algorithm>

namespace gcsim {
namespace {

__int128 abs128(__int128 v) { return v < 0 ? -v : v; }

__int128 gcd128(__int128 a, __int128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

void Rational::normalize() {
  if (den_ == 0) throw DomainError("rational with zero denominator");
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  if (num_ == 0) {
    den_ = 1;
    return;
  }
  __int128 g = gcd128(num_, den_);
  num_ /= g;
  den_ /= g;
}

std::string Rational::str() const {
  auto digits = [](Int v) {
    bool neg = v < 0;
    if (neg) v = -v;
    std::string s;
    do {
      s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
      v /= 10;
    } while (v != 0);
    if (neg) s.push_back('-');
    std::reverse(s.begin(), s.end());
    return s;
  };
  if (den_ == 1) return digits(num_);
  return digits(num_) + "/" + digits(den_);
}

long long Rational::floor() const {
  Int q = num_ / den_;
  if (num_ % den_ != 0 && num_ < 0) --q;
  return static_cast<long long>(q);
}

long long Rational::ceil() const {
  Int q = num_ / den_;
  if (num_ % den_ != 0 && num_ > 0) ++q;
  return static_cast<long long>(q);
}

}  // namespace gcsim
