#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace charsieve {

using i64 = long long;
using u64 = unsigned long long;
using i128 = __int128_t;
using cdouble = std::complex<double>;

inline i64 igcd(i64 a, i64 b) { return std::gcd(a, b); }
inline i64 ilcm(i64 a, i64 b) { return a / std::gcd(a, b) * b; }

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace charsieve
