// Copyright 2026 The homcount Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <limits>
#include <string>
#include <type_traits>

namespace homcount {

/// Unsigned 128-bit counter used for exact homomorphism numbers.
using Count = unsigned __int128;

inline std::string to_string(Count c) {
  if (c == 0) return "0";
  std::string s;
  while (c > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(c % 10)));
    c /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

/// A homomorphism number: an exact count (unweighted) or a real value
/// (weighted, or an exact count that overflowed 128 bits and was recomputed
/// in double precision; then `promoted()` is set).
class HomValue {
 public:
  enum class Mode { exact, real };

  static HomValue exact(Count c) {
    HomValue h;
    h.mode_ = Mode::exact;
    h.exact_ = c;
    return h;
  }

  static HomValue real(double v, bool promoted = false) {
    HomValue h;
    h.mode_ = Mode::real;
    h.real_ = v;
    h.promoted_ = promoted;
    return h;
  }

  Mode mode() const noexcept { return mode_; }
  bool is_exact() const noexcept { return mode_ == Mode::exact; }
  bool promoted() const noexcept { return promoted_; }

  /// Exact count; only valid in exact mode.
  Count count() const noexcept { return exact_; }

  double to_double() const noexcept { return is_exact() ? static_cast<double>(exact_) : real_; }
  long double to_long_double() const noexcept {
    return is_exact() ? static_cast<long double>(exact_) : static_cast<long double>(real_);
  }

  std::string to_string() const {
    if (is_exact()) return homcount::to_string(exact_);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", real_);
    return buf;
  }

  friend bool operator==(const HomValue& a, const HomValue& b) {
    if (a.mode_ != b.mode_) return false;
    return a.is_exact() ? a.exact_ == b.exact_ : a.real_ == b.real_;
  }

 private:
  Mode mode_ = Mode::exact;
  Count exact_ = 0;
  double real_ = 0.0;
  bool promoted_ = false;
};

namespace detail {

/// Thrown internally when a checked count leaves its integer width.
struct CountOverflow {};

/// Count with overflow detection; the arithmetic type of exact-mode DPs.
template <class T>
struct BasicCheckedCount {
  T v = 0;

  BasicCheckedCount() = default;
  explicit BasicCheckedCount(double w) : v(static_cast<T>(w)) {}
  explicit BasicCheckedCount(T c) : v(c) {}

  friend BasicCheckedCount operator+(BasicCheckedCount a, BasicCheckedCount b) {
    BasicCheckedCount r;
    if (__builtin_add_overflow(a.v, b.v, &r.v)) throw CountOverflow{};
    return r;
  }
  friend BasicCheckedCount operator*(BasicCheckedCount a, BasicCheckedCount b) {
    BasicCheckedCount r;
    if (__builtin_mul_overflow(a.v, b.v, &r.v)) throw CountOverflow{};
    return r;
  }
  BasicCheckedCount& operator+=(BasicCheckedCount b) { return *this = *this + b; }
  BasicCheckedCount& operator*=(BasicCheckedCount b) { return *this = *this * b; }
  bool is_zero() const { return v == 0; }
};

using CheckedCount = BasicCheckedCount<Count>;
// Half the table footprint; tried first, most counts fit.
using CheckedCount64 = BasicCheckedCount<std::uint64_t>;

template <class S>
inline bool is_zero(const S& s) {
  if constexpr (std::is_floating_point_v<S>) {
    return s == S{0};
  } else {
    return s.is_zero();
  }
}

}  // namespace detail

}  // namespace homcount
