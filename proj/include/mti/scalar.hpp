#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace mti {

/// Base class for every error this library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ScalarParseError : public Error {
 public:
  using Error::Error;
};

/// Exact rational function value. Always held in canonical form
/// (reduced, positive denominator), so equality is structural.
class Scalar {
 public:
  Scalar() = default;
  Scalar(long value) : q_(value) {}  // NOLINT(google-explicit-constructor)
  Scalar(long num, long den);
  explicit Scalar(mpq_class q);

  /// Accepts integer ("3", "-2"), decimal ("2.5", "-.25", "1.") and
  /// rational ("5/2", "-1/3") literals. Surrounding whitespace is rejected.
  static Scalar parse(std::string_view text);

  /// Canonical text: "2", "-1/3", "7/2". parse(to_string()) is the identity.
  std::string to_string() const;
  double to_double() const { return q_.get_d(); }

  const mpq_class& raw() const { return q_; }
  bool is_negative() const { return sgn(q_) < 0; }
  bool is_zero() const { return sgn(q_) == 0; }

  Scalar abs() const;
  Scalar half() const;

  friend Scalar operator+(const Scalar& a, const Scalar& b) { return Scalar(mpq_class(a.q_ + b.q_)); }
  friend Scalar operator-(const Scalar& a, const Scalar& b) { return Scalar(mpq_class(a.q_ - b.q_)); }
  friend Scalar operator-(const Scalar& a) { return Scalar(mpq_class(-a.q_)); }
  friend Scalar operator*(const Scalar& a, const Scalar& b) { return Scalar(mpq_class(a.q_ * b.q_)); }
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);

  friend bool operator==(const Scalar& a, const Scalar& b) { return a.q_ == b.q_; }
  friend std::strong_ordering operator<=>(const Scalar& a, const Scalar& b) {
    const int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }

  std::size_t hash() const;

 private:
  mpq_class q_;
};

std::ostream& operator<<(std::ostream& os, const Scalar& s);

}  // namespace mti

template <>
struct std::hash<mti::Scalar> {
  std::size_t operator()(const mti::Scalar& s) const noexcept { return s.hash(); }
};
