#include "mti/scalar.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>

namespace mti {

namespace {

bool all_digits(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
}

[[noreturn]] void reject(std::string_view text, const char* why) {
  throw ScalarParseError("invalid number literal '" + std::string(text) + "': " + why);
}

}  // namespace

Scalar::Scalar(long num, long den) : q_(num, den) {
  if (den == 0) throw Error("zero denominator");
  q_.canonicalize();
}

Scalar::Scalar(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

Scalar Scalar::parse(std::string_view text) {
  if (text.empty()) reject(text, "empty");
  std::string_view body = text;
  bool negative = false;
  if (body.front() == '-' || body.front() == '+') {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  if (body.empty()) reject(text, "sign without digits");

  mpq_class q;
  if (const auto slash = body.find('/'); slash != std::string_view::npos) {
    const auto num = body.substr(0, slash);
    const auto den = body.substr(slash + 1);
    if (num.empty() || den.empty() || !all_digits(num) || !all_digits(den)) reject(text, "malformed fraction");
    mpz_class d(std::string(den), 10);
    if (d == 0) reject(text, "zero denominator");
    q = mpq_class(mpz_class(std::string(num), 10), d);
  } else if (const auto dot = body.find('.'); dot != std::string_view::npos) {
    const auto whole = body.substr(0, dot);
    const auto frac = body.substr(dot + 1);
    if ((whole.empty() && frac.empty()) || !all_digits(whole) || !all_digits(frac)) reject(text, "malformed decimal");
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    const std::string digits = std::string(whole) + std::string(frac);
    q = mpq_class(mpz_class(digits.empty() ? "0" : digits, 10), scale);
  } else {
    if (!all_digits(body)) reject(text, "not a number");
    q = mpq_class(mpz_class(std::string(body), 10));
  }
  q.canonicalize();
  if (negative) q = -q;
  return Scalar(std::move(q));
}

std::string Scalar::to_string() const {
  if (q_.get_den() == 1) return q_.get_num().get_str();
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

Scalar Scalar::abs() const { return Scalar(mpq_class(::abs(q_))); }

Scalar Scalar::half() const { return Scalar(mpq_class(q_ / 2)); }

Scalar& Scalar::operator+=(const Scalar& o) {
  q_ += o.q_;
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  q_ -= o.q_;
  return *this;
}

std::size_t Scalar::hash() const {
  const std::size_t n = mpz_get_ui(q_.get_num_mpz_t()) ^ (sgn(q_) < 0 ? 0x9e3779b97f4a7c15ULL : 0);
  const std::size_t d = mpz_get_ui(q_.get_den_mpz_t());
  return n * 1000003u ^ d;
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.to_string(); }

}  // namespace mti
