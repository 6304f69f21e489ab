#pragma once

#include <gmpxx.h>

#include <Eigen/Core>
#include <compare>
#include <iosfwd>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace axiomlab {

/// Exact rational number backed by GMP. Always stored in lowest terms with a
/// positive denominator; there is no floating point anywhere in this library.
///
/// The wrapper exists so that Eigen expressions over rational matrices work on
/// a plain value type instead of GMP's expression templates.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long n) : v_(n) {}  // NOLINT: implicit by design, mirrors int
  Rational(int n) : v_(n) {}   // NOLINT
  Rational(long num, long den) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
  }
  explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

  /// Parses "p", "-p" or "p/q" with arbitrary-precision integers.
  /// Anything else (decimals, exponents, embedded spaces) is rejected.
  static Rational fromString(std::string_view s);

  const mpq_class& raw() const { return v_; }
  mpz_class numerator() const { return v_.get_num(); }
  mpz_class denominator() const { return v_.get_den(); }

  int sign() const { return sgn(v_); }
  bool isZero() const { return sgn(v_) == 0; }

  /// Lowest-terms rendering: "0", "1", "-3", "5/24", ...
  std::string str() const;

  Rational operator-() const { return Rational(mpq_class(-v_)); }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.isZero()) throw std::invalid_argument("Rational: division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return cmp(a.v_, b.v_) == 0;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.v_, b.v_);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.str();
  }

 private:
  mpq_class v_;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

inline Rational min(const Rational& a, const Rational& b) { return a < b ? a : b; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

inline std::string Rational::str() const {
  std::string s = v_.get_num().get_str();
  if (v_.get_den() != 1) {
    s += "/";
    s += v_.get_den().get_str();
  }
  return s;
}

inline Rational Rational::fromString(std::string_view s) {
  auto bad = [&] {
    return std::invalid_argument("malformed rational: '" + std::string(s) + "'");
  };
  if (s.empty()) throw bad();
  auto isIntToken = [](std::string_view t) {
    if (!t.empty() && (t[0] == '-' || t[0] == '+')) t.remove_prefix(1);
    if (t.empty()) return false;
    for (char c : t)
      if (c < '0' || c > '9') return false;
    return true;
  };
  std::string_view num = s, den;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    num = s.substr(0, slash);
    den = s.substr(slash + 1);
    if (!isIntToken(den)) throw bad();
  }
  if (!isIntToken(num)) throw bad();
  mpq_class q;
  if (q.set_str(std::string(s), 10) != 0) throw bad();
  if (q.get_den() == 0) throw bad();
  q.canonicalize();
  return Rational(q);
}

/// Dense rational matrix/vector types. Eigen is used for storage, indexing and
/// block operations; all scalar arithmetic stays exact.
using RatMatrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using RatVector = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;
using RatRowVector = Eigen::Matrix<Rational, 1, Eigen::Dynamic>;

}  // namespace axiomlab

namespace Eigen {

template <>
struct NumTraits<axiomlab::Rational> : GenericNumTraits<axiomlab::Rational> {
  using Real = axiomlab::Rational;
  using NonInteger = axiomlab::Rational;
  using Nested = axiomlab::Rational;
  using Literal = long;

  static inline Real epsilon() { return axiomlab::Rational(0); }
  static inline Real dummy_precision() { return axiomlab::Rational(0); }
  static inline int digits10() { return 0; }

  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 150,
    MulCost = 100,
  };
};

}  // namespace Eigen
