#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "halforthant/lattice.hpp"

namespace ho {

// Exact fraction in lowest terms with positive denominator.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  // Accepts "a", "a/b" or a finite decimal "0.35".
  static Rational parse(std::string_view text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const { return Rational(-num_, den_); }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

Rational abs(const Rational& r);
std::int64_t floor_div(std::int64_t a, std::int64_t b);

// Exact comparison of a rational against a double.
bool less_than(const Rational& r, double x);
bool greater_equal(const Rational& r, double x);

// Nonzero rational direction u, stored as integer numerators over a common
// denominator in lowest terms. m_u = denominator = least m with m*u integral.
class Direction {
 public:
  Direction() = default;
  explicit Direction(const std::vector<Rational>& coords);
  static Direction from_point(const Point& v);
  // Whitespace or comma separated coordinates, each parsed by Rational::parse.
  static Direction parse(std::string_view text);

  int dim() const { return static_cast<int>(num_.size()); }
  std::int64_t m() const { return den_; }
  Rational coord(int i) const { return Rational(num_[static_cast<std::size_t>(i)], den_); }
  std::vector<Rational> coords() const;
  Rational l1() const;
  // m_u * u.
  Point integral() const;
  // [x * u], the coordinatewise floor.
  Point floor_scaled(const Rational& x) const;
  Direction scaled(const Rational& q) const;
  std::string str() const;

  friend bool operator==(const Direction&, const Direction&) = default;

 private:
  std::vector<std::int64_t> num_;
  std::int64_t den_ = 1;
};

Direction operator+(const Direction& a, const Direction& b);

}  // namespace ho
