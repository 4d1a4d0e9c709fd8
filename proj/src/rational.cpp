#include "halforthant/rational.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "halforthant/errors.hpp"

namespace ho {
namespace {

using i128 = __int128;

std::int64_t narrow(i128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("Rational: 64-bit overflow");
  return static_cast<std::int64_t>(v);
}

Rational make(i128 num, i128 den) {
  if (den == 0) throw std::domain_error("Rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i128 a = num < 0 ? -num : num, b = den;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    num /= a;
    den /= a;
  }
  return Rational(narrow(num), narrow(den));
}

std::int64_t parse_int(std::string_view s) {
  std::int64_t v = 0;
  const char* first = s.data();
  if (!s.empty() && s.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ParameterError("cannot parse integer '" + std::string(s) + "'");
  return v;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("Rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = g > 1 ? num / g : num;
  den_ = g > 1 ? den / g : den;
}

Rational Rational::parse(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (auto slash = text.find('/'); slash != std::string_view::npos)
    return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    const bool neg = !text.empty() && text.front() == '-';
    std::string_view ip = text.substr(0, dot), fp = text.substr(dot + 1);
    if (fp.size() > 17) throw ParameterError("too many decimal digits in '" + std::string(text) + "'");
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < fp.size(); ++i) scale *= 10;
    const std::int64_t whole = (ip.empty() || ip == "-" || ip == "+") ? 0 : parse_int(ip);
    const std::int64_t frac = fp.empty() ? 0 : parse_int(fp);
    const i128 num = static_cast<i128>(whole < 0 ? -whole : whole) * scale + frac;
    return make(neg ? -num : num, scale);
  }
  return Rational(parse_int(text));
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  return make(static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_,
              static_cast<i128>(a.den_) * b.den_);
}
Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
Rational operator*(const Rational& a, const Rational& b) {
  return make(static_cast<i128>(a.num_) * b.num_, static_cast<i128>(a.den_) * b.den_);
}
Rational operator/(const Rational& a, const Rational& b) {
  return make(static_cast<i128>(a.num_) * b.den_, static_cast<i128>(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  return static_cast<i128>(a.num_) * b.den_ <=> static_cast<i128>(b.num_) * a.den_;
}

Rational abs(const Rational& r) { return r.num() < 0 ? -r : r; }

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

bool less_than(const Rational& r, double x) {
  // x is exactly representable as m * 2^e; compare r.num * 2^-e < m * r.den.
  if (std::isnan(x)) return false;
  if (std::isinf(x)) return x > 0;
  int e = 0;
  const double m = std::frexp(x, &e);  // x = m * 2^e, 0.5 <= |m| < 1
  const auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
  e -= 53;  // x = mant * 2^e
  const long double lhs = static_cast<long double>(r.num());
  const long double rhs = std::ldexp(static_cast<long double>(mant) * static_cast<long double>(r.den()), e);
  if (lhs != rhs) return lhs < rhs;
  // Tie at long double precision; resolve exactly with 128-bit integers when possible.
  if (e >= 0 && e < 60) return static_cast<i128>(r.num()) < (static_cast<i128>(mant) * r.den()) * (i128{1} << e);
  if (e < 0 && -e < 60) return (static_cast<i128>(r.num()) << -e) < static_cast<i128>(mant) * r.den();
  return false;
}

bool greater_equal(const Rational& r, double x) { return !less_than(r, x); }

Direction::Direction(const std::vector<Rational>& coords) {
  if (coords.size() < 1 || coords.size() > static_cast<std::size_t>(kMaxDim))
    throw ParameterError("Direction: bad dimension");
  std::int64_t den = 1;
  for (const auto& c : coords) den = std::lcm(den, c.den());
  bool nonzero = false;
  for (const auto& c : coords) {
    num_.push_back(narrow(static_cast<i128>(c.num()) * (den / c.den())));
    nonzero |= c.num() != 0;
  }
  if (!nonzero) throw std::domain_error("Direction: zero vector");
  std::int64_t g = den;
  for (auto n : num_) g = std::gcd(g, n);
  if (g > 1) {
    for (auto& n : num_) n /= g;
    den /= g;
  }
  den_ = den;
}

Direction Direction::from_point(const Point& v) {
  std::vector<Rational> c;
  for (int i = 0; i < v.dim(); ++i) c.emplace_back(v[i]);
  return Direction(c);
}

Direction Direction::parse(std::string_view text) {
  std::vector<Rational> c;
  std::string token;
  std::string all;
  for (char ch : text) all.push_back(ch == ',' ? ' ' : ch);
  std::istringstream tokens(all);
  while (tokens >> token) c.push_back(Rational::parse(token));
  return Direction(c);
}

std::vector<Rational> Direction::coords() const {
  std::vector<Rational> out;
  for (int i = 0; i < dim(); ++i) out.push_back(coord(i));
  return out;
}

Rational Direction::l1() const {
  std::int64_t s = 0;
  for (auto n : num_) s += n < 0 ? -n : n;
  return Rational(s, den_);
}

Point Direction::integral() const {
  Point p(dim());
  for (int i = 0; i < dim(); ++i) p[i] = static_cast<std::int32_t>(num_[static_cast<std::size_t>(i)]);
  return p;
}

Point Direction::floor_scaled(const Rational& x) const {
  Point p(dim());
  for (int i = 0; i < dim(); ++i) {
    const i128 num = static_cast<i128>(x.num()) * num_[static_cast<std::size_t>(i)];
    const i128 den = static_cast<i128>(x.den()) * den_;
    i128 q = num / den;
    if ((num % den != 0) && ((num < 0) != (den < 0))) --q;
    p[i] = static_cast<std::int32_t>(narrow(q));
  }
  return p;
}

Direction Direction::scaled(const Rational& q) const {
  std::vector<Rational> c;
  for (int i = 0; i < dim(); ++i) c.push_back(coord(i) * q);
  return Direction(c);
}

std::string Direction::str() const {
  std::string s = "(";
  for (int i = 0; i < dim(); ++i) s += (i ? "," : "") + coord(i).str();
  return s + ")";
}

Direction operator+(const Direction& a, const Direction& b) {
  if (a.dim() != b.dim()) throw ParameterError("Direction: dimension mismatch");
  std::vector<Rational> c;
  for (int i = 0; i < a.dim(); ++i) c.push_back(a.coord(i) + b.coord(i));
  return Direction(c);
}

}  // namespace ho
