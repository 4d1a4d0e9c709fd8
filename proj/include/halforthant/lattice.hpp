#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace ho {

inline constexpr int kMaxDim = 8;

// A unit lattice step +e_i or -e_i, encoded as 2*i (+) or 2*i+1 (-).
class Step {
 public:
  constexpr Step() = default;
  constexpr explicit Step(std::uint8_t code) : code_(code) {}
  static constexpr Step plus(int axis) { return Step(static_cast<std::uint8_t>(2 * axis)); }
  static constexpr Step minus(int axis) { return Step(static_cast<std::uint8_t>(2 * axis + 1)); }

  constexpr std::uint8_t code() const { return code_; }
  constexpr int axis() const { return code_ >> 1; }
  constexpr bool negative() const { return (code_ & 1u) != 0; }
  constexpr int sign() const { return negative() ? -1 : 1; }
  constexpr Step reversed() const { return Step(static_cast<std::uint8_t>(code_ ^ 1u)); }

  friend constexpr bool operator==(Step, Step) = default;

 private:
  std::uint8_t code_ = 0;
};

// d = 2 compass names.
inline constexpr Step kEast = Step::plus(0);
inline constexpr Step kWest = Step::minus(0);
inline constexpr Step kNorth = Step::plus(1);
inline constexpr Step kSouth = Step::minus(1);

// Subset of the 2d unit steps as a bitmask over step codes.
class StepSet {
 public:
  constexpr StepSet() = default;
  constexpr StepSet(std::initializer_list<Step> steps) {
    for (Step s : steps) bits_ |= 1u << s.code();
  }
  static constexpr StepSet positive(int dim) {
    StepSet s;
    for (int i = 0; i < dim; ++i) s.insert(Step::plus(i));
    return s;
  }
  static constexpr StepSet all(int dim) {
    StepSet s;
    for (int i = 0; i < 2 * dim; ++i) s.bits_ |= 1u << i;
    return s;
  }

  constexpr void insert(Step s) { bits_ |= 1u << s.code(); }
  constexpr bool contains(Step s) const { return (bits_ >> s.code()) & 1u; }
  constexpr std::uint32_t bits() const { return bits_; }
  constexpr int size() const { return __builtin_popcount(bits_); }
  friend constexpr bool operator==(StepSet, StepSet) = default;

 private:
  std::uint32_t bits_ = 0;
};

class Point {
 public:
  Point() = default;
  explicit Point(int dim) : dim_(static_cast<std::uint8_t>(dim)) {}
  Point(std::initializer_list<std::int32_t> coords);
  static Point origin(int dim) { return Point(dim); }
  static Point unit(int dim, Step s);

  int dim() const { return dim_; }
  std::int32_t operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  std::int32_t& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }

  Point& operator+=(Step s) {
    c_[static_cast<std::size_t>(s.axis())] += s.sign();
    return *this;
  }
  Point& operator+=(const Point& o);
  Point& operator-=(const Point& o);
  friend Point operator+(Point a, Step s) { return a += s; }
  friend Point operator+(Point a, const Point& b) { return a += b; }
  friend Point operator-(Point a, const Point& b) { return a -= b; }

  friend bool operator==(const Point& a, const Point& b) = default;
  friend std::strong_ordering operator<=>(const Point& a, const Point& b) = default;

  std::string str() const;

 private:
  std::uint8_t dim_ = 0;
  std::array<std::int32_t, kMaxDim> c_{};
};

std::int64_t l1_norm(const Point& x);
std::int64_t linf_norm(const Point& x);

struct PointHash {
  std::size_t operator()(const Point& p) const noexcept;
};

// Axis-aligned box [lo, hi] of lattice points, row-major with the last
// coordinate fastest.
class Box {
 public:
  Box() = default;
  Box(const Point& lo, const Point& hi);
  static Box cube(const Point& center, std::int32_t radius);

  int dim() const { return lo_.dim(); }
  const Point& lo() const { return lo_; }
  const Point& hi() const { return hi_; }
  std::int64_t extent(int axis) const { return hi_[axis] - lo_[axis] + 1; }
  std::uint64_t size() const { return size_; }
  std::uint64_t stride(int axis) const { return stride_[static_cast<std::size_t>(axis)]; }

  bool contains(const Point& x) const;
  std::uint64_t index(const Point& x) const;
  Point point(std::uint64_t index) const;
  // Advances x to the next point in row-major order; returns false past the end.
  bool next(Point& x) const;

 private:
  Point lo_, hi_;
  std::array<std::uint64_t, kMaxDim> stride_{};
  std::uint64_t size_ = 0;
};

// Finite nearest-neighbour path.
class LatticePath {
 public:
  LatticePath() = default;
  explicit LatticePath(Point start, std::vector<Step> steps = {})
      : start_(start), steps_(std::move(steps)) {}

  const Point& start() const { return start_; }
  const std::vector<Step>& steps() const { return steps_; }
  std::size_t length() const { return steps_.size(); }
  int dim() const { return start_.dim(); }

  void push(Step s) { steps_.push_back(s); }
  void append(const LatticePath& tail);

  Point endpoint() const;
  // gamma_0 .. gamma_l
  std::vector<Point> positions() const;
  // Number of steps in the given set (b(gamma) for {+e_1, -e_2}).
  std::size_t count_steps(StepSet set) const;

  friend bool operator==(const LatticePath&, const LatticePath&) = default;

 private:
  Point start_;
  std::vector<Step> steps_;
};

// Chronological loop erasure: whenever the path revisits a point, the loop
// since its first visit is removed.
LatticePath loop_erase(const LatticePath& path);
bool is_simple(const LatticePath& path);

}  // namespace ho
