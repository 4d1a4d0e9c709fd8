#include "halforthant/lattice.hpp"

#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace ho {

Point::Point(std::initializer_list<std::int32_t> coords) {
  if (coords.size() > static_cast<std::size_t>(kMaxDim))
    throw std::invalid_argument("Point: dimension exceeds kMaxDim");
  dim_ = static_cast<std::uint8_t>(coords.size());
  std::size_t i = 0;
  for (auto c : coords) c_[i++] = c;
}

Point Point::unit(int dim, Step s) {
  Point p(dim);
  p += s;
  return p;
}

Point& Point::operator+=(const Point& o) {
  for (int i = 0; i < dim_; ++i) c_[static_cast<std::size_t>(i)] += o[i];
  return *this;
}

Point& Point::operator-=(const Point& o) {
  for (int i = 0; i < dim_; ++i) c_[static_cast<std::size_t>(i)] -= o[i];
  return *this;
}

std::string Point::str() const {
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < dim_; ++i) os << (i ? "," : "") << (*this)[i];
  os << ')';
  return os.str();
}

std::int64_t l1_norm(const Point& x) {
  std::int64_t s = 0;
  for (int i = 0; i < x.dim(); ++i) s += std::abs(static_cast<std::int64_t>(x[i]));
  return s;
}

std::int64_t linf_norm(const Point& x) {
  std::int64_t m = 0;
  for (int i = 0; i < x.dim(); ++i) m = std::max(m, std::abs(static_cast<std::int64_t>(x[i])));
  return m;
}

std::size_t PointHash::operator()(const Point& p) const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (int i = 0; i < p.dim(); ++i) {
    h ^= static_cast<std::uint32_t>(p[i]);
    h *= 0x100000001b3ull;
    h ^= h >> 29;
  }
  return static_cast<std::size_t>(h);
}

Box::Box(const Point& lo, const Point& hi) : lo_(lo), hi_(hi) {
  if (lo.dim() != hi.dim() || lo.dim() < 1)
    throw std::invalid_argument("Box: corner dimensions differ");
  std::uint64_t s = 1;
  for (int i = lo.dim() - 1; i >= 0; --i) {
    if (hi[i] < lo[i]) throw std::invalid_argument("Box: empty extent");
    stride_[static_cast<std::size_t>(i)] = s;
    s *= static_cast<std::uint64_t>(hi[i] - lo[i] + 1);
  }
  size_ = s;
}

Box Box::cube(const Point& center, std::int32_t radius) {
  Point lo = center, hi = center;
  for (int i = 0; i < center.dim(); ++i) {
    lo[i] -= radius;
    hi[i] += radius;
  }
  return Box(lo, hi);
}

bool Box::contains(const Point& x) const {
  for (int i = 0; i < dim(); ++i)
    if (x[i] < lo_[i] || x[i] > hi_[i]) return false;
  return true;
}

std::uint64_t Box::index(const Point& x) const {
  std::uint64_t idx = 0;
  for (int i = 0; i < dim(); ++i)
    idx += static_cast<std::uint64_t>(x[i] - lo_[i]) * stride_[static_cast<std::size_t>(i)];
  return idx;
}

Point Box::point(std::uint64_t index) const {
  Point x(dim());
  for (int i = 0; i < dim(); ++i) {
    const auto s = stride_[static_cast<std::size_t>(i)];
    x[i] = lo_[i] + static_cast<std::int32_t>(index / s);
    index %= s;
  }
  return x;
}

bool Box::next(Point& x) const {
  for (int i = dim() - 1; i >= 0; --i) {
    if (x[i] < hi_[i]) {
      ++x[i];
      return true;
    }
    x[i] = lo_[i];
  }
  return false;
}

void LatticePath::append(const LatticePath& tail) {
  steps_.insert(steps_.end(), tail.steps_.begin(), tail.steps_.end());
}

Point LatticePath::endpoint() const {
  Point x = start_;
  for (Step s : steps_) x += s;
  return x;
}

std::vector<Point> LatticePath::positions() const {
  std::vector<Point> out;
  out.reserve(steps_.size() + 1);
  out.push_back(start_);
  for (Step s : steps_) out.push_back(out.back() + s);
  return out;
}

std::size_t LatticePath::count_steps(StepSet set) const {
  std::size_t n = 0;
  for (Step s : steps_) n += set.contains(s);
  return n;
}

LatticePath loop_erase(const LatticePath& path) {
  std::vector<Point> pos{path.start()};
  std::vector<Step> steps;
  std::unordered_map<Point, std::size_t, PointHash> where{{path.start(), 0}};
  for (Step s : path.steps()) {
    const Point next = pos.back() + s;
    if (auto it = where.find(next); it != where.end()) {
      const std::size_t keep = it->second;
      for (std::size_t j = keep + 1; j < pos.size(); ++j) where.erase(pos[j]);
      pos.resize(keep + 1);
      steps.resize(keep);
    } else {
      where.emplace(next, pos.size());
      pos.push_back(next);
      steps.push_back(s);
    }
  }
  return LatticePath(path.start(), std::move(steps));
}

bool is_simple(const LatticePath& path) {
  std::unordered_map<Point, int, PointHash> seen;
  for (const auto& x : path.positions())
    if (++seen[x] > 1) return false;
  return true;
}

}  // namespace ho
