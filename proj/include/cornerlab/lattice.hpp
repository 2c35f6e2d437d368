#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace cornerlab {

/// A point of Z^2.
struct Site {
  std::int64_t x = 0;
  std::int64_t y = 0;

  constexpr std::int64_t level() const { return x + y; }

  friend constexpr Site operator+(Site a, Site b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Site operator-(Site a, Site b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr bool operator==(Site, Site) = default;
  friend constexpr auto operator<=>(Site, Site) = default;
};

inline constexpr Site kE1{1, 0};
inline constexpr Site kE2{0, 1};

/// Coordinatewise order: a <= b in both coordinates.
constexpr bool dominated(Site a, Site b) { return a.x <= b.x && a.y <= b.y; }

enum class Step : std::uint8_t { E1 = 0, E2 = 1 };

constexpr Site unit(Step s) { return s == Step::E1 ? kE1 : kE2; }

std::string to_string(Site s);

class OutOfWindow : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Rectangle origin + [0,width) x [0,height), stored row-major (y outer).
class LatticeWindow {
 public:
  LatticeWindow() = default;
  LatticeWindow(Site origin, std::int64_t width, std::int64_t height);

  /// Smallest window containing both corners.
  static LatticeWindow spanning(Site lower_left, Site upper_right);

  Site origin() const { return origin_; }
  std::int64_t width() const { return width_; }
  std::int64_t height() const { return height_; }
  std::size_t size() const { return static_cast<std::size_t>(width_ * height_); }
  Site upper_right() const { return {origin_.x + width_ - 1, origin_.y + height_ - 1}; }

  bool contains(Site s) const {
    return s.x >= origin_.x && s.y >= origin_.y && s.x < origin_.x + width_ &&
           s.y < origin_.y + height_;
  }
  bool contains(const LatticeWindow& other) const {
    return contains(other.origin_) && contains(other.upper_right());
  }

  std::size_t index(Site s) const {
    if (!contains(s)) throw OutOfWindow("site " + to_string(s) + " outside window");
    return unchecked_index(s);
  }
  std::size_t unchecked_index(Site s) const {
    return static_cast<std::size_t>((s.y - origin_.y) * width_ + (s.x - origin_.x));
  }
  Site site(std::size_t index) const {
    auto i = static_cast<std::int64_t>(index);
    return {origin_.x + i % width_, origin_.y + i / width_};
  }

  friend bool operator==(const LatticeWindow&, const LatticeWindow&) = default;

 private:
  Site origin_{};
  std::int64_t width_ = 1;
  std::int64_t height_ = 1;
};

}  // namespace cornerlab
