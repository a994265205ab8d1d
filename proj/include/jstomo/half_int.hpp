#pragma once

#include <compare>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace jstomo {

/// Half-integer spin label stored as a doubled integer, so j = 3/2 is
/// HalfInt{3} and all selection rules reduce to exact integer arithmetic.
class HalfInt {
 public:
  constexpr HalfInt() : tw_(0) {}
  constexpr explicit HalfInt(int twice_value) : tw_(twice_value) {}

  static constexpr HalfInt from_int(int v) { return HalfInt(2 * v); }

  constexpr int twice() const { return tw_; }
  constexpr double value() const { return 0.5 * tw_; }
  constexpr bool is_integer() const { return tw_ % 2 == 0; }

  constexpr HalfInt operator+(HalfInt o) const { return HalfInt(tw_ + o.tw_); }
  constexpr HalfInt operator-(HalfInt o) const { return HalfInt(tw_ - o.tw_); }
  constexpr HalfInt operator-() const { return HalfInt(-tw_); }
  constexpr auto operator<=>(const HalfInt&) const = default;

  std::string str() const {
    if (is_integer()) return std::to_string(tw_ / 2);
    return std::to_string(tw_) + "/2";
  }

 private:
  int tw_;
};

/// True when m is a valid projection for spin j: |m| <= j and j-m integral.
inline bool valid_projection(HalfInt j, HalfInt m) {
  return std::abs(m.twice()) <= j.twice() && (j.twice() - m.twice()) % 2 == 0;
}

inline void require_projection(HalfInt j, HalfInt m, const char* where) {
  if (!valid_projection(j, m))
    throw std::invalid_argument(std::string(where) + ": projection m=" + m.str() +
                                " out of range for j=" + j.str());
}

/// Iterates m = +j, j-1, ..., -j (descending, the basis order used throughout).
template <typename F>
void for_each_m(HalfInt j, F&& f) {
  for (int m2 = j.twice(); m2 >= -j.twice(); m2 -= 2) f(HalfInt(m2));
}

/// Index of projection m in the descending basis order; 0 is m = +j.
inline int m_index(HalfInt j, HalfInt m) { return (j.twice() - m.twice()) / 2; }

struct EulerAngles {
  double alpha = 0.0;  // in [0, 2pi)
  double beta = 0.0;   // in [0, pi]
  double gamma = 0.0;  // in [0, 2pi)
};

}  // namespace jstomo
