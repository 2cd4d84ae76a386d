#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <string_view>

#include "qframe/errors.hpp"

namespace qframe {

// Coordinates x^μ of one chart point.
using Point = std::array<double, 4>;

inline bool is_finite(const Point& p) {
  return std::all_of(p.begin(), p.end(),
                     [](double v) { return std::isfinite(v); });
}

// Names the expression language claims for itself.
inline bool is_reserved_name(std::string_view name) {
  static constexpr std::array<std::string_view, 11> kReserved = {
      "im", "pi", "sin", "cos", "tan", "exp", "log", "sqrt", "sinh", "cosh",
      "tanh"};
  return std::find(kReserved.begin(), kReserved.end(), name) != kReserved.end();
}

// Four distinct coordinate names. No metric or topology is attached.
class Chart {
 public:
  Chart() : Chart({"t", "x", "y", "z"}) {}
  explicit Chart(std::array<std::string, 4> names) : names_(std::move(names)) {
    for (std::size_t i = 0; i < 4; ++i) {
      if (names_[i].empty()) {
        throw PreconditionError("chart: empty coordinate name");
      }
      if (is_reserved_name(names_[i])) {
        throw PreconditionError("chart: coordinate name '" + names_[i] +
                                "' is reserved by the expression language");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (names_[i] == names_[j]) {
          throw PreconditionError("chart: duplicate coordinate name '" +
                                  names_[i] + "'");
        }
      }
    }
  }

  const std::array<std::string, 4>& names() const noexcept { return names_; }
  const std::string& name(int mu) const {
    return names_[static_cast<std::size_t>(mu)];
  }

  // Index of `name`, or -1.
  int index_of(std::string_view name) const noexcept {
    for (int i = 0; i < 4; ++i) {
      if (names_[static_cast<std::size_t>(i)] == name) return i;
    }
    return -1;
  }

 private:
  std::array<std::string, 4> names_;
};

}  // namespace qframe
