#pragma once

#include <array>
#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <type_traits>
#include <utility>

#include "qframe/algebra.hpp"
#include "qframe/chart.hpp"
#include "qframe/expr.hpp"

namespace qframe {

// Any C⊗H-valued function of the chart point. Evaluation is pure.
using FieldFn = std::function<Biquaternion(const Point&)>;
// Complex-valued function of the chart point.
using ScalarFn = std::function<Complex(const Point&)>;

// A biquaternion field given by one expression per quaternion unit.
class BiquatField {
 public:
  BiquatField() : BiquatField(std::array<FieldExpr, 4>{
                      FieldExpr::constant(0.0), FieldExpr::constant(0.0),
                      FieldExpr::constant(0.0), FieldExpr::constant(0.0)}) {}
  explicit BiquatField(std::array<FieldExpr, 4> components)
      : components_(std::make_shared<const std::array<FieldExpr, 4>>(
            std::move(components))) {}

  static BiquatField parse(const std::array<std::string, 4>& texts,
                           const Chart& chart) {
    return BiquatField({parse_expr(texts[0], chart), parse_expr(texts[1], chart),
                        parse_expr(texts[2], chart),
                        parse_expr(texts[3], chart)});
  }

  const FieldExpr& component(int k) const {
    return (*components_)[static_cast<std::size_t>(k)];
  }

  Biquaternion operator()(const Point& p) const {
    Biquaternion out;
    for (int k = 0; k < 4; ++k) {
      try {
        out[k] = component(k).evaluate(p);
      } catch (const DomainError& e) {
        throw DomainError(e.what(), k);
      }
    }
    return out;
  }

  // Type-erased view, shares the parsed expressions.
  operator FieldFn() const {  // NOLINT(google-explicit-constructor)
    return [self = *this](const Point& p) { return self(p); };
  }

 private:
  std::shared_ptr<const std::array<FieldExpr, 4>> components_;
};

inline Biquaternion eval_field(const BiquatField& f, const Point& p) {
  if (!is_finite(p)) throw PreconditionError("eval_field: non-finite point");
  return f(p);
}

inline ScalarFn scalar_field(FieldExpr e) {
  return [e = std::make_shared<const FieldExpr>(std::move(e))](
             const Point& p) { return e->evaluate(p); };
}

inline FieldFn constant_field(const Biquaternion& value) {
  return [value](const Point&) { return value; };
}

// Finite-difference settings. `step[mu]` is the spacing along coordinate mu.
struct FDConfig {
  std::array<double, 4> step{1e-4, 1e-4, 1e-4, 1e-4};
  int order = 4;

  static FDConfig uniform(double h, int order = 4) {
    return {{h, h, h, h}, order};
  }
  FDConfig scaled(double factor) const {
    FDConfig c = *this;
    for (auto& h : c.step) h *= factor;
    return c;
  }
  void validate() const {
    for (double h : step) {
      if (!(h > 0.0) || !std::isfinite(h)) {
        throw PreconditionError("finite-difference step must be > 0");
      }
    }
    if (order != 2 && order != 4) {
      throw PreconditionError("finite-difference order must be 2 or 4");
    }
  }
};

namespace detail {

// Elementwise a += w * b for every value type the stencils touch.
inline void axpy(double& a, double w, double b) { a += w * b; }
inline void axpy(Complex& a, double w, const Complex& b) { a += w * b; }
inline void axpy(Biquaternion& a, double w, const Biquaternion& b) {
  for (int k = 0; k < 4; ++k) a[k] += w * b[k];
}
template <class T, std::size_t N>
void axpy(std::array<T, N>& a, double w, const std::array<T, N>& b) {
  for (std::size_t i = 0; i < N; ++i) axpy(a[i], w, b[i]);
}

inline void sub(double& a, const double& b) { a -= b; }
inline void sub(Complex& a, const Complex& b) { a -= b; }
inline void sub(Biquaternion& a, const Biquaternion& b) { a -= b; }
template <class T, std::size_t N>
void sub(std::array<T, N>& a, const std::array<T, N>& b) {
  for (std::size_t i = 0; i < N; ++i) sub(a[i], b[i]);
}

struct StencilTap {
  int offset;
  double weight;
};

// One-sided half of the antisymmetric central stencil; the full stencil is
// sum_k weight_k (f(p + k h) - f(p - k h)) / h.
inline std::span<const StencilTap> central_taps(int order) {
  static constexpr StencilTap kOrder2[] = {{1, 0.5}};
  static constexpr StencilTap kOrder4[] = {{1, 8.0 / 12.0}, {2, -1.0 / 12.0}};
  if (order == 2) return kOrder2;
  return kOrder4;
}

}  // namespace detail

// ∂_μ f at p by central differences, applied to every component of the
// value type (Biquaternion, complex, real, or nested std::arrays of those).
template <class F>
auto partial(const F& f, int mu, const Point& p, const FDConfig& fd)
    -> std::remove_cvref_t<decltype(f(p))> {
  using Value = std::remove_cvref_t<decltype(f(p))>;
  const auto m = static_cast<std::size_t>(mu);
  const double h = fd.step[m];
  if (!(h > 0.0)) throw PreconditionError("partial: step must be > 0");
  Value acc{};
  for (const auto& tap : detail::central_taps(fd.order)) {
    Point fwd = p;
    Point bwd = p;
    fwd[m] += tap.offset * h;
    bwd[m] -= tap.offset * h;
    Value diff = f(fwd);
    detail::sub(diff, f(bwd));
    detail::axpy(acc, tap.weight / h, diff);
  }
  return acc;
}

// All four partials at once.
template <class F>
auto gradient(const F& f, const Point& p, const FDConfig& fd) {
  using Value = std::remove_cvref_t<decltype(f(p))>;
  std::array<Value, 4> out{};
  for (int mu = 0; mu < 4; ++mu) {
    out[static_cast<std::size_t>(mu)] = partial(f, mu, p, fd);
  }
  return out;
}

}  // namespace qframe
