#pragma once

#include <array>
#include <cstddef>

namespace curveq {

/// Truncated Taylor expansion of a scalar function around a point, carrying
/// the value and derivatives up to fourth order.
///
/// Coefficients are stored in Taylor form, c_k = f^(k)(t0) / k!, so that
/// products are plain Cauchy products. All arithmetic truncates at order 4.
/// A jet that came out of `differentiate` has a garbage top coefficient;
/// callers track how many orders remain meaningful.
class Jet4 {
 public:
  static constexpr int order = 4;
  using Coefficients = std::array<double, order + 1>;

  constexpr Jet4() noexcept = default;
  constexpr Jet4(double constant) noexcept : c_{constant, 0.0, 0.0, 0.0, 0.0} {}
  constexpr explicit Jet4(const Coefficients& taylor) noexcept : c_(taylor) {}

  /// The independent variable evaluated at `t`.
  static constexpr Jet4 variable(double t) noexcept { return Jet4(Coefficients{t, 1.0, 0.0, 0.0, 0.0}); }
  static Jet4 from_derivatives(double value, double d1, double d2, double d3, double d4) noexcept;

  constexpr double value() const noexcept { return c_[0]; }
  /// k-th derivative, k in [0, 4].
  double derivative(int k) const noexcept;
  constexpr double coefficient(int k) const noexcept { return c_[static_cast<std::size_t>(k)]; }
  constexpr const Coefficients& coefficients() const noexcept { return c_; }
  std::array<double, order + 1> derivatives() const noexcept;

  Jet4& operator+=(const Jet4& rhs) noexcept;
  Jet4& operator-=(const Jet4& rhs) noexcept;
  Jet4& operator*=(const Jet4& rhs) noexcept;
  Jet4& operator/=(const Jet4& rhs);

  friend Jet4 operator+(Jet4 lhs, const Jet4& rhs) noexcept { return lhs += rhs; }
  friend Jet4 operator-(Jet4 lhs, const Jet4& rhs) noexcept { return lhs -= rhs; }
  friend Jet4 operator*(Jet4 lhs, const Jet4& rhs) noexcept { return lhs *= rhs; }
  friend Jet4 operator/(Jet4 lhs, const Jet4& rhs) { return lhs /= rhs; }
  friend Jet4 operator-(Jet4 x) noexcept;

  friend bool operator==(const Jet4&, const Jet4&) = default;

 private:
  Coefficients c_{};
};

// Elementary functions. These throw std::domain_error when the value lies
// where the function (or one of its first four derivatives) is undefined.
Jet4 sin(const Jet4& x);
Jet4 cos(const Jet4& x);
Jet4 tan(const Jet4& x);
Jet4 exp(const Jet4& x);
Jet4 log(const Jet4& x);
Jet4 sqrt(const Jet4& x);
Jet4 pow(const Jet4& x, double exponent);

/// Series of d/dt of the expanded function. Drops one order of validity.
Jet4 differentiate(const Jet4& x) noexcept;
/// Antiderivative vanishing at the expansion point. The top coefficient of
/// the input is carried into order 4; nothing is lost below that.
Jet4 integrate(const Jet4& x) noexcept;
/// f(t0 + delta(eps)) as a series in eps, where `outer` is f expanded around
/// t0 and `increment` has zero constant term.
Jet4 compose(const Jet4& outer, const Jet4& increment);
/// Series reversion: given y(x) = c1 x + c2 x^2 + ... (zero constant term,
/// c1 != 0), returns x(y).
Jet4 revert(const Jet4& series);

}  // namespace curveq
