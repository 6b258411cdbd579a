#include "curveq/jet.hpp"

#include <cmath>
#include <stdexcept>

namespace curveq {
namespace {

constexpr std::array<double, Jet4::order + 1> kFactorial{1.0, 1.0, 2.0, 6.0, 24.0};

// f(x0 + delta) = sum_k f^(k)(x0)/k! delta^k with delta = x - x0.
Jet4 apply(const Jet4& x, const std::array<double, Jet4::order + 1>& f) {
  Jet4::Coefficients d = x.coefficients();
  d[0] = 0.0;
  const Jet4 delta(d);
  Jet4 result(f[Jet4::order] / kFactorial[Jet4::order]);
  for (int k = Jet4::order - 1; k >= 0; --k) {
    result = result * delta + Jet4(f[static_cast<std::size_t>(k)] / kFactorial[static_cast<std::size_t>(k)]);
  }
  return result;
}

bool is_integer(double v) { return std::isfinite(v) && std::floor(v) == v; }

Jet4 integer_power(Jet4 base, long long n) {
  Jet4 result(1.0);
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

}  // namespace

Jet4 Jet4::from_derivatives(double value, double d1, double d2, double d3, double d4) noexcept {
  return Jet4(Coefficients{value, d1, d2 / 2.0, d3 / 6.0, d4 / 24.0});
}

double Jet4::derivative(int k) const noexcept {
  return c_[static_cast<std::size_t>(k)] * kFactorial[static_cast<std::size_t>(k)];
}

std::array<double, Jet4::order + 1> Jet4::derivatives() const noexcept {
  std::array<double, order + 1> d{};
  for (int k = 0; k <= order; ++k) d[static_cast<std::size_t>(k)] = derivative(k);
  return d;
}

Jet4& Jet4::operator+=(const Jet4& rhs) noexcept {
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += rhs.c_[k];
  return *this;
}

Jet4& Jet4::operator-=(const Jet4& rhs) noexcept {
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= rhs.c_[k];
  return *this;
}

Jet4& Jet4::operator*=(const Jet4& rhs) noexcept {
  Coefficients out{};
  for (std::size_t i = 0; i < c_.size(); ++i) {
    for (std::size_t j = 0; i + j < c_.size(); ++j) out[i + j] += c_[i] * rhs.c_[j];
  }
  c_ = out;
  return *this;
}

Jet4& Jet4::operator/=(const Jet4& rhs) {
  if (rhs.c_[0] == 0.0) throw std::domain_error("jet division by zero");
  Coefficients q{};
  for (std::size_t k = 0; k < c_.size(); ++k) {
    double acc = c_[k];
    for (std::size_t j = 1; j <= k; ++j) acc -= rhs.c_[j] * q[k - j];
    q[k] = acc / rhs.c_[0];
  }
  c_ = q;
  return *this;
}

Jet4 operator-(Jet4 x) noexcept {
  for (auto& c : x.c_) c = -c;
  return x;
}

Jet4 sin(const Jet4& x) {
  const double s = std::sin(x.value());
  const double c = std::cos(x.value());
  return apply(x, {s, c, -s, -c, s});
}

Jet4 cos(const Jet4& x) {
  const double s = std::sin(x.value());
  const double c = std::cos(x.value());
  return apply(x, {c, -s, -c, s, c});
}

Jet4 tan(const Jet4& x) {
  const Jet4 c = cos(x);
  if (c.value() == 0.0) throw std::domain_error("tan at a pole");
  return sin(x) / c;
}

Jet4 exp(const Jet4& x) {
  const double e = std::exp(x.value());
  return apply(x, {e, e, e, e, e});
}

Jet4 log(const Jet4& x) {
  const double v = x.value();
  if (!(v > 0.0)) throw std::domain_error("log of non-positive value");
  const double r = 1.0 / v;
  return apply(x, {std::log(v), r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r});
}

Jet4 sqrt(const Jet4& x) { return pow(x, 0.5); }

Jet4 pow(const Jet4& x, double exponent) {
  if (is_integer(exponent) && std::abs(exponent) <= 64.0) {
    const auto n = static_cast<long long>(exponent);
    if (n >= 0) return integer_power(x, n);
    if (x.value() == 0.0) throw std::domain_error("negative power of zero");
    return Jet4(1.0) / integer_power(x, -n);
  }
  const double v = x.value();
  if (!(v > 0.0)) throw std::domain_error("non-integer power of non-positive value");
  std::array<double, Jet4::order + 1> f{};
  double coeff = 1.0;
  for (int k = 0; k <= Jet4::order; ++k) {
    f[static_cast<std::size_t>(k)] = coeff * std::pow(v, exponent - k);
    coeff *= exponent - k;
  }
  return apply(x, f);
}

Jet4 differentiate(const Jet4& x) noexcept {
  Jet4::Coefficients d{};
  for (std::size_t k = 0; k + 1 < d.size(); ++k) d[k] = static_cast<double>(k + 1) * x.coefficient(static_cast<int>(k + 1));
  return Jet4(d);
}

Jet4 integrate(const Jet4& x) noexcept {
  Jet4::Coefficients d{};
  for (std::size_t k = 1; k < d.size(); ++k) d[k] = x.coefficient(static_cast<int>(k - 1)) / static_cast<double>(k);
  return Jet4(d);
}

Jet4 compose(const Jet4& outer, const Jet4& increment) {
  if (increment.value() != 0.0) throw std::invalid_argument("compose: increment must have zero constant term");
  Jet4 result(outer.coefficient(Jet4::order));
  for (int k = Jet4::order - 1; k >= 0; --k) result = result * increment + Jet4(outer.coefficient(k));
  return result;
}

Jet4 revert(const Jet4& series) {
  if (series.value() != 0.0) throw std::invalid_argument("revert: series must have zero constant term");
  const double c1 = series.coefficient(1);
  const double c2 = series.coefficient(2);
  const double c3 = series.coefficient(3);
  const double c4 = series.coefficient(4);
  if (c1 == 0.0) throw std::domain_error("revert: vanishing linear coefficient");
  const double i1 = 1.0 / c1;
  const double i3 = i1 * i1 * i1;
  const double i5 = i3 * i1 * i1;
  const double i7 = i5 * i1 * i1;
  return Jet4(Jet4::Coefficients{0.0, i1, -c2 * i3, (2.0 * c2 * c2 - c1 * c3) * i5,
                                 (5.0 * c1 * c2 * c3 - c1 * c1 * c4 - 5.0 * c2 * c2 * c2) * i7});
}

}  // namespace curveq
