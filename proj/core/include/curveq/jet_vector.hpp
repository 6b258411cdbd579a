#pragma once

#include <array>

#include <Eigen/Core>

#include "curveq/jet.hpp"

namespace curveq {

/// Cartesian 3-vector whose components are jets in a common variable.
using JetVec3 = std::array<Jet4, 3>;

inline JetVec3 operator+(const JetVec3& a, const JetVec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline JetVec3 operator-(const JetVec3& a, const JetVec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline JetVec3 operator*(const Jet4& k, const JetVec3& v) { return {k * v[0], k * v[1], k * v[2]}; }
inline JetVec3 operator/(const JetVec3& v, const Jet4& k) { return {v[0] / k, v[1] / k, v[2] / k}; }

inline Jet4 dot(const JetVec3& a, const JetVec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

inline JetVec3 cross(const JetVec3& a, const JetVec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline JetVec3 differentiate(const JetVec3& v) { return {differentiate(v[0]), differentiate(v[1]), differentiate(v[2])}; }
inline JetVec3 compose(const JetVec3& v, const Jet4& inc) { return {compose(v[0], inc), compose(v[1], inc), compose(v[2], inc)}; }

inline JetVec3 constant_jet(const Eigen::Vector3d& v) { return {Jet4(v.x()), Jet4(v.y()), Jet4(v.z())}; }

/// k-th derivative of every component.
inline Eigen::Vector3d derivative(const JetVec3& v, int k) {
  return {v[0].derivative(k), v[1].derivative(k), v[2].derivative(k)};
}
inline Eigen::Vector3d value(const JetVec3& v) { return derivative(v, 0); }

}  // namespace curveq
