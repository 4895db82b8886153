// Copyright 2026 The cpmgoc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cpmgoc/su2.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cpmgoc {

namespace {

constexpr cplx kI{0.0, 1.0};

// Quaternion (w, x, y, z) of an SU(2) matrix w I - i (x sx + y sy + z sz).
struct Quaternion {
    double w, x, y, z;
};

Quaternion to_quaternion(const Mat2 &v) {
    return {
        0.5 * (v(0, 0) + v(1, 1)).real(),
        -0.5 * (v(0, 1) + v(1, 0)).imag(),
        0.5 * (v(1, 0) - v(0, 1)).real(),
        -0.5 * (v(0, 0) - v(1, 1)).imag(),
    };
}

Mat2 from_quaternion(const Quaternion &q) {
    return {cplx{q.w, -q.z}, cplx{-q.y, -q.x}, cplx{q.y, -q.x}, cplx{q.w, q.z}};
}

// Unit-modulus global phase e^{i alpha} with det U = e^{2 i alpha}.
cplx global_phase(const Mat2 &u) {
    cplx root = std::sqrt(u.det());
    double mag = std::abs(root);
    return mag > 0.0 ? root / mag : cplx{1.0, 0.0};
}

}  // namespace

double Vec3::norm() const { return std::sqrt(x * x + y * y + z * z); }

Vec3 Vec3::normalized() const {
    double n = norm();
    return n > 0.0 ? (1.0 / n) * *this : *this;
}

Mat2 Mat2::adjoint() const {
    return {std::conj(m_[0]), std::conj(m_[2]), std::conj(m_[1]), std::conj(m_[3])};
}

double Mat2::max_abs_diff(const Mat2 &other) const {
    double worst = 0.0;
    for (int k = 0; k < 4; ++k) {
        worst = std::max(worst, std::abs(m_[k] - other.m_[k]));
    }
    return worst;
}

Mat2 operator*(const Mat2 &a, const Mat2 &b) {
    const auto &x = a.m_;
    const auto &y = b.m_;
    return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
            x[2] * y[1] + x[3] * y[3]};
}

Mat2 operator*(cplx s, const Mat2 &a) { return {s * a.m_[0], s * a.m_[1], s * a.m_[2], s * a.m_[3]}; }

Mat2 operator+(const Mat2 &a, const Mat2 &b) {
    return {a.m_[0] + b.m_[0], a.m_[1] + b.m_[1], a.m_[2] + b.m_[2], a.m_[3] + b.m_[3]};
}

Mat2 operator-(const Mat2 &a, const Mat2 &b) {
    return {a.m_[0] - b.m_[0], a.m_[1] - b.m_[1], a.m_[2] - b.m_[2], a.m_[3] - b.m_[3]};
}

Mat2 pauli_x() { return {0.0, 1.0, 1.0, 0.0}; }
Mat2 pauli_y() { return {0.0, -kI, kI, 0.0}; }
Mat2 pauli_z() { return {1.0, 0.0, 0.0, -1.0}; }

Mat2 pauli(int index) {
    switch (index) {
        case 0: return Mat2::identity();
        case 1: return pauli_x();
        case 2: return pauli_y();
        case 3: return pauli_z();
        default: throw std::out_of_range("pauli index must be 0..3");
    }
}

Mat2 pauli_dot(const Vec3 &v) { return {v.z, cplx{v.x, -v.y}, cplx{v.x, v.y}, -v.z}; }

Su2Operator expm_su2(const Vec3 &axis, double angle) {
    double n = axis.norm();
    if (n == 0.0) {
        if (angle == 0.0) {
            return Mat2::identity();
        }
        throw std::invalid_argument("degenerate axis");
    }
    double c = std::cos(0.5 * angle);
    double s = std::sin(0.5 * angle) / n;
    return from_quaternion({c, s * axis.x, s * axis.y, s * axis.z});
}

Su2Operator precession(const Vec3 &field, double t) {
    double n = field.norm();
    if (n == 0.0 || t == 0.0) {
        return Mat2::identity();
    }
    double half = 0.5 * n * t;
    double s = std::sin(half) / n;
    return from_quaternion({std::cos(half), s * field.x, s * field.y, s * field.z});
}

bool is_unitary(const Mat2 &u, double tol) {
    return (u.adjoint() * u).max_abs_diff(Mat2::identity()) <= tol;
}

RotationDecomposition axis_angle(const Su2Operator &u) {
    if (!is_unitary(u, 1e-9)) {
        throw std::invalid_argument("not unitary");
    }
    cplx phase = global_phase(u);
    Quaternion q = to_quaternion(std::conj(phase) * u);
    if (q.w < 0.0) {
        q = {-q.w, -q.x, -q.y, -q.z};
    }
    double s = std::sqrt(q.x * q.x + q.y * q.y + q.z * q.z);
    RotationDecomposition out;
    out.theta = 2.0 * std::atan2(s, q.w);
    if (s < 1e-12) {
        out.axis = kZAxis;
    } else {
        out.axis = {q.x / s, q.y / s, q.z / s};
    }
    return out;
}

RotationDecomposition oriented_toward(const RotationDecomposition &d, const Vec3 &reference) {
    if (dot(d.axis, reference) >= 0.0 || d.theta == 0.0) {
        return d;
    }
    return {2.0 * std::numbers::pi - d.theta, -d.axis};
}

double trace_overlap(const Su2Operator &a, const Su2Operator &b) {
    // Tr(A B^dagger) = sum_ij A_ij conj(B_ij)
    cplx t = a(0, 0) * std::conj(b(0, 0)) + a(0, 1) * std::conj(b(0, 1)) + a(1, 0) * std::conj(b(1, 0)) +
             a(1, 1) * std::conj(b(1, 1));
    return std::norm(t) / 4.0;
}

Su2Operator reunitarize(const Mat2 &u) {
    cplx phase = global_phase(u);
    Quaternion q = to_quaternion(std::conj(phase) * u);
    double n = std::sqrt(q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z);
    if (n == 0.0) {
        throw std::invalid_argument("cannot re-unitarize a singular matrix");
    }
    return phase * from_quaternion({q.w / n, q.x / n, q.y / n, q.z / n});
}

Su2Operator power(const Su2Operator &u, std::uint64_t n) {
    Su2Operator result = Mat2::identity();
    Su2Operator base = u;
    while (n > 0) {
        if (n & 1u) {
            result = base * result;
        }
        n >>= 1u;
        if (n > 0) {
            base = base * base;
        }
    }
    return result;
}

Rotation3 so3_matrix(const Su2Operator &u) {
    // Strip the global phase; the adjoint action only sees the SU(2) part.
    Quaternion q = to_quaternion(std::conj(global_phase(u)) * u);
    double w = q.w, x = q.x, y = q.y, z = q.z;
    return {{{w * w + x * x - y * y - z * z, 2 * (x * y - w * z), 2 * (x * z + w * y)},
             {2 * (x * y + w * z), w * w - x * x + y * y - z * z, 2 * (y * z - w * x)},
             {2 * (x * z - w * y), 2 * (y * z + w * x), w * w - x * x - y * y + z * z}}};
}

Vec3 rotate(const Rotation3 &r, const Vec3 &v) {
    return {r[0][0] * v.x + r[0][1] * v.y + r[0][2] * v.z, r[1][0] * v.x + r[1][1] * v.y + r[1][2] * v.z,
            r[2][0] * v.x + r[2][1] * v.y + r[2][2] * v.z};
}

Vec3 rotate_bloch(const Su2Operator &u, const Vec3 &v) { return rotate(so3_matrix(u), v); }

void UnitaryAccumulator::left_multiply(const Su2Operator &step) {
    value_ = step * value_;
    if (++since_fix_ >= kReunitarizeInterval) {
        value_ = reunitarize(value_);
        since_fix_ = 0;
    }
}

}  // namespace cpmgoc
