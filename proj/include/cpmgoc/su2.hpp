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

#ifndef CPMGOC_SU2_HPP
#define CPMGOC_SU2_HPP

#include <array>
#include <complex>
#include <cstdint>

namespace cpmgoc {

using cplx = std::complex<double>;

/// Real 3-vector; used for rotation axes, effective fields and Bloch vectors.
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
    double norm() const;
    Vec3 normalized() const;
    friend constexpr Vec3 operator*(double s, const Vec3 &v) { return {s * v.x, s * v.y, s * v.z}; }
    friend constexpr Vec3 operator+(const Vec3 &a, const Vec3 &b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend constexpr Vec3 operator-(const Vec3 &a, const Vec3 &b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend constexpr Vec3 operator-(const Vec3 &a) { return {-a.x, -a.y, -a.z}; }
    friend constexpr bool operator==(const Vec3 &, const Vec3 &) = default;
};

constexpr double dot(const Vec3 &a, const Vec3 &b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3 &a, const Vec3 &b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline constexpr Vec3 kXAxis{1.0, 0.0, 0.0};
inline constexpr Vec3 kYAxis{0.0, 1.0, 0.0};
inline constexpr Vec3 kZAxis{0.0, 0.0, 1.0};

/// Dense complex 2x2 matrix, row-major. Unitaries produced by this header are
/// called Su2 operators even when they carry a global phase.
class Mat2 {
  public:
    constexpr Mat2() = default;
    constexpr Mat2(cplx a00, cplx a01, cplx a10, cplx a11) : m_{a00, a01, a10, a11} {}

    static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static constexpr Mat2 zero() { return {0.0, 0.0, 0.0, 0.0}; }

    constexpr const cplx &operator()(int r, int c) const { return m_[2 * r + c]; }
    constexpr cplx &operator()(int r, int c) { return m_[2 * r + c]; }

    Mat2 adjoint() const;
    cplx trace() const { return m_[0] + m_[3]; }
    cplx det() const { return m_[0] * m_[3] - m_[1] * m_[2]; }

    /// Largest absolute entry of (*this - other).
    double max_abs_diff(const Mat2 &other) const;

    friend Mat2 operator*(const Mat2 &a, const Mat2 &b);
    friend Mat2 operator*(cplx s, const Mat2 &a);
    friend Mat2 operator+(const Mat2 &a, const Mat2 &b);
    friend Mat2 operator-(const Mat2 &a, const Mat2 &b);

  private:
    std::array<cplx, 4> m_{};
};

using Su2Operator = Mat2;

Mat2 pauli_x();
Mat2 pauli_y();
Mat2 pauli_z();
/// Pauli operator by index: 0 = I, 1 = x, 2 = y, 3 = z.
Mat2 pauli(int index);

/// Hermitian (v . sigma).
Mat2 pauli_dot(const Vec3 &v);

/// Angle and unit axis of an SU(2) rotation exp(-i theta/2 r.sigma).
struct RotationDecomposition {
    double theta = 0.0;
    Vec3 axis = kZAxis;
};

/// cos(angle/2) I - i sin(angle/2) (n.sigma) with n = axis/|axis|.
/// Throws std::invalid_argument("degenerate axis") for a zero axis with a
/// nonzero angle.
Su2Operator expm_su2(const Vec3 &axis, double angle);

/// exp(-i t (field.sigma)/2): precession about `field` at rate |field| for a
/// time t. A zero field gives the identity.
Su2Operator precession(const Vec3 &field, double t);

/// Canonical decomposition: global phase stripped so cos(theta/2) >= 0, giving
/// theta in [0, pi]. When sin(theta/2) < 1e-12 the axis is reported as z.
/// Throws std::invalid_argument("not unitary") if U deviates from unitarity by
/// more than 1e-9 in any entry of U^dagger U - I.
RotationDecomposition axis_angle(const Su2Operator &u);

/// Re-express a decomposition as the equivalent (2 pi - theta, -axis) when
/// that makes the axis point into the half-space of `reference`.
RotationDecomposition oriented_toward(const RotationDecomposition &d, const Vec3 &reference);

/// |Tr(A B^dagger)|^2 / 4.
double trace_overlap(const Su2Operator &a, const Su2Operator &b);

bool is_unitary(const Mat2 &u, double tol);

/// Nearest unitary with the same global phase structure (closed-form 2x2
/// polar factor). Used to bound drift in long products.
Su2Operator reunitarize(const Mat2 &u);

/// u^n by repeated squaring.
Su2Operator power(const Su2Operator &u, std::uint64_t n);

/// Bloch-vector image of v under rho -> U rho U^dagger.
Vec3 rotate_bloch(const Su2Operator &u, const Vec3 &v);

/// 3x3 rotation matrix R with R_ij = Tr(sigma_i U sigma_j U^dagger) / 2.
using Rotation3 = std::array<std::array<double, 3>, 3>;
Rotation3 so3_matrix(const Su2Operator &u);
Vec3 rotate(const Rotation3 &r, const Vec3 &v);

/// Repeated multiplication with periodic re-unitarization every
/// kReunitarizeInterval products.
class UnitaryAccumulator {
  public:
    static constexpr int kReunitarizeInterval = 1024;

    explicit UnitaryAccumulator(Su2Operator start = Su2Operator::identity()) : value_(start) {}

    /// value <- step * value
    void left_multiply(const Su2Operator &step);
    const Su2Operator &value() const { return value_; }

  private:
    Su2Operator value_;
    int since_fix_ = 0;
};

}  // namespace cpmgoc

#endif  // CPMGOC_SU2_HPP
