#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

#include "qpv/constants.hpp"
#include "qpv/rng.hpp"

namespace qpv {

// Plane angle in radians. No implicit reduction; the few operations that
// need a representative mod 2*pi do it themselves.
struct Angle {
    double radians = 0.0;

    constexpr Angle operator-() const noexcept { return {-radians}; }
    friend constexpr Angle operator+(Angle a, Angle b) noexcept { return {a.radians + b.radians}; }
    friend constexpr Angle operator-(Angle a, Angle b) noexcept { return {a.radians - b.radians}; }
    friend constexpr Angle operator*(double k, Angle a) noexcept { return {k * a.radians}; }
};

// Quantization step pi / 2^t used by rotation-encoded keys. Division by a
// power of two is exact in binary floating point.
inline Angle theta_step(int t) {
    if (t < 1 || t > 62) {
        throw std::invalid_argument("theta_step: precision exponent t must be in [1, 62]");
    }
    return {std::numbers::pi / static_cast<double>(std::uint64_t{1} << t)};
}

// One qubit with real amplitudes on {|0>, |1>}. Rotations about y keep
// amplitudes real, and every state reached in this library is of that form,
// so no imaginary part is carried.
struct QubitState {
    double a0 = 1.0;  // amplitude on |0>
    double a1 = 0.0;  // amplitude on |1>

    static constexpr QubitState zero() noexcept { return {1.0, 0.0}; }
    static constexpr QubitState one() noexcept { return {0.0, 1.0}; }
    static QubitState at_angle(Angle a) noexcept {
        return {std::cos(a.radians), std::sin(a.radians)};
    }

    double norm2() const noexcept { return a0 * a0 + a1 * a1; }
    bool is_normalized(double tol = kExactTol) const noexcept {
        return std::abs(norm2() - 1.0) <= tol;
    }
};

// Amplitude-plane rotation: (a0, a1) -> (a0 cos - a1 sin, a0 sin + a1 cos).
// rotate(QubitState::zero(), a) equals QubitState::at_angle(a) bit for bit.
inline QubitState rotate(const QubitState& q, Angle a) noexcept {
    const double c = std::cos(a.radians);
    const double s = std::sin(a.radians);
    return {q.a0 * c - q.a1 * s, q.a0 * s + q.a1 * c};
}

inline QubitState inverse_rotate(const QubitState& q, Angle a) noexcept {
    return rotate(q, -a);
}

// Z-basis measurement, Born rule: 1 with probability a1^2. Consumes exactly
// one draw whatever the state, so seeded streams stay aligned.
inline int measure_z(const QubitState& q, Rng& rng) noexcept {
    const double p1 = q.a1 * q.a1;
    return rng.uniform_double() < p1 ? 1 : 0;
}

// Inner product <a|b>; symmetric for real states. In [-1, 1] for unit inputs.
inline double overlap(const QubitState& a, const QubitState& b) noexcept {
    return a.a0 * b.a0 + a.a1 * b.a1;
}

// Projective measurement in the rotated basis {R(b)|0>, R(b)|1>}.
inline int measure_in_basis(const QubitState& q, Angle basis, Rng& rng) noexcept {
    return measure_z(inverse_rotate(q, basis), rng);
}

}  // namespace qpv
