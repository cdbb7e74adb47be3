#pragma once

#include <array>

#include "qpv/qubit.hpp"

namespace qpv {

// Real symmetric 2x2 density matrix. Covers every state and mixture this
// library produces, since all amplitudes are real.
class DensityMatrix2 {
public:
    // Validates: trace within kExactTol of 1, eigenvalues in
    // [-kExactTol, 1 + kExactTol]. Throws std::invalid_argument otherwise.
    DensityMatrix2(double m00, double m01, double m11);

    // Skips validation. For accumulation internals and tests that need to
    // construct deliberately broken matrices.
    static DensityMatrix2 unchecked(double m00, double m01, double m11) noexcept;

    static DensityMatrix2 pure(const QubitState& psi);
    static DensityMatrix2 maximally_mixed() noexcept;

    double m00() const noexcept { return m00_; }
    double m01() const noexcept { return m01_; }
    double m11() const noexcept { return m11_; }
    double trace() const noexcept { return m00_ + m11_; }

    // Closed-form eigenvalues of [[m00, m01], [m01, m11]], descending.
    std::array<double, 2> eigenvalues() const noexcept;

private:
    struct Raw {};
    DensityMatrix2(Raw, double m00, double m01, double m11) noexcept
        : m00_(m00), m01_(m01), m11_(m11) {}

    double m00_;
    double m01_;
    double m11_;
};

// Kahan-compensated accumulation of weighted pure-state projectors into a
// mixture. normalized() divides by the accumulated weight and validates.
class MixtureAccumulator {
public:
    void add(const QubitState& psi, double weight = 1.0) noexcept;
    DensityMatrix2 normalized() const;
    double total_weight() const noexcept { return weight_.sum; }

private:
    struct Kahan {
        double sum = 0.0;
        double carry = 0.0;
        void add(double x) noexcept {
            const double y = x - carry;
            const double t = sum + y;
            carry = (t - sum) - y;
            sum = t;
        }
    };
    Kahan m00_, m01_, m11_, weight_;
};

// (1/2) * sum of |eigenvalues| of r0 - r1, in [0, 1]. Throws
// std::invalid_argument when either input's trace deviates from 1 by more
// than kDensityTraceTol -- that signals a caller bug, not rounding.
double trace_distance(const DensityMatrix2& r0, const DensityMatrix2& r1);

}  // namespace qpv
