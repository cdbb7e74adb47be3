#include "qpv/density.hpp"

#include <cmath>
#include <stdexcept>

namespace qpv {

DensityMatrix2::DensityMatrix2(double m00, double m01, double m11)
    : m00_(m00), m01_(m01), m11_(m11) {
    if (!std::isfinite(m00) || !std::isfinite(m01) || !std::isfinite(m11)) {
        throw std::invalid_argument("DensityMatrix2: entries must be finite");
    }
    if (std::abs(trace() - 1.0) > kExactTol) {
        throw std::invalid_argument("DensityMatrix2: trace must be 1");
    }
    const auto [hi, lo] = eigenvalues();
    if (lo < -kExactTol || hi > 1.0 + kExactTol) {
        throw std::invalid_argument("DensityMatrix2: eigenvalues outside [0, 1]");
    }
}

DensityMatrix2 DensityMatrix2::unchecked(double m00, double m01, double m11) noexcept {
    return DensityMatrix2(Raw{}, m00, m01, m11);
}

DensityMatrix2 DensityMatrix2::pure(const QubitState& psi) {
    return DensityMatrix2(psi.a0 * psi.a0, psi.a0 * psi.a1, psi.a1 * psi.a1);
}

DensityMatrix2 DensityMatrix2::maximally_mixed() noexcept {
    return DensityMatrix2(Raw{}, 0.5, 0.0, 0.5);
}

std::array<double, 2> DensityMatrix2::eigenvalues() const noexcept {
    const double mean = 0.5 * (m00_ + m11_);
    const double half_gap = 0.5 * (m00_ - m11_);
    const double radius = std::sqrt(half_gap * half_gap + m01_ * m01_);
    return {mean + radius, mean - radius};
}

void MixtureAccumulator::add(const QubitState& psi, double weight) noexcept {
    m00_.add(weight * psi.a0 * psi.a0);
    m01_.add(weight * psi.a0 * psi.a1);
    m11_.add(weight * psi.a1 * psi.a1);
    weight_.add(weight);
}

DensityMatrix2 MixtureAccumulator::normalized() const {
    const double w = weight_.sum;
    if (!(w > 0.0)) {
        throw std::logic_error("MixtureAccumulator: no weight accumulated");
    }
    return DensityMatrix2(m00_.sum / w, m01_.sum / w, m11_.sum / w);
}

double trace_distance(const DensityMatrix2& r0, const DensityMatrix2& r1) {
    if (std::abs(r0.trace() - 1.0) > kDensityTraceTol ||
        std::abs(r1.trace() - 1.0) > kDensityTraceTol) {
        throw std::invalid_argument("trace_distance: input trace deviates from 1");
    }
    // The difference is symmetric 2x2; use the closed-form spectrum.
    const double d00 = r0.m00() - r1.m00();
    const double d01 = r0.m01() - r1.m01();
    const double d11 = r0.m11() - r1.m11();
    const double mean = 0.5 * (d00 + d11);
    const double half_gap = 0.5 * (d00 - d11);
    const double radius = std::sqrt(half_gap * half_gap + d01 * d01);
    return 0.5 * (std::abs(mean + radius) + std::abs(mean - radius));
}

}  // namespace qpv
