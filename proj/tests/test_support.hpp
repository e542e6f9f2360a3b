#pragma once

#include <cmath>
#include <numbers>

#include "rangewave/rng.hpp"
#include "rangewave/verify.hpp"

namespace rwtest {

using namespace rangewave;

inline constexpr double kPi = std::numbers::pi;

/// Aperiodic convolution by the definition, double loop.
inline CVec convolve_direct(const CVec& a, const CVec& b) {
    CVec out = CVec::Zero(a.size() + b.size() - 1);
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        for (Eigen::Index j = 0; j < b.size(); ++j) {
            out[i + j] += a[i] * b[j];
        }
    }
    return out;
}

/// Composite-Simpson integral of |sum_l s_l exp(-j 2 pi f l)|^2 over [f1, f2].
inline double band_energy_quadrature(const CVec& s, double f1, double f2,
                                     int intervals = 8192) {
    if (intervals % 2 != 0) ++intervals;
    const auto spectrumAt = [&](double f) {
        Complex acc = 0.0;
        for (Eigen::Index l = 0; l < s.size(); ++l) {
            acc += s[l] * std::exp(Complex(0.0, -2.0 * kPi * f * double(l)));
        }
        return std::norm(acc);
    };
    const double h = (f2 - f1) / intervals;
    double sum = spectrumAt(f1) + spectrumAt(f2);
    for (int i = 1; i < intervals; ++i) {
        sum += (i % 2 == 1 ? 4.0 : 2.0) * spectrumAt(f1 + i * h);
    }
    return sum * h / 3.0;
}

/// Small dense scenario with well-conditioned PD matrices.
inline VerifyScenario small_scenario(int length, int cells, std::uint64_t seed) {
    return random_verify_scenario(length, cells, seed);
}

/// Random code on the energy sphere.
inline Waveform random_sphere_code(int length, double energy, std::uint64_t seed) {
    Rng rng(seed);
    CVec v = rng.complex_normal_vector(length);
    v *= std::sqrt(energy) / v.norm();
    return Waveform{v};
}

inline double relative_gap(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

/// P = 1 scenario whose whitened-power operator has well-separated
/// eigenvalues, so fixed-point iterations converge fast in argument.
inline VerifyScenario gapped_point_scenario(int length, std::uint64_t seed) {
    Rng rng(seed);
    const CMat raw = rng.complex_normal_matrix(length, length);
    const Eigen::HouseholderQR<CMat> qr(raw);
    CMat unitary = qr.householderQ();
    RVec diag(length);
    for (int i = 0; i < length; ++i) {
        diag[i] = 0.2 * std::pow(1.6, i);
    }
    VerifyScenario scenario;
    scenario.codeLength = length;
    scenario.prior.mean = CVec::Zero(1);
    scenario.prior.covariance = CMat::Identity(1, 1) * 0.8;
    scenario.disturbance.covariance =
        symmetrize(unitary * diag.asDiagonal() * unitary.adjoint());
    return scenario;
}

}  // namespace rwtest
