#pragma once

#include <cstdint>
#include <vector>

#include "rangewave/linalg.hpp"

namespace rangewave {

/// Discrete-time transmit code. The optimization variable throughout.
struct Waveform {
    CVec samples;

    int length() const { return static_cast<int>(samples.size()); }
    double energy() const { return samples.squaredNorm(); }

    static Waveform zero(int length) { return {CVec::Zero(length)}; }

    /// Checks L >= 1 and all samples finite; throws std::invalid_argument.
    void validate() const;
};

/// Gaussian prior on the target impulse response over P range cells.
struct TargetPrior {
    CVec mean;        // length P
    CMat covariance;  // P x P, Hermitian PSD

    int cells() const { return static_cast<int>(mean.size()); }

    /// Hermitian within 1e-12 elementwise, eigenvalues >= -1e-10,
    /// mean length matching the covariance dimension.
    void validate() const;
};

/// Constant-mean, scaled-identity prior (the stock experiment setup).
TargetPrior uniform_prior(int cells, Complex meanValue, double variance);

/// Gaussian disturbance covariance over the L0 = L+P-1 received samples.
struct DisturbanceModel {
    CMat covariance;  // L0 x L0, Hermitian PD

    int size() const { return static_cast<int>(covariance.rows()); }

    void validate() const;
};

DisturbanceModel white_disturbance(int size, double noisePower);

/// Barrage jammer plus white noise: covariance = jamPower * R_J + noisePower * I,
/// with R_J a Toeplitz matrix synthesized from a rectangular power spectrum on
/// the normalized band [bandLow, bandHigh).
struct JammingSpec {
    double jamPower = 1000.0;
    double noisePower = 1.0;
    double bandLow = 0.1;
    double bandHigh = 0.3;

    void validate() const;
};

/// Rectangular jamming power spectrum sampled on the 2*L0-1 point frequency
/// grid (p-1)/(2*L0-1), p = 1..2*L0-1; occupied indices are
/// floor((2*L0-1)*bandLow) <= p <= floor((2*L0-1)*bandHigh).
RVec barrage_spectrum(const JammingSpec& spec, int size);

/// Lags q_0..q_{L0-1} of the spectrum via the inverse DFT convention
/// q_m = (1/N) sum_{p=1..N} eta_p exp(+j 2 pi p m / N), N = 2*L0-1.
CVec spectrum_lags(const RVec& spectrum, int size);

/// Hermitian Toeplitz matrix with first column q.
CMat toeplitz_from_lags(const CVec& lags);

/// Throws std::runtime_error if the synthesized covariance is not PD.
DisturbanceModel jamming_covariance(const JammingSpec& spec, int size);

/// One licensed band with its interference weight.
struct SpectralBand {
    double lower = 0.0;
    double upper = 0.0;
    double weight = 1.0;
};

struct SpectralBandSet {
    std::vector<SpectralBand> bands;

    void validate() const;  // 0 <= lower < upper <= 1 per band, weights >= 0
};

/// Weighted sum of per-band interference matrices; s^H R_I s is the waveform
/// energy radiated into the licensed bands. Hermitian PSD.
CMat spectral_interference_matrix(const SpectralBandSet& bands, int length);

/// Chirp code with unit-modulus samples sqrt(e/L) exp(j pi (k-1)^2 / L).
Waveform lfm_waveform(int length, double energy);

/// Constant-modulus code with i.i.d. phases uniform on [0, 2 pi).
Waveform random_phase_waveform(int length, double energy, std::uint64_t seed);

/// Peak-to-average power ratio, in [1, L]. Throws on the all-zero code.
double papr(const Waveform& s);

/// L0 x P banded matrix whose column p is the code shifted down by p-1;
/// S h is the aperiodic convolution of s and h.
CMat convolution_matrix(const Waveform& s, int cells);

/// log det(R_n^{-1} S R_h S^H + I) in nats, evaluated through the equivalent
/// P x P determinant.
double mutual_information(const Waveform& s, const TargetPrior& prior,
                          const DisturbanceModel& dist);

enum class MmseForm { Auto, Inverse, Subtraction };

/// Bayesian estimation error tr[(R_h^{-1} + S^H R_n^{-1} S)^{-1}], in
/// (0, tr(R_h)]. Auto falls back to the subtraction form
/// tr(R_h - R_h S^H (S R_h S^H + R_n)^{-1} S R_h) when R_h is singular or
/// ill-conditioned (condition number above 1e12).
double mmse_value(const Waveform& s, const TargetPrior& prior,
                  const DisturbanceModel& dist, MmseForm form = MmseForm::Auto);

/// Posterior-mean estimate mu_h + R_h S^H (S R_h S^H + R_n)^{-1} (y - S mu_h).
CVec mmse_estimate(const CVec& received, const Waveform& s,
                   const TargetPrior& prior, const DisturbanceModel& dist);

struct EsdPoint {
    double frequency;  // normalized, k/nfft
    double density;
};

/// Energy spectral density |DFT_nfft(s)|^2 on the nfft-point grid.
std::vector<EsdPoint> esd(const Waveform& s, int nfft = 4096,
                          bool normalizePeak = false);

/// Aperiodic correlations r_p = sum conj(s_k) s_{k+p} / s^H s, p = 0..L-1.
CVec acf(const Waveform& s);

struct ZczBounds {
    double mi;
    double mmse;
};

/// Objective bounds attained exactly by codes whose shifted copies are
/// orthogonal (diagonal S^H S). Requires a diagonal prior covariance and
/// white disturbance; throws std::domain_error otherwise.
ZczBounds zcz_bounds(const TargetPrior& diagonalPrior, double noisePower,
                     double energy);

struct LowSnrDesign {
    Waveform waveform;
    /// Set when the leading eigenvalue of the contraction is (numerically)
    /// repeated; the returned member of the eigenspace is then arbitrary.
    bool degenerateEigenspace = false;
};

/// Energy-constrained design under the low-SNR quadratic approximation of the
/// mutual information: sqrt(energy) times the top eigenvector of the L x L
/// contraction of R_h^* (x) R_n^{-1}. Global phase is rotated so the first
/// entry above 1e-12 in magnitude is real positive.
LowSnrDesign low_snr_energy_design(const TargetPrior& prior,
                                   const DisturbanceModel& dist, double energy);

}  // namespace rangewave
