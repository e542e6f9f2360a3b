#include "rangewave/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "rangewave/minorize.hpp"
#include "rangewave/rng.hpp"

namespace rangewave {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kJ{0.0, 1.0};

CMat convolution_matrix_impl(const CVec& s, int cells) {
    const int length = static_cast<int>(s.size());
    const int padded = length + cells - 1;
    CMat out = CMat::Zero(padded, cells);
    for (int p = 0; p < cells; ++p) {
        out.col(p).segment(p, length) = s;
    }
    return out;
}

}  // namespace

void Waveform::validate() const {
    if (length() < 1) {
        throw std::invalid_argument("Waveform: length must be >= 1");
    }
    if (!samples.allFinite()) {
        throw std::invalid_argument("Waveform: samples must be finite");
    }
}

void TargetPrior::validate() const {
    if (cells() < 1) {
        throw std::invalid_argument("TargetPrior: at least one range cell");
    }
    if (covariance.rows() != cells() || covariance.cols() != cells()) {
        throw std::invalid_argument(
            "TargetPrior: mean length must match covariance dimension");
    }
    if (!is_hermitian(covariance, 1e-12)) {
        throw std::invalid_argument("TargetPrior: covariance must be Hermitian");
    }
    if (hermitian_eig(symmetrize(covariance)).values.minCoeff() < -1e-10) {
        throw std::invalid_argument("TargetPrior: covariance must be PSD");
    }
}

TargetPrior uniform_prior(int cells, Complex meanValue, double variance) {
    TargetPrior prior;
    prior.mean = CVec::Constant(cells, meanValue);
    prior.covariance = variance * CMat::Identity(cells, cells);
    return prior;
}

void DisturbanceModel::validate() const {
    if (size() < 1 || covariance.cols() != covariance.rows()) {
        throw std::invalid_argument("DisturbanceModel: square covariance required");
    }
    if (!is_hermitian(covariance, 1e-12)) {
        throw std::invalid_argument("DisturbanceModel: covariance must be Hermitian");
    }
    Eigen::LLT<CMat> llt(symmetrize(covariance));
    if (llt.info() != Eigen::Success) {
        throw std::invalid_argument("DisturbanceModel: covariance must be PD");
    }
}

DisturbanceModel white_disturbance(int size, double noisePower) {
    if (noisePower <= 0.0) {
        throw std::invalid_argument("white_disturbance: noise power must be > 0");
    }
    return {noisePower * CMat::Identity(size, size)};
}

void JammingSpec::validate() const {
    if (jamPower < 0.0) throw std::invalid_argument("JammingSpec: jamPower >= 0");
    if (noisePower <= 0.0) throw std::invalid_argument("JammingSpec: noisePower > 0");
    if (!(bandLow >= 0.0 && bandLow < bandHigh && bandHigh < 1.0)) {
        throw std::invalid_argument("JammingSpec: band must satisfy 0 <= f1 < f2 < 1");
    }
}

RVec barrage_spectrum(const JammingSpec& spec, int size) {
    spec.validate();
    const int gridSize = 2 * size - 1;
    const int lo = static_cast<int>(std::floor(gridSize * spec.bandLow));
    const int hi = static_cast<int>(std::floor(gridSize * spec.bandHigh));
    RVec eta = RVec::Zero(gridSize);
    for (int p = 1; p <= gridSize; ++p) {
        if (p >= lo && p <= hi) eta[p - 1] = 1.0;
    }
    return eta;
}

CVec spectrum_lags(const RVec& spectrum, int size) {
    const int gridSize = static_cast<int>(spectrum.size());
    CVec lags = CVec::Zero(size);
    for (int m = 0; m < size; ++m) {
        Complex acc = 0.0;
        for (int p = 1; p <= gridSize; ++p) {
            acc += spectrum[p - 1] *
                   std::exp(kJ * (2.0 * kPi * p * m / static_cast<double>(gridSize)));
        }
        lags[m] = acc / static_cast<double>(gridSize);
    }
    return lags;
}

CMat toeplitz_from_lags(const CVec& lags) {
    const int n = static_cast<int>(lags.size());
    CMat out(n, n);
    for (int m = 0; m < n; ++m) {
        for (int k = 0; k < n; ++k) {
            out(m, k) = m >= k ? lags[m - k] : std::conj(lags[k - m]);
        }
    }
    return out;
}

DisturbanceModel jamming_covariance(const JammingSpec& spec, int size) {
    const CVec lags = spectrum_lags(barrage_spectrum(spec, size), size);
    CMat cov = spec.jamPower * toeplitz_from_lags(lags);
    cov += spec.noisePower * CMat::Identity(size, size);
    cov = symmetrize(cov);
    Eigen::LLT<CMat> llt(cov);
    if (llt.info() != Eigen::Success) {
        throw std::runtime_error(
            "jamming_covariance: synthesized covariance is not positive definite");
    }
    return {cov};
}

void SpectralBandSet::validate() const {
    for (const SpectralBand& band : bands) {
        if (!(band.lower >= 0.0 && band.lower < band.upper && band.upper <= 1.0)) {
            throw std::invalid_argument(
                "SpectralBandSet: bands must satisfy 0 <= f1 < f2 <= 1");
        }
        if (band.weight < 0.0) {
            throw std::invalid_argument("SpectralBandSet: weights must be >= 0");
        }
    }
}

CMat spectral_interference_matrix(const SpectralBandSet& bands, int length) {
    bands.validate();
    CMat out = CMat::Zero(length, length);
    for (const SpectralBand& band : bands.bands) {
        for (int m = 0; m < length; ++m) {
            for (int n = 0; n < length; ++n) {
                const int d = m - n;
                if (d == 0) {
                    out(m, n) += band.weight * (band.upper - band.lower);
                } else {
                    const Complex num = std::exp(kJ * (2.0 * kPi * band.upper * d)) -
                                        std::exp(kJ * (2.0 * kPi * band.lower * d));
                    out(m, n) += band.weight * num / (kJ * (2.0 * kPi * d));
                }
            }
        }
    }
    return symmetrize(out);
}

Waveform lfm_waveform(int length, double energy) {
    if (length < 1) throw std::invalid_argument("lfm_waveform: length must be >= 1");
    if (energy <= 0.0) throw std::invalid_argument("lfm_waveform: energy must be > 0");
    const double amplitude = std::sqrt(energy / length);
    CVec samples(length);
    for (int k = 0; k < length; ++k) {
        samples[k] =
            amplitude * std::exp(kJ * (kPi * double(k) * double(k) / double(length)));
    }
    return {samples};
}

Waveform random_phase_waveform(int length, double energy, std::uint64_t seed) {
    if (length < 1) {
        throw std::invalid_argument("random_phase_waveform: length must be >= 1");
    }
    if (energy <= 0.0) {
        throw std::invalid_argument("random_phase_waveform: energy must be > 0");
    }
    const double amplitude = std::sqrt(energy / length);
    Rng rng(seed);
    CVec samples(length);
    for (int k = 0; k < length; ++k) {
        samples[k] = amplitude * std::exp(kJ * (2.0 * kPi * rng.uniform()));
    }
    return {samples};
}

double papr(const Waveform& s) {
    const double total = s.energy();
    if (total <= 0.0) {
        throw std::invalid_argument("papr: undefined for the all-zero waveform");
    }
    const double peak = s.samples.cwiseAbs2().maxCoeff();
    return peak / (total / s.length());
}

CMat convolution_matrix(const Waveform& s, int cells) {
    if (cells < 1) throw std::invalid_argument("convolution_matrix: cells >= 1");
    return convolution_matrix_impl(s.samples, cells);
}

double mutual_information(const Waveform& s, const TargetPrior& prior,
                          const DisturbanceModel& dist) {
    const int cells = prior.cells();
    Eigen::LLT<CMat> noise(dist.covariance);
    if (noise.info() != Eigen::Success) {
        throw std::domain_error("mutual_information: disturbance covariance not PD");
    }
    const CMat conv = convolution_matrix(s, cells);
    if (conv.rows() != dist.size()) {
        throw std::invalid_argument("mutual_information: dimension mismatch");
    }
    const CMat whitened = noise.solve(conv);            // R_n^{-1} S
    const CMat gram = conv.adjoint() * whitened;        // S^H R_n^{-1} S
    const CMat priorSqrt = hermitian_sqrt(prior.covariance);
    CMat inner = priorSqrt * symmetrize(gram) * priorSqrt;
    inner += CMat::Identity(cells, cells);
    return logdet_hpd(symmetrize(inner));
}

double mmse_value(const Waveform& s, const TargetPrior& prior,
                  const DisturbanceModel& dist, MmseForm form) {
    const int cells = prior.cells();
    const CMat conv = convolution_matrix(s, cells);
    if (conv.rows() != dist.size()) {
        throw std::invalid_argument("mmse_value: dimension mismatch");
    }

    const auto subtraction = [&]() {
        const CMat cross = conv * prior.covariance;  // S R_h
        CMat received = symmetrize(cross * conv.adjoint() + dist.covariance);
        Eigen::LLT<CMat> llt(received);
        if (llt.info() != Eigen::Success) {
            throw std::domain_error("mmse_value: received covariance not PD");
        }
        const CMat solved = llt.solve(cross);
        const double recovered = (cross.adjoint() * solved).real().trace();
        return prior.covariance.real().trace() - recovered;
    };

    const auto inverse = [&]() {
        Eigen::LLT<CMat> priorFactor(prior.covariance);
        if (priorFactor.info() != Eigen::Success) {
            throw std::domain_error("mmse_value: prior covariance not PD");
        }
        Eigen::LLT<CMat> noise(dist.covariance);
        if (noise.info() != Eigen::Success) {
            throw std::domain_error("mmse_value: disturbance covariance not PD");
        }
        CMat precision = priorFactor.solve(CMat::Identity(cells, cells));
        precision += conv.adjoint() * noise.solve(conv);
        Eigen::LLT<CMat> post(symmetrize(precision));
        if (post.info() != Eigen::Success) {
            throw std::domain_error("mmse_value: posterior precision not PD");
        }
        return post.solve(CMat::Identity(cells, cells)).real().trace();
    };

    switch (form) {
        case MmseForm::Inverse:
            return inverse();
        case MmseForm::Subtraction:
            return subtraction();
        case MmseForm::Auto:
            break;
    }
    Eigen::LLT<CMat> priorFactor(prior.covariance);
    if (priorFactor.info() != Eigen::Success ||
        hermitian_condition(prior.covariance) > 1e12) {
        return subtraction();
    }
    return inverse();
}

CVec mmse_estimate(const CVec& received, const Waveform& s,
                   const TargetPrior& prior, const DisturbanceModel& dist) {
    const CMat conv = convolution_matrix(s, prior.cells());
    if (received.size() != conv.rows()) {
        throw std::invalid_argument("mmse_estimate: received length mismatch");
    }
    const CMat cross = conv * prior.covariance;
    CMat receivedCov = symmetrize(cross * conv.adjoint() + dist.covariance);
    Eigen::LLT<CMat> llt(receivedCov);
    if (llt.info() != Eigen::Success) {
        throw std::domain_error("mmse_estimate: received covariance not PD");
    }
    const CVec innovation = received - conv * prior.mean;
    return prior.mean + cross.adjoint() * llt.solve(innovation);
}

std::vector<EsdPoint> esd(const Waveform& s, int nfft, bool normalizePeak) {
    const int length = s.length();
    if (nfft < length) {
        throw std::invalid_argument("esd: nfft must be >= code length");
    }
    std::vector<EsdPoint> out(nfft);
    for (int k = 0; k < nfft; ++k) {
        Complex acc = 0.0;
        for (int l = 0; l < length; ++l) {
            acc += s.samples[l] *
                   std::exp(-kJ * (2.0 * kPi * double(k) * double(l) / double(nfft)));
        }
        out[k] = {double(k) / double(nfft), std::norm(acc)};
    }
    if (normalizePeak) {
        double peak = 0.0;
        for (const EsdPoint& p : out) peak = std::max(peak, p.density);
        if (peak > 0.0) {
            for (EsdPoint& p : out) p.density /= peak;
        }
    }
    return out;
}

CVec acf(const Waveform& s) {
    const int length = s.length();
    const double total = s.energy();
    if (total <= 0.0) {
        throw std::invalid_argument("acf: undefined for the all-zero waveform");
    }
    CVec out(length);
    for (int p = 0; p < length; ++p) {
        Complex acc = 0.0;
        for (int k = 0; k + p < length; ++k) {
            acc += std::conj(s.samples[k]) * s.samples[k + p];
        }
        out[p] = acc / total;
    }
    return out;
}

ZczBounds zcz_bounds(const TargetPrior& diagonalPrior, double noisePower,
                     double energy) {
    if (noisePower <= 0.0) {
        throw std::domain_error("zcz_bounds: noise power must be > 0");
    }
    const CMat& cov = diagonalPrior.covariance;
    const double diagScale = cov.diagonal().cwiseAbs().maxCoeff();
    for (int r = 0; r < cov.rows(); ++r) {
        for (int c = 0; c < cov.cols(); ++c) {
            if (r != c && std::abs(cov(r, c)) > 1e-12 * std::max(1.0, diagScale)) {
                throw std::domain_error("zcz_bounds: prior covariance must be diagonal");
            }
        }
    }
    const double snrGain = energy / noisePower;
    ZczBounds bounds{0.0, 0.0};
    for (int p = 0; p < cov.rows(); ++p) {
        const double lambda = std::max(cov(p, p).real(), 0.0);
        if (lambda > 0.0) {
            bounds.mi += std::log1p(lambda * snrGain);
            bounds.mmse += 1.0 / (1.0 / lambda + snrGain);
        }
    }
    return bounds;
}

LowSnrDesign low_snr_energy_design(const TargetPrior& prior,
                                   const DisturbanceModel& dist, double energy) {
    if (energy <= 0.0) {
        throw std::invalid_argument("low_snr_energy_design: energy must be > 0");
    }
    const int padded = dist.size();
    const int length = padded - prior.cells() + 1;
    if (length < 1) {
        throw std::invalid_argument("low_snr_energy_design: inconsistent sizes");
    }
    Eigen::LLT<CMat> noise(dist.covariance);
    if (noise.info() != Eigen::Success) {
        throw std::domain_error("low_snr_energy_design: disturbance not PD");
    }
    const CMat noiseInverse =
        symmetrize(noise.solve(CMat::Identity(padded, padded)));
    const CMat contraction = gram_contract(prior.covariance, noiseInverse);
    HermitianEigen eig = hermitian_eig(contraction);

    const int top = static_cast<int>(eig.values.size()) - 1;
    CVec v = eig.vectors.col(top);
    LowSnrDesign out;
    if (top > 0) {
        const double gap = eig.values[top] - eig.values[top - 1];
        out.degenerateEigenspace = gap <= 1e-10 * std::max(std::abs(eig.values[top]), 1.0);
    }
    for (int i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) > 1e-12) {
            v *= std::conj(v[i]) / std::abs(v[i]);
            break;
        }
    }
    out.waveform.samples = std::sqrt(energy) * v;
    return out;
}

}  // namespace rangewave
