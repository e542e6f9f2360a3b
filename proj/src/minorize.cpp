#include "rangewave/minorize.hpp"

#include <stdexcept>
#include <utility>

namespace rangewave {

double QuadraticMinorizer::evaluate(const CVec& s) const {
    if (s.size() != linear.size()) {
        throw std::invalid_argument("QuadraticMinorizer::evaluate: length mismatch");
    }
    const double lin = 2.0 * s.dot(linear).real();  // s.dot(x) = s^H x
    const double quad = s.dot(quadratic * s).real();
    return constant + lin + quad;
}

CVec ShiftStackOperator::forward(const CVec& s) const {
    if (s.size() != length) {
        throw std::invalid_argument("ShiftStackOperator::forward: length mismatch");
    }
    const int padded = paddedLength();
    CVec out = CVec::Zero(stackedSize());
    for (int p = 0; p < cells; ++p) {
        out.segment(p * padded + p, length) = s;
    }
    return out;
}

CVec ShiftStackOperator::adjoint(const CVec& v) const {
    if (v.size() != stackedSize()) {
        throw std::invalid_argument("ShiftStackOperator::adjoint: length mismatch");
    }
    const int padded = paddedLength();
    CVec out = CVec::Zero(length);
    for (int p = 0; p < cells; ++p) {
        out += v.segment(p * padded + p, length);
    }
    return out;
}

CMat gram_contract(const CMat& priorCov, const CMat& kernel) {
    const int cells = static_cast<int>(priorCov.rows());
    const int padded = static_cast<int>(kernel.rows());
    const int length = padded - cells + 1;
    if (priorCov.cols() != cells || kernel.cols() != padded || length < 1) {
        throw std::invalid_argument("gram_contract: inconsistent dimensions");
    }
    CMat out = CMat::Zero(length, length);
    for (int col = 0; col < length; ++col) {
        auto outCol = out.col(col);
        for (int q = 0; q < cells; ++q) {
            const auto kernelCol = kernel.col(q + col);
            for (int p = 0; p < cells; ++p) {
                outCol.noalias() += std::conj(priorCov(p, q)) * kernelCol.segment(p, length);
            }
        }
    }
    return out;
}

CMat gram_contract_factored(const CMat& priorCov, const CMat& span) {
    const int cells = static_cast<int>(priorCov.rows());
    const int padded = static_cast<int>(span.rows());
    const int rank = static_cast<int>(span.cols());
    const int length = padded - cells + 1;
    if (priorCov.cols() != cells || length < 1) {
        throw std::invalid_argument("gram_contract_factored: inconsistent dimensions");
    }
    // priorCov^* = G G^H; the contraction collapses to W W^H with the column
    // blocks W_m = sum_p G(p,m) span(p : p+L-1, :).
    HermitianEigen eig = hermitian_eig(symmetrize(priorCov));
    CMat factor = eig.vectors.conjugate();
    for (int m = 0; m < cells; ++m) {
        factor.col(m) *= std::sqrt(std::max(eig.values[m], 0.0));
    }
    CMat stacked(length, cells * rank);
    for (int m = 0; m < cells; ++m) {
        auto block = stacked.middleCols(m * rank, rank);
        block.setZero();
        for (int p = 0; p < cells; ++p) {
            const Complex weight = factor(p, m);
            if (weight != Complex(0.0, 0.0)) {
                block.noalias() += weight * span.middleRows(p, length);
            }
        }
    }
    CMat out = CMat::Zero(length, length);
    out.selfadjointView<Eigen::Lower>().rankUpdate(stacked);
    return CMat(out.selfadjointView<Eigen::Lower>());
}

MinorizerBuilder::MinorizerBuilder(TargetPrior prior, DisturbanceModel dist,
                                   int codeLength)
    : prior_(std::move(prior)), dist_(std::move(dist)) {
    prior_.validate();
    op_ = ShiftStackOperator{codeLength, prior_.cells()};
    if (dist_.size() != op_.paddedLength()) {
        throw std::invalid_argument(
            "MinorizerBuilder: disturbance size must equal L + P - 1");
    }
    priorSqrt_ = hermitian_sqrt(prior_.covariance);
    noiseFactor_.compute(dist_.covariance);
    if (noiseFactor_.info() != Eigen::Success) {
        throw std::domain_error("MinorizerBuilder: disturbance covariance not PD");
    }
}

namespace {

/// vec(m): column-major stack, matching the stacked-shift layout.
CVec vec(const CMat& m) {
    return Eigen::Map<const CVec>(m.data(), m.size());
}

}  // namespace

QuadraticMinorizer MinorizerBuilder::mutual_information(const Waveform& anchor) const {
    const CMat conv = convolution_matrix(anchor, prior_.cells());
    const int cells = prior_.cells();

    const CMat span = conv * priorSqrt_;           // S R_h^{1/2}
    const CMat whitened = noiseFactor_.solve(span); // R_n^{-1} S R_h^{1/2}
    CMat capacity = span.adjoint() * whitened;      // P x P
    capacity += CMat::Identity(cells, cells);
    Eigen::LLT<CMat> capacityFactor(symmetrize(capacity));
    if (capacityFactor.info() != Eigen::Success) {
        throw std::runtime_error("mi_minorizer: received covariance is degenerate");
    }

    // The posterior-minus-prior precision kernel is rank P:
    // R_s^{-1} - R_n^{-1} = -(whitened C^{-H})(whitened C^{-H})^H.
    const CMat kernelFactor =
        capacityFactor.matrixL().solve(whitened.adjoint()).adjoint();
    // Whitened code/prior coupling, the linear-term source: R_n^{-1} S R_h.
    const CMat coupling = whitened * priorSqrt_;

    double logdet = 0.0;
    for (int i = 0; i < cells; ++i) {
        logdet += 2.0 * std::log(capacityFactor.matrixLLT()(i, i).real());
    }

    QuadraticMinorizer m;
    m.metric = Metric::MutualInformation;
    m.anchor = anchor.samples;
    m.linear = op_.adjoint(vec(coupling));
    m.quadratic = -gram_contract_factored(prior_.covariance, kernelFactor);
    m.constant = 0.0;
    m.constant = logdet - m.evaluate(anchor.samples);
    return m;
}

QuadraticMinorizer MinorizerBuilder::mmse(const Waveform& anchor) const {
    const CMat conv = convolution_matrix(anchor, prior_.cells());

    CMat received = dist_.covariance;
    const CMat span = conv * priorSqrt_;
    received.selfadjointView<Eigen::Lower>().rankUpdate(span);
    received = CMat(received.selfadjointView<Eigen::Lower>());
    Eigen::LLT<CMat> receivedFactor(received);
    if (receivedFactor.info() != Eigen::Success) {
        throw std::runtime_error("mmse_minorizer: received covariance is degenerate");
    }

    const CMat cross = conv * prior_.covariance;       // S R_h
    const CMat gain = receivedFactor.solve(cross);     // R_s^{-1} S R_h
    const CMat coupling = gain * prior_.covariance;    // R_s^{-1} S R_h^2
    const double recovered = (cross.adjoint() * gain).real().trace();

    QuadraticMinorizer m;
    m.metric = Metric::Mmse;
    m.anchor = anchor.samples;
    m.linear = op_.adjoint(vec(coupling));
    // Kernel R_s^{-1} S R_h^2 S^H R_s^{-1} = gain gain^H is rank P.
    m.quadratic = -gram_contract_factored(prior_.covariance, gain);
    m.constant = 0.0;
    m.constant = recovered - m.evaluate(anchor.samples);
    return m;
}

QuadraticMinorizer MinorizerBuilder::build(Metric metric, const Waveform& anchor) const {
    return metric == Metric::MutualInformation ? mutual_information(anchor)
                                               : mmse(anchor);
}

double MinorizerBuilder::objective(Metric metric, const Waveform& s) const {
    const CMat conv = convolution_matrix(s, prior_.cells());
    if (metric == Metric::MutualInformation) {
        const CMat span = conv * priorSqrt_;
        const CMat whitened = noiseFactor_.solve(span);
        CMat capacity = symmetrize(span.adjoint() * whitened);
        capacity += CMat::Identity(prior_.cells(), prior_.cells());
        return logdet_hpd(capacity);
    }
    CMat received = dist_.covariance;
    const CMat span = conv * priorSqrt_;
    received.selfadjointView<Eigen::Lower>().rankUpdate(span);
    received = CMat(received.selfadjointView<Eigen::Lower>());
    Eigen::LLT<CMat> receivedFactor(received);
    if (receivedFactor.info() != Eigen::Success) {
        throw std::runtime_error("objective: received covariance is degenerate");
    }
    const CMat cross = conv * prior_.covariance;
    return (cross.adjoint() * receivedFactor.solve(cross)).real().trace();
}

QuadraticMinorizer mi_minorizer(const Waveform& anchor, const TargetPrior& prior,
                                const DisturbanceModel& dist) {
    MinorizerBuilder builder(prior, dist, anchor.length());
    return builder.mutual_information(anchor);
}

QuadraticMinorizer mmse_minorizer(const Waveform& anchor, const TargetPrior& prior,
                                  const DisturbanceModel& dist) {
    MinorizerBuilder builder(prior, dist, anchor.length());
    return builder.mmse(anchor);
}

}  // namespace rangewave
