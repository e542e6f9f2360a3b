#pragma once

#include "rangewave/model.hpp"

namespace rangewave {

enum class Metric { MutualInformation, Mmse };

/// Quadratic surrogate g(s) = constant + 2 Re(s^H linear) + s^H quadratic s
/// tangent to the design objective at the anchor and nowhere above it.
/// The quadratic term is Hermitian negative semi-definite.
struct QuadraticMinorizer {
    CMat quadratic;   // L x L
    CVec linear;      // L
    double constant = 0.0;
    Metric metric = Metric::MutualInformation;
    CVec anchor;

    double evaluate(const CVec& s) const;
    double evaluate(const Waveform& s) const { return evaluate(s.samples); }
};

/// Implicit stack of the P shifted copies of a length-L code: forward(s) is
/// vec(convolution_matrix(s, P)) and adjoint is its true adjoint. Applied by
/// shift-and-add; the (L0*P) x L selection matrix is never materialized.
struct ShiftStackOperator {
    int length = 0;  // L
    int cells = 0;   // P

    int paddedLength() const { return length + cells - 1; }
    int stackedSize() const { return paddedLength() * cells; }

    CVec forward(const CVec& s) const;
    CVec adjoint(const CVec& v) const;
};

/// Contraction of priorCov^* (x) kernel through the shift stack: the L x L
/// matrix with entry (l, l') = sum_{p,q} conj(priorCov(p,q)) *
/// kernel(p-1+l, q-1+l'). O(L^2 P^2); Hermitian whenever kernel is.
CMat gram_contract(const CMat& priorCov, const CMat& kernel);

/// gram_contract specialized to a rank-P kernel factor (kernel = span span^H,
/// span L0 x P): returns the PSD contraction as one Gram product, same
/// O(L^2 P^2) flop count but a single dense multiply.
CMat gram_contract_factored(const CMat& priorCov, const CMat& span);

/// Builds surrogates for one scenario. The disturbance factorization and the
/// prior square root are computed once here and reused across anchors.
class MinorizerBuilder {
public:
    MinorizerBuilder(TargetPrior prior, DisturbanceModel dist, int codeLength);

    QuadraticMinorizer mutual_information(const Waveform& anchor) const;
    QuadraticMinorizer mmse(const Waveform& anchor) const;
    QuadraticMinorizer build(Metric metric, const Waveform& anchor) const;

    const TargetPrior& prior() const { return prior_; }
    const DisturbanceModel& disturbance() const { return dist_; }
    const CMat& priorSqrt() const { return priorSqrt_; }
    const ShiftStackOperator& shiftStack() const { return op_; }

    /// Design objective at s for the given metric (MI in nats, or the MMSE
    /// complement tr(R_h) - MMSE which the MM loop maximizes).
    double objective(Metric metric, const Waveform& s) const;

private:
    TargetPrior prior_;
    DisturbanceModel dist_;
    ShiftStackOperator op_;
    CMat priorSqrt_;               // R_h^{1/2}
    Eigen::LLT<CMat> noiseFactor_; // Cholesky of R_n
};

/// One-shot conveniences; prefer MinorizerBuilder in iterative loops.
QuadraticMinorizer mi_minorizer(const Waveform& anchor, const TargetPrior& prior,
                                const DisturbanceModel& dist);
QuadraticMinorizer mmse_minorizer(const Waveform& anchor, const TargetPrior& prior,
                                  const DisturbanceModel& dist);

}  // namespace rangewave
