#include "rangewave/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rangewave/rng.hpp"

namespace rangewave {

namespace {

std::string slack_details(double slack, double tol, const char* sense) {
    std::ostringstream oss;
    oss << "worst slack " << slack << " (" << sense << " " << tol << ")";
    return oss.str();
}

}  // namespace

VerifyScenario random_verify_scenario(int codeLength, int cells, std::uint64_t seed) {
    Rng rng(seed);
    VerifyScenario scenario;
    scenario.codeLength = codeLength;
    scenario.prior.mean = rng.complex_normal_vector(cells);
    scenario.prior.covariance = rng.random_hpd(cells, 0.25);
    scenario.disturbance.covariance = rng.random_hpd(codeLength + cells - 1, 0.5);
    return scenario;
}

PropertyReport check_energy_monotonicity(const VerifyScenario& scenario, int trials) {
    if (trials < 1) throw std::invalid_argument("check_energy_monotonicity: trials >= 1");
    Rng rng(0x5eedA);
    double worst = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < trials; ++trial) {
        Waveform s{rng.complex_normal_vector(scenario.codeLength)};
        const double alpha = rng.uniform(1.0 + 1e-6, 10.0);
        Waveform scaled{alpha * s.samples};

        const double miBase = mutual_information(s, scenario.prior, scenario.disturbance);
        const double miScaled =
            mutual_information(scaled, scenario.prior, scenario.disturbance);
        const double mmseBase = mmse_value(s, scenario.prior, scenario.disturbance);
        const double mmseScaled =
            mmse_value(scaled, scenario.prior, scenario.disturbance);

        worst = std::min({worst, miScaled - miBase, mmseBase - mmseScaled});
    }
    PropertyReport report;
    report.name = "energy-monotonicity";
    report.instancesTested = trials;
    report.worstSlack = worst;
    report.pass = worst >= -1e-10;
    report.details = slack_details(worst, -1e-10, ">=");
    return report;
}

CMat dense_shift_stack(int codeLength, int cells) {
    const int padded = codeLength + cells - 1;
    CMat stacked = CMat::Zero(padded * cells, codeLength);
    for (int p = 0; p < cells; ++p) {
        for (int r = 0; r < padded; ++r) {
            for (int c = 0; c < codeLength; ++c) {
                if (r == c + p) stacked(p * padded + r, c) = 1.0;
            }
        }
    }
    return stacked;
}

PropertyReport check_prop1(const VerifyScenario& scenario, int trials) {
    const int length = scenario.codeLength;
    const int cells = scenario.prior.cells();
    if (length > 10 || cells > 4) {
        throw std::invalid_argument("check_prop1: dense oracle limited to L <= 10, P <= 4");
    }
    const int padded = length + cells - 1;
    Rng rng(0x5eedB);
    const CMat stack = dense_shift_stack(length, cells);
    const CMat priorSqrt = hermitian_sqrt(scenario.prior.covariance);
    const Eigen::LLT<CMat> noise(scenario.disturbance.covariance);
    const CMat noiseInverse = noise.solve(CMat::Identity(padded, padded));

    double worst = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < trials; ++trial) {
        const CVec anchorSamples = rng.complex_normal_vector(length);
        const Waveform anchor{anchorSamples};

        // vec(S) = stacked code, exactly.
        const CMat conv = convolution_matrix(anchor, cells);
        const CVec vecConv = Eigen::Map<const CVec>(conv.data(), conv.size());
        const CVec stacked = stack * anchorSamples;
        worst = std::min(worst, -(vecConv - stacked).cwiseAbs().maxCoeff());

        // Dense gradient blocks, independently of the builder. The cross block
        // carries the positive sign forced by tangency (the supporting
        // hyperplane's gradient must equal the objective's at the anchor).
        const CMat received =
            conv * scenario.prior.covariance * conv.adjoint() + scenario.disturbance.covariance;
        const CMat receivedInverse = received.llt().solve(CMat::Identity(padded, padded));
        const CMat couplingBlock = noiseInverse * conv * priorSqrt;        // cross
        const CMat kernelBlock = receivedInverse - noiseInverse;           // quadratic

        const QuadraticMinorizer m =
            mi_minorizer(anchor, scenario.prior, scenario.disturbance);

        // Quadratic / linear coefficients against the dense Kronecker form.
        CMat kron(cells * padded, cells * padded);
        for (int p = 0; p < cells; ++p) {
            for (int q = 0; q < cells; ++q) {
                kron.block(p * padded, q * padded, padded, padded) =
                    std::conj(scenario.prior.covariance(p, q)) * kernelBlock;
            }
        }
        const CMat quadDense = stack.adjoint() * kron * stack;
        const CMat couplingTimesSqrt = couplingBlock * priorSqrt;
        const CVec couplingVec =
            Eigen::Map<const CVec>(couplingTimesSqrt.data(), couplingTimesSqrt.size());
        const CVec linDense = stack.adjoint() * couplingVec;
        worst = std::min(worst, 1e-9 - (quadDense - m.quadratic).cwiseAbs().maxCoeff());
        worst = std::min(worst, 1e-9 - (linDense - m.linear).cwiseAbs().maxCoeff());

        // Full surrogate value against the dense trace expression at a probe.
        const Waveform probe{rng.complex_normal_vector(length)};
        const CMat probeConv = convolution_matrix(probe, cells);
        const double traceForm =
            2.0 * (probeConv * priorSqrt * couplingBlock.adjoint()).trace().real() +
            (kernelBlock * probeConv * scenario.prior.covariance * probeConv.adjoint())
                .trace()
                .real();
        const double surrogateForm = m.evaluate(probe) - m.constant;
        worst = std::min(worst, 1e-9 - std::abs(traceForm - surrogateForm));
    }

    PropertyReport report;
    report.name = "shift-stack-identities";
    report.instancesTested = trials;
    report.worstSlack = worst;
    report.pass = worst >= 0.0;
    report.details = slack_details(worst, 0.0, ">=");
    return report;
}

PropertyReport check_lemma1(int trials, int maxDim) {
    if (maxDim > 8) throw std::invalid_argument("check_lemma1: maxDim <= 8");
    Rng rng(0x5eedC);
    double worst = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < trials; ++trial) {
        const int n = 1 + static_cast<int>(rng.uniform() * maxDim);
        const int m = 1 + static_cast<int>(rng.uniform() * maxDim);
        const CMat b = rng.random_hpd(n, 0.2);
        const CMat bk = rng.random_hpd(n, 0.2);
        const CMat a = rng.complex_normal_matrix(n, m);
        const CMat ak = rng.complex_normal_matrix(n, m);

        const CMat bInvA = b.llt().solve(a);
        const CMat bkInvAk = bk.llt().solve(ak);
        const double lhs = (a.adjoint() * bInvA).trace().real();
        const double rhs = 2.0 * (ak.adjoint() * bk.llt().solve(a)).trace().real() -
                           (bkInvAk * bkInvAk.adjoint() * b).trace().real();
        const double slack = lhs - rhs;

        const CMat diff = bInvA - bkInvAk;
        const double quadForm = (diff.adjoint() * b * diff).trace().real();

        worst = std::min({worst, slack, quadForm, 1e-9 - std::abs(quadForm - slack)});
    }
    PropertyReport report;
    report.name = "trace-quotient-minorization";
    report.instancesTested = trials;
    report.worstSlack = worst;
    report.pass = worst >= -1e-9;
    report.details = slack_details(worst, -1e-9, ">=");
    return report;
}

PropertyReport check_nsd(const QuadraticMinorizer& m) {
    const RVec values = hermitian_eig(m.quadratic).values;
    const double norm = values.cwiseAbs().maxCoeff();
    const double slack = 1e-9 * norm - values.maxCoeff();
    PropertyReport report;
    report.name = "surrogate-quadratic-nsd";
    report.instancesTested = 1;
    report.worstSlack = slack;
    report.pass = slack >= 0.0;
    report.details = slack_details(slack, 0.0, ">=");
    return report;
}

PropertyReport check_nsd_suite(const VerifyScenario& scenario, int anchors) {
    Rng rng(0x5eedD);
    MinorizerBuilder builder(scenario.prior, scenario.disturbance, scenario.codeLength);
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < anchors; ++i) {
        const double energy = rng.uniform(0.5, 2.0) * scenario.codeLength;
        Waveform anchor =
            random_phase_waveform(scenario.codeLength, energy, 0x1000 + i);
        worst = std::min(worst, check_nsd(builder.mutual_information(anchor)).worstSlack);
        worst = std::min(worst, check_nsd(builder.mmse(anchor)).worstSlack);
    }
    PropertyReport report;
    report.name = "surrogate-quadratic-nsd-suite";
    report.instancesTested = 2 * anchors;
    report.worstSlack = worst;
    report.pass = worst >= 0.0;
    report.details = slack_details(worst, 0.0, ">=");
    return report;
}

ZczAudit zcz_audit(const Waveform& s, const TargetPrior& diagonalPrior,
                   double noisePower) {
    const int cells = diagonalPrior.cells();
    const ZczBounds bounds = zcz_bounds(diagonalPrior, noisePower, s.energy());
    const DisturbanceModel dist =
        white_disturbance(s.length() + cells - 1, noisePower);

    const CVec correlations = acf(s);
    double sidelobeDb = -300.0;
    for (int p = 1; p < cells && p < s.length(); ++p) {
        const double mag = std::abs(correlations[p]);
        const double db = mag > 0.0 ? 20.0 * std::log10(mag) : -300.0;
        sidelobeDb = std::max(sidelobeDb, std::max(db, -300.0));
    }

    ZczAudit audit;
    audit.sidelobeDbMax = sidelobeDb;
    audit.miGapToBound = bounds.mi - mutual_information(s, diagonalPrior, dist);
    audit.mmseGapToBound = mmse_value(s, diagonalPrior, dist) - bounds.mmse;
    return audit;
}

PropertyReport check_energy_solver_oracle(int trials, std::uint64_t seed) {
    double worst = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < trials; ++trial) {
        const int length = 5 + trial % 4;
        const int cells = 2 + trial % 2;
        const VerifyScenario scenario =
            random_verify_scenario(length, cells, seed + 31 * trial);
        MinorizerBuilder builder(scenario.prior, scenario.disturbance, length);
        const double energy = static_cast<double>(length);
        const Waveform anchor = random_phase_waveform(length, energy, seed + trial);
        const QuadraticMinorizer m = builder.build(
            trial % 2 == 0 ? Metric::MutualInformation : Metric::Mmse, anchor);

        const QpSolution solved = solve_energy(m, energy);
        const CVec oracle =
            oracle_small_qp(m, EnergyConstraint{energy}, 200, seed + 977 * trial);
        const double solvedValue = m.evaluate(solved.s);
        const double oracleValue = m.evaluate(oracle);
        const double scale = std::max(1.0, std::abs(solvedValue));
        // Nothing feasible beats the solver, and the convex oracle agrees.
        worst = std::min(worst, (solvedValue - oracleValue) / scale + 1e-8);
        worst = std::min(worst, 1e-6 - (solvedValue - oracleValue) / scale);
    }
    PropertyReport report;
    report.name = "energy-solver-vs-oracle";
    report.instancesTested = trials;
    report.worstSlack = worst;
    report.pass = worst >= 0.0;
    report.details = slack_details(worst, 0.0, ">=");
    return report;
}

PropertyReport check_papr_solver_oracle(int restarts, std::uint64_t seed) {
    const int trials = 5;
    double worst = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < trials; ++trial) {
        const int length = 8;
        const int cells = 3;
        const VerifyScenario scenario =
            random_verify_scenario(length, cells, seed + 53 * trial);
        MinorizerBuilder builder(scenario.prior, scenario.disturbance, length);
        const double energy = static_cast<double>(length);
        const Waveform anchor = random_phase_waveform(length, energy, seed + trial);
        const QuadraticMinorizer m = builder.build(
            trial % 2 == 0 ? Metric::MutualInformation : Metric::Mmse, anchor);

        const PaprConstraint constraint{energy, 1.0};
        SolverTolerances tol;
        const QpSolution solved = solve_papr(m, constraint, anchor.samples, tol);
        const CVec oracle = oracle_small_qp(m, ConstraintSpec{constraint}, restarts,
                                            seed + 1237 * trial);
        const double solvedValue = m.evaluate(solved.s);
        const double oracleValue = m.evaluate(oracle);
        const double scale = std::max(std::abs(oracleValue), 1e-12);
        worst = std::min(worst, 5e-3 - (oracleValue - solvedValue) / scale);
    }
    PropertyReport report;
    report.name = "papr-solver-vs-oracle";
    report.instancesTested = trials;
    report.worstSlack = worst;
    report.pass = worst >= 0.0;
    report.details = slack_details(worst, 0.0, ">=");
    return report;
}

PropertyReport check_spectral_reduction(std::uint64_t seed) {
    const int trials = 5;
    double worst = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < trials; ++trial) {
        const int length = 8;
        const int cells = 3;
        const VerifyScenario scenario =
            random_verify_scenario(length, cells, seed + 71 * trial);
        MinorizerBuilder builder(scenario.prior, scenario.disturbance, length);
        const double energy = static_cast<double>(length);
        const Waveform anchor = random_phase_waveform(length, energy, seed + trial);
        const QuadraticMinorizer m = builder.build(
            trial % 2 == 0 ? Metric::MutualInformation : Metric::Mmse, anchor);

        SpectralConstraint constraint;
        constraint.energy = energy;
        constraint.interference =
            spectral_interference_matrix({{{0.6, 0.8, 1.0}}}, length);
        const double topEig =
            hermitian_eig(constraint.interference).values.maxCoeff();
        constraint.budget = 1.01 * energy * topEig;  // never active

        SolverTolerances tol;
        const QpSolution viaAdmm = solve_spectral(m, constraint, anchor.samples, tol);
        const QpSolution viaSphere = solve_energy_sphere(m, energy);
        const double gap = std::abs(m.evaluate(viaAdmm.s) - m.evaluate(viaSphere.s));
        const double scale = std::max(1.0, std::abs(m.evaluate(viaSphere.s)));
        worst = std::min(worst, 1e-6 - gap / scale);
    }
    PropertyReport report;
    report.name = "spectral-inactive-budget-reduction";
    report.instancesTested = trials;
    report.worstSlack = worst;
    report.pass = worst >= 0.0;
    report.details = slack_details(worst, 0.0, ">=");
    return report;
}

PropertyReport check_zcz_attainment() {
    const int length = 16;
    const int cells = 4;
    TargetPrior prior = uniform_prior(cells, Complex(0.0, 0.0), 0.1);
    CVec samples = CVec::Zero(length);
    samples[0] = std::sqrt(static_cast<double>(length));
    const Waveform impulse{samples};

    const ZczAudit audit = zcz_audit(impulse, prior, 1.0);
    const double worst = std::min({1e-8 - std::abs(audit.miGapToBound),
                                   1e-8 - std::abs(audit.mmseGapToBound),
                                   -290.0 - audit.sidelobeDbMax});
    PropertyReport report;
    report.name = "zcz-bound-attainment";
    report.instancesTested = 1;
    report.worstSlack = worst;
    report.pass = worst >= 0.0;
    report.details = slack_details(worst, 0.0, ">=");
    return report;
}

PropertyReport check_zcz_lfm_gap() {
    const int length = 100;
    const int cells = 10;
    TargetPrior prior = uniform_prior(cells, Complex(0.0, 0.0), 0.1);
    const Waveform lfm = lfm_waveform(length, static_cast<double>(length));
    const ZczAudit audit = zcz_audit(lfm, prior, 1.0);
    const double worst = std::min(audit.miGapToBound, audit.mmseGapToBound);
    PropertyReport report;
    report.name = "zcz-lfm-strict-gap";
    report.instancesTested = 1;
    report.worstSlack = worst;
    report.pass = worst > 0.0;
    report.details = slack_details(worst, 0.0, ">");
    return report;
}

CVec oracle_small_qp(const QuadraticMinorizer& m, const ConstraintSpec& spec,
                     int restarts, std::uint64_t seed) {
    const int length = static_cast<int>(m.linear.size());
    const double energy = constraint_energy(spec);
    const double quadScale =
        hermitian_eig(m.quadratic).values.cwiseAbs().maxCoeff();

    CVec best;
    double bestValue = -std::numeric_limits<double>::infinity();
    for (int r = 0; r < restarts; ++r) {
        Rng rng(seed + 7919 * static_cast<std::uint64_t>(r));
        CVec point = rng.complex_normal_vector(length);
        point *= std::sqrt(energy) / point.norm();
        point = project_feasible(point, spec);
        double value = m.evaluate(point);

        double step = 0.5 / std::max(quadScale, 1e-8);
        for (int iter = 0; iter < 2000; ++iter) {
            const CVec gradient = m.linear + m.quadratic * point;
            bool advanced = false;
            double tryStep = step;
            for (int bt = 0; bt < 40; ++bt) {
                const CVec candidate =
                    project_feasible(point + tryStep * gradient, spec);
                const double candidateValue = m.evaluate(candidate);
                if (candidateValue > value) {
                    point = candidate;
                    value = candidateValue;
                    step = tryStep * 1.3;
                    advanced = true;
                    break;
                }
                tryStep *= 0.5;
            }
            if (!advanced) break;
        }
        if (value > bestValue) {
            bestValue = value;
            best = point;
        }
    }
    return best;
}

}  // namespace rangewave
