// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Criteria run on the stock experiment scenario (L = 100 codes, P = 10 cells,
// energy L, mean-5 unit-variance prior, barrage jamming 1000/1 on [0.1, 0.3],
// eps = 1e-4, chirp start) unless a criterion states otherwise.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "rangewave/config.hpp"
#include "rangewave/figures.hpp"
#include "rangewave/rng.hpp"
#include "rangewave/verify.hpp"
#include "parallel.hpp"
#include "test_support.hpp"

using namespace rangewave;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& label,
            const std::string& detail) {
    std::printf("[%s] criterion %2d: %s  --  %s\n", pass ? "PASS" : "FAIL", criterion,
                label.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

ScenarioConfig stock(Metric metric, const std::string& constraintType) {
    ScenarioConfig cfg;
    cfg.metric = metric;
    cfg.constraintType = constraintType;
    return cfg;
}

RunReport run(const ScenarioConfig& cfg) {
    return design(cfg.to_problem(), cfg.tolerances, cfg.eps, cfg.maxOuterIters);
}

struct StockRuns {
    RunReport cmMi, cmMmse, energyMi, energyMmse;
};

StockRuns run_stock_quartet() {
    StockRuns runs;
    std::vector<ScenarioConfig> cfgs = {
        stock(Metric::MutualInformation, "papr"),
        stock(Metric::Mmse, "papr"),
        stock(Metric::MutualInformation, "energy"),
        stock(Metric::Mmse, "energy"),
    };
    std::vector<RunReport> out(cfgs.size());
    parallel_for(static_cast<int>(cfgs.size()),
                 [&](int i) { out[i] = run(cfgs[i]); });
    runs.cmMi = out[0];
    runs.cmMmse = out[1];
    runs.energyMi = out[2];
    runs.energyMmse = out[3];
    return runs;
}

double esd_notch_margin_db(const Waveform& s, double f1, double f2) {
    const auto spectrum = esd(s, 4096);
    double inSum = 0.0, outSum = 0.0;
    int inCount = 0, outCount = 0;
    for (const auto& p : spectrum) {
        if (p.frequency >= f1 && p.frequency < f2) {
            inSum += p.density;
            ++inCount;
        } else {
            outSum += p.density;
            ++outCount;
        }
    }
    const double inMean = inSum / inCount;
    const double outMean = outSum / outCount;
    return 10.0 * std::log10(outMean / inMean);
}

void criterion_1_2_3(const StockRuns& runs) {
    {
        bool monotone = true;
        double worstElapsed = 0.0;
        for (const RunReport* r :
             {&runs.cmMi, &runs.cmMmse, &runs.energyMi, &runs.energyMmse}) {
            monotone &= r->monotonicityViolations.empty();
            monotone &= r->status == RunStatus::Converged;
            worstElapsed = std::max(worstElapsed, r->trace.back().elapsedSeconds);
        }
        report(1, monotone && worstElapsed <= 300.0,
               "monotone convergence, energy and constant-modulus, both metrics",
               "slowest run " + fmt(worstElapsed) + " s, violations none");
    }
    {
        const double miGap =
            (runs.energyMi.finalObjective - runs.cmMi.finalObjective) /
            runs.energyMi.finalObjective;
        const double mmseGap =
            (runs.energyMmse.finalObjective - runs.cmMmse.finalObjective) /
            runs.energyMmse.finalObjective;
        const bool ordered =
            runs.cmMi.finalObjective <=
                runs.energyMi.finalObjective + 1e-8 * runs.energyMi.finalObjective &&
            runs.cmMmse.finalObjective <=
                runs.energyMmse.finalObjective + 1e-8 * runs.energyMmse.finalObjective;
        report(2, ordered && miGap <= 0.05 && mmseGap <= 0.05,
               "constant-modulus objective within 5% below the energy bound",
               "relative gaps MI " + fmt(miGap) + ", MMSE-complement " + fmt(mmseGap));
    }
    {
        const double miMargin =
            esd_notch_margin_db(runs.cmMi.finalWaveform, 0.1, 0.3);
        const double mmseMargin =
            esd_notch_margin_db(runs.cmMmse.finalWaveform, 0.1, 0.3);
        report(3, miMargin >= 10.0 && mmseMargin >= 10.0,
               "jamming-band spectral notch of at least 10 dB",
               "margins MI " + fmt(miMargin) + " dB, MMSE " + fmt(mmseMargin) + " dB");
    }
}

void criterion_4() {
    constexpr int kRuns = 50;
    bool pass = true;
    std::string detail;
    for (Metric metric : {Metric::MutualInformation, Metric::Mmse}) {
        std::vector<double> values(kRuns);
        parallel_for(kRuns, [&](int i) {
            ScenarioConfig cfg = stock(metric, "papr");
            cfg.initType = "random";
            cfg.initSeed = 1000 + i;
            values[i] = run(cfg).finalObjective;
        });
        std::sort(values.begin(), values.end());
        const double median = 0.5 * (values[kRuns / 2 - 1] + values[kRuns / 2]);
        const double spread = (values.back() - values.front()) / median;
        pass &= spread <= 0.02;
        detail += (metric == Metric::Mmse ? std::string("MMSE ") : std::string("MI ")) +
                  "spread " + fmt(spread) + "  ";
    }
    report(4, pass, "insensitivity to 50 random-phase starts", detail);
}

void criterion_5() {
    bool pass = true;
    std::string detail;
    std::vector<RunReport> out(2);
    std::vector<ScenarioConfig> cfgs = {stock(Metric::MutualInformation, "spectral"),
                                        stock(Metric::Mmse, "spectral")};
    parallel_for(2, [&](int i) { out[i] = run(cfgs[i]); });
    for (int i = 0; i < 2; ++i) {
        const ScenarioConfig& cfg = cfgs[i];
        const RunReport& r = out[i];
        const CMat interference =
            spectral_interference_matrix(cfg.bands, cfg.codeLength);
        const double leak =
            r.finalWaveform.samples.dot(interference * r.finalWaveform.samples).real();
        const double energyError =
            std::abs(r.finalWaveform.energy() - cfg.resolved_energy()) /
            cfg.resolved_energy();
        const double residTol =
            cfg.tolerances.admmResidualTol * std::sqrt(double(cfg.codeLength));
        bool innerOk = true;
        for (std::size_t k = 1; k < r.trace.size(); ++k) {
            innerOk &= r.trace[k].innerConverged;
            innerOk &= r.trace[k].innerPrimalResidual <= residTol;
            innerOk &= r.trace[k].innerDualResidual <= residTol;
        }
        pass &= leak <= cfg.interferenceBudget * (1.0 + 1e-6);
        pass &= energyError <= 1e-8;
        pass &= innerOk;
        pass &= r.status == RunStatus::Converged;
        detail += (i == 0 ? std::string("MI leak ") : std::string("MMSE leak ")) +
                  fmt(leak) + (innerOk ? " (inner ok)  " : " (inner FAIL)  ");
    }
    report(5, pass, "spectral compliance at budget 0.05 with inner residuals in check",
           detail);
}

void criterion_6() {
    std::vector<ScenarioConfig> cfgs(2);
    for (int i = 0; i < 2; ++i) {
        ScenarioConfig cfg =
            stock(i == 0 ? Metric::MutualInformation : Metric::Mmse, "papr");
        cfg.priorMean = Complex(0.0, 0.0);
        cfg.priorVariance = 0.1;
        cfg.disturbanceType = "white";
        cfg.whiteNoisePower = 1.0;
        cfg.eps = 1e-20;
        cfg.maxOuterIters = 60000;
        cfgs[i] = cfg;
    }
    std::vector<RunReport> out(2);
    parallel_for(2, [&](int i) { out[i] = run(cfgs[i]); });

    const TargetPrior prior = uniform_prior(10, Complex(0.0, 0.0), 0.1);
    const ZczBounds bounds = zcz_bounds(prior, 1.0, 100.0);

    const ZczAudit miAudit = zcz_audit(out[0].finalWaveform, prior, 1.0);
    const ZczAudit mmseAudit = zcz_audit(out[1].finalWaveform, prior, 1.0);

    const double miRel = std::abs(miAudit.miGapToBound) / bounds.mi;
    const double mmseRel = std::abs(mmseAudit.mmseGapToBound) / bounds.mmse;

    const bool pass = miAudit.sidelobeDbMax <= -100.0 &&
                      mmseAudit.sidelobeDbMax <= -100.0 && miRel <= 1e-3 &&
                      mmseRel <= 1e-3;
    report(6, pass, "zero-correlation-zone designs reach -100 dB and the bounds",
           "sidelobes MI " + fmt(miAudit.sidelobeDbMax) + " dB / MMSE " +
               fmt(mmseAudit.sidelobeDbMax) + " dB, bound gaps " + fmt(miRel) + " / " +
               fmt(mmseRel));
}

void criterion_7() {
    const PropertyReport a =
        check_energy_monotonicity(random_verify_scenario(10, 3, 424201), 1000);
    const PropertyReport b = check_prop1(random_verify_scenario(8, 3, 424202), 200);
    const PropertyReport c = check_lemma1(1000, 8);
    const PropertyReport d1 = check_nsd_suite(random_verify_scenario(12, 3, 424203), 100);
    VerifyScenario jammed;
    jammed.codeLength = 40;
    jammed.prior = uniform_prior(6, Complex(5.0, 0.0), 1.0);
    jammed.disturbance = jamming_covariance(JammingSpec{}, 45);
    const PropertyReport d2 = check_nsd_suite(jammed, 25);

    const bool pass = a.pass && b.pass && c.pass && d1.pass && d2.pass;
    report(7, pass, "appendix property suites (monotonicity, identities, NSD)",
           "worst slacks " + fmt(a.worstSlack) + ", " + fmt(b.worstSlack) + ", " +
               fmt(c.worstSlack) + ", " + fmt(std::min(d1.worstSlack, d2.worstSlack)));
}

void criterion_8() {
    const PropertyReport a = check_energy_solver_oracle(10, 424204);
    const PropertyReport b = check_papr_solver_oracle(500, 424205);
    const PropertyReport c = check_spectral_reduction(424206);
    report(8, a.pass && b.pass && c.pass,
           "solvers match the independent oracles at desk scale",
           "worst slacks " + fmt(a.worstSlack) + ", " + fmt(b.worstSlack) + ", " +
               fmt(c.worstSlack));
}

void criterion_9() {
    const int length = 12;
    const double energy = 12.0;
    const VerifyScenario scenario = rwtest::gapped_point_scenario(length, 424207);
    const double lambda = scenario.prior.covariance(0, 0).real();

    double worstFormula = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        Rng rng(500 + trial);
        CVec v = rng.complex_normal_vector(length);
        v *= std::sqrt(energy) / v.norm();
        const Waveform s{v};
        const double snr =
            v.dot(scenario.disturbance.covariance.llt().solve(v)).real();
        const double miRef = std::log1p(lambda * snr);
        const double mmseRef = 1.0 / (1.0 / lambda + snr);
        worstFormula = std::max(
            worstFormula,
            std::abs(mutual_information(s, scenario.prior, scenario.disturbance) -
                     miRef) /
                miRef);
        worstFormula = std::max(
            worstFormula,
            std::abs(mmse_value(s, scenario.prior, scenario.disturbance) - mmseRef) /
                mmseRef);
    }

    DesignProblem problem;
    problem.constraint = EnergyConstraint{energy};
    problem.prior = scenario.prior;
    problem.disturbance = scenario.disturbance;
    problem.codeLength = length;
    problem.initial.kind = InitKind::RandomPhase;
    problem.initial.seed = 424208;
    problem.metric = Metric::MutualInformation;
    const CVec miDesign = design(problem, {}, 0.0, 2000).finalWaveform.samples;
    problem.metric = Metric::Mmse;
    const CVec mmseDesign = design(problem, {}, 0.0, 2000).finalWaveform.samples;

    const CMat noiseInverse = scenario.disturbance.covariance.llt().solve(
        CMat::Identity(length, length));
    const HermitianEigen eig = hermitian_eig(symmetrize(noiseInverse));
    const CVec snrDesign = std::sqrt(energy) * eig.vectors.col(length - 1);

    const auto alignedDistance = [&](const CVec& a, const CVec& b) {
        const Complex overlap = b.dot(a);
        const CVec rotated = b * (overlap / std::abs(overlap));
        return (a - rotated).norm() / std::sqrt(energy);
    };
    const double d1 = alignedDistance(miDesign, snrDesign);
    const double d2 = alignedDistance(mmseDesign, snrDesign);
    const double d3 = alignedDistance(miDesign, mmseDesign);

    const bool pass =
        worstFormula <= 1e-10 && d1 <= 1e-6 && d2 <= 1e-6 && d3 <= 1e-6;
    report(9, pass, "point-target closed forms and design coincidence",
           "formula error " + fmt(worstFormula) + ", design distances " + fmt(d1) +
               " / " + fmt(d2) + " / " + fmt(d3));
}

struct SweepPoint {
    double miOfMiDesign, miOfMmseDesign, miOfLfm;
    double mmseOfMiDesign, mmseOfMmseDesign, mmseOfLfm;
    double priorTrace;
};

SweepPoint sweep_point(int length, const std::string& constraintType) {
    ScenarioConfig cfg = stock(Metric::MutualInformation, constraintType);
    cfg.codeLength = length;
    const DesignProblem miProblem = cfg.to_problem();
    const RunReport miRun = design(miProblem, cfg.tolerances, cfg.eps, cfg.maxOuterIters);

    cfg.metric = Metric::Mmse;
    const RunReport mmseRun =
        design(cfg.to_problem(), cfg.tolerances, cfg.eps, cfg.maxOuterIters);

    const Waveform lfm = lfm_waveform(length, double(length));

    SweepPoint point;
    const auto& prior = miProblem.prior;
    const auto& dist = miProblem.disturbance;
    point.miOfMiDesign = mutual_information(miRun.finalWaveform, prior, dist);
    point.miOfMmseDesign = mutual_information(mmseRun.finalWaveform, prior, dist);
    point.miOfLfm = mutual_information(lfm, prior, dist);
    point.mmseOfMiDesign = mmse_value(miRun.finalWaveform, prior, dist);
    point.mmseOfMmseDesign = mmse_value(mmseRun.finalWaveform, prior, dist);
    point.mmseOfLfm = mmse_value(lfm, prior, dist);
    point.priorTrace = prior.covariance.real().trace();
    return point;
}

void criterion_10() {
    // Ordering on the raw metric axes at every length; the 5% cross-metric
    // proximity on the design objectives (MI in nats, and the recovered-power
    // complement the MMSE loop maximizes). The gap on the raw MMSE axis is
    // intrinsic to the differing criteria and reported for reference.
    const std::vector<int> lengths = {25, 50, 75, 100, 125, 150};
    bool pass = true;
    std::string detail;
    for (const std::string constraintType : {std::string("papr"), std::string("spectral")}) {
        std::vector<SweepPoint> points(lengths.size());
        parallel_for(static_cast<int>(lengths.size()), [&](int i) {
            points[i] = sweep_point(lengths[i], constraintType);
        });
        double worstObjectiveGap = 0.0;
        double worstRawMmseGap = 0.0;
        for (std::size_t i = 0; i < lengths.size(); ++i) {
            const SweepPoint& p = points[i];
            pass &= p.miOfMiDesign >= p.miOfMmseDesign * (1.0 - 1e-9);
            pass &= p.miOfMiDesign >= p.miOfLfm * (1.0 + 1e-6);
            pass &= p.mmseOfMmseDesign <= p.mmseOfMiDesign * (1.0 + 1e-9);
            pass &= p.mmseOfMmseDesign <= p.mmseOfLfm * (1.0 - 1e-6);

            const double miGap =
                (p.miOfMiDesign - p.miOfMmseDesign) / p.miOfMiDesign;
            const double feOfMiDesign = p.priorTrace - p.mmseOfMiDesign;
            const double feOfMmseDesign = p.priorTrace - p.mmseOfMmseDesign;
            const double feGap = (feOfMmseDesign - feOfMiDesign) / feOfMmseDesign;
            worstObjectiveGap = std::max({worstObjectiveGap, miGap, feGap});
            worstRawMmseGap = std::max(worstRawMmseGap,
                                       (p.mmseOfMiDesign - p.mmseOfMmseDesign) /
                                           p.mmseOfMmseDesign);
            pass &= miGap <= 0.05;
            pass &= feGap <= 0.05;
        }
        detail += constraintType + ": objective gap " + fmt(worstObjectiveGap) +
                  " (raw-MMSE-axis gap " + fmt(worstRawMmseGap) + ")  ";
    }
    report(10, pass, "code-length sweep ordering and cross-metric proximity", detail);
}

}  // namespace

int main() {
    std::printf("acceptance suite: stock scenario L=100, P=10, jamming 1000/1 on "
                "[0.1,0.3], eps 1e-4\n");
    const StockRuns runs = run_stock_quartet();
    criterion_1_2_3(runs);
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    if (failures == 0) {
        std::printf("all criteria passed\n");
        return 0;
    }
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
}
