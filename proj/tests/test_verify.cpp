#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"

using namespace rangewave;

TEST_CASE("energy monotonicity audit passes") {
    const PropertyReport report =
        check_energy_monotonicity(rwtest::small_scenario(10, 3, 301), 1000);
    CHECK(report.pass);
    CHECK(report.instancesTested == 1000);
    CHECK(report.worstSlack >= -1e-10);
}

TEST_CASE("shift-stack identity audit passes") {
    const PropertyReport report = check_prop1(rwtest::small_scenario(8, 3, 302), 200);
    CHECK(report.pass);
    CHECK_THROWS_AS(check_prop1(rwtest::small_scenario(30, 3, 303), 5),
                    std::invalid_argument);
}

TEST_CASE("trace-quotient inequality audit passes") {
    const PropertyReport report = check_lemma1(1000, 8);
    CHECK(report.pass);
    CHECK(report.worstSlack >= -1e-9);
}

TEST_CASE("surrogate NSD audit passes on random and structured scenarios") {
    CHECK(check_nsd_suite(rwtest::small_scenario(12, 3, 304), 100).pass);

    VerifyScenario jammed;
    jammed.codeLength = 30;
    jammed.prior = uniform_prior(5, Complex(5.0, 0.0), 1.0);
    jammed.disturbance = jamming_covariance(JammingSpec{}, 34);
    CHECK(check_nsd_suite(jammed, 20).pass);
}

TEST_CASE("single-minorizer NSD audit") {
    const auto scenario = rwtest::small_scenario(10, 3, 305);
    const Waveform anchor = rwtest::random_sphere_code(10, 10.0, 306);
    CHECK(check_nsd(mi_minorizer(anchor, scenario.prior, scenario.disturbance)).pass);
    CHECK(check_nsd(mmse_minorizer(anchor, scenario.prior, scenario.disturbance)).pass);
}

TEST_CASE("zcz audit values") {
    SUBCASE("impulse code attains the bounds with silent sidelobes") {
        const PropertyReport report = check_zcz_attainment();
        CHECK(report.pass);
    }

    SUBCASE("chirp leaves strictly positive gaps") {
        const PropertyReport report = check_zcz_lfm_gap();
        CHECK(report.pass);
        CHECK(report.worstSlack > 0.0);
    }

    SUBCASE("audit fields for a hand-built code") {
        TargetPrior prior = uniform_prior(3, Complex(0.0, 0.0), 0.5);
        Waveform impulse = Waveform::zero(9);
        impulse.samples[0] = 3.0;
        const ZczAudit audit = zcz_audit(impulse, prior, 1.0);
        CHECK(audit.sidelobeDbMax == doctest::Approx(-300.0));
        CHECK(std::abs(audit.miGapToBound) < 1e-10);
        CHECK(std::abs(audit.mmseGapToBound) < 1e-10);
    }
}

TEST_CASE("solver oracle audits pass") {
    CHECK(check_energy_solver_oracle(10, 307).pass);
    CHECK(check_papr_solver_oracle(500, 308).pass);
    CHECK(check_spectral_reduction(309).pass);
}

TEST_CASE("projected-gradient oracle finds the convex optimum") {
    const auto scenario = rwtest::small_scenario(6, 2, 310);
    MinorizerBuilder builder(scenario.prior, scenario.disturbance, 6);
    const Waveform anchor = rwtest::random_sphere_code(6, 6.0, 311);
    const QuadraticMinorizer m = builder.mutual_information(anchor);

    const QpSolution exact = solve_energy(m, 6.0);
    const CVec found = oracle_small_qp(m, EnergyConstraint{6.0}, 50);
    CHECK(rwtest::relative_gap(m.evaluate(found), m.evaluate(exact.s)) < 1e-6);
}

TEST_CASE("point-target designs coincide across the three criteria") {
    // P = 1: max MI, min MMSE, and max SNR share the same energy-sphere argmax.
    const int length = 12;
    const double energy = 12.0;
    auto scenario = rwtest::gapped_point_scenario(length, 312);

    DesignProblem problem;
    problem.constraint = EnergyConstraint{energy};
    problem.prior = scenario.prior;
    problem.disturbance = scenario.disturbance;
    problem.codeLength = length;
    problem.initial.kind = InitKind::RandomPhase;
    problem.initial.seed = 313;

    // eps = 0: iterate on a fixed budget so the argument, not just the flat
    // objective, settles.
    problem.metric = Metric::MutualInformation;
    const Waveform miDesign = design(problem, {}, 0.0, 2000).finalWaveform;
    problem.metric = Metric::Mmse;
    const Waveform mmseDesign = design(problem, {}, 0.0, 2000).finalWaveform;

    const CMat noiseInverse =
        scenario.disturbance.covariance.llt().solve(CMat::Identity(length, length));
    const HermitianEigen eig = hermitian_eig(symmetrize(noiseInverse));
    CVec snrDesign = std::sqrt(energy) * eig.vectors.col(length - 1);

    const auto alignedDistance = [&](const CVec& a, const CVec& b) {
        const Complex overlap = b.dot(a);
        const CVec rotated = b * (overlap / std::abs(overlap));
        return (a - rotated).norm() / std::sqrt(energy);
    };
    CHECK(alignedDistance(miDesign.samples, snrDesign) < 1e-6);
    CHECK(alignedDistance(mmseDesign.samples, snrDesign) < 1e-6);
    CHECK(alignedDistance(miDesign.samples, mmseDesign.samples) < 1e-6);
}
