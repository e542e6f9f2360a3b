#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"

using namespace rangewave;

namespace {

QuadraticMinorizer make_surrogate(int length, Metric metric, std::uint64_t seed) {
    const auto scenario = rwtest::small_scenario(length, 3, seed);
    MinorizerBuilder builder(scenario.prior, scenario.disturbance, length);
    const Waveform anchor =
        rwtest::random_sphere_code(length, double(length), seed + 1);
    return builder.build(metric, anchor);
}

}  // namespace

TEST_CASE("secular equation closed cases") {
    RVec eigvals(1), weights(1);
    eigvals << 0.0;
    weights << 4.0;
    CHECK(secular_solve(eigvals, weights, 1.0, 0.0) == doctest::Approx(2.0));

    RVec eig2(2), w2(2);
    eig2 << 0.0, 0.0;
    w2 << 1.0, 1.0;
    CHECK(secular_solve(eig2, w2, 8.0, 0.0) == doctest::Approx(0.5));
}

TEST_CASE("secular residual on random instances") {
    Rng rng(20);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform() * 6);
        RVec eigvals(n), weights(n);
        for (int i = 0; i < n; ++i) {
            eigvals[i] = rng.uniform(-5.0, 2.0);
            weights[i] = rng.uniform(0.01, 3.0);
        }
        const double target = rng.uniform(0.05, 50.0);
        const double mu = secular_solve(eigvals, weights, target, eigvals.maxCoeff());
        double value = 0.0;
        for (int i = 0; i < n; ++i) {
            value += weights[i] / ((mu - eigvals[i]) * (mu - eigvals[i]));
        }
        CHECK(std::abs(value - target) / target <= 1e-12);
    }
}

TEST_CASE("secular failure modes") {
    RVec eigvals(2), weights(2);
    eigvals << -1.0, -2.0;
    weights << 0.0, 0.0;
    CHECK_THROWS_AS(secular_solve(eigvals, weights, 1.0, 0.0), std::runtime_error);

    weights << 1e-4, 0.0;
    // phi(10) tiny < target and decreasing: no root above the bracket.
    CHECK_THROWS_AS(secular_solve(eigvals, weights, 1.0, 10.0), std::runtime_error);
}

TEST_CASE("ball-constrained solver closed cases") {
    const int length = 5;
    QuadraticMinorizer m;
    m.quadratic = -CMat::Identity(length, length);
    Rng rng(21);
    const CVec a = rng.complex_normal_vector(length);

    SUBCASE("interior optimum") {
        m.linear = 0.1 * a / a.norm();
        const QpSolution sol = solve_energy(m, 1.0);
        CHECK(!sol.degenerate);
        CHECK((sol.s - m.linear).norm() < 1e-12);
    }

    SUBCASE("boundary optimum") {
        m.linear = 3.0 * a / a.norm();
        const QpSolution sol = solve_energy(m, 1.0);
        const CVec expected = m.linear / m.linear.norm();
        CHECK((sol.s - expected).norm() < 1e-10);
        CHECK(sol.s.squaredNorm() == doctest::Approx(1.0).epsilon(1e-10));
    }

    SUBCASE("zero linear term is degenerate") {
        m.linear = CVec::Zero(length);
        const QpSolution sol = solve_energy(m, 1.0);
        CHECK(sol.degenerate);
        CHECK(sol.s.norm() == 0.0);
    }
}

TEST_CASE("ball-constrained solver beats random feasible points") {
    for (int instance = 0; instance < 4; ++instance) {
        const QuadraticMinorizer m = make_surrogate(
            6, instance % 2 ? Metric::Mmse : Metric::MutualInformation, 22 + instance);
        const double energy = 6.0;
        const QpSolution sol = solve_energy(m, energy);
        const double best = m.evaluate(sol.s);
        Rng rng(23 + instance);
        for (int trial = 0; trial < 100; ++trial) {
            CVec probe = rng.complex_normal_vector(6);
            probe *= std::sqrt(energy * rng.uniform(0.0, 1.0)) / probe.norm();
            CHECK(m.evaluate(probe) <= best + 1e-8);
        }
        CHECK(sol.s.squaredNorm() <= energy * (1.0 + 1e-10));
    }
}

TEST_CASE("sphere extremizer handles the degenerate direction") {
    // Quadratic with the linear term orthogonal to the bottom eigenspace.
    HermitianEigen eig;
    eig.values = RVec(2);
    eig.values << 1.0, 2.0;
    eig.vectors = CMat::Identity(2, 2);
    CVec b(2);
    b << 0.0, 0.3;
    const double energy = 4.0;
    const CVec s = sphere_min_quadratic(eig, b, energy);
    CHECK(s.squaredNorm() == doctest::Approx(energy).epsilon(1e-12));

    const auto objective = [&](const CVec& x) {
        return (x.dot(eig.vectors * eig.values.asDiagonal() *
                      eig.vectors.adjoint() * x) +
                2.0 * x.dot(b))
            .real();
    };
    const double achieved = objective(s);
    Rng rng(24);
    for (int trial = 0; trial < 20000; ++trial) {
        CVec probe = rng.complex_normal_vector(2);
        probe *= std::sqrt(energy) / probe.norm();
        CHECK(achieved <= objective(probe) + 1e-9);
    }
}

TEST_CASE("papr projection") {
    SUBCASE("constant modulus keeps only the phases") {
        CVec t(2);
        t << Complex(1.0, 1.0), Complex(-2.0, 0.0);
        const CVec s = papr_project(t, 2.0, 1.0);
        CHECK(std::abs(s[0] - std::exp(Complex(0.0, rwtest::kPi / 4.0))) < 1e-12);
        CHECK(std::abs(s[1] - Complex(-1.0, 0.0)) < 1e-12);
    }

    SUBCASE("loose cap reduces to the sphere projection") {
        Rng rng(25);
        const CVec t = rng.complex_normal_vector(6);
        const CVec s = papr_project(t, 3.0, 6.0);
        CHECK((s - std::sqrt(3.0) * t / t.norm()).norm() < 1e-12);
    }

    SUBCASE("intermediate cap: clipped-or-proportional pattern, beats sampling") {
        Rng rng(26);
        const int length = 8;
        const double energy = 8.0;
        const double rho = 2.0;
        const CVec t = rng.complex_normal_vector(length);
        const CVec s = papr_project(t, energy, rho);

        CHECK(s.squaredNorm() == doctest::Approx(energy).epsilon(1e-10));
        CHECK(papr(Waveform{s}) <= rho + 1e-10);

        const double cap = std::sqrt(rho * energy / length);
        double gain = -1.0;
        for (int l = 0; l < length; ++l) {
            const double amp = std::abs(s[l]);
            CHECK(std::abs(std::arg(s[l]) - std::arg(t[l])) < 1e-10);
            if (amp < cap - 1e-9) {
                const double localGain = amp / std::abs(t[l]);
                if (gain < 0.0) gain = localGain;
                CHECK(localGain == doctest::Approx(gain).epsilon(1e-9));
            }
        }

        const double achieved = (s.dot(t)).real();
        for (int trial = 0; trial < 100000; ++trial) {
            CVec probe = rng.complex_normal_vector(length);
            probe = papr_project(probe, energy, rho);
            CHECK((probe.dot(t)).real() <= achieved + 1e-9);
        }
    }

    SUBCASE("feasibility on adversarial inputs") {
        Rng rng(27);
        for (int trial = 0; trial < 200; ++trial) {
            const int length = 2 + static_cast<int>(rng.uniform() * 10);
            CVec t = rng.complex_normal_vector(length);
            if (trial % 3 == 0) t[trial % length] = 0.0;
            if (trial % 7 == 0) t.head(length / 2).setZero();
            const double energy = rng.uniform(0.5, 10.0);
            const double rho = rng.uniform(1.0, double(length));
            const CVec s = papr_project(t, energy, rho);
            CHECK(std::abs(s.squaredNorm() - energy) <= 1e-10 * energy);
            CHECK(papr(Waveform{s}) <= rho + 1e-10);
        }
    }

    SUBCASE("zero input returns a flat real code") {
        const CVec s = papr_project(CVec(CVec::Zero(4)), 4.0, 1.0);
        for (int l = 0; l < 4; ++l) {
            CHECK(s[l] == Complex(1.0, 0.0));
        }
    }
}

TEST_CASE("papr inner solver") {
    SUBCASE("flat quadratic converges immediately") {
        const int length = 6;
        QuadraticMinorizer m;
        m.quadratic = CMat::Zero(length, length);
        Rng rng(28);
        m.linear = rng.complex_normal_vector(length);
        m.anchor = papr_project(rng.complex_normal_vector(length), 6.0, 1.0);
        const PaprConstraint spec{6.0, 1.0};
        SolverTolerances tol;
        const QpSolution sol = solve_papr(m, spec, m.anchor, tol);
        CHECK(sol.converged);
        CHECK(sol.innerIterations <= 2);
        CHECK((sol.s - papr_project(m.linear, 6.0, 1.0)).norm() < 1e-12);
    }

    SUBCASE("ascends from the anchor and stays feasible") {
        for (int instance = 0; instance < 4; ++instance) {
            const QuadraticMinorizer m = make_surrogate(
                8, instance % 2 ? Metric::Mmse : Metric::MutualInformation,
                30 + instance);
            const PaprConstraint spec{8.0, instance < 2 ? 1.0 : 2.5};
            const CVec init = papr_project(m.anchor, spec.energy, spec.maxPapr);
            SolverTolerances tol;
            const QpSolution sol = solve_papr(m, spec, init, tol);
            CHECK(m.evaluate(sol.s) >= m.evaluate(init) - 1e-9);
            CHECK(is_feasible(sol.s, ConstraintSpec{spec}));
        }
    }

    SUBCASE("infeasible start is rejected") {
        const QuadraticMinorizer m = make_surrogate(6, Metric::MutualInformation, 35);
        SolverTolerances tol;
        CHECK_THROWS_AS(
            solve_papr(m, PaprConstraint{6.0, 1.0}, CVec(CVec::Zero(6)), tol),
            std::invalid_argument);
    }
}

TEST_CASE("spectral splitting solver") {
    const int length = 10;
    const double energy = 10.0;
    SpectralConstraint spec;
    spec.energy = energy;
    spec.interference = spectral_interference_matrix({{{0.6, 0.75, 1.0}}}, length);
    spec.budget = 0.05;

    const QuadraticMinorizer m = make_surrogate(length, Metric::MutualInformation, 36);
    SolverTolerances tol;
    const CVec init =
        std::sqrt(energy) * hermitian_eig(spec.interference).vectors.col(0);

    const QpSolution sol = solve_spectral(m, spec, init, tol);
    CHECK(sol.converged);
    CHECK(sol.primalResidual <= tol.admmResidualTol * std::sqrt(double(length)));
    CHECK(sol.dualResidual <= tol.admmResidualTol * std::sqrt(double(length)));
    CHECK(std::abs(sol.s.squaredNorm() - energy) <= 1e-8 * energy);
    const double leak = sol.s.dot(spec.interference * sol.s).real();
    CHECK(leak <= spec.budget * (1.0 + 1e-8));
    CHECK(m.evaluate(sol.s) >= m.evaluate(init) - 1e-9);

    SUBCASE("empty feasible set is rejected") {
        SpectralConstraint impossible = spec;
        impossible.interference = CMat::Identity(length, length);
        impossible.budget = 1.0;  // energy * min eig = 10 > 1
        CHECK_THROWS_AS(solve_spectral(m, impossible, init, tol),
                        std::invalid_argument);
    }
}

TEST_CASE("constraint plumbing") {
    const ConstraintSpec energy = EnergyConstraint{4.0};
    const ConstraintSpec papr = PaprConstraint{4.0, 1.5};

    CHECK(constraint_energy(energy) == 4.0);
    CHECK(constraint_energy(papr) == 4.0);

    CHECK_THROWS_AS(validate_constraint(EnergyConstraint{-1.0}, 4),
                    std::invalid_argument);
    CHECK_THROWS_AS(validate_constraint(PaprConstraint{1.0, 9.0}, 4),
                    std::invalid_argument);

    Rng rng(37);
    const CVec raw = rng.complex_normal_vector(4);
    const CVec projected = project_feasible(raw, papr);
    CHECK(is_feasible(projected, papr));
    CHECK(constraint_residual(projected, papr) <= 1e-10);

    const CVec inBall = project_feasible(0.1 * raw / raw.norm(), energy);
    CHECK(is_feasible(inBall, energy));
}
