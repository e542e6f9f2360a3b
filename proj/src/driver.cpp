#include "rangewave/driver.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace rangewave {

const char* to_string(RunStatus status) {
    switch (status) {
        case RunStatus::Converged: return "converged";
        case RunStatus::MaxIters: return "max-iterations";
        case RunStatus::Degenerate: return "degenerate";
    }
    return "unknown";
}

double objective(Metric metric, const Waveform& s, const TargetPrior& prior,
                 const DisturbanceModel& dist) {
    if (metric == Metric::MutualInformation) {
        return mutual_information(s, prior, dist);
    }
    return prior.covariance.real().trace() -
           mmse_value(s, prior, dist, MmseForm::Subtraction);
}

Waveform make_initial(const DesignProblem& problem, bool* projected) {
    if (projected) *projected = false;
    const double energy = constraint_energy(problem.constraint);

    if (problem.initial.waveform.has_value()) {
        Waveform given = *problem.initial.waveform;
        given.validate();
        if (given.length() != problem.codeLength) {
            throw std::invalid_argument("make_initial: supplied waveform has wrong length");
        }
        if (!is_feasible(given.samples, problem.constraint)) {
            given.samples = project_feasible(given.samples, problem.constraint);
            if (projected) *projected = true;
        }
        return given;
    }

    InitKind kind = problem.initial.kind;
    if (kind == InitKind::Auto) {
        kind = std::holds_alternative<SpectralConstraint>(problem.constraint)
                   ? InitKind::MinEigenvector
                   : InitKind::Lfm;
    }
    switch (kind) {
        case InitKind::Auto:
        case InitKind::Lfm: {
            Waveform s = lfm_waveform(problem.codeLength, energy);
            if (!is_feasible(s.samples, problem.constraint)) {
                s.samples = project_feasible(s.samples, problem.constraint);
                if (projected) *projected = true;
            }
            return s;
        }
        case InitKind::RandomPhase: {
            Waveform s = random_phase_waveform(problem.codeLength, energy,
                                               problem.initial.seed);
            if (!is_feasible(s.samples, problem.constraint)) {
                s.samples = project_feasible(s.samples, problem.constraint);
                if (projected) *projected = true;
            }
            return s;
        }
        case InitKind::MinEigenvector: {
            const auto* spectral = std::get_if<SpectralConstraint>(&problem.constraint);
            if (!spectral) {
                throw std::invalid_argument(
                    "make_initial: min-eigenvector start requires a spectral constraint");
            }
            const SpectralCache cache = SpectralCache::build(*spectral);
            Waveform s{std::sqrt(energy) * cache.interferenceEig.vectors.col(0)};
            if (!is_feasible(s.samples, problem.constraint)) {
                s.samples = project_feasible(s.samples, problem.constraint);
                if (projected) *projected = true;
            }
            return s;
        }
    }
    throw std::logic_error("make_initial: unreachable");
}

RunReport design(const DesignProblem& problem, const SolverTolerances& tol,
                 double eps, int maxOuterIters, bool storeIterates) {
    tol.validate();
    validate_constraint(problem.constraint, problem.codeLength);
    if (eps < 0.0) throw std::invalid_argument("design: eps must be >= 0");
    if (maxOuterIters < 1) throw std::invalid_argument("design: maxOuterIters >= 1");

    MinorizerBuilder builder(problem.prior, problem.disturbance, problem.codeLength);
    const SpectralCache* spectralCache = nullptr;
    SpectralCache cacheStorage;
    if (const auto* spectral = std::get_if<SpectralConstraint>(&problem.constraint)) {
        cacheStorage = SpectralCache::build(*spectral);
        spectralCache = &cacheStorage;
    }

    RunReport report;
    report.metric = problem.metric;
    Waveform current = make_initial(problem, &report.initialProjected);
    if (report.initialProjected) {
        report.notes.push_back("initial waveform projected onto the feasible set");
    }

    const auto started = std::chrono::steady_clock::now();
    const auto elapsed = [&]() {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
            .count();
    };

    double value = builder.objective(problem.metric, current);
    report.trace.push_back({0, value, elapsed(),
                            constraint_residual(current.samples, problem.constraint)});
    if (storeIterates) report.iterates.push_back(current);

    report.status = RunStatus::MaxIters;
    for (int k = 1; k <= maxOuterIters; ++k) {
        QuadraticMinorizer surrogate;
        QpSolution solution;
        try {
            surrogate = builder.build(problem.metric, current);
            if (const auto* energy = std::get_if<EnergyConstraint>(&problem.constraint)) {
                solution = solve_energy(surrogate, energy->energy);
            } else if (const auto* papr = std::get_if<PaprConstraint>(&problem.constraint)) {
                solution = solve_papr(surrogate, *papr, current.samples, tol);
            } else {
                const auto& spectral = std::get<SpectralConstraint>(problem.constraint);
                solution = solve_spectral(surrogate, spectral, current.samples, tol,
                                          spectralCache);
            }
        } catch (const std::runtime_error& error) {
            report.status = RunStatus::Degenerate;
            report.notes.push_back(std::string("stopped: ") + error.what());
            break;
        }
        if (solution.degenerate &&
            std::holds_alternative<EnergyConstraint>(problem.constraint)) {
            // Flat surrogate: any feasible point is optimal, keep the anchor.
            report.status = RunStatus::Degenerate;
            report.notes.push_back("stopped: surrogate has no linear term");
            break;
        }

        Waveform next{solution.s};
        const double nextValue = builder.objective(problem.metric, next);
        IterationRecord record;
        record.iteration = k;
        record.objective = nextValue;
        record.elapsedSeconds = elapsed();
        record.constraintResidual = constraint_residual(next.samples, problem.constraint);
        record.innerPrimalResidual = solution.primalResidual;
        record.innerDualResidual = solution.dualResidual;
        record.innerConverged = solution.converged;
        report.trace.push_back(record);
        if (storeIterates) report.iterates.push_back(next);

        const double change = std::abs(nextValue - value);
        current = next;
        value = nextValue;
        if (change <= eps * std::abs(nextValue)) {
            report.status = RunStatus::Converged;
            break;
        }
    }

    report.finalWaveform = current;
    report.finalObjective = value;
    if (problem.metric == Metric::Mmse) {
        report.finalMmse = problem.prior.covariance.real().trace() - value;
    }
    report.monotonicityViolations = run_monotonicity_audit(report);
    return report;
}

std::vector<int> run_monotonicity_audit(const RunReport& report) {
    std::vector<int> violations;
    for (std::size_t i = 1; i < report.trace.size(); ++i) {
        const double prev = report.trace[i - 1].objective;
        const double next = report.trace[i].objective;
        if (next < prev - 1e-8 * std::abs(prev)) {
            violations.push_back(report.trace[i].iteration);
        }
    }
    return violations;
}

}  // namespace rangewave
