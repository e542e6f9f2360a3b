#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rangewave/qpsolve.hpp"

namespace rangewave {

enum class InitKind { Auto, Lfm, RandomPhase, MinEigenvector };

/// Starting point: a named generator, or an explicit code (projected to the
/// feasible set if supplied infeasible, with a note in the report). Auto is
/// the chirp for energy/PAPR constraints and the scaled bottom eigenvector of
/// the interference matrix for spectral ones.
struct InitialPoint {
    InitKind kind = InitKind::Auto;
    std::uint64_t seed = 0;
    std::optional<Waveform> waveform;
};

struct DesignProblem {
    Metric metric = Metric::MutualInformation;
    ConstraintSpec constraint;
    TargetPrior prior;
    DisturbanceModel disturbance;
    int codeLength = 0;
    InitialPoint initial;
};

enum class RunStatus { Converged, MaxIters, Degenerate };

const char* to_string(RunStatus status);

struct IterationRecord {
    int iteration = 0;
    double objective = 0.0;       // MI in nats, or the maximized MMSE complement
    double elapsedSeconds = 0.0;  // wall clock since the run started
    double constraintResidual = 0.0;
    double innerPrimalResidual = 0.0;  // spectral path
    double innerDualResidual = 0.0;    // spectral path
    bool innerConverged = true;
};

struct RunReport {
    Metric metric = Metric::MutualInformation;
    std::vector<IterationRecord> trace;  // entry 0 is the starting point
    Waveform finalWaveform;
    RunStatus status = RunStatus::Converged;
    double finalObjective = 0.0;
    std::optional<double> finalMmse;  // tr(R_h) - objective, MMSE metric only
    std::vector<int> monotonicityViolations;
    bool initialProjected = false;
    std::vector<std::string> notes;
    std::vector<Waveform> iterates;  // populated when requested

    int iterations() const { return static_cast<int>(trace.size()) - 1; }
};

/// Design objective: mutual information, or for the MMSE metric the
/// complement tr(R_h S^H (S R_h S^H + R_n)^{-1} S R_h) that the loop
/// maximizes (equal to tr(R_h) minus the MMSE).
double objective(Metric metric, const Waveform& s, const TargetPrior& prior,
                 const DisturbanceModel& dist);

/// Resolves the problem's starting point and makes it feasible.
/// projected, when given, reports whether an explicit code needed projection.
Waveform make_initial(const DesignProblem& problem, bool* projected = nullptr);

/// Outer minorize-maximize loop: surrogate at the current iterate, constraint
/// dispatch, repeat until the relative objective change drops to eps or the
/// iteration cap. The recorded objective trace is non-decreasing (violations,
/// expected only on the spectral path, are listed in the report).
RunReport design(const DesignProblem& problem, const SolverTolerances& tol = {},
                 double eps = 1e-4, int maxOuterIters = 10000,
                 bool storeIterates = false);

/// Indices k with f_{k+1} < f_k - 1e-8 |f_k| in the report's trace.
std::vector<int> run_monotonicity_audit(const RunReport& report);

}  // namespace rangewave
