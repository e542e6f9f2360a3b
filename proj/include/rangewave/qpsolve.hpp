#pragma once

#include <variant>

#include "rangewave/minorize.hpp"

namespace rangewave {

struct EnergyConstraint {
    double energy = 0.0;  // e_t, s^H s <= energy
};

struct PaprConstraint {
    double energy = 0.0;
    double maxPapr = 1.0;  // rho in [1, L]; rho = 1 is constant modulus
};

struct SpectralConstraint {
    double energy = 0.0;
    CMat interference;     // R_I, Hermitian PSD L x L
    double budget = 0.0;   // E_I, s^H R_I s <= budget
};

using ConstraintSpec = std::variant<EnergyConstraint, PaprConstraint, SpectralConstraint>;

double constraint_energy(const ConstraintSpec& spec);

/// Parameter invariants, including nonemptiness of the spectral set
/// (energy * min eig(R_I) <= budget). Throws std::invalid_argument.
void validate_constraint(const ConstraintSpec& spec, int codeLength);

/// Worst relative violation across the member constraints (0 when feasible).
double constraint_residual(const CVec& s, const ConstraintSpec& spec);

bool is_feasible(const CVec& s, const ConstraintSpec& spec, double tol = 1e-8);

/// Maps an arbitrary code onto the feasible set (nearest point for energy and
/// PAPR; sphere/ellipsoid blend for spectral).
CVec project_feasible(const CVec& s, const ConstraintSpec& spec);

struct SolverTolerances {
    double secularTol = 1e-13;       // relative residual of the multiplier equation
    int innerMaxIters = 500;         // PAPR inner MM
    double innerRelTol = 1e-6;       // PAPR inner MM objective change
    double admmPenalty = 1.0;        // quadratic penalty weight
    double admmResidualTol = 1e-6;   // scaled by sqrt(L) inside solve_spectral
    int admmMaxIters = 5000;

    void validate() const;
};

/// Root of phi(mu) = sum_i weights_i / (mu - eigvals_i)^2 = target on the
/// decreasing branch right of both lowerBracket and the largest pole with
/// positive weight. Safeguarded Newton on 1/sqrt(phi); the returned mu
/// satisfies |phi(mu) - target| <= tol * target. Throws std::runtime_error
/// when no such root exists.
double secular_solve(const RVec& eigvals, const RVec& weights, double target,
                     double lowerBracket, double tol = 1e-13);

struct QpSolution {
    CVec s;
    bool degenerate = false;   // zero linear term: any feasible point optimal
    bool converged = true;     // inner iteration hit its tolerance
    int innerIterations = 0;
    double primalResidual = 0.0;  // spectral path only
    double dualResidual = 0.0;    // spectral path only
};

/// Exact maximizer of the surrogate over the energy ball (the subproblem is
/// convex): interior stationary point when it fits, otherwise the boundary
/// KKT solution through the secular equation.
QpSolution solve_energy(const QuadraticMinorizer& m, double energy);

/// Exact extremizers of s^H Q s + 2 Re(s^H b) on the sphere s^H s = energy,
/// given the eigendecomposition of Hermitian Q. Candidate multipliers on both
/// sides of the spectrum are enumerated and the best feasible one returned;
/// the degenerate (hard) case is completed with an eigenvector component.
CVec sphere_min_quadratic(const HermitianEigen& eig, const CVec& b, double energy,
                          double secularTol = 1e-13);

/// Energy solver restricted to the sphere s^H s = energy (equality form used
/// by the splitting method's s-update and the inactive-budget reduction).
QpSolution solve_energy_sphere(const QuadraticMinorizer& m, double energy);

/// Maximizer of 2 Re(s^H t) over {s^H s = energy, PAPR(s) <= maxPapr}; equals
/// the Euclidean projection of t onto that set. Closed form for maxPapr = 1
/// and maxPapr >= L; clipped scaling with a breakpoint search in between.
CVec papr_project(const CVec& t, double energy, double maxPapr);

/// Inner minorize-maximize loop for the PAPR-constrained subproblem
/// (linearize the quadratic with the smallest-eigenvalue shift, project,
/// repeat). The inner objective never decreases.
QpSolution solve_papr(const QuadraticMinorizer& m, const PaprConstraint& spec,
                      const CVec& init, const SolverTolerances& tol);

/// Precomputed interference eigensystem, reusable across outer iterations.
struct SpectralCache {
    HermitianEigen interferenceEig;

    static SpectralCache build(const SpectralConstraint& spec);
};

/// Splitting (ADMM) solver for the spectrally constrained subproblem:
/// sphere-constrained s-update, interference-ellipsoid u-update, dual ascent.
/// Stops when primal and dual residual norms fall below
/// admmResidualTol * sqrt(L); the returned code is polished to exact
/// feasibility.
QpSolution solve_spectral(const QuadraticMinorizer& m, const SpectralConstraint& spec,
                          const CVec& init, const SolverTolerances& tol,
                          const SpectralCache* cache = nullptr);

}  // namespace rangewave
