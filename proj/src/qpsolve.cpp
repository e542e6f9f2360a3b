#include "rangewave/qpsolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace rangewave {

namespace {

double clamped_min_eig(const CMat& m) {
    return std::max(hermitian_eig(symmetrize(m)).values.minCoeff(), 0.0);
}

double quad_form(const CVec& s, const CMat& m) { return s.dot(m * s).real(); }

}  // namespace

double constraint_energy(const ConstraintSpec& spec) {
    return std::visit([](const auto& c) { return c.energy; }, spec);
}

void validate_constraint(const ConstraintSpec& spec, int codeLength) {
    if (const auto* energy = std::get_if<EnergyConstraint>(&spec)) {
        if (energy->energy <= 0.0) {
            throw std::invalid_argument("EnergyConstraint: energy must be > 0");
        }
        return;
    }
    if (const auto* papr = std::get_if<PaprConstraint>(&spec)) {
        if (papr->energy <= 0.0) {
            throw std::invalid_argument("PaprConstraint: energy must be > 0");
        }
        if (papr->maxPapr < 1.0 || papr->maxPapr > codeLength) {
            throw std::invalid_argument("PaprConstraint: rho must lie in [1, L]");
        }
        return;
    }
    const auto& spectral = std::get<SpectralConstraint>(spec);
    if (spectral.energy <= 0.0) {
        throw std::invalid_argument("SpectralConstraint: energy must be > 0");
    }
    if (spectral.budget <= 0.0) {
        throw std::invalid_argument("SpectralConstraint: budget must be > 0");
    }
    if (spectral.interference.rows() != codeLength ||
        spectral.interference.cols() != codeLength) {
        throw std::invalid_argument("SpectralConstraint: interference must be L x L");
    }
    if (!is_hermitian(spectral.interference, 1e-10)) {
        throw std::invalid_argument("SpectralConstraint: interference must be Hermitian");
    }
    const double floorInterference = spectral.energy * clamped_min_eig(spectral.interference);
    if (floorInterference > spectral.budget * (1.0 + 1e-9)) {
        throw std::invalid_argument(
            "SpectralConstraint: empty feasible set (energy * min eig exceeds budget)");
    }
}

double constraint_residual(const CVec& s, const ConstraintSpec& spec) {
    const double energyTarget = constraint_energy(spec);
    const double energy = s.squaredNorm();
    if (std::holds_alternative<EnergyConstraint>(spec)) {
        return std::max(0.0, energy - energyTarget) / energyTarget;
    }
    double residual = std::abs(energy - energyTarget) / energyTarget;
    if (const auto* papr = std::get_if<PaprConstraint>(&spec)) {
        if (energy > 0.0) {
            const double peak = s.cwiseAbs2().maxCoeff();
            const double ratio = peak / (energy / static_cast<double>(s.size()));
            residual = std::max(residual, std::max(0.0, ratio - papr->maxPapr));
        }
        return residual;
    }
    const auto& spectral = std::get<SpectralConstraint>(spec);
    const double leak = quad_form(s, spectral.interference);
    residual = std::max(residual, std::max(0.0, leak - spectral.budget) / spectral.budget);
    return residual;
}

bool is_feasible(const CVec& s, const ConstraintSpec& spec, double tol) {
    return constraint_residual(s, spec) <= tol;
}

void SolverTolerances::validate() const {
    if (secularTol <= 0.0 || innerRelTol <= 0.0 || admmPenalty <= 0.0 ||
        admmResidualTol <= 0.0 || innerMaxIters <= 0 || admmMaxIters <= 0) {
        throw std::invalid_argument("SolverTolerances: all entries must be positive");
    }
}

double secular_solve(const RVec& eigvals, const RVec& weights, double target,
                     double lowerBracket, double tol) {
    if (eigvals.size() != weights.size()) {
        throw std::invalid_argument("secular_solve: size mismatch");
    }
    if (target <= 0.0) {
        throw std::invalid_argument("secular_solve: target must be > 0");
    }

    double pole = -std::numeric_limits<double>::infinity();
    bool anyWeight = false;
    for (Eigen::Index i = 0; i < weights.size(); ++i) {
        if (weights[i] < 0.0) {
            throw std::invalid_argument("secular_solve: weights must be >= 0");
        }
        if (weights[i] > 0.0) {
            anyWeight = true;
            pole = std::max(pole, eigvals[i]);
        }
    }
    if (!anyWeight) {
        throw std::runtime_error("secular_solve: no positive weights, target unreachable");
    }

    const auto phi = [&](double mu) {
        double acc = 0.0;
        for (Eigen::Index i = 0; i < weights.size(); ++i) {
            if (weights[i] > 0.0) {
                const double d = mu - eigvals[i];
                if (d == 0.0) return std::numeric_limits<double>::infinity();
                acc += weights[i] / (d * d);
            }
        }
        return acc;
    };
    const auto phiSlope = [&](double mu) {  // sum w_i / (mu - lam_i)^3
        double acc = 0.0;
        for (Eigen::Index i = 0; i < weights.size(); ++i) {
            if (weights[i] > 0.0) {
                const double d = mu - eigvals[i];
                acc += weights[i] / (d * d * d);
            }
        }
        return acc;
    };

    const double scale = std::max(1.0, std::abs(pole));
    double lo;
    if (lowerBracket > pole) {
        lo = lowerBracket;
        if (phi(lo) < target) {
            throw std::runtime_error("secular_solve: no root above the lower bracket");
        }
    } else {
        double delta = 1e-8 * scale;
        lo = pole + delta;
        while (phi(lo) < target) {
            delta *= 0.25;
            lo = pole + delta;
            if (delta < 1e-300) {
                throw std::runtime_error("secular_solve: pole bracketing failed");
            }
        }
    }
    double step = scale;
    double hi = lo;
    while (phi(hi) > target) {
        hi = lo + step;
        step *= 2.0;
        if (step > 1e300) {
            throw std::runtime_error("secular_solve: upper bracketing failed");
        }
    }

    // Newton on 1/sqrt(phi), nearly linear in mu, safeguarded by the bracket.
    const double targetRoot = 1.0 / std::sqrt(target);
    double mu = 0.5 * (lo + hi);
    double best = mu;
    double bestErr = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < 200; ++iter) {
        const double value = phi(mu);
        const double err = std::abs(value - target);
        if (err < bestErr) {
            bestErr = err;
            best = mu;
        }
        if (err <= tol * target) return mu;
        if (value > target) {
            lo = mu;
        } else {
            hi = mu;
        }
        const double g = 1.0 / std::sqrt(value) - targetRoot;
        const double gp = phiSlope(mu) * std::pow(value, -1.5);
        double next = gp > 0.0 ? mu - g / gp : mu;
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        if (next == mu) {
            if (hi - lo <= 8.0 * std::numeric_limits<double>::epsilon() *
                               std::max(std::abs(lo), std::abs(hi))) {
                break;
            }
            next = 0.5 * (lo + hi);
        }
        mu = next;
    }
    return best;
}

QpSolution solve_energy(const QuadraticMinorizer& m, double energy) {
    if (energy <= 0.0) {
        throw std::invalid_argument("solve_energy: energy must be > 0");
    }
    const int length = static_cast<int>(m.linear.size());
    QpSolution out;
    if (m.linear.norm() < 1e-300) {
        out.s = CVec::Zero(length);
        out.degenerate = true;
        return out;
    }

    const HermitianEigen eig = hermitian_eig(m.quadratic);
    const CVec rotated = eig.vectors.adjoint() * m.linear;
    RVec weights = rotated.cwiseAbs2();
    const double weightFloor = 1e-28 * weights.sum();
    for (int i = 0; i < length; ++i) {
        if (weights[i] < weightFloor) weights[i] = 0.0;
    }
    const double eigScale = eig.values.cwiseAbs().maxCoeff();
    const double zeroTol = 1e-12 * std::max(eigScale, 1e-30);

    // mu = 0 branch: stationary point inside the ball. Null-space components
    // of the linear term force the constraint active instead.
    bool nullCoupled = false;
    CVec interior(length);
    for (int i = 0; i < length; ++i) {
        if (std::abs(eig.values[i]) <= zeroTol) {
            interior[i] = 0.0;
            if (std::sqrt(weights[i]) > 1e-14 * m.linear.norm()) nullCoupled = true;
        } else {
            interior[i] = -rotated[i] / eig.values[i];
        }
    }
    if (!nullCoupled && interior.squaredNorm() <= energy) {
        out.s = eig.vectors * interior;
        return out;
    }

    const double lower = std::max(0.0, eig.values.maxCoeff());
    const double mu = secular_solve(eig.values, weights, energy, lower);
    CVec coords(length);
    for (int i = 0; i < length; ++i) {
        coords[i] = rotated[i] / (mu - eig.values[i]);
    }
    out.s = eig.vectors * coords;
    return out;
}

CVec sphere_min_quadratic(const HermitianEigen& eig, const CVec& b, double energy,
                          double secularTol) {
    const int length = static_cast<int>(b.size());
    const RVec& values = eig.values;  // ascending
    const double minEig = values[0];
    const double maxEig = values[length - 1];
    const double gapTol = 1e-12 * std::max({std::abs(minEig), std::abs(maxEig), 1.0});

    if (b.norm() < 1e-300) {
        return std::sqrt(energy) * eig.vectors.col(0);
    }

    const CVec rotated = eig.vectors.adjoint() * b;
    RVec weights = rotated.cwiseAbs2();
    const double weightFloor = 1e-28 * weights.sum();
    for (int i = 0; i < length; ++i) {
        if (weights[i] < weightFloor) weights[i] = 0.0;
    }

    const auto objective = [&](const CVec& coords) {
        double acc = 0.0;
        for (int i = 0; i < length; ++i) {
            acc += values[i] * std::norm(coords[i]) +
                   2.0 * (std::conj(coords[i]) * rotated[i]).real();
        }
        return acc;
    };

    // Candidate with the multiplier right of the negated spectrum; this is the
    // global minimizer, with an eigenvector completion in the degenerate case.
    CVec bestCoords;
    double bestValue = std::numeric_limits<double>::infinity();
    {
        double phiAtPole = 0.0;
        bool poleWeighted = false;
        for (int i = 0; i < length; ++i) {
            if (values[i] <= minEig + gapTol) {
                if (weights[i] > 0.0) poleWeighted = true;
            } else {
                const double d = values[i] - minEig;
                phiAtPole += weights[i] / (d * d);
            }
        }
        CVec coords = CVec::Zero(length);
        if (poleWeighted || phiAtPole >= energy) {
            const double alpha =
                secular_solve(-values, weights, energy, -std::numeric_limits<double>::infinity(),
                              secularTol);
            for (int i = 0; i < length; ++i) {
                coords[i] = -rotated[i] / (values[i] + alpha);
            }
        } else {
            for (int i = 0; i < length; ++i) {
                if (values[i] > minEig + gapTol) {
                    coords[i] = -rotated[i] / (values[i] - minEig);
                }
            }
            const double tau = std::sqrt(std::max(0.0, energy - coords.squaredNorm()));
            coords[0] += tau;
        }
        bestCoords = coords;
        bestValue = objective(coords);
    }

    // Candidate left of the negated spectrum (the opposite extremum); kept so
    // the returned root is the best feasible one by value, not by derivation.
    {
        double phiAtPole = 0.0;
        bool poleWeighted = false;
        for (int i = 0; i < length; ++i) {
            if (values[i] >= maxEig - gapTol) {
                if (weights[i] > 0.0) poleWeighted = true;
            } else {
                const double d = maxEig - values[i];
                phiAtPole += weights[i] / (d * d);
            }
        }
        if (poleWeighted || phiAtPole >= energy) {
            try {
                const double alphaNeg = secular_solve(
                    values, weights, energy, -std::numeric_limits<double>::infinity(),
                    secularTol);
                CVec coords(length);
                for (int i = 0; i < length; ++i) {
                    coords[i] = -rotated[i] / (values[i] - alphaNeg);
                }
                const double value = objective(coords);
                if (value < bestValue) {
                    bestValue = value;
                    bestCoords = coords;
                }
            } catch (const std::runtime_error&) {
                // No root on that side; the right-branch candidate stands.
            }
        }
    }

    CVec s = eig.vectors * bestCoords;
    const double norm = s.norm();
    if (norm > 0.0) s *= std::sqrt(energy) / norm;
    return s;
}

QpSolution solve_energy_sphere(const QuadraticMinorizer& m, double energy) {
    if (energy <= 0.0) {
        throw std::invalid_argument("solve_energy_sphere: energy must be > 0");
    }
    QpSolution out;
    const HermitianEigen eig = hermitian_eig(CMat(-m.quadratic));
    out.s = sphere_min_quadratic(eig, CVec(-m.linear), energy);
    out.degenerate = m.linear.norm() < 1e-300;
    return out;
}

CVec papr_project(const CVec& t, double energy, double maxPapr, bool* degenerate);

CVec papr_project(const CVec& t, double energy, double maxPapr) {
    return papr_project(t, energy, maxPapr, nullptr);
}

CVec papr_project(const CVec& t, double energy, double maxPapr, bool* degenerate) {
    const int length = static_cast<int>(t.size());
    if (energy <= 0.0) {
        throw std::invalid_argument("papr_project: energy must be > 0");
    }
    if (maxPapr < 1.0 || maxPapr > length) {
        throw std::invalid_argument("papr_project: rho must lie in [1, L]");
    }
    if (degenerate) *degenerate = false;
    const double flatAmp = std::sqrt(energy / length);

    const double norm = t.norm();
    if (norm < 1e-300) {
        if (degenerate) *degenerate = true;
        return CVec::Constant(length, flatAmp);
    }

    CVec phases(length);
    for (int i = 0; i < length; ++i) {
        const double mag = std::abs(t[i]);
        phases[i] = mag > 0.0 ? t[i] / mag : Complex(1.0, 0.0);
    }

    if (maxPapr <= 1.0) {
        return flatAmp * phases;
    }
    if (maxPapr >= static_cast<double>(length)) {
        return std::sqrt(energy) / norm * t;
    }

    const double cap = std::sqrt(maxPapr * energy / length);
    RVec mags = t.cwiseAbs();
    std::vector<int> order(length);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return mags[a] > mags[b]; });

    // With the k largest magnitudes clipped at the cap, the energy equation is
    // closed form in the shared gain; sweep k until the gain lands in its
    // breakpoint segment.
    RVec tailEnergy(length + 1);
    tailEnergy[length] = 0.0;
    for (int k = length - 1; k >= 0; --k) {
        tailEnergy[k] = tailEnergy[k + 1] + mags[order[k]] * mags[order[k]];
    }

    double gain = -1.0;
    int clipped = 0;
    for (int k = 0; k <= length; ++k) {
        const double residual = energy - k * cap * cap;
        if (residual < 0.0) break;
        if (tailEnergy[k] <= 0.0) {
            clipped = k;
            gain = std::numeric_limits<double>::infinity();
            break;
        }
        const double candidate = std::sqrt(residual / tailEnergy[k]);
        const double lower = k == 0 ? 0.0 : cap / mags[order[k - 1]];
        const double upper = cap / mags[order[k]];
        if (candidate >= lower && candidate <= upper) {
            clipped = k;
            gain = candidate;
            break;
        }
    }
    if (gain < 0.0) {
        // All entries clipped: only reachable when rho * energy == energy, or
        // through rounding at the final breakpoint.
        clipped = length;
        gain = std::numeric_limits<double>::infinity();
    }

    CVec out = CVec::Zero(length);
    for (int k = 0; k < length; ++k) {
        const int idx = order[k];
        double amp;
        if (mags[idx] <= 0.0) {
            amp = 0.0;
        } else if (k < clipped || std::isinf(gain)) {
            amp = cap;
        } else {
            amp = std::min(gain * mags[idx], cap);
        }
        out[idx] = amp * phases[idx];
    }
    // Zero-magnitude entries absorb whatever energy the cap locked out.
    const double deficit = energy - out.squaredNorm();
    if (deficit > 1e-12 * energy) {
        int zeros = 0;
        for (int i = 0; i < length; ++i) {
            if (mags[i] <= 0.0) ++zeros;
        }
        if (zeros > 0) {
            const double amp = std::sqrt(deficit / zeros);
            for (int i = 0; i < length; ++i) {
                if (mags[i] <= 0.0) out[i] = amp;
            }
        }
    }
    return out;
}

QpSolution solve_papr(const QuadraticMinorizer& m, const PaprConstraint& spec,
                      const CVec& init, const SolverTolerances& tol) {
    tol.validate();
    const ConstraintSpec asSpec = spec;
    if (!is_feasible(init, asSpec)) {
        throw std::invalid_argument("solve_papr: starting point infeasible");
    }

    Eigen::SelfAdjointEigenSolver<CMat> eigOnly(m.quadratic, Eigen::EigenvaluesOnly);
    const double minEig = eigOnly.eigenvalues()[0];
    const CMat shifted = m.quadratic - minEig * CMat::Identity(m.quadratic.rows(),
                                                               m.quadratic.cols());

    QpSolution out;
    out.s = init;
    double previous = m.evaluate(init);
    const double slack = 1e-12 * std::max(1.0, std::abs(previous));
    for (int j = 0; j < tol.innerMaxIters; ++j) {
        out.innerIterations = j + 1;
        const CVec target = m.linear + shifted * out.s;
        if (target.norm() < 1e-300) {
            out.degenerate = true;
            out.converged = true;
            break;
        }
        const CVec next = papr_project(target, spec.energy, spec.maxPapr);
        const double value = m.evaluate(next);
        if (value < previous - slack) {
            // The exact projection cannot lower the surrogate; stop on noise.
            out.converged = true;
            break;
        }
        out.s = next;
        const double change = std::abs(value - previous);
        previous = value;
        if (change <= tol.innerRelTol * std::max(std::abs(value), 1e-100)) {
            out.converged = true;
            break;
        }
        out.converged = j + 1 < tol.innerMaxIters;
    }
    return out;
}

SpectralCache SpectralCache::build(const SpectralConstraint& spec) {
    SpectralCache cache;
    cache.interferenceEig = hermitian_eig(symmetrize(spec.interference));
    for (Eigen::Index i = 0; i < cache.interferenceEig.values.size(); ++i) {
        cache.interferenceEig.values[i] = std::max(cache.interferenceEig.values[i], 0.0);
    }
    return cache;
}

namespace {

/// Exact-feasibility polish: put the code on the energy sphere and, if the
/// interference budget is exceeded, bisect a blend toward the scaled bottom
/// eigenvector of the interference matrix (always deep inside the budget).
CVec spectral_polish(const CVec& s, const SpectralConstraint& spec,
                     const HermitianEigen& interferenceEig) {
    const double energy = spec.energy;
    const auto rescale = [&](const CVec& x) -> CVec {
        const double n = x.norm();
        if (n < 1e-300) {
            return std::sqrt(energy) * interferenceEig.vectors.col(0);
        }
        return std::sqrt(energy) / n * x;
    };
    const auto leak = [&](const CVec& x) {
        return quad_form(x, spec.interference);
    };

    CVec x = rescale(s);
    if (leak(x) <= spec.budget * (1.0 + 1e-12)) return x;

    CVec deep = std::sqrt(energy) * interferenceEig.vectors.col(0);
    const Complex overlap = deep.dot(x);
    if (std::abs(overlap) > 0.0) deep *= overlap / std::abs(overlap);
    if (leak(deep) > spec.budget) {
        // Feasible set is the bottom eigen-shell itself.
        return deep;
    }

    const double target = spec.budget * (1.0 - 1e-9);
    double loBlend = 0.0;   // infeasible side
    double hiBlend = 1.0;   // feasible side
    CVec candidate = deep;
    for (int iter = 0; iter < 100; ++iter) {
        const double mid = 0.5 * (loBlend + hiBlend);
        const CVec blended = rescale((1.0 - mid) * x + mid * deep);
        if (leak(blended) <= target) {
            hiBlend = mid;
            candidate = blended;
        } else {
            loBlend = mid;
        }
        if (hiBlend - loBlend < 1e-14) break;
    }
    return candidate;
}

}  // namespace

QpSolution solve_spectral(const QuadraticMinorizer& m, const SpectralConstraint& spec,
                          const CVec& init, const SolverTolerances& tol,
                          const SpectralCache* cache) {
    tol.validate();
    const int length = static_cast<int>(m.linear.size());
    validate_constraint(spec, length);

    SpectralCache local;
    if (!cache) {
        local = SpectralCache::build(spec);
        cache = &local;
    }
    const HermitianEigen& interference = cache->interferenceEig;

    const double penalty = tol.admmPenalty;
    CMat smoothed = -m.quadratic;
    smoothed += penalty * CMat::Identity(length, length);
    const HermitianEigen smoothedEig = hermitian_eig(smoothed);

    const double residualTol = tol.admmResidualTol * std::sqrt(double(length));

    CVec s = init;
    CVec u = CVec::Zero(length);
    CVec dual = CVec::Zero(length);

    QpSolution out;
    out.converged = false;
    CVec bestFeasible = spectral_polish(init, spec, interference);
    double bestValue = m.evaluate(bestFeasible);

    const auto considerCandidate = [&](const CVec& raw) {
        const CVec polished = spectral_polish(raw, spec, interference);
        const double value = m.evaluate(polished);
        if (value > bestValue) {
            bestValue = value;
            bestFeasible = polished;
        }
    };

    for (int j = 0; j < tol.admmMaxIters; ++j) {
        out.innerIterations = j + 1;
        const CVec offset = -m.linear + dual - penalty * u;
        const CVec sNext =
            sphere_min_quadratic(smoothedEig, offset, spec.energy, tol.secularTol);

        const CVec anchor = sNext + dual / penalty;
        const CVec rotated = interference.vectors.adjoint() * anchor;
        double anchorLeak = 0.0;
        for (int i = 0; i < length; ++i) {
            anchorLeak += interference.values[i] * std::norm(rotated[i]);
        }
        CVec uNext;
        if (anchorLeak <= spec.budget) {
            uNext = anchor;
        } else {
            RVec eigvals(length);
            RVec weights(length);
            for (int i = 0; i < length; ++i) {
                const double gamma = interference.values[i];
                if (gamma > 1e-14) {
                    eigvals[i] = -1.0 / gamma;
                    weights[i] = std::norm(rotated[i]) / gamma;
                } else {
                    eigvals[i] = -1e30;
                    weights[i] = 0.0;
                }
            }
            const double alpha =
                secular_solve(eigvals, weights, spec.budget, 0.0, tol.secularTol);
            CVec scaled(length);
            for (int i = 0; i < length; ++i) {
                scaled[i] = rotated[i] / (1.0 + alpha * interference.values[i]);
            }
            uNext = interference.vectors * scaled;
        }

        dual += penalty * (sNext - uNext);
        out.primalResidual = (sNext - uNext).norm();
        out.dualResidual = penalty * (s - sNext).norm();
        s = sNext;
        u = uNext;

        if (out.primalResidual <= residualTol && out.dualResidual <= residualTol) {
            out.converged = true;
            break;
        }
        if ((j + 1) % 100 == 0) considerCandidate(s);
    }

    considerCandidate(s);
    out.s = bestFeasible;
    out.degenerate = m.linear.norm() < 1e-300;
    return out;
}

CVec project_feasible(const CVec& s, const ConstraintSpec& spec) {
    if (const auto* energy = std::get_if<EnergyConstraint>(&spec)) {
        const double norm2 = s.squaredNorm();
        if (norm2 <= energy->energy || norm2 == 0.0) return s;
        return std::sqrt(energy->energy / norm2) * s;
    }
    if (const auto* papr = std::get_if<PaprConstraint>(&spec)) {
        return papr_project(s, papr->energy, papr->maxPapr);
    }
    const auto& spectral = std::get<SpectralConstraint>(spec);
    const SpectralCache cache = SpectralCache::build(spectral);
    return spectral_polish(s, spectral, cache.interferenceEig);
}

}  // namespace rangewave
