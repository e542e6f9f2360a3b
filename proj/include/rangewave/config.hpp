#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "rangewave/driver.hpp"

namespace rangewave {

/// Scenario file contents with the stock experiment defaults: L = 100 codes
/// over P = 10 cells at energy L, unit-variance prior with mean 5, barrage
/// jamming (power 1000, band [0.1, 0.3]) over unit noise, constant-modulus
/// constraint, eps = 1e-4.
struct ScenarioConfig {
    int codeLength = 100;
    int cells = 10;
    std::optional<double> energy;  // defaults to codeLength

    Metric metric = Metric::MutualInformation;

    std::string constraintType = "papr";  // energy | papr | spectral
    double maxPapr = 1.0;
    double interferenceBudget = 0.05;
    SpectralBandSet bands{{{0.7, 0.8, 1.0}}};

    Complex priorMean{5.0, 0.0};
    std::string priorMeanFile;  // overrides priorMean when set
    double priorVariance = 1.0;
    std::string priorCovFile;   // overrides priorVariance when set

    std::string disturbanceType = "jamming";  // jamming | white | file
    JammingSpec jamming;
    double whiteNoisePower = 1.0;
    std::string disturbanceFile;

    std::string initType;  // lfm | random | min-eig; empty = per-constraint default
    std::uint64_t initSeed = 0;

    SolverTolerances tolerances;
    double eps = 1e-4;
    int maxOuterIters = 10000;
    int nfft = 4096;
    std::string outDir = "out";

    /// Paths inside the file resolve relative to its directory.
    static ScenarioConfig from_file(const std::filesystem::path& path);
    static ScenarioConfig from_json(const nlohmann::json& j,
                                    const std::filesystem::path& baseDir);

    /// Fully resolved configuration (every field populated).
    nlohmann::json to_json() const;

    double resolved_energy() const;
    std::string resolved_init() const;

    /// Materializes the prior, disturbance, constraint, and starting point.
    /// Throws std::invalid_argument with a field-addressed message on
    /// inconsistent contents.
    DesignProblem to_problem() const;
};

}  // namespace rangewave
