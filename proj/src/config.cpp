#include "rangewave/config.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "rangewave/csvio.hpp"

namespace rangewave {

using nlohmann::json;

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& message) {
    throw std::invalid_argument("config field '" + field + "': " + message);
}

template <typename T>
T get_as(const json& j, const std::string& field) {
    try {
        return j.get<T>();
    } catch (const json::exception& e) {
        field_error(field, e.what());
    }
}

std::string resolve_path(const std::string& raw, const std::filesystem::path& baseDir) {
    std::filesystem::path p(raw);
    if (p.is_absolute()) return p.string();
    return (baseDir / p).string();
}

}  // namespace

ScenarioConfig ScenarioConfig::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open config file: " + path.string());
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config parse error in " + path.string() + ": " +
                                    e.what());
    }
    return from_json(j, path.has_parent_path() ? path.parent_path()
                                               : std::filesystem::path("."));
}

ScenarioConfig ScenarioConfig::from_json(const json& j,
                                         const std::filesystem::path& baseDir) {
    if (!j.is_object()) {
        throw std::invalid_argument("config root must be a JSON object");
    }
    ScenarioConfig cfg;
    for (const auto& [key, value] : j.items()) {
        if (key == "L") {
            cfg.codeLength = get_as<int>(value, key);
        } else if (key == "P") {
            cfg.cells = get_as<int>(value, key);
        } else if (key == "energy") {
            cfg.energy = get_as<double>(value, key);
        } else if (key == "metric") {
            const auto name = get_as<std::string>(value, key);
            if (name == "mi") {
                cfg.metric = Metric::MutualInformation;
            } else if (name == "mmse") {
                cfg.metric = Metric::Mmse;
            } else {
                field_error(key, "expected 'mi' or 'mmse', got '" + name + "'");
            }
        } else if (key == "constraint") {
            if (!value.is_object() || !value.contains("type")) {
                field_error(key, "expected an object with a 'type' entry");
            }
            cfg.constraintType = get_as<std::string>(value.at("type"), "constraint.type");
            if (cfg.constraintType != "energy" && cfg.constraintType != "papr" &&
                cfg.constraintType != "spectral") {
                field_error("constraint.type", "expected energy | papr | spectral");
            }
            if (value.contains("rho")) {
                cfg.maxPapr = get_as<double>(value.at("rho"), "constraint.rho");
            }
            if (value.contains("budget")) {
                cfg.interferenceBudget =
                    get_as<double>(value.at("budget"), "constraint.budget");
            }
        } else if (key == "bands") {
            if (!value.is_array()) field_error(key, "expected an array of bands");
            cfg.bands.bands.clear();
            int idx = 0;
            for (const auto& entry : value) {
                const std::string field = "bands[" + std::to_string(idx++) + "]";
                SpectralBand band;
                if (entry.is_object()) {
                    band.lower = get_as<double>(entry.at("f1"), field + ".f1");
                    band.upper = get_as<double>(entry.at("f2"), field + ".f2");
                    if (entry.contains("weight")) {
                        band.weight = get_as<double>(entry.at("weight"), field + ".weight");
                    }
                } else if (entry.is_array() && entry.size() >= 2) {
                    band.lower = get_as<double>(entry.at(0), field);
                    band.upper = get_as<double>(entry.at(1), field);
                    if (entry.size() > 2) band.weight = get_as<double>(entry.at(2), field);
                } else {
                    field_error(field, "expected {f1,f2[,weight]} or [f1,f2[,w]]");
                }
                cfg.bands.bands.push_back(band);
            }
        } else if (key == "prior") {
            if (!value.is_object()) field_error(key, "expected an object");
            if (value.contains("mean")) {
                const auto& mean = value.at("mean");
                if (mean.is_number()) {
                    cfg.priorMean = Complex(mean.get<double>(), 0.0);
                } else if (mean.is_object() && mean.contains("file")) {
                    cfg.priorMeanFile =
                        resolve_path(get_as<std::string>(mean.at("file"), "prior.mean.file"),
                                     baseDir);
                } else {
                    field_error("prior.mean", "expected a number or {file: path}");
                }
            }
            if (value.contains("covariance")) {
                const auto& cov = value.at("covariance");
                if (cov.is_string() && cov.get<std::string>() == "identity") {
                    cfg.priorVariance = 1.0;
                } else if (cov.is_object() && cov.contains("scale")) {
                    cfg.priorVariance =
                        get_as<double>(cov.at("scale"), "prior.covariance.scale");
                } else if (cov.is_object() && cov.contains("file")) {
                    cfg.priorCovFile = resolve_path(
                        get_as<std::string>(cov.at("file"), "prior.covariance.file"),
                        baseDir);
                } else {
                    field_error("prior.covariance",
                                "expected 'identity', {scale: v}, or {file: path}");
                }
            }
        } else if (key == "disturbance") {
            if (!value.is_object() || !value.contains("type")) {
                field_error(key, "expected an object with a 'type' entry");
            }
            cfg.disturbanceType =
                get_as<std::string>(value.at("type"), "disturbance.type");
            if (cfg.disturbanceType == "jamming") {
                if (value.contains("jamPower")) {
                    cfg.jamming.jamPower =
                        get_as<double>(value.at("jamPower"), "disturbance.jamPower");
                }
                if (value.contains("noisePower")) {
                    cfg.jamming.noisePower =
                        get_as<double>(value.at("noisePower"), "disturbance.noisePower");
                }
                if (value.contains("band")) {
                    const auto& band = value.at("band");
                    if (!band.is_array() || band.size() != 2) {
                        field_error("disturbance.band", "expected [f1, f2]");
                    }
                    cfg.jamming.bandLow = get_as<double>(band.at(0), "disturbance.band[0]");
                    cfg.jamming.bandHigh = get_as<double>(band.at(1), "disturbance.band[1]");
                }
            } else if (cfg.disturbanceType == "white") {
                if (value.contains("noisePower")) {
                    cfg.whiteNoisePower =
                        get_as<double>(value.at("noisePower"), "disturbance.noisePower");
                }
            } else if (cfg.disturbanceType == "file") {
                if (!value.contains("path")) {
                    field_error("disturbance.path", "required for type 'file'");
                }
                cfg.disturbanceFile = resolve_path(
                    get_as<std::string>(value.at("path"), "disturbance.path"), baseDir);
            } else {
                field_error("disturbance.type", "expected jamming | white | file");
            }
        } else if (key == "init") {
            if (!value.is_object() || !value.contains("type")) {
                field_error(key, "expected an object with a 'type' entry");
            }
            cfg.initType = get_as<std::string>(value.at("type"), "init.type");
            if (cfg.initType != "lfm" && cfg.initType != "random" &&
                cfg.initType != "min-eig") {
                field_error("init.type", "expected lfm | random | min-eig");
            }
            if (value.contains("seed")) {
                cfg.initSeed = get_as<std::uint64_t>(value.at("seed"), "init.seed");
            }
        } else if (key == "tolerances") {
            if (!value.is_object()) field_error(key, "expected an object");
            SolverTolerances& tol = cfg.tolerances;
            if (value.contains("secular"))
                tol.secularTol = get_as<double>(value.at("secular"), "tolerances.secular");
            if (value.contains("innerMaxIters"))
                tol.innerMaxIters =
                    get_as<int>(value.at("innerMaxIters"), "tolerances.innerMaxIters");
            if (value.contains("innerRelTol"))
                tol.innerRelTol =
                    get_as<double>(value.at("innerRelTol"), "tolerances.innerRelTol");
            if (value.contains("admmPenalty"))
                tol.admmPenalty =
                    get_as<double>(value.at("admmPenalty"), "tolerances.admmPenalty");
            if (value.contains("admmResidualTol"))
                tol.admmResidualTol = get_as<double>(value.at("admmResidualTol"),
                                                     "tolerances.admmResidualTol");
            if (value.contains("admmMaxIters"))
                tol.admmMaxIters =
                    get_as<int>(value.at("admmMaxIters"), "tolerances.admmMaxIters");
        } else if (key == "eps") {
            cfg.eps = get_as<double>(value, key);
        } else if (key == "maxOuterIters") {
            cfg.maxOuterIters = get_as<int>(value, key);
        } else if (key == "nfft") {
            cfg.nfft = get_as<int>(value, key);
        } else if (key == "out") {
            cfg.outDir = get_as<std::string>(value, key);
        } else {
            field_error(key, "unknown field");
        }
    }
    if (cfg.codeLength < 1) field_error("L", "must be >= 1");
    if (cfg.cells < 1) field_error("P", "must be >= 1");
    if (cfg.energy && *cfg.energy <= 0.0) field_error("energy", "must be > 0");
    if (cfg.nfft < cfg.codeLength) field_error("nfft", "must be >= L");
    return cfg;
}

double ScenarioConfig::resolved_energy() const {
    return energy.value_or(static_cast<double>(codeLength));
}

std::string ScenarioConfig::resolved_init() const {
    if (!initType.empty()) return initType;
    return constraintType == "spectral" ? "min-eig" : "lfm";
}

json ScenarioConfig::to_json() const {
    json j;
    j["L"] = codeLength;
    j["P"] = cells;
    j["energy"] = resolved_energy();
    j["metric"] = metric == Metric::MutualInformation ? "mi" : "mmse";
    json constraint;
    constraint["type"] = constraintType;
    if (constraintType == "papr") constraint["rho"] = maxPapr;
    if (constraintType == "spectral") constraint["budget"] = interferenceBudget;
    j["constraint"] = constraint;
    json bandsJson = json::array();
    for (const SpectralBand& band : bands.bands) {
        bandsJson.push_back({{"f1", band.lower}, {"f2", band.upper}, {"weight", band.weight}});
    }
    j["bands"] = bandsJson;
    json prior;
    if (!priorMeanFile.empty()) {
        prior["mean"] = {{"file", priorMeanFile}};
    } else {
        prior["mean"] = priorMean.real();
    }
    if (!priorCovFile.empty()) {
        prior["covariance"] = {{"file", priorCovFile}};
    } else {
        prior["covariance"] = {{"scale", priorVariance}};
    }
    j["prior"] = prior;
    json disturbance;
    disturbance["type"] = disturbanceType;
    if (disturbanceType == "jamming") {
        disturbance["jamPower"] = jamming.jamPower;
        disturbance["noisePower"] = jamming.noisePower;
        disturbance["band"] = {jamming.bandLow, jamming.bandHigh};
    } else if (disturbanceType == "white") {
        disturbance["noisePower"] = whiteNoisePower;
    } else {
        disturbance["path"] = disturbanceFile;
    }
    j["disturbance"] = disturbance;
    j["init"] = {{"type", resolved_init()}, {"seed", initSeed}};
    j["tolerances"] = {{"secular", tolerances.secularTol},
                       {"innerMaxIters", tolerances.innerMaxIters},
                       {"innerRelTol", tolerances.innerRelTol},
                       {"admmPenalty", tolerances.admmPenalty},
                       {"admmResidualTol", tolerances.admmResidualTol},
                       {"admmMaxIters", tolerances.admmMaxIters}};
    j["eps"] = eps;
    j["maxOuterIters"] = maxOuterIters;
    j["nfft"] = nfft;
    j["out"] = outDir;
    return j;
}

DesignProblem ScenarioConfig::to_problem() const {
    DesignProblem problem;
    problem.metric = metric;
    problem.codeLength = codeLength;
    const double totalEnergy = resolved_energy();
    const int padded = codeLength + cells - 1;

    if (!priorMeanFile.empty()) {
        problem.prior.mean = read_complex_vector_csv(priorMeanFile);
        if (problem.prior.mean.size() != cells) {
            field_error("prior.mean.file", "length does not match P");
        }
    } else {
        problem.prior.mean = CVec::Constant(cells, priorMean);
    }
    if (!priorCovFile.empty()) {
        problem.prior.covariance = read_complex_matrix_csv(priorCovFile);
        if (problem.prior.covariance.rows() != cells) {
            field_error("prior.covariance.file", "dimension does not match P");
        }
    } else {
        problem.prior.covariance = priorVariance * CMat::Identity(cells, cells);
    }
    problem.prior.validate();

    if (disturbanceType == "jamming") {
        problem.disturbance = jamming_covariance(jamming, padded);
    } else if (disturbanceType == "white") {
        problem.disturbance = white_disturbance(padded, whiteNoisePower);
    } else {
        problem.disturbance.covariance = read_complex_matrix_csv(disturbanceFile);
        if (problem.disturbance.size() != padded) {
            field_error("disturbance.path", "dimension does not match L + P - 1");
        }
        problem.disturbance.validate();
    }

    if (constraintType == "energy") {
        problem.constraint = EnergyConstraint{totalEnergy};
    } else if (constraintType == "papr") {
        problem.constraint = PaprConstraint{totalEnergy, maxPapr};
    } else {
        SpectralConstraint spectral;
        spectral.energy = totalEnergy;
        spectral.interference = spectral_interference_matrix(bands, codeLength);
        spectral.budget = interferenceBudget;
        problem.constraint = std::move(spectral);
    }
    validate_constraint(problem.constraint, codeLength);

    const std::string init = resolved_init();
    if (init == "lfm") {
        problem.initial.kind = InitKind::Lfm;
    } else if (init == "random") {
        problem.initial.kind = InitKind::RandomPhase;
        problem.initial.seed = initSeed;
    } else {
        problem.initial.kind = InitKind::MinEigenvector;
        if (constraintType != "spectral") {
            field_error("init.type", "min-eig requires the spectral constraint");
        }
    }
    return problem;
}

}  // namespace rangewave
