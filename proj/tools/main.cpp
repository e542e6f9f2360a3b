#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rangewave/config.hpp"
#include "rangewave/csvio.hpp"
#include "rangewave/figures.hpp"
#include "rangewave/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rangewave;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitNotConverged = 3;

void write_report_json(const fs::path& path, const ScenarioConfig& cfg,
                       const RunReport& report) {
    json j;
    j["status"] = to_string(report.status);
    j["metric"] = cfg.metric == Metric::Mmse ? "mmse" : "mi";
    j["constraint"] = cfg.constraintType;
    j["iterations"] = report.iterations();
    j["finalObjective"] = report.finalObjective;
    if (report.finalMmse) j["finalMmse"] = *report.finalMmse;
    j["energy"] = report.finalWaveform.energy();
    j["papr"] = papr(report.finalWaveform);
    j["constraintResidual"] = report.trace.back().constraintResidual;
    j["elapsedSeconds"] = report.trace.back().elapsedSeconds;
    j["monotonicityViolations"] = report.monotonicityViolations;
    j["initialProjected"] = report.initialProjected;
    j["notes"] = report.notes;
    bool innerOk = true;
    for (const IterationRecord& rec : report.trace) innerOk &= rec.innerConverged;
    j["innerConvergedAll"] = innerOk;
    std::ofstream out(path, std::ios::binary);
    out << j.dump(2) << '\n';
}

int cmd_design(const std::optional<std::string>& configPath,
               const std::optional<std::string>& outOverride,
               const std::optional<std::uint64_t>& seedOverride,
               const std::optional<double>& epsOverride, bool printConfig) {
    ScenarioConfig cfg =
        configPath ? ScenarioConfig::from_file(*configPath) : ScenarioConfig{};
    if (outOverride) cfg.outDir = *outOverride;
    if (seedOverride) {
        cfg.initType = "random";
        cfg.initSeed = *seedOverride;
    }
    if (epsOverride) cfg.eps = *epsOverride;
    if (printConfig) {
        std::cout << cfg.to_json().dump(2) << std::endl;
    }

    const DesignProblem problem = cfg.to_problem();
    const RunReport report = design(problem, cfg.tolerances, cfg.eps, cfg.maxOuterIters);

    const fs::path dir(cfg.outDir);
    fs::create_directories(dir);
    write_trace_csv(dir / "trace.csv", report);
    write_waveform_csv(dir / "waveform.csv", report.finalWaveform);
    write_esd_csv(dir / "esd.csv", esd(report.finalWaveform, cfg.nfft, true));
    write_acf_csv(dir / "acf.csv", acf(report.finalWaveform));
    write_report_json(dir / "report.json", cfg, report);

    std::cout << "status: " << to_string(report.status)
              << "  iterations: " << report.iterations()
              << "  objective: " << format_double(report.finalObjective);
    if (report.finalMmse) std::cout << "  mmse: " << format_double(*report.finalMmse);
    std::cout << "\nartifacts in " << dir.string() << std::endl;
    return report.status == RunStatus::Converged ? kExitOk : kExitNotConverged;
}

int cmd_reproduce(const std::string& figureId, const std::string& outDir) {
    const auto written = reproduce_figure(figureId, outDir);
    for (const fs::path& p : written) {
        std::cout << p.string() << '\n';
    }
    return kExitOk;
}

void print_report_row(const PropertyReport& report) {
    std::printf("%-38s %8d  %12.3e  %s\n", report.name.c_str(), report.instancesTested,
                report.worstSlack, report.pass ? "PASS" : "FAIL");
}

int cmd_verify(const std::string& suite) {
    std::vector<PropertyReport> reports;
    const bool all = suite == "all";

    if (all || suite == "appendixA") {
        reports.push_back(
            check_energy_monotonicity(random_verify_scenario(10, 3, 424201), 1000));
    }
    if (all || suite == "appendixB" || suite == "prop1") {
        reports.push_back(check_prop1(random_verify_scenario(8, 3, 424202), 200));
    }
    if (all || suite == "appendixC" || suite == "lemma1") {
        reports.push_back(check_lemma1(1000, 8));
    }
    if (all || suite == "appendixD") {
        reports.push_back(check_nsd_suite(random_verify_scenario(12, 3, 424203), 50));
        VerifyScenario jammed;
        jammed.codeLength = 40;
        jammed.prior = uniform_prior(6, Complex(5.0, 0.0), 1.0);
        jammed.disturbance = jamming_covariance(JammingSpec{}, 45);
        reports.push_back(check_nsd_suite(jammed, 25));
    }
    if (all || suite == "zcz") {
        reports.push_back(check_zcz_attainment());
        reports.push_back(check_zcz_lfm_gap());
    }
    if (all || suite == "solvers") {
        reports.push_back(check_energy_solver_oracle(10, 424204));
        reports.push_back(check_papr_solver_oracle(500, 424205));
        reports.push_back(check_spectral_reduction(424206));
    }
    if (reports.empty()) {
        std::cerr << "unknown verify suite '" << suite << "'" << std::endl;
        return kExitInvalid;
    }

    std::printf("%-38s %8s  %12s  %s\n", "property", "trials", "worst-slack", "result");
    bool allPass = true;
    for (const PropertyReport& report : reports) {
        print_report_row(report);
        allPass &= report.pass;
    }
    return allPass ? kExitOk : kExitFailure;
}

int cmd_analyze(const std::string& waveformPath,
                const std::optional<std::string>& configPath,
                const std::string& outDir) {
    const Waveform s = read_waveform_csv(waveformPath);
    s.validate();
    ScenarioConfig cfg =
        configPath ? ScenarioConfig::from_file(*configPath) : ScenarioConfig{};
    cfg.codeLength = s.length();

    json j;
    j["length"] = s.length();
    j["energy"] = s.energy();
    j["papr"] = papr(s);
    try {
        const DesignProblem problem = cfg.to_problem();
        j["mutualInformation"] = mutual_information(s, problem.prior, problem.disturbance);
        j["mmse"] = mmse_value(s, problem.prior, problem.disturbance);
        if (const auto* spectral = std::get_if<SpectralConstraint>(&problem.constraint)) {
            j["interference"] = s.samples.dot(spectral->interference * s.samples).real();
        }
    } catch (const std::exception& e) {
        j["metricError"] = e.what();
    }

    const fs::path dir(outDir);
    fs::create_directories(dir);
    write_esd_csv(dir / "esd.csv", esd(s, cfg.nfft, true));
    write_acf_csv(dir / "acf.csv", acf(s));
    std::ofstream out(dir / "metrics.json", std::ios::binary);
    out << j.dump(2) << '\n';
    std::cout << j.dump(2) << std::endl;
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Constrained transmit-code synthesis for radar range profiling"};
    app.require_subcommand(1);

    std::optional<std::string> configPath;
    std::optional<std::string> outOverride;
    std::optional<std::uint64_t> seedOverride;
    std::optional<double> epsOverride;
    bool printConfig = false;

    CLI::App* designCmd = app.add_subcommand("design", "Run one synthesis scenario");
    designCmd->add_option("--config", configPath, "Scenario JSON file");
    designCmd->add_option("--out", outOverride, "Output directory");
    designCmd->add_option("--seed", seedOverride, "Random-phase start with this seed");
    designCmd->add_option("--eps", epsOverride, "Relative-change stopping threshold");
    designCmd->add_flag("--print-config", printConfig,
                        "Echo the fully resolved configuration");

    std::string figureId;
    std::string reproduceOut = "out";
    CLI::App* reproduceCmd =
        app.add_subcommand("reproduce", "Re-run a canned benchmark experiment");
    reproduceCmd->add_option("--figure", figureId, "Figure id, e.g. 1a or 3_5b")
        ->required();
    reproduceCmd->add_option("--out", reproduceOut, "Output directory");

    std::string suite = "all";
    CLI::App* verifyCmd =
        app.add_subcommand("verify", "Run the numerical property audits");
    verifyCmd->add_option("suite", suite,
                          "all | appendixA | appendixB | appendixC | appendixD | "
                          "lemma1 | prop1 | zcz | solvers");

    std::string waveformPath;
    std::optional<std::string> analyzeConfig;
    std::string analyzeOut = "out";
    CLI::App* analyzeCmd =
        app.add_subcommand("analyze", "Report the metrics of a waveform file");
    analyzeCmd->add_option("--waveform", waveformPath, "waveform.csv to analyze")
        ->required();
    analyzeCmd->add_option("--config", analyzeConfig, "Scenario for the MI/MMSE metrics");
    analyzeCmd->add_option("--out", analyzeOut, "Output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (designCmd->parsed()) {
            return cmd_design(configPath, outOverride, seedOverride, epsOverride,
                              printConfig);
        }
        if (reproduceCmd->parsed()) {
            return cmd_reproduce(figureId, reproduceOut);
        }
        if (verifyCmd->parsed()) {
            return cmd_verify(suite);
        }
        if (analyzeCmd->parsed()) {
            return cmd_analyze(waveformPath, analyzeConfig, analyzeOut);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitFailure;
    }
    return kExitInvalid;
}
