#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace rangewave {

/// Canned experiment identifiers understood by reproduce_figure.
const std::vector<std::string>& figure_ids();

bool is_figure_id(const std::string& id);

/// Runs one canned experiment and writes the plotted quantities as CSV files
/// under outDir. Returns the written paths. Throws std::invalid_argument for
/// an unknown id.
std::vector<std::filesystem::path> reproduce_figure(const std::string& id,
                                                    const std::filesystem::path& outDir);

}  // namespace rangewave
