#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rangewave/driver.hpp"

namespace rangewave {

/// Shortest round-trip decimal form, locale-independent.
std::string format_double(double value);

/// iter,objective,elapsed_s,constraint_residual
void write_trace_csv(const std::filesystem::path& path, const RunReport& report);

/// index,re,im
void write_waveform_csv(const std::filesystem::path& path, const Waveform& s);

/// freq_norm,esd_db (10 log10 of the density, floored at -300 dB)
void write_esd_csv(const std::filesystem::path& path,
                   const std::vector<EsdPoint>& spectrum);

/// lag,acf_db (20 log10 |r_p|, floored at -300 dB)
void write_acf_csv(const std::filesystem::path& path, const CVec& correlations);

Waveform read_waveform_csv(const std::filesystem::path& path);

/// Dense complex matrix, one row per line, re/im interleaved columns.
CMat read_complex_matrix_csv(const std::filesystem::path& path);

/// Dense complex vector, one "re,im" pair per line.
CVec read_complex_vector_csv(const std::filesystem::path& path);

void write_complex_matrix_csv(const std::filesystem::path& path, const CMat& m);
void write_complex_vector_csv(const std::filesystem::path& path, const CVec& v);

}  // namespace rangewave
