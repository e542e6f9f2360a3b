#include "rangewave/csvio.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rangewave {

namespace {

double to_db_power(double value) {
    return value > 0.0 ? std::max(10.0 * std::log10(value), -300.0) : -300.0;
}

double to_db_amplitude(double value) {
    return value > 0.0 ? std::max(20.0 * std::log10(value), -300.0) : -300.0;
}

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path.string());
    }
    return out;
}

std::vector<double> parse_fields(const std::string& line,
                                 const std::filesystem::path& path, int lineNo) {
    std::vector<double> fields;
    std::size_t pos = 0;
    while (pos <= line.size()) {
        std::size_t comma = line.find(',', pos);
        const std::string token =
            line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        double value = 0.0;
        const char* begin = token.data();
        const char* end = begin + token.size();
        while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
        const auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc{}) {
            std::ostringstream oss;
            oss << path.string() << ":" << lineNo << ": cannot parse number '" << token
                << "'";
            throw std::invalid_argument(oss.str());
        }
        fields.push_back(value);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return fields;
}

bool numeric_line(const std::string& line) {
    for (char c : line) {
        if ((c >= '0' && c <= '9') || c == '-' || c == '+' || c == '.') return true;
        if (c == ',' || c == ' ' || c == '\t' || c == '\r') continue;
        return false;
    }
    return false;
}

std::vector<std::vector<double>> read_numeric_rows(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open for reading: " + path.string());
    }
    std::vector<std::vector<double>> rows;
    std::string line;
    int lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!numeric_line(line)) continue;  // header row
        rows.push_back(parse_fields(line, path, lineNo));
    }
    return rows;
}

}  // namespace

std::string format_double(double value) {
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (ec != std::errc{}) return "nan";
    return std::string(buffer, ptr);
}

void write_trace_csv(const std::filesystem::path& path, const RunReport& report) {
    std::ofstream out = open_out(path);
    out << "iter,objective,elapsed_s,constraint_residual\n";
    for (const IterationRecord& rec : report.trace) {
        out << rec.iteration << ',' << format_double(rec.objective) << ','
            << format_double(rec.elapsedSeconds) << ','
            << format_double(rec.constraintResidual) << '\n';
    }
}

void write_waveform_csv(const std::filesystem::path& path, const Waveform& s) {
    std::ofstream out = open_out(path);
    out << "index,re,im\n";
    for (int i = 0; i < s.length(); ++i) {
        out << i << ',' << format_double(s.samples[i].real()) << ','
            << format_double(s.samples[i].imag()) << '\n';
    }
}

void write_esd_csv(const std::filesystem::path& path,
                   const std::vector<EsdPoint>& spectrum) {
    std::ofstream out = open_out(path);
    out << "freq_norm,esd_db\n";
    for (const EsdPoint& point : spectrum) {
        out << format_double(point.frequency) << ','
            << format_double(to_db_power(point.density)) << '\n';
    }
}

void write_acf_csv(const std::filesystem::path& path, const CVec& correlations) {
    std::ofstream out = open_out(path);
    out << "lag,acf_db\n";
    for (Eigen::Index p = 0; p < correlations.size(); ++p) {
        out << p << ',' << format_double(to_db_amplitude(std::abs(correlations[p])))
            << '\n';
    }
}

Waveform read_waveform_csv(const std::filesystem::path& path) {
    const auto rows = read_numeric_rows(path);
    if (rows.empty()) {
        throw std::invalid_argument("waveform file has no samples: " + path.string());
    }
    CVec samples(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() < 3) {
            throw std::invalid_argument("waveform rows need index,re,im: " + path.string());
        }
        samples[static_cast<Eigen::Index>(i)] = Complex(rows[i][1], rows[i][2]);
    }
    return {samples};
}

CMat read_complex_matrix_csv(const std::filesystem::path& path) {
    const auto rows = read_numeric_rows(path);
    if (rows.empty()) {
        throw std::invalid_argument("matrix file is empty: " + path.string());
    }
    const std::size_t fields = rows.front().size();
    if (fields == 0 || fields % 2 != 0) {
        throw std::invalid_argument(
            "matrix rows need an even number of fields (re,im interleaved): " +
            path.string());
    }
    const Eigen::Index cols = static_cast<Eigen::Index>(fields / 2);
    CMat m(static_cast<Eigen::Index>(rows.size()), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != fields) {
            throw std::invalid_argument("ragged matrix rows in " + path.string());
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            m(static_cast<Eigen::Index>(r), c) =
                Complex(rows[r][2 * c], rows[r][2 * c + 1]);
        }
    }
    return m;
}

CVec read_complex_vector_csv(const std::filesystem::path& path) {
    const auto rows = read_numeric_rows(path);
    if (rows.empty()) {
        throw std::invalid_argument("vector file is empty: " + path.string());
    }
    CVec v(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() < 2) {
            throw std::invalid_argument("vector rows need re,im: " + path.string());
        }
        v[static_cast<Eigen::Index>(i)] = Complex(rows[i][0], rows[i][1]);
    }
    return v;
}

void write_complex_matrix_csv(const std::filesystem::path& path, const CMat& m) {
    std::ofstream out = open_out(path);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) out << ',';
            out << format_double(m(r, c).real()) << ',' << format_double(m(r, c).imag());
        }
        out << '\n';
    }
}

void write_complex_vector_csv(const std::filesystem::path& path, const CVec& v) {
    std::ofstream out = open_out(path);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out << format_double(v[i].real()) << ',' << format_double(v[i].imag()) << '\n';
    }
}

}  // namespace rangewave
