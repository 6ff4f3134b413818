#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sawtooth/version.hpp"

namespace sawtooth {

/// 17 significant digits: enough to round-trip any double exactly.
inline std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
        : out_(path), path_(path) {
        if (!out_) throw std::runtime_error("cannot open output file: " + path.string());
        write_strings(header);
    }

    void row(const std::vector<std::string>& cells) { write_strings(cells); }

    void row(std::initializer_list<double> values) {
        std::vector<std::string> cells;
        cells.reserve(values.size());
        for (double v : values) cells.push_back(format_number(v));
        write_strings(cells);
    }

    void close() {
        out_.close();
        if (!out_) throw std::runtime_error("failed writing output file: " + path_.string());
    }

private:
    void write_strings(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

    std::ofstream out_;
    std::filesystem::path path_;
};

/// Writes `<output>.json` next to a data file: the full run configuration,
/// the build identifier, and a timestamp (the one field allowed to differ
/// between otherwise identical runs).
inline void write_sidecar(const std::filesystem::path& output_path, nlohmann::json config) {
    config["build"] = build_identifier();
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    config["timestamp"] = stamp;
    std::filesystem::path p = output_path;
    p += ".json";
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot open sidecar file: " + p.string());
    out << config.dump(2) << '\n';
    if (!out) throw std::runtime_error("failed writing sidecar file: " + p.string());
}

}  // namespace sawtooth
