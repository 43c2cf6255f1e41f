#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace rmrelax::io {

/// CSV with a fixed header row; numbers written with 17 significant digits.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    /// Throws missing_column.
    std::size_t column(const std::string& name) const;
};

Table read_csv(const std::filesystem::path& path);

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

struct PlotSpec {
    std::string x;
    std::vector<std::string> y;
    std::string title;
    std::string y_label;
};

/// Static line plot of the named columns; axis labels come from column names.
void emit_plot(const std::filesystem::path& csv, const PlotSpec& spec,
               const std::filesystem::path& svg);

}  // namespace rmrelax::io
