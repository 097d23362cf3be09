#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace strausslab {

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(const std::string& bytes);
std::string hex_digest(std::uint64_t h);

/// UTC time as 2026-01-31T12:34:56.789Z.
std::string iso_timestamp();

/// %.17g, so a value round-trips exactly.
std::string format_real(double v);

/// CSV with a fixed header. Rows must match the header width.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(const std::vector<double>& row);
  void add_row(const std::vector<std::string>& row);
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Polyline plot of one or more series. log_x/log_y switch the axes to log10;
/// non-positive points are dropped on a log axis.
std::string svg_lines(const std::string& title, const std::string& x_label,
                      const std::string& y_label, const std::vector<Series>& series,
                      bool log_x = false, bool log_y = false);

/// Heatmap of a rows x cols row-major matrix (row 0 at the bottom).
std::string svg_heatmap(const std::string& title, const std::vector<double>& values, int rows,
                        int cols, const std::string& x_label, const std::string& y_label);

/// A results directory results/<command>/<timestamp>/ plus its manifest.
/// Every file goes through write_file so the manifest lists all of them.
class ResultsDir {
 public:
  ResultsDir(const std::filesystem::path& root, const std::string& command,
             nlohmann::ordered_json parameters, std::string version);

  const std::filesystem::path& path() const { return dir_; }
  void write_file(const std::string& name, const std::string& contents);
  void set(const std::string& key, nlohmann::ordered_json value);
  /// Writes manifest.json with the finish time and exit code.
  void finish(int exit_code);

 private:
  std::filesystem::path dir_;
  nlohmann::ordered_json manifest_;
  nlohmann::ordered_json outputs_ = nlohmann::ordered_json::array();
};

}  // namespace strausslab
