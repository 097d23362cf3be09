#include "strausslab/output.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace strausslab {

namespace fs = std::filesystem;

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex_digest(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const auto ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[40];
  std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
  return out;
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(const std::vector<double>& row) {
  std::vector<std::string> cells;
  cells.reserve(row.size());
  for (double v : row) cells.push_back(format_real(v));
  add_row(cells);
}

void CsvTable::add_row(const std::vector<std::string>& row) {
  if (row.size() != header_.size()) throw std::logic_error("CsvTable: row width mismatch");
  rows_.push_back(row);
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

namespace {

constexpr double kW = 640.0, kH = 420.0, kLeft = 70.0, kRight = 20.0, kTop = 40.0,
                 kBottom = 50.0;
const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    switch (c) {
      case '<': o += "&lt;"; break;
      case '>': o += "&gt;"; break;
      case '&': o += "&amp;"; break;
      default: o += c;
    }
  }
  return o;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string header(const std::string& title) {
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << kW / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
    << escape(title) << "</text>\n";
  return o.str();
}

std::string axes(const std::string& xl, const std::string& yl, double x0, double x1, double y0,
                 double y1) {
  std::ostringstream o;
  o << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kW - kLeft - kRight
    << "\" height=\"" << kH - kTop - kBottom << "\" fill=\"none\" stroke=\"black\"/>\n"
    << "<text x=\"" << kLeft << "\" y=\"" << kH - kBottom + 16 << "\">" << num(x0) << "</text>\n"
    << "<text x=\"" << kW - kRight << "\" y=\"" << kH - kBottom + 16
    << "\" text-anchor=\"end\">" << num(x1) << "</text>\n"
    << "<text x=\"" << kLeft - 4 << "\" y=\"" << kH - kBottom << "\" text-anchor=\"end\">"
    << num(y0) << "</text>\n"
    << "<text x=\"" << kLeft - 4 << "\" y=\"" << kTop + 10 << "\" text-anchor=\"end\">"
    << num(y1) << "</text>\n"
    << "<text x=\"" << (kLeft + kW - kRight) / 2 << "\" y=\"" << kH - 12
    << "\" text-anchor=\"middle\">" << escape(xl) << "</text>\n"
    << "<text x=\"16\" y=\"" << (kTop + kH - kBottom) / 2
    << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << (kTop + kH - kBottom) / 2
    << ")\">" << escape(yl) << "</text>\n";
  return o.str();
}

}  // namespace

std::string svg_lines(const std::string& title, const std::string& x_label,
                      const std::string& y_label, const std::vector<Series>& series, bool log_x,
                      bool log_y) {
  auto tx = [&](double v) { return log_x ? std::log10(v) : v; };
  auto ty = [&](double v) { return log_y ? std::log10(v) : v; };
  auto usable = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!log_x || x > 0) && (!log_y || y > 0);
  };
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      x0 = std::min(x0, tx(s.x[i]));
      x1 = std::max(x1, tx(s.x[i]));
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
    }
  }
  if (!(x0 <= x1)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  const double pw = kW - kLeft - kRight, ph = kH - kTop - kBottom;
  std::string out = header(title);
  out += axes((log_x ? "log10 " : "") + x_label, (log_y ? "log10 " : "") + y_label, x0, x1, y0,
              y1);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = kColors[k % 6];
    out += "<polyline fill=\"none\" stroke=\"";
    out += color;
    out += "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      out += num(kLeft + pw * (tx(s.x[i]) - x0) / (x1 - x0)) + "," +
             num(kTop + ph * (1.0 - (ty(s.y[i]) - y0) / (y1 - y0))) + " ";
    }
    out += "\"/>\n";
    out += "<text x=\"" + num(kLeft + 8) + "\" y=\"" + num(kTop + 16 + 14 * k) + "\" fill=\"" +
           color + "\">" + escape(s.label) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string svg_heatmap(const std::string& title, const std::vector<double>& values, int rows,
                        int cols, const std::string& x_label, const std::string& y_label) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double v : values) {
    if (!std::isfinite(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(lo <= hi)) lo = 0, hi = 1;
  if (hi == lo) hi = lo + 1;
  const double pw = kW - kLeft - kRight, ph = kH - kTop - kBottom;
  const double cw = pw / std::max(cols, 1), ch = ph / std::max(rows, 1);
  std::string out = header(title);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const double v = values[static_cast<std::size_t>(i) * cols + j];
      const double f = std::isfinite(v) ? (v - lo) / (hi - lo) : 1.0;
      // Blue (low) to red (high) through white.
      const int r = static_cast<int>(std::lround(255 * std::min(1.0, 2 * f)));
      const int b = static_cast<int>(std::lround(255 * std::min(1.0, 2 * (1 - f))));
      const int g = std::min(r, b);
      char fill[8];
      std::snprintf(fill, sizeof fill, "#%02x%02x%02x", r, g, b);
      out += "<rect x=\"" + num(kLeft + j * cw) + "\" y=\"" + num(kTop + ph - (i + 1) * ch) +
             "\" width=\"" + num(cw + 0.05) + "\" height=\"" + num(ch + 0.05) + "\" fill=\"" +
             fill + "\"/>\n";
    }
  }
  out += axes(x_label, y_label, 0, cols, 0, rows);
  out += "<text x=\"" + num(kW - kRight) + "\" y=\"" + num(kTop - 6) +
         "\" text-anchor=\"end\">range [" + num(lo) + ", " + num(hi) + "]</text>\n";
  out += "</svg>\n";
  return out;
}

ResultsDir::ResultsDir(const fs::path& root, const std::string& command,
                       nlohmann::ordered_json parameters, std::string version) {
  const std::string stamp = iso_timestamp();
  std::string leaf = stamp;
  std::replace(leaf.begin(), leaf.end(), ':', '-');
  fs::path dir = root / command / leaf;
  for (int k = 1; fs::exists(dir); ++k) dir = root / command / (leaf + "-" + std::to_string(k));
  fs::create_directories(dir);
  dir_ = dir;
  const std::string canonical = parameters.dump();
  manifest_["command"] = command;
  manifest_["parameters"] = std::move(parameters);
  manifest_["version"] = std::move(version);
  manifest_["started_at"] = stamp;
  manifest_["input_digest"] = "fnv1a64:" + hex_digest(fnv1a64(canonical));
}

void ResultsDir::write_file(const std::string& name, const std::string& contents) {
  std::ofstream f(dir_ / name, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + (dir_ / name).string() + " for writing");
  f << contents;
  f.close();
  if (!f) throw std::runtime_error("failed writing " + (dir_ / name).string());
  outputs_.push_back({{"file", name},
                      {"bytes", contents.size()},
                      {"digest", "fnv1a64:" + hex_digest(fnv1a64(contents))}});
}

void ResultsDir::set(const std::string& key, nlohmann::ordered_json value) {
  manifest_[key] = std::move(value);
}

void ResultsDir::finish(int exit_code) {
  manifest_["finished_at"] = iso_timestamp();
  manifest_["exit_code"] = exit_code;
  manifest_["outputs"] = outputs_;
  std::ofstream f(dir_ / "manifest.json", std::ios::binary);
  f << manifest_.dump(2) << '\n';
  if (!f) throw std::runtime_error("failed writing manifest in " + dir_.string());
}

}  // namespace strausslab
