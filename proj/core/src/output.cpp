#include "solitonlab/output.hpp"

#include <cstdio>

#include "solitonlab/errors.hpp"

namespace solitonlab {
namespace {

void per_soliton(std::vector<std::string>& header, std::size_t n, const std::string& suffix) {
  for (std::size_t i = 1; i <= n; ++i) {
    header.push_back("x" + suffix + "_" + std::to_string(i));
    header.push_back("p" + suffix + "_" + std::to_string(i));
  }
}

}  // namespace

std::string format_value(double v) {
  if (v == 0.0) v = 0.0;  // folds -0 into 0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::vector<std::string> snapshot_header() { return {"t", "x", "re_psi", "im_psi", "density"}; }

std::vector<std::string> compare_snapshot_header() {
  return {"t",           "x",           "re_psi_var",  "im_psi_var",
          "density_var", "re_psi_grid", "im_psi_grid", "density_grid"};
}

std::vector<std::string> observable_header(std::size_t n_solitons) {
  std::vector<std::string> h{"t", "norm", "energy"};
  per_soliton(h, n_solitons, "");
  h.push_back("regularized_count");
  return h;
}

std::vector<std::string> compare_observable_header(std::size_t n_solitons) {
  std::vector<std::string> h{"t", "norm_var", "energy_var", "norm_grid", "energy_grid"};
  per_soliton(h, n_solitons, "_var");
  per_soliton(h, n_solitons, "_grid");
  h.insert(h.end(), {"regularized_count", "l2_mismatch", "sup_mismatch"});
  return h;
}

std::vector<std::string> scan_header() { return {"q", "V"}; }

CsvWriter::CsvWriter(const std::filesystem::path& path, std::vector<std::string> header)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc), columns_(header.size()) {
  if (!out_) throw IoError("cannot open " + path.string() + " for writing");
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

void CsvWriter::row(std::span<const double> values) {
  if (values.size() != columns_) {
    throw InternalError("CSV row for " + path_.string() + " has " + std::to_string(values.size()) +
                        " values, header has " + std::to_string(columns_));
  }
  for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_value(values[i]);
  out_ << '\n';
}

void CsvWriter::close() {
  out_.close();
  if (!out_) throw IoError("failed writing " + path_.string());
}

void Summary::section(const std::string& name) { lines_.push_back("[" + name + "]"); }

void Summary::set(const std::string& key, double value) {
  lines_.push_back(key + " = " + format_value(value));
}

void Summary::set(const std::string& key, long value) {
  lines_.push_back(key + " = " + std::to_string(value));
}

void Summary::set(const std::string& key, const std::string& value) {
  lines_.push_back(key + " = " + value);
}

std::string Summary::str() const {
  std::string text;
  for (const auto& line : lines_) text += line + '\n';
  return text;
}

void Summary::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << str();
  out.close();
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace solitonlab
