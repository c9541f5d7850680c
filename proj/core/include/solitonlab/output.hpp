#pragma once

// Deterministic serialization: CSV files with fixed headers and a plain-text
// summary. Reals are printed as %.16e, which round-trips doubles exactly.

#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

namespace solitonlab {

std::string format_value(double v);

std::vector<std::string> snapshot_header();
std::vector<std::string> compare_snapshot_header();
std::vector<std::string> observable_header(std::size_t n_solitons);
std::vector<std::string> compare_observable_header(std::size_t n_solitons);
std::vector<std::string> scan_header();

class CsvWriter {
 public:
  /// Creates or truncates `path` and writes the header row. Throws IoError.
  CsvWriter(const std::filesystem::path& path, std::vector<std::string> header);

  /// Writes one row; the value count must match the header.
  void row(std::span<const double> values);
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_;
};

// Ordered `key = value` lines grouped under optional [section] headers.
class Summary {
 public:
  void section(const std::string& name);
  void set(const std::string& key, double value);
  void set(const std::string& key, long value);
  void set(const std::string& key, int value) { set(key, static_cast<long>(value)); }
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, const char* value) { set(key, std::string(value)); }

  std::string str() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> lines_;
};

}  // namespace solitonlab
