#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "qtensor/dynamics.hpp"

namespace qtensor {

// Flat key-value configuration: "[section]" headers plus "key = value"
// lines; keys are stored as "section.key".  '#' and ';' start comments.
struct Config {
  std::map<std::string, std::string> kv;

  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text);

  // "section.key=value", as accepted on the command line
  void set(const std::string& assignment);
  void set(const std::string& key, const std::string& value);

  bool has(const std::string& key) const;
  std::string get(const std::string& key, const std::string& def) const;
  double get_num(const std::string& key, double def) const;
  int get_int(const std::string& key, int def) const;
  bool get_bool(const std::string& key, bool def) const;

  // sorted "key=value" lines; hashing input
  std::string canonical() const;
};

std::uint64_t fnv1a(const std::string& s);
std::string config_hash(const Config& cfg);

// shortest round-trip decimal formatting ('%.17g')
std::string format_num(double v);

// CSV with '#'-prefixed metadata lines (version, config hash, parameter
// echo) followed by a mandatory header row.  Comma delimiter, '.' decimal.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns,
            const std::vector<std::string>& meta);
  void row(const std::vector<double>& values);
  void raw_row(const std::vector<std::string>& fields);
  void close();

 private:
  std::ofstream out_;
};

std::vector<std::string> standard_meta(const Config& cfg);

// Checkpoints: header (dims, box, params echo, time) then row-major cell
// records (5 Q components, vx, vy).  CSV or a little-endian binary with a
// magic tag, chosen by the caller.
void write_checkpoint_csv(const std::string& path, const FieldState& s,
                          const std::vector<std::string>& meta);
void write_checkpoint_bin(const std::string& path, const FieldState& s);
FieldState read_checkpoint_bin(const std::string& path);

// Companion gnuplot script for a time-series CSV.
void write_gnuplot_script(const std::string& path, const std::string& csv,
                          const std::vector<std::string>& columns);

}  // namespace qtensor
