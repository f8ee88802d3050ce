#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "starprod/assoc.hpp"
#include "starprod/map_framework.hpp"
#include "starprod/tomography.hpp"

namespace starprod {

std::string library_version();

// 12 significant digits throughout
std::string format_number(double v);

// one row per grid point: label columns, weight, re, im
std::string field_csv(const SymbolField& f, const std::vector<std::string>& label_names);
std::string field_json(const SymbolField& f, const std::vector<std::string>& label_names,
                       const std::map<std::string, std::string>& meta = {});

// columns X, mu, nu, w
std::string tomogram_csv(const Tomogram& t);
std::string tomogram_json(const Tomogram& t);

// {"n": int, "entries": [k][n][s]}; an entry is a number or [re, im]
std::string tensor_json(const StructureTensor& m);
StructureTensor tensor_from_json(const std::string& text);

struct Manifest {
  static constexpr int kSchemaVersion = 1;
  int schema_version = kSchemaVersion;
  std::string command;
  std::string library_version;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> parameters;
  std::map<std::string, double> residuals;
  std::map<std::string, double> tolerances;
  std::vector<std::string> artifacts;
  bool pass = true;
};

std::string manifest_json(const Manifest& m);
// ValidationError on malformed input or an unsupported schema version
Manifest parse_manifest(const std::string& text);

void write_text(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);

}  // namespace starprod
