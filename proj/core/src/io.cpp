#include "starprod/io.hpp"

#include <cstdlib>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace starprod {

using nlohmann::json;

namespace {
std::string csv_line(const std::vector<double>& cells) {
  std::string s;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) s += ',';
    s += format_number(cells[i]);
  }
  s += '\n';
  return s;
}

json grid_json(const LabelGrid& g, const std::vector<std::string>& names) {
  json j;
  j["label_dim"] = g.label_dim();
  j["size"] = g.size();
  j["labels"] = names;
  if (g.is_rectangular()) {
    json axes = json::array();
    for (const auto& a : g.axes()) axes.push_back({{"lo", a.lo}, {"hi", a.hi}, {"count", a.count}});
    j["axes"] = axes;
  }
  return j;
}

// json dumps doubles at full precision; round to 12 digits first
double round12(double v) {
  if (!std::isfinite(v) || v == 0.0) return v;
  return std::strtod(format_number(v).c_str(), nullptr);
}
}  // namespace

std::string library_version() {
#ifdef STARPROD_VERSION_STRING
  return STARPROD_VERSION_STRING;
#else
  return "unknown";
#endif
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

std::string field_csv(const SymbolField& f, const std::vector<std::string>& names) {
  if (static_cast<int>(names.size()) != f.grid.label_dim())
    throw DimensionMismatch("field_csv: need one column name per label coordinate");
  std::string out;
  for (const auto& n : names) out += n + ',';
  out += "weight,re,im\n";
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::vector<double> row(f.grid.point(i));
    row.push_back(f.grid.weight(i));
    row.push_back(f.values[i].real());
    row.push_back(f.values[i].imag());
    out += csv_line(row);
  }
  return out;
}

std::string field_json(const SymbolField& f, const std::vector<std::string>& names,
                       const std::map<std::string, std::string>& meta) {
  json j;
  j["grid"] = grid_json(f.grid, names);
  json re = json::array(), im = json::array();
  for (const auto& v : f.values) {
    re.push_back(round12(v.real()));
    im.push_back(round12(v.imag()));
  }
  j["re"] = re;
  j["im"] = im;
  j["meta"] = meta;
  return j.dump(1);
}

std::string tomogram_csv(const Tomogram& t) {
  std::string out = "X,mu,nu,w\n";
  for (std::size_t i = 0; i < t.values.size(); ++i) {
    const Point& p = t.grid.point(i);
    out += csv_line({p[0], p[1], p[2], t.values[i]});
  }
  return out;
}

std::string tomogram_json(const Tomogram& t) {
  json j;
  j["grid"] = grid_json(t.grid, {"X", "mu", "nu"});
  j["dim"] = t.dim;
  j["delta_width"] = t.delta_width;
  j["max_imag_residue"] = t.max_imag_residue;
  json w = json::array();
  for (double v : t.values) w.push_back(round12(v));
  j["w"] = w;
  return j.dump(1);
}

std::string tensor_json(const StructureTensor& m) {
  json e = json::array();
  for (int k = 0; k < m.n(); ++k) {
    json rows = json::array();
    for (int a = 0; a < m.n(); ++a) {
      json row = json::array();
      for (int s = 0; s < m.n(); ++s) {
        const cplx v = m.at(k, a, s);
        if (v.imag() == 0.0)
          row.push_back(round12(v.real()));
        else
          row.push_back({round12(v.real()), round12(v.imag())});
      }
      rows.push_back(row);
    }
    e.push_back(rows);
  }
  return json{{"n", m.n()}, {"entries", e}}.dump(1);
}

StructureTensor tensor_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& ex) {
    throw ValidationError(std::string("tensor JSON: ") + ex.what());
  }
  if (!j.contains("n") || !j["n"].is_number_integer() || !j.contains("entries"))
    throw ValidationError("tensor JSON: needs integer 'n' and 'entries'");
  const int n = j["n"].get<int>();
  if (n < 1 || n > 64) throw ValidationError("tensor JSON: n must be in 1..64");
  const json& e = j["entries"];
  StructureTensor m(n);
  auto bad = [&](const std::string& where) { return ValidationError("tensor JSON: entries" + where + " has the wrong shape"); };
  if (!e.is_array() || static_cast<int>(e.size()) != n) throw bad("");
  for (int k = 0; k < n; ++k) {
    if (!e[k].is_array() || static_cast<int>(e[k].size()) != n) throw bad("[" + std::to_string(k) + "]");
    for (int a = 0; a < n; ++a) {
      const json& row = e[k][a];
      if (!row.is_array() || static_cast<int>(row.size()) != n)
        throw bad("[" + std::to_string(k) + "][" + std::to_string(a) + "]");
      for (int s = 0; s < n; ++s) {
        const json& v = row[s];
        if (v.is_number())
          m.at(k, a, s) = v.get<double>();
        else if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
          m.at(k, a, s) = cplx(v[0].get<double>(), v[1].get<double>());
        else
          throw ValidationError("tensor JSON: entry must be a number or [re, im]");
      }
    }
  }
  return m;
}

std::string manifest_json(const Manifest& m) {
  json j;
  j["schema_version"] = m.schema_version;
  j["command"] = m.command;
  j["library_version"] = m.library_version;
  j["seed"] = m.seed;
  j["parameters"] = m.parameters;
  json r = json::object(), t = json::object();
  for (const auto& [k, v] : m.residuals) r[k] = round12(v);
  for (const auto& [k, v] : m.tolerances) t[k] = v;
  j["residuals"] = r;
  j["tolerances"] = t;
  j["artifacts"] = m.artifacts;
  j["pass"] = m.pass;
  return j.dump(1);
}

Manifest parse_manifest(const std::string& text) {
  Manifest m;
  try {
    const json j = json::parse(text);
    m.schema_version = j.at("schema_version").get<int>();
    if (m.schema_version != Manifest::kSchemaVersion)
      throw ValidationError("manifest: unsupported schema version " + std::to_string(m.schema_version));
    m.command = j.at("command").get<std::string>();
    m.library_version = j.value("library_version", std::string());
    m.seed = j.value("seed", std::uint64_t{0});
    m.parameters = j.value("parameters", std::map<std::string, std::string>{});
    const json res = j.value("residuals", json::object());
    const json tols = j.value("tolerances", json::object());
    for (const auto& [k, v] : res.items())
      m.residuals[k] = v.is_number() ? v.get<double>() : std::numeric_limits<double>::quiet_NaN();
    for (const auto& [k, v] : tols.items())
      if (v.is_number()) m.tolerances[k] = v.get<double>();
    m.artifacts = j.value("artifacts", std::vector<std::string>{});
    m.pass = j.value("pass", false);
  } catch (const json::exception& ex) {
    throw ValidationError(std::string("manifest: ") + ex.what());
  }
  return m;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot open '" + path + "' for writing");
  f << content;
  if (!f) throw ValidationError("write to '" + path + "' failed");
}

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot read '" + path + "'");
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace starprod
