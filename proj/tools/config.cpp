#include "config.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "starprod/phase_space.hpp"

namespace starprod::cli {

namespace {
constexpr double kPi = 3.14159265358979323846;

double to_double(const std::string& s, const std::string& field) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError(field + ": '" + s + "' is not a number");
  }
}

int to_int(const std::string& s, const std::string& field) {
  const double v = to_double(s, field);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw ValidationError(field + ": '" + s + "' is not an integer");
  return static_cast<int>(v);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}
}  // namespace

MapSpec parse_map(const std::string& text) {
  MapSpec m;
  m.text = text;
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "weyl" && arg.empty()) {
    m.kind = MapSpec::Kind::Weyl;
  } else if (head == "sordered") {
    m.kind = MapSpec::Kind::SOrdered;
    if (arg.empty()) throw ValidationError("--map: sordered needs a value, e.g. sordered:0.4");
    m.s = to_double(arg, "--map sordered");
    if (!(m.s > -1.0 && m.s < 1.0)) throw ValidationError("--map: sordered s must lie in (-1, 1)");
  } else if (head == "tomographic") {
    m.kind = MapSpec::Kind::Tomographic;
    if (!arg.empty()) m.delta_width = to_double(arg, "--map tomographic");
    if (!(m.delta_width > 0.0)) throw ValidationError("--map: tomographic width must be positive");
  } else if (head == "matrix" && arg.empty()) {
    m.kind = MapSpec::Kind::Matrix;
  } else {
    throw ValidationError("--map: expected weyl, sordered:<s>, tomographic[:<width>] or matrix, got '" + text + "'");
  }
  return m;
}

std::unique_ptr<QuantizerPair> make_pair(const MapSpec& m, const FockSpace& space) {
  switch (m.kind) {
    case MapSpec::Kind::Weyl:
      return std::make_unique<WeylPair>(space);
    case MapSpec::Kind::SOrdered:
      return std::make_unique<SOrderedPair>(space, SOrder(m.s));
    case MapSpec::Kind::Tomographic:
      return std::make_unique<TomographicPair>(space, m.delta_width);
    case MapSpec::Kind::Matrix:
      return std::make_unique<MatrixMechanicsPair>(space);
  }
  throw ValidationError("unknown map");
}

StateSpec parse_state(const std::string& text) {
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "vacuum" && arg.empty()) return StateSpec::fock(0);
  if (head == "fock") {
    const int n = to_int(arg, "--state fock");
    if (n < 0) throw ValidationError("--state: fock level must be >= 0");
    return StateSpec::fock(n);
  }
  if (head == "coherent") {
    const auto parts = split(arg, ',');
    if (parts.empty() || parts.size() > 2) throw ValidationError("--state: coherent:<re>[,<im>]");
    const double re = to_double(parts[0], "--state coherent");
    const double im = parts.size() == 2 ? to_double(parts[1], "--state coherent") : 0.0;
    return StateSpec::coherent(cplx(re, im));
  }
  if (head == "thermal") {
    const double nbar = to_double(arg, "--state thermal");
    if (nbar < 0.0) throw ValidationError("--state: thermal nbar must be >= 0");
    return StateSpec::thermal(nbar);
  }
  throw ValidationError("--state: expected vacuum, fock:<n>, coherent:<re>[,<im>] or thermal:<nbar>, got '" +
                        text + "'");
}

Axis parse_axis(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw ValidationError("--grid: expected lo:hi:count, got '" + text + "'");
  Axis a{to_double(parts[0], "--grid lo"), to_double(parts[1], "--grid hi"), to_int(parts[2], "--grid count")};
  if (!(a.hi > a.lo)) throw ValidationError("--grid: hi must exceed lo in '" + text + "'");
  if (a.count < 1 || a.count > 4096) throw ValidationError("--grid: count must be in 1..4096");
  return a;
}

LabelGrid make_grid(const QuantizerPair& pair, const std::vector<std::string>& specs) {
  if (specs.empty() || pair.name() == "matrix") return pair.default_grid();
  std::vector<Axis> axes;
  for (const auto& s : specs) axes.push_back(parse_axis(s));
  const int d = pair.label_dim();
  if (d == 2 && axes.size() == 1) axes.push_back(axes[0]);
  if (static_cast<int>(axes.size()) != d)
    throw ValidationError("--grid: map " + pair.name() + " needs " + std::to_string(d) + " axes (got " +
                          std::to_string(specs.size()) + ")");
  return LabelGrid::rectangular(axes);
}

std::vector<std::string> label_names(const QuantizerPair& pair) {
  const std::string n = pair.name();
  if (n == "weyl") return {"q", "p"};
  if (n == "tomographic") return {"X", "mu", "nu"};
  if (n == "matrix") return {"i", "k"};
  return {"x1", "x2"};
}

double normalization(const SymbolField& f, const MapSpec& m) {
  switch (m.kind) {
    case MapSpec::Kind::Weyl:
      return f.integral().real() / (2.0 * kPi);
    case MapSpec::Kind::SOrdered:
      return f.integral().real() / kPi;
    case MapSpec::Kind::Matrix: {
      double s = 0.0;
      for (std::size_t i = 0; i < f.size(); ++i)
        if (f.grid.point(i)[0] == f.grid.point(i)[1]) s += f.values[i].real();
      return s;
    }
    case MapSpec::Kind::Tomographic: {
      std::map<std::pair<double, double>, double> per;
      for (std::size_t i = 0; i < f.size(); ++i)
        per[{f.grid.point(i)[1], f.grid.point(i)[2]}] += f.grid.weight(i) * f.values[i].real();
      // weights carry the (mu, nu) cell area; remove it per frame
      double mean = 0.0;
      for (const auto& kv : per) mean += kv.second;
      mean /= static_cast<double>(per.size());
      const auto& ax = f.grid.is_rectangular() ? f.grid.axes() : std::vector<Axis>{};
      if (ax.size() == 3) mean /= ax[1].spacing() * ax[2].spacing();
      return mean;
    }
  }
  return 0.0;
}

}  // namespace starprod::cli
