#pragma once

#include <memory>
#include <string>
#include <vector>

#include "starprod/map_framework.hpp"
#include "starprod/tomography.hpp"

namespace starprod::cli {

enum Exit { kOk = 0, kValidation = 2, kNumerical = 3 };

struct MapSpec {
  enum class Kind { Weyl, SOrdered, Tomographic, Matrix } kind = Kind::Weyl;
  double s = 0.0;
  double delta_width = 0.2;
  std::string text;
};

MapSpec parse_map(const std::string& text);
std::unique_ptr<QuantizerPair> make_pair(const MapSpec& m, const FockSpace& space);

StateSpec parse_state(const std::string& text);
Axis parse_axis(const std::string& text);

// Grid for a map: one axis spec is used for both coordinates of 2D maps, the
// tomographic map takes three (X, mu, nu); none means the map default
LabelGrid make_grid(const QuantizerPair& pair, const std::vector<std::string>& axes);

std::vector<std::string> label_names(const QuantizerPair& pair);

// sum_i w_i f_i Tr D(x_i), which is Tr of the reconstructed operator; for the
// tomographic map the mean over frames of the X integral
double normalization(const SymbolField& f, const MapSpec& m);

}  // namespace starprod::cli
