#pragma once

#include <string>
#include <vector>

#include "qmk/derived_structure.hpp"
#include "qmk/document.hpp"
#include "qmk/two_layer.hpp"

#include <ostream>

namespace qmk {
// readable gtest failure messages
inline void PrintTo(const Polynomial& p, std::ostream* os) { *os << to_string(p); }
inline void PrintTo(const VectorField& x, std::ostream* os) { *os << to_string(x); }
}  // namespace qmk

namespace qmk::testing {

std::string read_file(const std::string& path);
std::string data_path(const std::string& name);    // tests/data/<name>
std::string golden_path(const std::string& name);  // tests/golden/<name>

ChartDocument load_chart(const std::string& name);  // tests/data/<name>.qmk
VectorField load_q(const std::string& name);

struct Fixture {
  std::string name;
  VectorField q;
};
/// Homological fixtures with N <= 2 used across the suites.
std::vector<Fixture> homological_fixtures();

Polynomial poly(const ContextPtr& ctx, const std::string& text);

/// Short labels: d_y1 -> e_y1, y1_d_z1 -> e^y1_z1.
std::string short_label(const BasisElement& b);

/// Tables of the y/z model rendered in the golden-file format.
std::string render_model_tables(const TwoLayerStructure& t, const LInftyStructure& l);
/// Primed basis of the model chart pushed into the unprimed chart.
std::string render_model_translaw();

}  // namespace qmk::testing
