#pragma once

// Chart documents and tables files.
//
//   coord <name> parity=<even|odd> weight=<int>;
//   field <name> { <coord> = <expr>; ... }
//   map <name> { <coord> = <expr>; ... }
//
// Coordinates come first; a document has exactly one chart. Unmapped
// coordinates of a map are sent to themselves.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qmk/expression.hpp"
#include "qmk/two_layer.hpp"

namespace qmk {

struct ChartDocument {
  ContextPtr context;
  std::vector<std::pair<std::string, VectorField>> fields;
  std::vector<std::pair<std::string, Substitution>> maps;

  /// Throws InvalidArgument for unknown names.
  const VectorField& field(std::string_view name) const;
  const Substitution& map(std::string_view name) const;
};

ChartDocument parse_document(std::string_view text);
/// Normalized form; parse_document(print_document(d)) prints identically.
std::string print_document(const ChartDocument& doc);
std::string print_coordinates(const GradedContext& ctx);
std::string print_field(std::string_view name, const VectorField& x);

/// Output of `two-layer` and input of `recover`: the coordinate
/// declarations followed by
///   source <field>;
///   basis <label> { <coord> = <monomial>; }
///   bracket <label> <label> { <label> = <expr>; ... }
///   d <label> { ... }
///   newbracket <label> <label> { ... }
///   anchor <label> { <coord> = <expr>; ... }
/// Entries left out are zero.
struct TablesDocument {
  std::string source = "Q";
  TwoLayerStructure tables;
};

TablesDocument parse_tables(std::string_view text);
std::string print_tables(const TablesDocument& doc);

}  // namespace qmk
