#pragma once

#include <string>

#include "hybridsim/dsl/ast.hpp"

namespace hybridsim::dsl {

/// Render a model file in canonical form: four-space indentation, one
/// declaration per line, categories in a fixed order, expressions with
/// minimal parentheses.  Printing a parsed canonical file reproduces it
/// byte for byte, so print-then-parse is a fixed point.
[[nodiscard]] std::string print_model(const ModelFile& file);

}  // namespace hybridsim::dsl
