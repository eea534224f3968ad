#pragma once

#include <string>

#include "hybridsim/dsl/ast.hpp"

namespace hybridsim::dsl {

/// Parse one model file.  `file` is used for error positions only; includes
/// are recorded, not resolved.  Throws ParseError on malformed input.
[[nodiscard]] ModelFile parse_model(const std::string& text,
                                    const std::string& file);

/// Parse a single expression (used by tests and interactive tools).
[[nodiscard]] kernel::ExprPtr parse_expression(const std::string& text);

}  // namespace hybridsim::dsl
