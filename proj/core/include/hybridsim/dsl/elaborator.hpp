#pragma once

#include <string>
#include <vector>

#include "hybridsim/dsl/ast.hpp"
#include "hybridsim/kernel/system_model.hpp"

namespace hybridsim::dsl {

struct ElaboratedModel {
    kernel::SystemModel model;
    std::string system_name;
    /// Every file that took part, dependencies before their includers; the
    /// entry file comes last.  Measurement tools treat this as the
    /// concatenation order of the model's source.
    std::vector<std::string> files;
};

/// Lower one parsed component onto the kernel (no includes involved).
[[nodiscard]] kernel::ComponentDefinition
lower_component(const AstComponent& component);

/// Load `path`, resolve its includes (relative to the including file, each
/// file loaded once, cycles rejected), and assemble the system it declares.
/// Exactly one `system` block must exist across all files.  Throws
/// ParseError, ElaborationError, or ValidationError.
[[nodiscard]] ElaboratedModel elaborate_file(const std::string& path);

}  // namespace hybridsim::dsl
