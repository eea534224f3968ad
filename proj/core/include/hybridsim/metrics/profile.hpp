#pragma once

#include <string>
#include <utility>
#include <vector>

namespace hybridsim::metrics {

/// Everything the analyzers need to know about a language's surface:
/// how comments and strings look, which tokens are operators and keywords,
/// which tokens open a new decision path, and which keywords open a
/// measurable unit (a block counted on its own, e.g. a component).
struct LanguageProfile {
    std::string name;
    std::vector<std::string> line_comments;
    std::vector<std::pair<std::string, std::string>> block_comments;
    std::vector<std::string> string_delimiters;
    std::vector<std::string> operators;
    std::vector<std::string> keywords;
    /// Tokens that each add one to a unit's cyclomatic complexity.  Must be
    /// a subset of operators + keywords.
    std::vector<std::string> decision_tokens;
    /// Keywords that, at brace depth zero, open a unit reaching to the
    /// matching closing brace.  Empty = measure whole files as one unit.
    std::vector<std::string> unit_keywords;

    [[nodiscard]] bool is_keyword(const std::string& text) const;
    [[nodiscard]] bool is_decision(const std::string& text) const;
    [[nodiscard]] bool is_unit_keyword(const std::string& text) const;

    bool operator==(const LanguageProfile&) const = default;
};

/// Check the structural rules (non-empty name and operator list, decision
/// tokens drawn from operators + keywords).  Throws ReportError.
void validate(const LanguageProfile& profile);

/// Built-in profile for the modelling language shipped with this project.
[[nodiscard]] LanguageProfile model_dsl_profile();

/// Built-in catch-all profile for brace-and-semicolon languages.
[[nodiscard]] LanguageProfile generic_c_like_profile();

/// Parse the sectioned key/value profile format:
///
///   name = model-dsl
///   [comments]
///   line = #
///   block_open = /*
///   block_close = */
///   string = "
///   [operators]   \  one token
///   [keywords]     | per line
///   [decision]     |
///   [units]       /
///
/// `origin` names the source in error messages.  Throws ReportError on
/// malformed input or an invalid resulting profile.
[[nodiscard]] LanguageProfile parse_profile(const std::string& text,
                                            const std::string& origin);

/// Canonical text form; parse_profile(render_profile(p)) == p.
[[nodiscard]] std::string render_profile(const LanguageProfile& profile);

/// Load a profile from a file.  Throws ReportError when unreadable.
[[nodiscard]] LanguageProfile load_profile_file(const std::string& path);

/// Find a profile by path or name: an existing file path wins; otherwise
/// `<name>.profile` is searched in each directory of the colon-separated
/// HYBRIDSIM_PROFILE_PATH environment variable; otherwise the built-in
/// names resolve.  Throws ReportError when nothing matches.
[[nodiscard]] LanguageProfile resolve_profile(const std::string& name_or_path);

}  // namespace hybridsim::metrics
