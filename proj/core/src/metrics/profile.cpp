#include "hybridsim/metrics/profile.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hybridsim/errors.hpp"

namespace hybridsim::metrics {

namespace {

bool contains(const std::vector<std::string>& list, const std::string& text) {
    return std::find(list.begin(), list.end(), text) != list.end();
}

std::string trimmed(const std::string& text) {
    std::size_t first = text.find_first_not_of(" \t\r");
    if (first == std::string::npos)
        return "";
    std::size_t last = text.find_last_not_of(" \t\r");
    return text.substr(first, last - first + 1);
}

}  // namespace

bool LanguageProfile::is_keyword(const std::string& text) const {
    return contains(keywords, text);
}

bool LanguageProfile::is_decision(const std::string& text) const {
    return contains(decision_tokens, text);
}

bool LanguageProfile::is_unit_keyword(const std::string& text) const {
    return contains(unit_keywords, text);
}

void validate(const LanguageProfile& profile) {
    if (profile.name.empty())
        throw ReportError("a language profile needs a name");
    if (profile.operators.empty())
        throw ReportError("profile '" + profile.name
                          + "' declares no operator tokens");
    for (const auto& [open, close] : profile.block_comments)
        if (open.empty() || close.empty())
            throw ReportError("profile '" + profile.name
                              + "' has an empty block-comment delimiter");
    for (const std::string& token : profile.decision_tokens)
        if (!contains(profile.operators, token) && !contains(profile.keywords, token))
            throw ReportError("profile '" + profile.name + "' decision token '"
                              + token + "' is neither an operator nor a keyword");
    for (const std::string& keyword : profile.unit_keywords)
        if (!contains(profile.keywords, keyword))
            throw ReportError("profile '" + profile.name + "' unit keyword '"
                              + keyword + "' is not a keyword");
}

LanguageProfile model_dsl_profile() {
    LanguageProfile profile;
    profile.name = "model-dsl";
    profile.line_comments = {"#"};
    profile.string_delimiters = {"\""};
    profile.operators = {"->", "<=", ">=", "==", "!=", "{", "}", "(", ")",
                         ";",  ",",  ":",  "=",  ".",  "<", ">", "+", "-",
                         "*",  "/"};
    profile.keywords = {
        "component", "system",    "var",      "ref",      "share",
        "msgbox",    "hook",      "automaton","state",    "init",
        "trans",     "law",       "expo",     "inst",     "when",
        "notify",    "export",    "import",   "as",       "instance",
        "connect",   "mediator",  "subject",  "active",   "role",
        "requires",  "observes",  "expose",   "chain",    "pdmp",
        "ode",       "eq",        "stop",     "start",    "include",
        "and",       "or",        "not",      "sum",      "any",
        "count",     "over",      "upstream_failed",      "set",
        "number",    "bool",      "continuous",
        "chain_failure",          "chain_repair",
    };
    profile.decision_tokens = {"when", "and", "or"};
    profile.unit_keywords = {"component", "system"};
    return profile;
}

LanguageProfile generic_c_like_profile() {
    LanguageProfile profile;
    profile.name = "generic-c-like";
    profile.line_comments = {"//"};
    profile.block_comments = {{"/*", "*/"}};
    profile.string_delimiters = {"\"", "'"};
    profile.operators = {
        "<<=", ">>=", "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=",
        "&&",  "||",  "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "::",
        "{",   "}",   "(",  ")",  "[",  "]",  ";",  ",",  ".",  "<",  ">",
        "+",   "-",   "*",  "/",  "%",  "=",  "&",  "|",  "^",  "!",  "~",
        "?",   ":",   "#",
    };
    profile.keywords = {
        "if",       "else",    "for",       "while",    "do",       "switch",
        "case",     "default", "break",     "continue", "return",   "goto",
        "struct",   "class",   "union",     "enum",     "typedef",  "template",
        "typename", "namespace", "using",   "public",   "private",  "protected",
        "virtual",  "override", "static",   "const",    "constexpr","inline",
        "void",     "bool",    "char",      "short",    "int",      "long",
        "float",    "double",  "unsigned",  "signed",   "auto",     "new",
        "delete",   "try",     "catch",     "throw",    "sizeof",
    };
    profile.decision_tokens = {"if", "for", "while", "case", "&&", "||", "?",
                               "catch"};
    profile.unit_keywords = {};
    return profile;
}

LanguageProfile parse_profile(const std::string& text, const std::string& origin) {
    LanguageProfile profile;
    std::string section;
    std::istringstream lines(text);
    std::string raw;
    std::size_t line_number = 0;
    while (std::getline(lines, raw)) {
        ++line_number;
        std::string line = trimmed(raw);
        if (line.empty())
            continue;
        if (line.front() == '[' && line.back() == ']') {
            section = line.substr(1, line.size() - 2);
            if (section != "comments" && section != "operators"
                && section != "keywords" && section != "decision"
                && section != "units")
                throw ReportError(origin + ":" + std::to_string(line_number)
                                  + ": unknown profile section [" + section + "]");
            continue;
        }
        if (section.empty() || section == "comments") {
            std::size_t equals = line.find('=');
            if (equals == std::string::npos)
                throw ReportError(origin + ":" + std::to_string(line_number)
                                  + ": expected 'key = value'");
            std::string key = trimmed(line.substr(0, equals));
            std::string value = trimmed(line.substr(equals + 1));
            if (section.empty()) {
                if (key != "name")
                    throw ReportError(origin + ":" + std::to_string(line_number)
                                      + ": only 'name' may appear before sections");
                profile.name = value;
            } else if (key == "line") {
                profile.line_comments.push_back(value);
            } else if (key == "block_open") {
                profile.block_comments.emplace_back(value, "");
            } else if (key == "block_close") {
                if (profile.block_comments.empty()
                    || !profile.block_comments.back().second.empty())
                    throw ReportError(origin + ":" + std::to_string(line_number)
                                      + ": block_close without block_open");
                profile.block_comments.back().second = value;
            } else if (key == "string") {
                profile.string_delimiters.push_back(value);
            } else {
                throw ReportError(origin + ":" + std::to_string(line_number)
                                  + ": unknown comment setting '" + key + "'");
            }
            continue;
        }
        // Token sections: one token per line, taken verbatim.
        if (section == "operators")
            profile.operators.push_back(line);
        else if (section == "keywords")
            profile.keywords.push_back(line);
        else if (section == "decision")
            profile.decision_tokens.push_back(line);
        else
            profile.unit_keywords.push_back(line);
    }
    for (const auto& [open, close] : profile.block_comments)
        if (close.empty())
            throw ReportError(origin + ": block_open '" + open
                              + "' has no block_close");
    validate(profile);
    return profile;
}

std::string render_profile(const LanguageProfile& profile) {
    std::ostringstream out;
    out << "name = " << profile.name << "\n\n[comments]\n";
    for (const std::string& marker : profile.line_comments)
        out << "line = " << marker << "\n";
    for (const auto& [open, close] : profile.block_comments)
        out << "block_open = " << open << "\nblock_close = " << close << "\n";
    for (const std::string& delimiter : profile.string_delimiters)
        out << "string = " << delimiter << "\n";
    out << "\n[operators]\n";
    for (const std::string& token : profile.operators)
        out << token << "\n";
    out << "\n[keywords]\n";
    for (const std::string& token : profile.keywords)
        out << token << "\n";
    out << "\n[decision]\n";
    for (const std::string& token : profile.decision_tokens)
        out << token << "\n";
    out << "\n[units]\n";
    for (const std::string& token : profile.unit_keywords)
        out << token << "\n";
    return out.str();
}

LanguageProfile load_profile_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.good())
        throw ReportError("cannot open profile file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_profile(buffer.str(), path);
}

LanguageProfile resolve_profile(const std::string& name_or_path) {
    std::error_code ignored;
    if (std::filesystem::is_regular_file(name_or_path, ignored))
        return load_profile_file(name_or_path);

    if (const char* search_path = std::getenv("HYBRIDSIM_PROFILE_PATH")) {
        std::string paths = search_path;
        std::size_t begin = 0;
        while (begin <= paths.size()) {
            std::size_t end = paths.find(':', begin);
            if (end == std::string::npos)
                end = paths.size();
            std::string directory = paths.substr(begin, end - begin);
            if (!directory.empty()) {
                std::filesystem::path candidate =
                    std::filesystem::path(directory) / (name_or_path + ".profile");
                if (std::filesystem::is_regular_file(candidate, ignored))
                    return load_profile_file(candidate.string());
            }
            begin = end + 1;
        }
    }

    if (name_or_path == "model-dsl")
        return model_dsl_profile();
    if (name_or_path == "generic-c-like")
        return generic_c_like_profile();
    throw ReportError("no profile named '" + name_or_path
                      + "' (not a file, not on HYBRIDSIM_PROFILE_PATH, "
                        "not a built-in)");
}

}  // namespace hybridsim::metrics
