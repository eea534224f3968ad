#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "hybridsim/cases/heated_room.hpp"
#include "hybridsim/dsl/elaborator.hpp"
#include "hybridsim/dsl/parser.hpp"
#include "hybridsim/dsl/printer.hpp"
#include "hybridsim/engine/simulator.hpp"

using namespace hybridsim;
using namespace hybridsim::dsl;

namespace {

std::string cases_dir() { return HYBRIDSIM_CASES_DIR; }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string canonical_text(const std::string& text, const std::string& name) {
    return print_model(parse_model(text, name));
}

/// Round-trips an expression through the parser and printer.
std::string rendered(const std::string& text) {
    return kernel::to_text(*parse_expression(text));
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path()
               / ("hybridsim-dsl-" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string write(const std::string& name,
                      const std::string& content) const {
        std::filesystem::path file = path / name;
        std::filesystem::create_directories(file.parent_path());
        std::ofstream out(file, std::ios::binary);
        out << content;
        return file.string();
    }
};

}  // namespace

// ============================================================================
// Expressions
// ============================================================================

TEST_CASE("expression parsing respects precedence and associativity") {
    CHECK(rendered("1 + 2 * 3") == "1 + 2 * 3");
    CHECK(rendered("(1 + 2) * 3") == "(1 + 2) * 3");
    CHECK(rendered("1 - 2 - 3") == "1 - 2 - 3");          // left associative
    CHECK(rendered("1 - (2 - 3)") == "1 - (2 - 3)");
    CHECK(rendered("a and b or c and d") == "a and b or c and d");
    CHECK(rendered("not (a or b)") == "not (a or b)");
    CHECK(rendered("not a or b") == "not a or b");
    CHECK(rendered("-a * b") == "-a * b");
    CHECK(rendered("-(a * b)") == "-(a * b)");
    CHECK(rendered("a <= b and c >= d") == "a <= b and c >= d");
    CHECK(rendered("active(Power.ON) * power") == "active(Power.ON) * power");
    CHECK(rendered("sum(heating)") == "sum(heating)");
    CHECK(rendered("any(wantsStopHigh over heater)")
          == "any(wantsStopHigh over heater)");
    CHECK(rendered("count(x > 1)") == "count(x > 1)");
    CHECK(rendered("upstream_failed and ready") == "upstream_failed and ready");
    CHECK(rendered("0.01") == "0.01");
    CHECK(rendered("1e3") == "1000");
    CHECK(rendered("true == false") == "true == false");
}

TEST_CASE("malformed expressions are rejected with positions") {
    CHECK_THROWS_AS((void)parse_expression("1 +"), ParseError);
    CHECK_THROWS_AS((void)parse_expression("a < b < c"), ParseError);
    CHECK_THROWS_AS((void)parse_expression("()"), ParseError);
    CHECK_THROWS_AS((void)parse_expression("component"), ParseError);
    CHECK_THROWS_AS((void)parse_expression("sum(x over)"), ParseError);
    CHECK_THROWS_AS((void)parse_expression("1 2"), ParseError);
}

TEST_CASE("parse errors carry file, line, and column") {
    try {
        (void)parse_model("component Broken {\n    var : number;\n}\n", "bad.model");
        FAIL("expected a parse error");
    } catch (const ParseError& error) {
        CHECK(error.file() == "bad.model");
        CHECK(error.line() == 2);
        CHECK(error.column() == 9);
    }
}

TEST_CASE("reserved words cannot name declarations") {
    CHECK_THROWS_AS((void)parse_model("component state { }", "x.model"),
                    ParseError);
    CHECK_THROWS_AS(
        (void)parse_model("component C { var count: number; }", "x.model"),
        ParseError);
}

TEST_CASE("unterminated strings and stray characters are token errors") {
    CHECK_THROWS_AS((void)parse_model("include \"oops;\n", "x.model"), ParseError);
    CHECK_THROWS_AS((void)parse_model("component C @ { }", "x.model"), ParseError);
}

// ============================================================================
// Structure
// ============================================================================

TEST_CASE("a component round-trips through the parser") {
    ModelFile file = parse_model(read_file(cases_dir() + "/components/heater.model"),
                                 "heater.model");
    REQUIRE(file.components.size() == 1);
    const AstComponent& heater = file.components[0];
    CHECK(heater.name == "Heater");
    REQUIRE(heater.parameters.size() == 5);
    CHECK(heater.parameters[0].name == "power");
    CHECK(heater.parameters[1].name == "failureRate");
    REQUIRE(heater.automata.size() == 2);
    CHECK(heater.automata[0].name == "Function");
    CHECK(heater.automata[0].transitions.size() == 2);
    CHECK(heater.automata[1].transitions[0].condition != nullptr);
    REQUIRE(heater.message_boxes.size() == 1);
    CHECK(heater.message_boxes[0].exports.size() == 1);
    CHECK(heater.message_boxes[0].imports.size() == 1);
}

TEST_CASE("positional arguments fill parameters in declaration order") {
    TempDir dir;
    std::string path = dir.write("positional.model", R"(
component Pump(rate: number, level: number = 3) {
    var output: number = rate * level;
}

system rig {
    instance p: Pump(2, level = 5);
}
)");
    ElaboratedModel elaborated = elaborate_file(path);
    const kernel::Instance& p = elaborated.model.instances[0];
    CHECK(p.parameter_values[0].as_number() == 2.0);
    CHECK(p.parameter_values[1].as_number() == 5.0);
}

TEST_CASE("positional arguments may not follow named ones") {
    TempDir dir;
    std::string path = dir.write("mixed.model", R"(
component Pump(rate: number, level: number = 3) {
}

system rig {
    instance p: Pump(rate = 2, 5);
}
)");
    CHECK_THROWS_AS((void)elaborate_file(path), ParseError);
}

TEST_CASE("imports declare their reference implicitly") {
    ModelFile file = parse_model(read_file(cases_dir() + "/components/room.model"),
                                 "room.model");
    kernel::ComponentDefinition room = lower_component(file.components[0]);
    REQUIRE(room.references.size() == 1);
    CHECK(room.references[0].name == "heating");
}

// ============================================================================
// Canonical printing
// ============================================================================

TEST_CASE("printing a parsed file is a fixed point") {
    const char* names[] = {
        "components/heater.model", "components/room.model",
        "components/mediator.model", "case0.model",  "case1.model",
        "case2.model",              "case0a.model", "case1a.model",
        "case2a.model",
    };
    for (const char* name : names) {
        CAPTURE(name);
        std::string original = read_file(cases_dir() + "/" + name);
        std::string canonical = canonical_text(original, name);
        CHECK(canonical_text(canonical, name) == canonical);
    }
}

TEST_CASE("the shipped corpus is canonical up to comments") {
    // Canonicalising drops comments and blank lines but must not otherwise
    // reshape the shipped files: re-canonicalising changes nothing, and every
    // non-comment source line survives verbatim.
    std::string original = read_file(cases_dir() + "/case2a.model");
    std::string canonical = canonical_text(original, "case2a.model");
    std::istringstream lines(original);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        CHECK(canonical.find(line) != std::string::npos);
    }
}

// ============================================================================
// Includes
// ============================================================================

TEST_CASE("includes resolve relative to the including file, once each") {
    TempDir dir;
    dir.write("lib/a.model", "component A {\n}\n");
    dir.write("lib/b.model", "include \"a.model\";\n\ncomponent B {\n}\n");
    std::string entry = dir.write("main.model", R"(
include "lib/a.model";
include "lib/b.model";

system rig {
    instance first: A;
    instance second: B;
}
)");
    ElaboratedModel elaborated = elaborate_file(entry);
    REQUIRE(elaborated.files.size() == 3);  // a, b, main — a only once
    CHECK(elaborated.files[0].find("a.model") != std::string::npos);
    CHECK(elaborated.files[1].find("b.model") != std::string::npos);
    CHECK(elaborated.files[2].find("main.model") != std::string::npos);
    CHECK(elaborated.model.instances.size() == 2);
}

TEST_CASE("include cycles are rejected") {
    TempDir dir;
    dir.write("x.model", "include \"y.model\";\n");
    std::string entry = dir.write("y.model", "include \"x.model\";\n");
    CHECK_THROWS_AS((void)elaborate_file(entry), ElaborationError);
}

TEST_CASE("a missing include is reported") {
    TempDir dir;
    std::string entry = dir.write("main.model", "include \"nowhere.model\";\n");
    CHECK_THROWS_AS((void)elaborate_file(entry), ElaborationError);
}

TEST_CASE("exactly one system must be declared") {
    TempDir dir;
    std::string none = dir.write("none.model", "component A {\n}\n");
    CHECK_THROWS_AS((void)elaborate_file(none), ElaborationError);

    std::string two = dir.write("two.model",
                                "system a {\n}\n\nsystem b {\n}\n");
    CHECK_THROWS_AS((void)elaborate_file(two), ElaborationError);
}

// ============================================================================
// Elaborated case files match the built-in constructions
// ============================================================================

TEST_CASE("every case file elaborates to its catalogued shape") {
    for (const auto& entry : cases::catalog()) {
        CAPTURE(entry.name);
        ElaboratedModel elaborated =
            elaborate_file(cases_dir() + "/" + entry.entry_file);
        CHECK(elaborated.system_name == entry.name);
        CHECK(static_cast<int>(elaborated.model.instances.size())
              == entry.instance_count);
        CHECK(elaborated.model.connection_count == entry.connection_count);
        CHECK(static_cast<int>(elaborated.model.groups.size())
              == entry.group_count);
        CHECK(static_cast<int>(elaborated.model.chains.size())
              == entry.chain_count);

        REQUIRE(elaborated.files.size() == entry.files.size());
        for (std::size_t i = 0; i < entry.files.size(); ++i) {
            CAPTURE(entry.files[i]);
            CHECK(elaborated.files[i].size() >= entry.files[i].size());
            CHECK(elaborated.files[i].compare(
                      elaborated.files[i].size() - entry.files[i].size(),
                      entry.files[i].size(), entry.files[i]) == 0);
        }
    }
}

TEST_CASE("case files and builders produce bit-identical traces") {
    for (const auto& entry : cases::catalog()) {
        CAPTURE(entry.name);
        ElaboratedModel elaborated =
            elaborate_file(cases_dir() + "/" + entry.entry_file);
        kernel::SystemModel built = cases::build_heated_room(entry.config);

        engine::EngineConfig config;
        config.horizon = 300.0;
        config.step_size = 0.1;
        config.seed = 7;

        engine::SimulationTrace from_file =
            engine::run_replication(elaborated.model, config, 1);
        engine::SimulationTrace from_builder =
            engine::run_replication(built, config, 1);

        REQUIRE(from_file.firings.size() == from_builder.firings.size());
        for (std::size_t i = 0; i < from_file.firings.size(); ++i) {
            CHECK(from_file.firings[i].time == from_builder.firings[i].time);
            CHECK(from_file.firings[i].instance == from_builder.firings[i].instance);
            CHECK(from_file.firings[i].automaton
                  == from_builder.firings[i].automaton);
            CHECK(from_file.firings[i].transition
                  == from_builder.firings[i].transition);
        }
        REQUIRE(from_file.samples.size() == from_builder.samples.size());
        for (std::size_t i = 0; i < from_file.samples.size(); ++i) {
            CHECK(from_file.samples[i].time == from_builder.samples[i].time);
            CHECK(from_file.samples[i].value == from_builder.samples[i].value);
        }
        CHECK(from_file.end_state_signature == from_builder.end_state_signature);
    }
}
