// Tests for the source-metrics toolkit: line classification, tokenizing,
// Halstead measures, cyclomatic complexity, maintainability index, the
// code-line diff with its change ratio, language profiles, and the
// corpus comparison report.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "hybridsim/cases/heated_room.hpp"
#include "hybridsim/errors.hpp"
#include "hybridsim/metrics/complexity.hpp"
#include "hybridsim/metrics/diff.hpp"
#include "hybridsim/metrics/halstead.hpp"
#include "hybridsim/metrics/lines.hpp"
#include "hybridsim/metrics/profile.hpp"
#include "hybridsim/metrics/report.hpp"
#include "hybridsim/metrics/tokens.hpp"

using namespace hybridsim;
using namespace hybridsim::metrics;

namespace {

std::string cases_dir() { return HYBRIDSIM_CASES_DIR; }
std::string profiles_dir() { return HYBRIDSIM_PROFILES_DIR; }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "cannot open " << path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string current;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    if (!current.empty()) lines.push_back(current);
    return lines;
}

std::string join_lines(const std::vector<std::string>& lines) {
    std::string text;
    for (const auto& line : lines) {
        text += line;
        text += '\n';
    }
    return text;
}

/// Scratch directory for report outputs and profile files.
class TempDir {
public:
    TempDir() {
        path_ = std::filesystem::temp_directory_path()
                / ("hybridsim_metrics_" + std::to_string(::getpid()) + "_"
                   + std::to_string(counter_++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    [[nodiscard]] std::string write(const std::string& name, const std::string& content) const {
        auto file = path_ / name;
        std::ofstream out(file, std::ios::binary);
        out << content;
        return file.string();
    }
    [[nodiscard]] std::string dir() const { return path_.string(); }

private:
    static inline int counter_ = 0;
    std::filesystem::path path_;
};

bool counts_equal(const HalsteadMetrics& a, const HalsteadMetrics& b) {
    return a.distinct_operators == b.distinct_operators
           && a.distinct_operands == b.distinct_operands
           && a.total_operators == b.total_operators
           && a.total_operands == b.total_operands;
}

}  // namespace

// ---------------------------------------------------------------------------
// Line classification
// ---------------------------------------------------------------------------

TEST_CASE("line classes: comment, blank, and code with trailing comment") {
    const auto profile = model_dsl_profile();
    const std::string text = "# note\n\nvar x = 1  # trailing\n";

    const auto kinds = classify_each_line(text, profile);
    REQUIRE(kinds.size() == 3);
    CHECK(kinds[0] == LineKind::Comment);
    CHECK(kinds[1] == LineKind::Blank);
    CHECK(kinds[2] == LineKind::Code);

    const auto counts = classify_lines(text, profile);
    CHECK(counts.code == 1);
    CHECK(counts.comment == 1);
    CHECK(counts.blank == 1);
    CHECK(counts.physical() == 3);

    const auto code = code_lines(text, profile);
    REQUIRE(code.size() == 1);
    CHECK(code[0] == "var x = 1  # trailing");
}

TEST_CASE("line classes: empty text has no lines at all") {
    const auto counts = classify_lines("", model_dsl_profile());
    CHECK(counts.code == 0);
    CHECK(counts.comment == 0);
    CHECK(counts.blank == 0);
}

TEST_CASE("line classes: whitespace-only lines are blank, indentation is not code") {
    const auto profile = model_dsl_profile();
    CHECK(classify_lines("   \t \n", profile).blank == 1);
    CHECK(classify_lines("    # indented comment\n", profile).comment == 1);
    CHECK(classify_lines("    x\n", profile).code == 1);
}

TEST_CASE("line classes: block comments span lines; code before an opener wins") {
    const auto profile = generic_c_like_profile();
    const std::string text =
        "/* opening\n"
        "   still inside\n"
        "*/ int x;\n"
        "int y; /* tail\n"
        "still comment */\n";
    const auto kinds = classify_each_line(text, profile);
    REQUIRE(kinds.size() == 5);
    CHECK(kinds[0] == LineKind::Comment);
    CHECK(kinds[1] == LineKind::Comment);
    CHECK(kinds[2] == LineKind::Code);     // closes, then real code follows
    CHECK(kinds[3] == LineKind::Code);     // code first, opener trails
    CHECK(kinds[4] == LineKind::Comment);  // continuation then close
}

TEST_CASE("line classes: whitespace-only lines inside a block comment stay blank") {
    const auto profile = generic_c_like_profile();
    const auto kinds = classify_each_line("/* a\n\n b */\n", profile);
    REQUIRE(kinds.size() == 3);
    CHECK(kinds[0] == LineKind::Comment);
    CHECK(kinds[1] == LineKind::Blank);
    CHECK(kinds[2] == LineKind::Comment);
}

TEST_CASE("line classes: unterminated block comment runs to end of file with a warning") {
    const auto profile = generic_c_like_profile();
    std::vector<std::string> warnings;
    const auto kinds = classify_each_line("int x;\n/* oops\nmore\n", profile, &warnings);
    REQUIRE(kinds.size() == 3);
    CHECK(kinds[0] == LineKind::Code);
    CHECK(kinds[1] == LineKind::Comment);
    CHECK(kinds[2] == LineKind::Comment);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("line 2") != std::string::npos);
    CHECK(warnings[0].find("never closed") != std::string::npos);
}

TEST_CASE("line classes: comment markers inside strings do not start comments") {
    const auto profile = model_dsl_profile();
    CHECK(classify_lines("x = \"# not a comment\"\n", profile).code == 1);
    const auto generic = generic_c_like_profile();
    CHECK(classify_lines("s = \"/* nope */\";\n", generic).code == 1);
}

TEST_CASE("line classes: totals equal physical lines on every shipped model file") {
    const auto profile = model_dsl_profile();
    for (const auto& entry : cases::catalog()) {
        for (const auto& rel : entry.files) {
            const auto text = read_file(cases_dir() + "/" + rel);
            long long physical = 0;
            bool at_line_start = true;
            for (char c : text) {
                if (at_line_start) ++physical;
                at_line_start = (c == '\n');
            }
            const auto counts = classify_lines(text, profile);
            CHECK_MESSAGE(counts.physical() == physical, rel);
            CHECK(counts.code > 0);
        }
    }
}

// ---------------------------------------------------------------------------
// Tokenizer
// ---------------------------------------------------------------------------

TEST_CASE("tokenize: kinds, text, and positions of a small assignment") {
    const auto tokens = tokenize("a = b + b * 2", model_dsl_profile());
    REQUIRE(tokens.size() == 7);
    const MetricTokenKind expected_kinds[] = {
        MetricTokenKind::Identifier, MetricTokenKind::Operator,
        MetricTokenKind::Identifier, MetricTokenKind::Operator,
        MetricTokenKind::Identifier, MetricTokenKind::Operator,
        MetricTokenKind::Number,
    };
    const char* expected_text[] = {"a", "=", "b", "+", "b", "*", "2"};
    const std::size_t expected_col[] = {1, 3, 5, 7, 9, 11, 13};
    for (std::size_t i = 0; i < 7; ++i) {
        CHECK(tokens[i].kind == expected_kinds[i]);
        CHECK(tokens[i].text == expected_text[i]);
        CHECK(tokens[i].line == 1);
        CHECK(tokens[i].column == expected_col[i]);
    }
}

TEST_CASE("tokenize: keywords from the profile get their own kind") {
    const auto tokens = tokenize("component Heater", model_dsl_profile());
    REQUIRE(tokens.size() == 2);
    CHECK(tokens[0].kind == MetricTokenKind::Keyword);
    CHECK(tokens[1].kind == MetricTokenKind::Identifier);
}

TEST_CASE("tokenize: operators match longest first") {
    const auto tokens = tokenize("a->b<=c", model_dsl_profile());
    REQUIRE(tokens.size() == 5);
    CHECK(tokens[1].text == "->");
    CHECK(tokens[3].text == "<=");

    const auto generic = tokenize("x<<=1", generic_c_like_profile());
    REQUIRE(generic.size() == 3);
    CHECK(generic[1].text == "<<=");
}

TEST_CASE("tokenize: numbers keep fractions and exponents together") {
    const auto profile = model_dsl_profile();
    auto one = [&](const std::string& text) {
        const auto tokens = tokenize(text, profile);
        REQUIRE(tokens.size() == 1);
        CHECK(tokens[0].kind == MetricTokenKind::Number);
        return tokens[0].text;
    };
    CHECK(one("2.5") == "2.5");
    CHECK(one("1e3") == "1e3");
    CHECK(one("1.5E-2") == "1.5E-2");

    // A dot without a following digit is not part of the number.
    const auto dotted = tokenize("room.temperature", profile);
    REQUIRE(dotted.size() == 3);
    CHECK(dotted[0].text == "room");
    CHECK(dotted[1].text == ".");
    CHECK(dotted[2].text == "temperature");
}

TEST_CASE("tokenize: strings are single tokens, delimiters included, escapes honoured") {
    const auto tokens = tokenize("name = \"a \\\" quote\"", model_dsl_profile());
    REQUIRE(tokens.size() == 3);
    CHECK(tokens[2].kind == MetricTokenKind::String);
    CHECK(tokens[2].text == "\"a \\\" quote\"");
}

TEST_CASE("tokenize: comments are skipped entirely") {
    const auto tokens = tokenize("a # the rest vanishes + -\nb", model_dsl_profile());
    REQUIRE(tokens.size() == 2);
    CHECK(tokens[0].text == "a");
    CHECK(tokens[1].text == "b");
    CHECK(tokens[1].line == 2);

    const auto generic = tokenize("a /* + */ b", generic_c_like_profile());
    REQUIRE(generic.size() == 2);
    CHECK(generic[1].text == "b");
}

TEST_CASE("tokenize: unknown characters and unterminated strings carry positions") {
    try {
        (void)tokenize("ok\n  @", model_dsl_profile());
        FAIL("expected TokenError");
    } catch (const TokenError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 3);
        CHECK(std::string(e.what()).find('@') != std::string::npos);
    }
    try {
        (void)tokenize("x = \"open\n", model_dsl_profile());
        FAIL("expected TokenError");
    } catch (const TokenError& e) {
        CHECK(e.line() == 1);
        CHECK(e.column() == 5);
        CHECK(std::string(e.what()).find("unterminated") != std::string::npos);
    }
}

// ---------------------------------------------------------------------------
// Halstead measures
// ---------------------------------------------------------------------------

TEST_CASE("halstead: the assignment `a = b + b * 2` measures exactly") {
    const auto h = halstead("a = b + b * 2", model_dsl_profile());
    CHECK(h.distinct_operators == 3);  // = + *
    CHECK(h.distinct_operands == 3);   // a b 2
    CHECK(h.total_operators == 3);
    CHECK(h.total_operands == 4);      // b appears twice
    CHECK(h.length() == 7);
    CHECK(h.vocabulary() == 6);
    CHECK(std::abs(h.volume() - 7.0 * std::log2(6.0)) <= 1e-9);
    CHECK(h.difficulty() == doctest::Approx(2.0));  // (3/2) * (4/3)
    CHECK(h.effort() == doctest::Approx(2.0 * 7.0 * std::log2(6.0)));
    CHECK(h.estimated_bugs() == doctest::Approx(7.0 * std::log2(6.0) / 3000.0));
}

TEST_CASE("halstead: degenerate inputs") {
    const auto profile = model_dsl_profile();

    const auto empty = halstead("", profile);
    CHECK(empty.length() == 0);
    CHECK(empty.volume() == 0.0);
    CHECK(empty.difficulty() == 0.0);
    CHECK(empty.effort() == 0.0);

    // One lone identifier: a single-token vocabulary gives volume 0.
    const auto lone = halstead("alpha", profile);
    CHECK(lone.distinct_operators == 0);
    CHECK(lone.distinct_operands == 1);
    CHECK(lone.total_operands == 1);
    CHECK(lone.volume() == 0.0);
    CHECK(lone.difficulty() == 0.0);

    // Operators only: difficulty collapses because there are no operands.
    const auto ops = halstead("+ +", profile);
    CHECK(ops.distinct_operators == 1);
    CHECK(ops.total_operators == 2);
    CHECK(ops.difficulty() == 0.0);
    CHECK(ops.volume() == doctest::Approx(2.0 * std::log2(1.0) + 0.0));
}

TEST_CASE("halstead: operands are distinct by exact text") {
    const auto h = halstead("x = 2 + 2.0", model_dsl_profile());
    CHECK(h.distinct_operands == 3);  // x, 2, 2.0
    CHECK(h.total_operands == 3);
}

TEST_CASE("halstead: keywords count as operators, literals as operands") {
    // `when` is a keyword, `true`/`false` are plain literals in this language.
    const auto h = halstead("when x or true", model_dsl_profile());
    CHECK(h.distinct_operators == 2);  // when, or
    CHECK(h.distinct_operands == 2);   // x, true
}

TEST_CASE("halstead: vocabulary and volume strictly grow with a fresh operator") {
    const auto profile = model_dsl_profile();
    const std::vector<std::string> operand_pool = {"a", "b", "count", "42", "3.5"};
    const std::vector<std::string> operator_pool = {"=", "+", "*", "(", ")", ",",
                                                    ";", "<", ">", "->", "when"};
    std::mt19937 rng(20240817);
    for (int round = 0; round < 50; ++round) {
        // Build a non-empty random token string from a few of the pools.
        const int length = 1 + static_cast<int>(rng() % 12);
        std::vector<std::string> used_ops;
        std::string text;
        for (int i = 0; i < length; ++i) {
            if (rng() % 2 == 0) {
                const auto& op = operator_pool[rng() % (operator_pool.size() - 1)];
                if (std::find(used_ops.begin(), used_ops.end(), op) == used_ops.end())
                    used_ops.push_back(op);
                text += op;
            } else {
                text += operand_pool[rng() % operand_pool.size()];
            }
            text += ' ';
        }
        // Pick an operator that has not appeared yet (the last pool entry is
        // excluded from the build loop, so one always exists).
        std::string fresh = operator_pool.back();
        for (const auto& op : operator_pool) {
            if (std::find(used_ops.begin(), used_ops.end(), op) == used_ops.end()) {
                fresh = op;
                break;
            }
        }
        const auto before = halstead(text, profile);
        const auto after = halstead(text + " " + fresh, profile);
        CHECK(after.vocabulary() == before.vocabulary() + 1);
        CHECK(after.distinct_operators == before.distinct_operators + 1);
        CHECK(after.volume() > before.volume());
    }
}

// ---------------------------------------------------------------------------
// Units and cyclomatic complexity
// ---------------------------------------------------------------------------

TEST_CASE("units: components and systems open units, the rest stays outside") {
    const auto profile = model_dsl_profile();
    const std::string text =
        "# prelude comment\n"
        "component First {\n"
        "  automaton A { state X; init X; }\n"
        "}\n"
        "component Second {\n"
        "}\n";
    const auto tokens = tokenize(text, profile);
    const auto units = split_units(tokens, profile);
    REQUIRE(units.size() == 2);
    CHECK(units[0].name == "First");
    CHECK(units[0].first_line == 2);
    CHECK(units[0].last_line == 4);
    CHECK(units[1].name == "Second");
    CHECK(units[1].first_line == 5);
    CHECK(units[1].last_line == 6);
}

TEST_CASE("units: a profile without unit keywords measures the whole file") {
    const auto profile = generic_c_like_profile();
    const auto tokens = tokenize("int main() { return 0; }", profile);
    const auto units = split_units(tokens, profile);
    REQUIRE(units.size() == 1);
    CHECK(units[0].name == "(file)");
    CHECK(units[0].first_token == 0);
    CHECK(units[0].last_token == tokens.size());
}

TEST_CASE("cyclomatic: a unit with no decisions has complexity one") {
    const auto units = cyclomatic("component Plain { var x = 1; }", model_dsl_profile());
    REQUIRE(units.size() == 1);
    CHECK(units[0].name == "Plain");
    CHECK(units[0].cc == 1);
}

TEST_CASE("cyclomatic: `when` and each connective add one path") {
    // One guard `A or B and C`: 1 (when) + 2 (connectives) on top of the base 1.
    const std::string text =
        "component Guarded {\n"
        "  automaton M {\n"
        "    state X, Y; init X;\n"
        "    trans X -> Y law inst(1) when a or b and c;\n"
        "  }\n"
        "}\n";
    const auto units = cyclomatic(text, model_dsl_profile());
    REQUIRE(units.size() == 1);
    CHECK(units[0].cc == 4);
}

TEST_CASE("cyclomatic: shipped heater component measures five") {
    const auto text = read_file(cases_dir() + "/components/heater.model");
    const auto units = cyclomatic(text, model_dsl_profile());
    REQUIRE(units.size() == 1);
    CHECK(units[0].name == "Heater");
    CHECK(units[0].cc == 5);  // two `when` guards, one `and`, one `or`

    const auto room = cyclomatic(read_file(cases_dir() + "/components/room.model"),
                                 model_dsl_profile());
    REQUIRE(room.size() == 1);
    CHECK(room[0].name == "Room");
    CHECK(room[0].cc == 1);
}

TEST_CASE("cyclomatic: C-style profile counts branch operators too") {
    const auto units = cyclomatic("int f(int x) { if (x > 0 && x < 9) return 1; return x ? 2 : 3; }",
                                  generic_c_like_profile());
    REQUIRE(units.size() == 1);
    CHECK(units[0].name == "(file)");
    CHECK(units[0].cc == 1 + 1 + 1 + 1);  // if, &&, ?
}

TEST_CASE("cyclomatic: average over units") {
    const std::string text =
        "component A { automaton M { state X, Y; init X;"
        " trans X -> Y law inst(1) when p; } }\n"
        "component B { var x = 1; }\n";
    const auto units = cyclomatic(text, model_dsl_profile());
    REQUIRE(units.size() == 2);
    CHECK(units[0].cc == 2);
    CHECK(units[1].cc == 1);
    CHECK(average_cc(units) == doctest::Approx(1.5));
    CHECK(average_cc({}) == 0.0);
}

// ---------------------------------------------------------------------------
// Maintainability index
// ---------------------------------------------------------------------------

TEST_CASE("maintainability: reference point V=100, CC=5, LOC=50") {
    const auto mi = maintainability_index(100.0, 5.0, 50);
    const double expected = 171.0 - 5.2 * std::log(100.0) - 0.23 * 5.0
                            - 16.2 * std::log(50.0);
    CHECK(std::abs(mi.raw - expected) <= 1e-12);
    CHECK(mi.raw == doctest::Approx(82.5283423).epsilon(1e-7));
    CHECK(mi.normalized == doctest::Approx(100.0 * mi.raw / 171.0));
}

TEST_CASE("maintainability: the trivial program scores the ceiling") {
    const auto mi = maintainability_index(1.0, 0.0, 1);
    CHECK(mi.raw == doctest::Approx(171.0));
    CHECK(mi.normalized == doctest::Approx(100.0));
}

TEST_CASE("maintainability: zero inputs are treated as one") {
    const auto mi = maintainability_index(0.0, 0.0, 0);
    CHECK(mi.raw == doctest::Approx(171.0));
    CHECK(mi.normalized == doctest::Approx(100.0));
}

TEST_CASE("maintainability: normalized floor is zero") {
    const auto mi = maintainability_index(1e12, 500.0, 100000);
    CHECK(mi.raw < 0.0);
    CHECK(mi.normalized == 0.0);
}

TEST_CASE("maintainability: decreasing in volume, complexity, and length") {
    const auto base = maintainability_index(100.0, 5.0, 50);
    CHECK(maintainability_index(150.0, 5.0, 50).raw < base.raw);
    CHECK(maintainability_index(100.0, 6.0, 50).raw < base.raw);
    CHECK(maintainability_index(100.0, 5.0, 60).raw < base.raw);
}

// ---------------------------------------------------------------------------
// Diff and change ratio
// ---------------------------------------------------------------------------

TEST_CASE("diff: replace hunk pairs up, surplus becomes added") {
    const auto d = diff_lines({"a", "b", "c"}, {"a", "x", "c", "d"});
    CHECK(d.same == 2);
    CHECK(d.modified == 1);
    CHECK(d.added == 1);
    CHECK(d.removed == 0);
    CHECK(d.changed() == 2);
}

TEST_CASE("diff: identical, empty, and disjoint inputs") {
    const std::vector<std::string> lines = {"one", "two", "three"};
    const auto same = diff_lines(lines, lines);
    CHECK(same.same == 3);
    CHECK(same.changed() == 0);

    const auto grown = diff_lines({}, lines);
    CHECK(grown.added == 3);
    CHECK(grown.same + grown.modified + grown.removed == 0);

    const auto gone = diff_lines(lines, {});
    CHECK(gone.removed == 3);

    const auto swapped_all = diff_lines({"p", "q"}, {"r", "s", "t"});
    CHECK(swapped_all.same == 0);
    CHECK(swapped_all.modified == 2);
    CHECK(swapped_all.added == 1);
    CHECK(swapped_all.removed == 0);
}

TEST_CASE("diff: accounting identities and swap symmetry on random pairs") {
    std::mt19937 rng(987654321);
    const std::vector<std::string> pool = {
        "alpha", "beta", "gamma", "delta", "x = 1;", "y = 2;", "{", "}",
    };
    auto random_edit = [&](const std::vector<std::string>& base) {
        std::vector<std::string> out;
        for (const auto& line : base) {
            const auto roll = rng() % 10;
            if (roll < 6) {
                out.push_back(line);  // keep
            } else if (roll < 8) {
                out.push_back(pool[rng() % pool.size()]);  // replace
            }  // else drop
            if (rng() % 8 == 0) out.push_back(pool[rng() % pool.size()]);  // insert
        }
        return out;
    };
    for (int round = 0; round < 1000; ++round) {
        std::vector<std::string> old_lines(rng() % 40);
        for (auto& line : old_lines) line = pool[rng() % pool.size()];
        const auto new_lines = random_edit(old_lines);

        const auto forward = diff_lines(old_lines, new_lines);
        CHECK(forward.same + forward.modified + forward.removed
              == static_cast<long long>(old_lines.size()));
        CHECK(forward.same + forward.modified + forward.added
              == static_cast<long long>(new_lines.size()));

        const auto backward = diff_lines(new_lines, old_lines);
        CHECK(forward.same == backward.same);
        CHECK(forward.modified == backward.modified);
        CHECK(forward.added == backward.removed);
        CHECK(forward.removed == backward.added);
    }
}

TEST_CASE("diff: comments and blank lines are invisible") {
    const auto profile = model_dsl_profile();
    const std::string old_text = "x = 1\n# note\n\ny = 2\n";
    const std::string new_text = "# different note\nx = 1\ny = 2\n\n\n";
    const auto d = diff_versions(old_text, new_text, profile);
    CHECK(d.same == 2);
    CHECK(d.changed() == 0);
}

TEST_CASE("rloc: the worked ratio and the undefined case") {
    DiffCounts d;
    d.modified = 2;
    d.added = 3;
    d.removed = 1;
    CHECK(rloc_percent(d, 20) == doctest::Approx(30.0));
    CHECK_THROWS_AS((void)rloc_percent(d, 0), UndefinedRatio);
}

TEST_CASE("rloc: appending n lines to an m-line file costs n/(m+n)") {
    const auto profile = model_dsl_profile();
    std::mt19937 rng(5150);
    for (int round = 0; round < 20; ++round) {
        const int m = 1 + static_cast<int>(rng() % 30);
        const int n = 1 + static_cast<int>(rng() % 10);
        std::vector<std::string> old_lines;
        old_lines.reserve(m);
        for (int i = 0; i < m; ++i)
            old_lines.push_back("base_" + std::to_string(i) + " = " + std::to_string(i));
        auto new_lines = old_lines;
        for (int i = 0; i < n; ++i)
            new_lines.push_back("extra_" + std::to_string(i) + " = 0");

        const auto d = diff_versions(join_lines(old_lines), join_lines(new_lines), profile);
        CHECK(d.same == m);
        CHECK(d.added == n);
        CHECK(rloc_percent(d, m + n)
              == doctest::Approx(100.0 * n / static_cast<double>(m + n)));
    }
}

// ---------------------------------------------------------------------------
// Invariance under comment and blank insertion
// ---------------------------------------------------------------------------

TEST_CASE("token metrics ignore inserted comments and blank lines") {
    const auto profile = model_dsl_profile();
    const std::vector<std::string> sources = {
        read_file(cases_dir() + "/components/heater.model"),
        read_file(cases_dir() + "/case2a.model"),
    };
    struct Baseline {
        HalsteadMetrics halstead;
        std::vector<UnitComplexity> cc;
        std::vector<double> unit_mi;
        long long code_lines = 0;
    };
    std::vector<Baseline> baselines;
    for (const auto& text : sources) {
        Baseline b;
        const auto analysis = analyze_text(text, profile);
        b.halstead = analysis.halstead;
        b.cc = cyclomatic(text, profile);
        for (const auto& unit : analysis.units) b.unit_mi.push_back(unit.mi.raw);
        b.code_lines = analysis.lines.code;
        baselines.push_back(std::move(b));
    }

    std::mt19937 rng(424242);
    for (int k = 0; k < 100; ++k) {
        const std::size_t which = k % sources.size();
        auto lines = split_lines(sources[which]);
        const auto pos = rng() % (lines.size() + 1);
        const std::string inserted =
            (rng() % 2 == 0) ? std::string{} : "# inserted note " + std::to_string(k);
        lines.insert(lines.begin() + static_cast<long>(pos), inserted);
        const auto mutated = join_lines(lines);

        const auto analysis = analyze_text(mutated, profile);
        const auto& base = baselines[which];
        CHECK(counts_equal(analysis.halstead, base.halstead));
        CHECK(analysis.halstead.volume() == base.halstead.volume());

        const auto cc = cyclomatic(mutated, profile);
        REQUIRE(cc.size() == base.cc.size());
        for (std::size_t u = 0; u < cc.size(); ++u) {
            CHECK(cc[u].name == base.cc[u].name);
            CHECK(cc[u].cc == base.cc[u].cc);
        }
        REQUIRE(analysis.units.size() == base.unit_mi.size());
        for (std::size_t u = 0; u < analysis.units.size(); ++u)
            CHECK(analysis.units[u].mi.raw == base.unit_mi[u]);

        CHECK(analysis.lines.code == base.code_lines);
    }
}

// ---------------------------------------------------------------------------
// Whole-text analysis
// ---------------------------------------------------------------------------

TEST_CASE("analyze_text: shipped heater file, all measures in one pass") {
    const auto profile = model_dsl_profile();
    const auto text = read_file(cases_dir() + "/components/heater.model");
    const auto analysis = analyze_text(text, profile);

    CHECK(analysis.lines.physical()
          == classify_lines(text, profile).physical());
    CHECK(counts_equal(analysis.halstead, halstead(text, profile)));
    REQUIRE(analysis.units.size() == 1);
    const auto& unit = analysis.units[0];
    CHECK(unit.name == "Heater");
    CHECK(unit.cc == 5);
    CHECK(unit.loc > 0);
    CHECK(unit.loc <= analysis.lines.code);
    const auto expected_mi = maintainability_index(
        unit.halstead.volume(), static_cast<double>(unit.cc), unit.loc);
    CHECK(unit.mi.raw == expected_mi.raw);
    CHECK(analysis.average_cc == doctest::Approx(5.0));
    CHECK(analysis.average_mi_raw == doctest::Approx(unit.mi.raw));
    CHECK(analysis.warnings.empty());
}

TEST_CASE("analyze_text: surfaces the unterminated-comment warning") {
    const auto analysis = analyze_text("int x; /* open\n", generic_c_like_profile());
    REQUIRE(analysis.warnings.size() == 1);
    CHECK(analysis.warnings[0].find("never closed") != std::string::npos);
}

// ---------------------------------------------------------------------------
// Profiles: round trips, shipped files, resolution
// ---------------------------------------------------------------------------

TEST_CASE("profiles: render then parse is the identity for both built-ins") {
    for (const auto& profile : {model_dsl_profile(), generic_c_like_profile()}) {
        const auto round = parse_profile(render_profile(profile), "round-trip");
        CHECK(round == profile);
    }
}

TEST_CASE("profiles: shipped profile files equal the built-ins") {
    const auto dsl = load_profile_file(profiles_dir() + "/model-dsl.profile");
    CHECK(dsl == model_dsl_profile());
    const auto generic = load_profile_file(profiles_dir() + "/generic-c-like.profile");
    CHECK(generic == generic_c_like_profile());
}

TEST_CASE("profiles: parse rejects malformed or inconsistent input") {
    CHECK_THROWS_AS((void)parse_profile("name = x\n[nonsense]\n", "bad"), ReportError);
    CHECK_THROWS_AS((void)parse_profile("[operators]\n+\n", "bad"), ReportError);  // no name
    CHECK_THROWS_AS((void)parse_profile("name = x\n", "bad"), ReportError);  // no operators
    // Decision token that is neither operator nor keyword.
    CHECK_THROWS_AS((void)parse_profile("name = x\n[operators]\n+\n[decision]\nif\n", "bad"),
                    ReportError);
    // block_close without a preceding block_open.
    CHECK_THROWS_AS((void)parse_profile("name = x\n[comments]\nblock_close = */\n[operators]\n+\n",
                                        "bad"),
                    ReportError);
    // Error messages carry the origin label.
    try {
        (void)parse_profile("name = x\n[what]\n", "origin-label");
        FAIL("expected ReportError");
    } catch (const ReportError& e) {
        CHECK(std::string(e.what()).find("origin-label") != std::string::npos);
    }
}

TEST_CASE("profiles: resolution order is path, search dirs, built-ins") {
    // 1. Built-in names resolve with no environment at all.
    ::unsetenv("HYBRIDSIM_PROFILE_PATH");
    CHECK(resolve_profile("model-dsl") == model_dsl_profile());
    CHECK(resolve_profile("generic-c-like") == generic_c_like_profile());
    CHECK_THROWS_AS((void)resolve_profile("no-such-profile"), ReportError);

    // 2. An existing file path wins outright.
    auto custom = model_dsl_profile();
    custom.name = "custom-lang";
    TempDir dir;
    const auto file = dir.write("custom-lang.profile", render_profile(custom));
    CHECK(resolve_profile(file) == custom);

    // 3. Directories on the search path resolve by name and shadow built-ins.
    auto shadow = generic_c_like_profile();
    shadow.name = "shadowed";
    (void)dir.write("model-dsl.profile", render_profile(shadow));
    ::setenv("HYBRIDSIM_PROFILE_PATH", dir.dir().c_str(), 1);
    CHECK(resolve_profile("custom-lang") == custom);
    CHECK(resolve_profile("model-dsl") == shadow);
    ::unsetenv("HYBRIDSIM_PROFILE_PATH");
    CHECK(resolve_profile("model-dsl") == model_dsl_profile());
}

TEST_CASE("profiles: validate catches structural mistakes directly") {
    auto profile = model_dsl_profile();
    profile.decision_tokens.push_back("nowhere");
    CHECK_THROWS_AS(validate(profile), ReportError);
}

// ---------------------------------------------------------------------------
// Corpus report
// ---------------------------------------------------------------------------

namespace {

ReportSpec corpus_report_spec(const std::string& out_dir) {
    ReportSpec spec;
    spec.root = cases_dir();
    for (const auto& entry : cases::catalog())
        spec.cases.push_back({entry.name, entry.files});
    spec.pairs = {
        {"case0", "case1"},   {"case1", "case2"},
        {"case0a", "case1a"}, {"case1a", "case2a"},
    };
    spec.out_dir = out_dir;
    return spec;
}

std::map<std::string, std::vector<std::string>> read_csv(const std::string& path) {
    // header -> nothing; returns rows keyed by first field, raw line stored.
    std::map<std::string, std::vector<std::string>> rows;
    std::ifstream in(path);
    REQUIRE_MESSAGE(in.good(), "cannot open " << path);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (first) {
            rows["(header)"].push_back(line);
            first = false;
            continue;
        }
        const auto comma = line.find(',');
        rows[line.substr(0, comma)].push_back(line);
    }
    return rows;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    return fields;
}

}  // namespace

TEST_CASE("report: tables cover every case, file, and pair") {
    TempDir out;
    const auto spec = corpus_report_spec(out.dir());
    write_report(spec, model_dsl_profile());

    const auto by_file = read_csv(out.dir() + "/loc_by_file.csv");
    CHECK(by_file.at("(header)")[0] == "case,file,code,comment,blank");
    std::size_t file_rows = 0;
    for (const auto& entry : cases::catalog()) {
        REQUIRE(by_file.count(entry.name) == 1);
        CHECK(by_file.at(entry.name).size() == entry.files.size());
        file_rows += by_file.at(entry.name).size();
        // Every listed file appears by its relative path.
        for (const auto& rel : entry.files) {
            const bool found = std::any_of(
                by_file.at(entry.name).begin(), by_file.at(entry.name).end(),
                [&](const std::string& row) {
                    return row.find("," + rel + ",") != std::string::npos;
                });
            CHECK_MESSAGE(found, entry.name << " row for " << rel);
        }
    }

    const auto totals = read_csv(out.dir() + "/loc_total.csv");
    CHECK(totals.at("(header)")[0] == "case,code,comment,blank");
    for (const auto& entry : cases::catalog())
        CHECK(totals.at(entry.name).size() == 1);

    const auto rloc = read_csv(out.dir() + "/rloc.csv");
    CHECK(rloc.at("(header)")[0]
          == "pair,same,modified,added,removed,loc_target,rloc_percent");
    CHECK(rloc.count("case0->case1") == 1);
    CHECK(rloc.count("case1->case2") == 1);
    CHECK(rloc.count("case0a->case1a") == 1);
    CHECK(rloc.count("case1a->case2a") == 1);

    const auto cc = read_csv(out.dir() + "/cc.csv");
    CHECK(cc.at("(header)")[0] == "case,unit,cc");
    // case0 concatenation holds Heater, Room, and the system block.
    REQUIRE(cc.count("case0") == 1);
    CHECK(cc.at("case0").size() == 3 + 1);  // three units plus the average row

    const auto halstead_csv = read_csv(out.dir() + "/halstead.csv");
    CHECK(halstead_csv.at("(header)")[0]
          == "case,distinct_operators,distinct_operands,total_operators,"
             "total_operands,length,vocabulary,volume,difficulty,effort,bugs");

    const auto mi = read_csv(out.dir() + "/mi.csv");
    CHECK(mi.at("(header)")[0] == "case,unit,volume,cc,loc,mi_raw,mi_normalized");

    // The grand totals line up with directly analyzed concatenations.
    for (const auto& entry : cases::catalog()) {
        std::string concatenated;
        for (const auto& rel : entry.files) {
            auto text = read_file(cases_dir() + "/" + rel);
            if (!text.empty() && text.back() != '\n') text += '\n';
            concatenated += text;
        }
        const auto counts = classify_lines(concatenated, model_dsl_profile());
        const auto fields = split_fields(totals.at(entry.name)[0]);
        REQUIRE(fields.size() == 4);
        CHECK(std::stoll(fields[1]) == counts.code);
        CHECK(std::stoll(fields[2]) == counts.comment);
        CHECK(std::stoll(fields[3]) == counts.blank);
    }
}

TEST_CASE("report: mediated refactoring grows the base but shrinks each step") {
    TempDir out;
    write_report(corpus_report_spec(out.dir()), model_dsl_profile());

    const auto rloc = read_csv(out.dir() + "/rloc.csv");
    auto percent_of = [&](const std::string& pair) {
        const auto fields = split_fields(rloc.at(pair)[0]);
        REQUIRE(fields.size() == 7);
        return std::stod(fields[6]);
    };
    const double direct01 = percent_of("case0->case1");
    const double direct12 = percent_of("case1->case2");
    const double mediated01 = percent_of("case0a->case1a");
    const double mediated12 = percent_of("case1a->case2a");
    CHECK(mediated01 < direct01);
    CHECK(mediated12 < direct12);

    const auto totals = read_csv(out.dir() + "/loc_total.csv");
    auto code_of = [&](const std::string& name) {
        return std::stoll(split_fields(totals.at(name)[0])[1]);
    };
    CHECK(code_of("case0a") > code_of("case0"));
}

TEST_CASE("report: byte-identical on a rerun") {
    TempDir first_dir;
    TempDir second_dir;
    write_report(corpus_report_spec(first_dir.dir()), model_dsl_profile());
    write_report(corpus_report_spec(second_dir.dir()), model_dsl_profile());
    for (const char* file : {"loc_by_file.csv", "loc_total.csv", "rloc.csv",
                             "cc.csv", "halstead.csv", "mi.csv"}) {
        CHECK_MESSAGE(read_file(first_dir.dir() + "/" + file)
                          == read_file(second_dir.dir() + "/" + file),
                      file);
    }
}

TEST_CASE("report: unknown pair names and unreadable files are rejected") {
    TempDir out;
    auto spec = corpus_report_spec(out.dir());
    spec.pairs.push_back({"case0", "no-such-case"});
    CHECK_THROWS_AS(write_report(spec, model_dsl_profile()), ReportError);

    auto missing = corpus_report_spec(out.dir());
    missing.cases.push_back({"ghost", {"ghost.model"}});
    CHECK_THROWS_AS(write_report(missing, model_dsl_profile()), ReportError);
}
