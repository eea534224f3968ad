#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hybridsim/metrics/complexity.hpp"
#include "hybridsim/metrics/diff.hpp"
#include "hybridsim/metrics/halstead.hpp"
#include "hybridsim/metrics/lines.hpp"
#include "hybridsim/metrics/profile.hpp"

namespace hybridsim::metrics {

struct UnitMetrics {
    std::string name;
    HalsteadMetrics halstead;
    long long cc = 1;
    long long loc = 0;  ///< code lines inside the unit's line span
    MaintainabilityIndex mi;
};

/// Everything measurable about one piece of source text.
struct FileMetrics {
    LineCounts lines;
    HalsteadMetrics halstead;
    std::vector<UnitMetrics> units;
    double average_cc = 0.0;
    double average_mi_raw = 0.0;
    double average_mi_normalized = 0.0;
    std::vector<std::string> warnings;
};

/// Measure one text: line classes, whole-text Halstead, and per-unit
/// CC / Halstead / MI with their averages.  Throws TokenError as tokenize
/// does.
[[nodiscard]] FileMetrics analyze_text(const std::string& text,
                                       const LanguageProfile& profile);

/// One model version: a name and its source files in include order.  The
/// version's text is the concatenation of the files.  Paths are kept
/// relative — they double as the display names in the tables — and are
/// resolved against the spec's root directory.
struct CaseSet {
    std::string name;
    std::vector<std::string> files;
};

struct ReportSpec {
    std::string root;  ///< directory the case file paths are relative to
    std::vector<CaseSet> cases;
    /// Version pairs to diff, by case name (old, new).
    std::vector<std::pair<std::string, std::string>> pairs;
    std::string out_dir;
};

/// Write the comparison tables for a corpus of model versions:
///
///   loc_by_file.csv  case,file,code,comment,blank
///   loc_total.csv    case,code,comment,blank
///   rloc.csv         pair,same,modified,added,removed,loc_target,rloc_percent
///   cc.csv           case,unit,cc            (plus one (average) row per case)
///   halstead.csv     case,distinct_operators,...,volume,difficulty,effort,bugs
///   mi.csv           case,unit,volume,cc,loc,mi_raw,mi_normalized (plus averages)
///
/// Counts print as integers, other numbers with six decimals, percentages
/// with two.  Throws ReportError for unreadable files or unknown pair names.
void write_report(const ReportSpec& spec, const LanguageProfile& profile);

}  // namespace hybridsim::metrics
