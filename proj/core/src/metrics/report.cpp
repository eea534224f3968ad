#include "hybridsim/metrics/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "hybridsim/errors.hpp"

namespace hybridsim::metrics {

namespace {

std::string fixed(double value, int decimals) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.*f", decimals, value);
    return buffer;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.good())
        throw ReportError("cannot open case file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

struct CaseData {
    std::string name;
    std::vector<std::pair<std::string, LineCounts>> file_lines;
    LineCounts total_lines;
    std::string text;  ///< files concatenated in include order
    FileMetrics metrics;
};

std::ofstream open_table(const std::filesystem::path& dir, const char* name) {
    std::filesystem::path path = dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out.good())
        throw ReportError("cannot write '" + path.string() + "'");
    return out;
}

}  // namespace

FileMetrics analyze_text(const std::string& text, const LanguageProfile& profile) {
    FileMetrics metrics;
    std::vector<LineKind> kinds = classify_each_line(text, profile, &metrics.warnings);
    for (LineKind kind : kinds) {
        switch (kind) {
        case LineKind::Blank: ++metrics.lines.blank; break;
        case LineKind::Comment: ++metrics.lines.comment; break;
        case LineKind::Code: ++metrics.lines.code; break;
        }
    }

    std::vector<MetricToken> tokens = tokenize(text, profile);
    metrics.halstead = halstead_of(tokens, 0, tokens.size());

    double cc_total = 0.0;
    double mi_raw_total = 0.0;
    double mi_norm_total = 0.0;
    for (const UnitSpan& span : split_units(tokens, profile)) {
        UnitMetrics unit;
        unit.name = span.name;
        unit.halstead = halstead_of(tokens, span.first_token, span.last_token);
        unit.cc = 1 + decision_count(tokens, span.first_token, span.last_token,
                                     profile);
        for (std::size_t l = span.first_line;
             l <= span.last_line && l <= kinds.size(); ++l)
            if (kinds[l - 1] == LineKind::Code)
                ++unit.loc;
        unit.mi = maintainability_index(unit.halstead.volume(),
                                        static_cast<double>(unit.cc), unit.loc);
        cc_total += static_cast<double>(unit.cc);
        mi_raw_total += unit.mi.raw;
        mi_norm_total += unit.mi.normalized;
        metrics.units.push_back(std::move(unit));
    }
    if (!metrics.units.empty()) {
        double count = static_cast<double>(metrics.units.size());
        metrics.average_cc = cc_total / count;
        metrics.average_mi_raw = mi_raw_total / count;
        metrics.average_mi_normalized = mi_norm_total / count;
    }
    return metrics;
}

void write_report(const ReportSpec& spec, const LanguageProfile& profile) {
    std::vector<CaseData> cases;
    std::map<std::string, std::size_t> case_index;
    for (const CaseSet& set : spec.cases) {
        CaseData data;
        data.name = set.name;
        for (const std::string& file : set.files) {
            std::filesystem::path path = std::filesystem::path(spec.root) / file;
            std::string text = read_file(path.string());
            LineCounts lines = classify_lines(text, profile);
            data.file_lines.emplace_back(file, lines);
            data.total_lines.code += lines.code;
            data.total_lines.comment += lines.comment;
            data.total_lines.blank += lines.blank;
            data.text += text;
            if (!data.text.empty() && data.text.back() != '\n')
                data.text += '\n';
        }
        data.metrics = analyze_text(data.text, profile);
        case_index.emplace(data.name, cases.size());
        cases.push_back(std::move(data));
    }

    std::filesystem::path out_dir(spec.out_dir.empty() ? "." : spec.out_dir);
    std::filesystem::create_directories(out_dir);

    std::ofstream loc_by_file = open_table(out_dir, "loc_by_file.csv");
    loc_by_file << "case,file,code,comment,blank\n";
    for (const CaseData& data : cases)
        for (const auto& [file, lines] : data.file_lines)
            loc_by_file << data.name << ',' << file << ',' << lines.code << ','
                        << lines.comment << ',' << lines.blank << '\n';

    std::ofstream loc_total = open_table(out_dir, "loc_total.csv");
    loc_total << "case,code,comment,blank\n";
    for (const CaseData& data : cases)
        loc_total << data.name << ',' << data.total_lines.code << ','
                  << data.total_lines.comment << ',' << data.total_lines.blank
                  << '\n';

    std::ofstream rloc = open_table(out_dir, "rloc.csv");
    rloc << "pair,same,modified,added,removed,loc_target,rloc_percent\n";
    for (const auto& [old_name, new_name] : spec.pairs) {
        auto old_found = case_index.find(old_name);
        auto new_found = case_index.find(new_name);
        if (old_found == case_index.end() || new_found == case_index.end())
            throw ReportError("diff pair " + old_name + "->" + new_name
                              + " refers to a case the report does not include");
        const CaseData& old_case = cases[old_found->second];
        const CaseData& new_case = cases[new_found->second];
        DiffCounts counts = diff_versions(old_case.text, new_case.text, profile);
        double percent = rloc_percent(counts, new_case.total_lines.code);
        rloc << old_name << "->" << new_name << ',' << counts.same << ','
             << counts.modified << ',' << counts.added << ',' << counts.removed
             << ',' << new_case.total_lines.code << ',' << fixed(percent, 2)
             << '\n';
    }

    std::ofstream cc = open_table(out_dir, "cc.csv");
    cc << "case,unit,cc\n";
    for (const CaseData& data : cases) {
        for (const UnitMetrics& unit : data.metrics.units)
            cc << data.name << ',' << unit.name << ',' << unit.cc << '\n';
        cc << data.name << ",(average)," << fixed(data.metrics.average_cc, 6)
           << '\n';
    }

    std::ofstream halstead_table = open_table(out_dir, "halstead.csv");
    halstead_table << "case,distinct_operators,distinct_operands,total_operators,"
                      "total_operands,length,vocabulary,volume,difficulty,"
                      "effort,bugs\n";
    for (const CaseData& data : cases) {
        const HalsteadMetrics& h = data.metrics.halstead;
        halstead_table << data.name << ',' << h.distinct_operators << ','
                       << h.distinct_operands << ',' << h.total_operators << ','
                       << h.total_operands << ',' << h.length() << ','
                       << h.vocabulary() << ',' << fixed(h.volume(), 6) << ','
                       << fixed(h.difficulty(), 6) << ',' << fixed(h.effort(), 6)
                       << ',' << fixed(h.estimated_bugs(), 6) << '\n';
    }

    std::ofstream mi = open_table(out_dir, "mi.csv");
    mi << "case,unit,volume,cc,loc,mi_raw,mi_normalized\n";
    for (const CaseData& data : cases) {
        for (const UnitMetrics& unit : data.metrics.units)
            mi << data.name << ',' << unit.name << ','
               << fixed(unit.halstead.volume(), 6) << ',' << unit.cc << ','
               << unit.loc << ',' << fixed(unit.mi.raw, 6) << ','
               << fixed(unit.mi.normalized, 6) << '\n';
        mi << data.name << ",(average),,,," << fixed(data.metrics.average_mi_raw, 6)
           << ',' << fixed(data.metrics.average_mi_normalized, 6) << '\n';
    }
}

}  // namespace hybridsim::metrics
