#pragma once

#include <string>
#include <vector>

#include "hybridsim/metrics/profile.hpp"

namespace hybridsim::metrics {

/// Line-level difference between two versions, counted over code lines:
///   same + modified + removed = old code lines
///   same + modified + added   = new code lines
struct DiffCounts {
    long long same = 0;
    long long modified = 0;
    long long added = 0;
    long long removed = 0;

    [[nodiscard]] long long changed() const { return modified + added + removed; }
};

/// Shortest-edit-script diff over two line sequences.  Within each replace
/// hunk, removed and added lines pair up in order as "modified", surplus
/// counting as removed or added.  Swapping the inputs swaps added with
/// removed and leaves same/modified untouched — exactly, not just in total,
/// because the edit script is computed in a canonical orientation.
[[nodiscard]] DiffCounts diff_lines(const std::vector<std::string>& old_lines,
                                    const std::vector<std::string>& new_lines);

/// diff_lines over the code lines of two texts (comments and blanks are
/// invisible to the diff).
[[nodiscard]] DiffCounts diff_versions(const std::string& old_text,
                                       const std::string& new_text,
                                       const LanguageProfile& profile);

/// Relative lines of code changed: 100 * (modified + added + removed) /
/// loc_target, in percent.  Throws UndefinedRatio when loc_target is zero.
[[nodiscard]] double rloc_percent(const DiffCounts& diff, long long loc_target);

}  // namespace hybridsim::metrics
