#include "hybridsim/metrics/diff.hpp"

#include <algorithm>

#include "hybridsim/errors.hpp"
#include "hybridsim/metrics/lines.hpp"

namespace hybridsim::metrics {

namespace {

/// Myers' shortest-edit-script search.  Returns the edit script as a
/// sequence of 'K' (keep), 'D' (delete from a) and 'I' (insert from b),
/// in order from the start of the files.
std::vector<char> myers_script(const std::vector<std::string>& a,
                               const std::vector<std::string>& b) {
    const int n = static_cast<int>(a.size());
    const int m = static_cast<int>(b.size());
    const int bound = n + m;
    std::vector<char> script;
    if (bound == 0)
        return script;

    auto slot = [bound](int k) { return static_cast<std::size_t>(k + bound); };
    std::vector<int> frontier(2 * static_cast<std::size_t>(bound) + 1, 0);
    std::vector<std::vector<int>> history;  // frontier before each round
    int reached_at = -1;
    for (int d = 0; d <= bound && reached_at < 0; ++d) {
        history.push_back(frontier);
        for (int k = -d; k <= d; k += 2) {
            int x;
            if (k == -d || (k != d && frontier[slot(k - 1)] < frontier[slot(k + 1)]))
                x = frontier[slot(k + 1)];  // step down: insert b line
            else
                x = frontier[slot(k - 1)] + 1;  // step right: delete a line
            int y = x - k;
            while (x < n && y < m && a[static_cast<std::size_t>(x)]
                                         == b[static_cast<std::size_t>(y)]) {
                ++x;
                ++y;
            }
            frontier[slot(k)] = x;
            if (x >= n && y >= m) {
                reached_at = d;
                break;
            }
        }
    }

    // Backtrack from (n, m) through the recorded frontiers.
    int x = n;
    int y = m;
    for (int d = reached_at; d > 0; --d) {
        const std::vector<int>& before = history[static_cast<std::size_t>(d)];
        int k = x - y;
        bool stepped_down =
            k == -d || (k != d && before[slot(k - 1)] < before[slot(k + 1)]);
        int previous_k = stepped_down ? k + 1 : k - 1;
        int previous_x = before[slot(previous_k)];
        int previous_y = previous_x - previous_k;
        while (x > previous_x && y > previous_y) {
            script.push_back('K');
            --x;
            --y;
        }
        if (stepped_down) {
            script.push_back('I');
            --y;
        } else {
            script.push_back('D');
            --x;
        }
    }
    while (x > 0) {  // the d = 0 snake
        script.push_back('K');
        --x;
        --y;
    }
    std::reverse(script.begin(), script.end());
    return script;
}

/// Fold an edit script into counts, pairing removed with added lines inside
/// each maximal non-keep run.  When `swapped`, the script was computed on
/// the reversed pair, so inserts count as removals and vice versa.
DiffCounts count_script(const std::vector<char>& script, bool swapped) {
    DiffCounts counts;
    std::size_t i = 0;
    while (i < script.size()) {
        if (script[i] == 'K') {
            ++counts.same;
            ++i;
            continue;
        }
        long long deletions = 0;
        long long insertions = 0;
        while (i < script.size() && script[i] != 'K') {
            if (script[i] == 'D')
                ++deletions;
            else
                ++insertions;
            ++i;
        }
        if (swapped)
            std::swap(deletions, insertions);
        long long paired = std::min(deletions, insertions);
        counts.modified += paired;
        counts.removed += deletions - paired;
        counts.added += insertions - paired;
    }
    return counts;
}

std::string joined(const std::vector<std::string>& lines) {
    std::string text;
    for (const std::string& line : lines) {
        text += line;
        text += '\n';
    }
    return text;
}

}  // namespace

DiffCounts diff_lines(const std::vector<std::string>& old_lines,
                      const std::vector<std::string>& new_lines) {
    // Canonical orientation: always run the search on the lexicographically
    // smaller side first, then mirror.  This makes diff(a, b) and diff(b, a)
    // exact mirrors hunk by hunk, not merely equal in total.
    if (joined(old_lines) <= joined(new_lines))
        return count_script(myers_script(old_lines, new_lines), false);
    return count_script(myers_script(new_lines, old_lines), true);
}

DiffCounts diff_versions(const std::string& old_text, const std::string& new_text,
                         const LanguageProfile& profile) {
    return diff_lines(code_lines(old_text, profile), code_lines(new_text, profile));
}

double rloc_percent(const DiffCounts& diff, long long loc_target) {
    if (loc_target == 0)
        throw UndefinedRatio("relative change against zero lines of code");
    return 100.0 * static_cast<double>(diff.changed())
           / static_cast<double>(loc_target);
}

}  // namespace hybridsim::metrics
