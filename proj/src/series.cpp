#include "witness/subst.hpp"

namespace witness::subst {

namespace {

// State positions opening a level-m series: every state at level 1, otherwise
// the first state and every state whose characteristic number is at least m.
std::vector<std::size_t> openers(const RunTrace& trace, int m) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < trace.records.size(); ++i)
        if (m == 1 || i == 0 || trace.records[i].characteristic >= static_cast<std::size_t>(m)) out.push_back(i);
    return out;
}

}  // namespace

std::vector<Series> series_indices(const RunTrace& trace, int m) {
    std::vector<Series> out;
    if (m < 1 || trace.records.empty()) return out;
    auto open = openers(trace, m);
    std::vector<Series> lower;
    if (m > 1) lower = series_indices(trace, m - 1);
    std::size_t li = 0;
    for (std::size_t k = 0; k < open.size(); ++k) {
        Series s;
        s.start = open[k];
        s.end = k + 1 < open.size() ? open[k + 1] : trace.records.size();
        s.index.level = m;
        if (m == 1) {
            s.index.o = trace.records[s.start].o;
            s.index.d = trace.records[s.start].d;
        } else {
            while (li < lower.size() && lower[li].start < s.end) {
                s.index.terms.push_back(lower[li].index);
                ++li;
            }
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<CorollaryViolation> check_series_corollary(const RunTrace& trace, int max_level) {
    std::vector<CorollaryViolation> out;
    for (int m = 1; m <= max_level; ++m) {
        auto series = series_indices(trace, m);
        for (std::size_t k = 0; k + 1 < series.size(); ++k) {
            const auto& x = series[k];
            const auto& y = series[k + 1];
            auto cy = trace.records[y.start].characteristic;
            auto cx = trace.records[x.start].characteristic;
            if (cy != static_cast<std::size_t>(m) || cx < static_cast<std::size_t>(m)) continue;
            if (ord::compare_series(x.index, y.index) != std::strong_ordering::greater)
                out.push_back({m, k, k + 1});
        }
    }
    return out;
}

}  // namespace witness::subst
