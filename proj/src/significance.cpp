#include "rankfuse/significance.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "rankfuse/errors.hpp"

namespace rankfuse {

std::string_view band_label(ConfidenceBand band) {
    switch (band) {
        case ConfidenceBand::at_least_95: return "≥95%";
        case ConfidenceBand::at_least_90: return "≥90%";
        case ConfidenceBand::below_90: return "<90%";
    }
    return "<90%";
}

ConfidenceBand parse_band(std::string_view label) {
    for (auto b : {ConfidenceBand::at_least_95, ConfidenceBand::at_least_90, ConfidenceBand::below_90}) {
        if (band_label(b) == label) return b;
    }
    throw ParseError("unknown confidence band '" + std::string(label) + "'");
}

ContingencyCounts mcnemar_counts(std::span<const MatchRecord> a, std::span<const MatchRecord> b) {
    if (a.size() != b.size()) {
        throw ValidationError("match records differ in length: " + std::to_string(a.size()) + " vs " +
                              std::to_string(b.size()));
    }
    ContingencyCounts counts;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].query_index != b[i].query_index) {
            throw ValidationError("match records misaligned at position " + std::to_string(i) + ": query " +
                                  std::to_string(a[i].query_index) + " vs " + std::to_string(b[i].query_index));
        }
        if (a[i].correct && !b[i].correct) ++counts.n_sf;
        if (!a[i].correct && b[i].correct) ++counts.n_fs;
    }
    return counts;
}

ZStatistic mcnemar_statistic(const ContingencyCounts& counts) {
    const std::size_t discordant = counts.n_sf + counts.n_fs;
    if (discordant == 0) return ZStatistic{0.0, true};
    const double diff = static_cast<double>(counts.n_sf) - static_cast<double>(counts.n_fs);
    return ZStatistic{diff / std::sqrt(static_cast<double>(discordant)), false};
}

ConfidenceBand z_confidence_band(double z) {
    const double magnitude = std::abs(z);
    if (magnitude >= kZ95) return ConfidenceBand::at_least_95;
    if (magnitude >= kZ90) return ConfidenceBand::at_least_90;
    return ConfidenceBand::below_90;
}

PairwiseZTable pairwise_z_table(std::span<const SchemeRecords> records_by_scheme) {
    const std::size_t n = records_by_scheme.size();
    if (n < 2) throw ValidationError("a z-table needs at least two schemes");

    PairwiseZTable table;
    table.z.assign(n, std::vector<double>(n, 0.0));
    table.band.assign(n, std::vector<ConfidenceBand>(n, ConfidenceBand::below_90));
    table.degenerate.assign(n, std::vector<bool>(n, true));
    table.counts.assign(n, std::vector<ContingencyCounts>(n));
    for (const auto& [name, records] : records_by_scheme) table.schemes.push_back(name);

    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            const auto counts = mcnemar_counts(records_by_scheme[a].second, records_by_scheme[b].second);
            const auto stat = mcnemar_statistic(counts);
            // Negating keeps the table exactly skew-symmetric.
            table.z[a][b] = stat.z;
            table.z[b][a] = stat.z == 0.0 ? 0.0 : -stat.z;
            table.band[a][b] = table.band[b][a] = z_confidence_band(stat.z);
            table.degenerate[a][b] = table.degenerate[b][a] = stat.degenerate;
            table.counts[a][b] = counts;
            table.counts[b][a] = ContingencyCounts{counts.n_fs, counts.n_sf};
        }
    }
    return table;
}

}  // namespace rankfuse
