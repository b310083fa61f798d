#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rankfuse/evaluation.hpp"

namespace rankfuse {

/// Discordant pairs between schemes a and b.
struct ContingencyCounts {
    std::size_t n_sf = 0;  // a correct, b wrong
    std::size_t n_fs = 0;  // a wrong, b correct

    friend bool operator==(const ContingencyCounts&, const ContingencyCounts&) = default;
};

struct ZStatistic {
    double z = 0.0;
    /// No discordant pairs; z is reported as 0.
    bool degenerate = false;
};

enum class ConfidenceBand { at_least_95, at_least_90, below_90 };

inline constexpr double kZ95 = 1.96;
inline constexpr double kZ90 = 1.645;

std::string_view band_label(ConfidenceBand band);
ConfidenceBand parse_band(std::string_view label);

ContingencyCounts mcnemar_counts(std::span<const MatchRecord> a, std::span<const MatchRecord> b);

/// Signed |n_sf - n_fs| / sqrt(n_sf + n_fs): positive when the first scheme wins
/// more discordant queries. No continuity correction.
ZStatistic mcnemar_statistic(const ContingencyCounts& counts);

ConfidenceBand z_confidence_band(double z);

struct PairwiseZTable {
    std::vector<std::string> schemes;
    std::vector<std::vector<double>> z;
    std::vector<std::vector<ConfidenceBand>> band;
    std::vector<std::vector<bool>> degenerate;
    std::vector<std::vector<ContingencyCounts>> counts;
};

using SchemeRecords = std::pair<std::string, std::vector<MatchRecord>>;

/// z[a][b] for every ordered pair, in the given scheme order. Needs >= 2 schemes.
PairwiseZTable pairwise_z_table(std::span<const SchemeRecords> records_by_scheme);

}  // namespace rankfuse
