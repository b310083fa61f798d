#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rankfuse/evaluation.hpp"
#include "rankfuse/fusion.hpp"
#include "rankfuse/significance.hpp"

namespace rankfuse {

inline constexpr const char* kFormatVersion = "1";
/// Identifies how PR curves are derived; bump when the definition changes.
inline constexpr const char* kPrDefinition =
    "pr-v1: threshold sweep over distinct fused confidences, trapezoidal area anchored at recall 0";

/// The per-query part of a FusionOutcome that is persisted in summary.json.
struct OutcomeSummary {
    std::size_t query_index = 0;
    CandidateId winner;
    double confidence = 0.0;
    bool tie_broken = false;
    bool copeland_fallback = false;
    std::size_t rounds = 0;

    friend bool operator==(const OutcomeSummary&, const OutcomeSummary&) = default;
};

OutcomeSummary summarize(const FusionOutcome& outcome);

struct SchemeResult {
    Scheme scheme = Scheme::plurality;
    std::vector<OutcomeSummary> outcomes;
    std::vector<MatchRecord> records;
    std::size_t performance_bound = 0;
    PRCurve pr;

    friend bool operator==(const SchemeResult&, const SchemeResult&) = default;
};

struct BundleMetadata {
    std::string format_version = kFormatVersion;
    std::string pr_definition = kPrDefinition;
    std::vector<std::string> techniques;
    std::size_t n_queries = 0;
    std::size_t n_references = 0;
    std::size_t ballot_depth = 0;
    std::optional<std::vector<std::uint64_t>> borda_weights;
    std::optional<std::uint64_t> seed;
    std::optional<double> noise;
    /// Only set from SOURCE_DATE_EPOCH so that repeated runs stay byte-identical.
    std::optional<std::string> created;

    friend bool operator==(const BundleMetadata&, const BundleMetadata&) = default;
};

struct ResultBundle {
    BundleMetadata metadata;
    std::vector<SchemeResult> schemes;
    std::optional<PairwiseZTable> z_table;  // present with >= 2 schemes
};

bool operator==(const PairwiseZTable& a, const PairwiseZTable& b);
bool operator==(const ResultBundle& a, const ResultBundle& b);

/// Fuses, scores and compares every scheme over one dataset.
ResultBundle run_pipeline(std::span<const ScoreMatrix> matrices, const GroundTruth& truth,
                          std::span<const Scheme> schemes, const FusionConfig& base_config,
                          std::size_t workers = 0);

/// Writes radar.csv, pr_<scheme>.csv, matches_<scheme>.csv, zscores.csv and
/// summary.json into `dir`, creating it when missing.
void emit_results(const ResultBundle& bundle, const std::filesystem::path& dir);

std::string summary_json(const ResultBundle& bundle);
ResultBundle parse_summary_json(std::string_view text);
ResultBundle load_results(const std::filesystem::path& dir);

struct RadarRow {
    std::string scheme;
    std::size_t correct_count = 0;
    std::size_t total_queries = 0;
    friend bool operator==(const RadarRow&, const RadarRow&) = default;
};

struct ZRow {
    std::string scheme_a;
    std::string scheme_b;
    double z = 0.0;
    ConfidenceBand band = ConfidenceBand::below_90;
    friend bool operator==(const ZRow&, const ZRow&) = default;
};

std::vector<RadarRow> load_radar_csv(const std::filesystem::path& path);
std::vector<PRPoint> load_pr_csv(const std::filesystem::path& path);
std::vector<ZRow> load_zscores_csv(const std::filesystem::path& path);
void write_zscores_csv(const PairwiseZTable& table, std::ostream& out);

/// Human-readable round-by-round audit of one election.
void write_audit(const ElectionResult& result, std::ostream& out);
/// Same content as JSON text; deterministic for identical input.
std::string audit_json(const ElectionResult& result);

}  // namespace rankfuse
