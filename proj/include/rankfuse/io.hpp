#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rankfuse/ballot.hpp"
#include "rankfuse/evaluation.hpp"

namespace rankfuse {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// Headerless CSV, one row per query, one column per reference.
ScoreMatrix parse_score_matrix(std::istream& in, VoterId technique, std::string_view source = "<stream>");
ScoreMatrix load_score_matrix(const std::filesystem::path& path, VoterId technique);
void write_score_matrix(const ScoreMatrix& matrix, std::ostream& out);
void save_score_matrix(const ScoreMatrix& matrix, const std::filesystem::path& path);

/// Lines of `<query>: <id>[,<id>...]`; `#` starts a comment. Queries must cover
/// 0..n-1 exactly once. With `n_references` given, ids are range-checked.
GroundTruth parse_ground_truth(std::istream& in, std::optional<std::size_t> n_references = std::nullopt,
                               std::string_view source = "<stream>");
GroundTruth load_ground_truth(const std::filesystem::path& path,
                              std::optional<std::size_t> n_references = std::nullopt);
void write_ground_truth(const GroundTruth& truth, std::ostream& out);
void save_ground_truth(const GroundTruth& truth, const std::filesystem::path& path);

/// Ballot file for single elections. One ballot per line:
///   voter_name: 2 0 1
/// ids separated by spaces or commas; the `name:` prefix is optional.
std::vector<RankedBallot> parse_ballots(std::istream& in, std::string_view source = "<stream>");
std::vector<RankedBallot> load_ballots(const std::filesystem::path& path);

/// CSV with header `query_index,correct,confidence,winner`; correct is 0/1.
std::vector<MatchRecord> parse_match_records(std::istream& in, std::string_view source = "<stream>");
std::vector<MatchRecord> load_match_records(const std::filesystem::path& path);
void write_match_records(std::span<const MatchRecord> records, std::ostream& out);

}  // namespace rankfuse
