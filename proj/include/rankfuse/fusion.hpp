#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rankfuse/ballot.hpp"
#include "rankfuse/voting.hpp"

namespace rankfuse {

struct FusionConfig {
    Scheme scheme = Scheme::plurality;
    std::size_t ballot_depth = kDefaultBallotDepth;
    std::optional<std::vector<std::uint64_t>> borda_weights;
};

/// One technique's scores for one query.
struct VoterRow {
    VoterId voter;
    std::span<const double> scores;
};

struct QueryCase {
    std::size_t query_index = 0;
    std::vector<VoterRow> rows;
};

struct FusionOutcome {
    std::size_t query_index = 0;
    CandidateId winner;
    double confidence = 0.0;
    Scheme scheme = Scheme::plurality;
    ElectionResult audit;
};

/// Each voter casts a ballot of depth min(ballot_depth, n_references); the
/// configured scheme elects the fused match.
FusionOutcome fuse_query(const QueryCase& query, const FusionConfig& config);

/// Fuses every query of a dataset. `workers` = 0 uses the hardware concurrency.
/// Output is ordered by query index and identical to a sequential run.
std::vector<FusionOutcome> run_dataset(std::span<const ScoreMatrix> matrices,
                                       const FusionConfig& config, std::size_t workers = 0);

}  // namespace rankfuse
