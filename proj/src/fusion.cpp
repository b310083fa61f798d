#include "rankfuse/fusion.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "rankfuse/errors.hpp"

namespace rankfuse {

FusionOutcome fuse_query(const QueryCase& query, const FusionConfig& config) {
    if (query.rows.size() < 2) {
        throw ValidationError("query " + std::to_string(query.query_index) + ": fusion needs at least two voters");
    }
    const std::size_t n_refs = query.rows.front().scores.size();
    std::vector<RankedBallot> ballots;
    ballots.reserve(query.rows.size());
    for (const auto& row : query.rows) {
        if (row.scores.size() != n_refs) {
            throw ValidationError("query " + std::to_string(query.query_index) + ": voter '" + row.voter.name +
                                  "' scores " + std::to_string(row.scores.size()) + " references, expected " +
                                  std::to_string(n_refs));
        }
        ballots.push_back(ballot_from_scores(row.scores, config.ballot_depth, row.voter));
    }
    const Election election = validate_election(std::move(ballots), n_refs);

    std::optional<std::span<const std::uint64_t>> weights;
    if (config.borda_weights) weights = std::span<const std::uint64_t>(*config.borda_weights);

    FusionOutcome outcome;
    outcome.query_index = query.query_index;
    outcome.scheme = config.scheme;
    outcome.audit = elect(election, config.scheme, weights);
    outcome.winner = outcome.audit.winner;
    outcome.confidence = outcome.audit.confidence;
    return outcome;
}

std::vector<FusionOutcome> run_dataset(std::span<const ScoreMatrix> matrices, const FusionConfig& config,
                                       std::size_t workers) {
    if (matrices.size() < 2) throw ValidationError("fusion needs at least two score matrices");
    if (config.ballot_depth < 1) throw ConfigError("ballot depth must be at least 1");
    const auto& ref = matrices.front();
    for (const auto& m : matrices) {
        if (m.n_queries() != ref.n_queries() || m.n_references() != ref.n_references()) {
            throw ValidationError("technique '" + m.technique().name + "' has shape " +
                                  std::to_string(m.n_queries()) + "x" + std::to_string(m.n_references()) +
                                  ", expected " + std::to_string(ref.n_queries()) + "x" +
                                  std::to_string(ref.n_references()) + " (from '" + ref.technique().name + "')");
        }
    }

    const std::size_t n_queries = ref.n_queries();
    std::vector<FusionOutcome> outcomes(n_queries);
    auto fuse_one = [&](std::size_t q) {
        QueryCase query;
        query.query_index = q;
        query.rows.reserve(matrices.size());
        for (const auto& m : matrices) query.rows.push_back(VoterRow{m.technique(), m.row(q)});
        outcomes[q] = fuse_query(query, config);
    };

    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, n_queries);
    if (workers <= 1) {
        for (std::size_t q = 0; q < n_queries; ++q) fuse_one(q);
        return outcomes;
    }

    // Each slot of `outcomes` is written by exactly one worker.
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::size_t failed_query = n_queries;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t q = next++; q < n_queries; q = next++) {
                    try {
                        fuse_one(q);
                    } catch (...) {
                        // Report the lowest failing query, as a sequential run would.
                        std::lock_guard lock(failure_mutex);
                        if (q < failed_query) {
                            failed_query = q;
                            failure = std::current_exception();
                        }
                    }
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
    return outcomes;
}

}  // namespace rankfuse
