#include "rankfuse/ballot.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rankfuse/errors.hpp"

namespace rankfuse {

ScoreMatrix::ScoreMatrix(std::size_t n_queries, std::size_t n_references, std::vector<double> values,
                         VoterId technique)
    : n_queries_(n_queries),
      n_references_(n_references),
      values_(std::move(values)),
      technique_(std::move(technique)) {
    const std::string who = "score matrix '" + technique_.name + "'";
    if (n_queries_ < 1) throw ValidationError(who + ": needs at least one query");
    if (n_references_ < 2) throw ValidationError(who + ": needs at least two references");
    if (values_.size() != n_queries_ * n_references_) {
        throw ValidationError(who + ": expected " + std::to_string(n_queries_ * n_references_) +
                              " values, got " + std::to_string(values_.size()));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw ValidationError(who + ": non-finite score at query " +
                                  std::to_string(i / n_references_) + ", reference " +
                                  std::to_string(i % n_references_));
        }
    }
}

std::span<const double> ScoreMatrix::row(std::size_t query) const {
    if (query >= n_queries_) {
        throw std::out_of_range("query " + std::to_string(query) + " out of range");
    }
    return std::span<const double>(values_).subspan(query * n_references_, n_references_);
}

ScoreMatrix ScoreMatrix::scaled(double factor) const {
    if (!std::isfinite(factor) || factor <= 0.0) {
        throw ValidationError("scale factor must be finite and positive");
    }
    std::vector<double> out(values_);
    for (double& v : out) v *= factor;
    return ScoreMatrix(n_queries_, n_references_, std::move(out), technique_);
}

std::size_t Election::max_depth() const {
    std::size_t depth = 0;
    for (const auto& b : ballots_) depth = std::max(depth, b.preferences.size());
    return depth;
}

Election validate_election(std::vector<RankedBallot> ballots, std::size_t n_candidates) {
    if (n_candidates == 0) throw ValidationError("election needs at least one candidate");
    if (ballots.empty()) throw ValidationError("election has no ballots");

    std::vector<int> seen_at(n_candidates, -1);
    for (std::size_t b = 0; b < ballots.size(); ++b) {
        const auto& ballot = ballots[b];
        const std::string who = "ballot " + std::to_string(b) + " (voter '" + ballot.voter.name + "')";
        if (ballot.preferences.empty()) throw ValidationError(who + ": empty ballot");
        std::fill(seen_at.begin(), seen_at.end(), -1);
        for (std::size_t pos = 0; pos < ballot.preferences.size(); ++pos) {
            const auto id = ballot.preferences[pos].index;
            if (id >= n_candidates) {
                throw ValidationError(who + ", position " + std::to_string(pos) + ": candidate " +
                                      std::to_string(id) + " out of range (n_candidates = " +
                                      std::to_string(n_candidates) + ")");
            }
            if (seen_at[id] >= 0) {
                throw ValidationError(who + ", position " + std::to_string(pos) + ": duplicate candidate " +
                                      std::to_string(id) + " (first at position " +
                                      std::to_string(seen_at[id]) + ")");
            }
            seen_at[id] = static_cast<int>(pos);
        }
    }
    return Election(std::move(ballots), n_candidates);
}

RankedBallot ballot_from_scores(std::span<const double> row, std::size_t depth, VoterId voter) {
    if (depth < 1) throw ConfigError("ballot depth must be at least 1");
    if (row.size() < 2) throw ValidationError("score row needs at least two references");
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (!std::isfinite(row[i])) {
            throw ValidationError("voter '" + voter.name + "': non-finite score at index " + std::to_string(i));
        }
    }

    std::vector<std::uint32_t> order(row.size());
    std::iota(order.begin(), order.end(), 0u);
    const std::size_t k = std::min(depth, row.size());
    // Total order: score descending, then index ascending.
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                      [&](std::uint32_t a, std::uint32_t b) {
                          if (row[a] != row[b]) return row[a] > row[b];
                          return a < b;
                      });

    RankedBallot ballot;
    ballot.voter = std::move(voter);
    ballot.preferences.reserve(k);
    for (std::size_t i = 0; i < k; ++i) ballot.preferences.emplace_back(order[i]);
    return ballot;
}

}  // namespace rankfuse
