#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rankfuse {

/// Index of a reference image inside the reference set of one election.
struct CandidateId {
    std::uint32_t index = 0;

    constexpr CandidateId() = default;
    constexpr explicit CandidateId(std::uint32_t i) : index(i) {}

    friend constexpr auto operator<=>(CandidateId, CandidateId) = default;
};

/// A voting technique. Names are unique within one fusion run.
struct VoterId {
    std::string name;
    std::size_t index = 0;

    friend bool operator==(const VoterId&, const VoterId&) = default;
};

/// One voter's strict preference order, most preferred first. May be truncated.
struct RankedBallot {
    std::vector<CandidateId> preferences;
    VoterId voter;
};

/// Dense queries x references similarity scores of one technique.
/// Higher is more similar; only the order within a row matters.
class ScoreMatrix {
public:
    /// Validates shape (>= 1 query, >= 2 references) and finiteness.
    ScoreMatrix(std::size_t n_queries, std::size_t n_references, std::vector<double> values,
                VoterId technique);

    std::size_t n_queries() const { return n_queries_; }
    std::size_t n_references() const { return n_references_; }
    const VoterId& technique() const { return technique_; }

    std::span<const double> row(std::size_t query) const;
    double at(std::size_t query, std::size_t reference) const {
        return values_[query * n_references_ + reference];
    }
    std::span<const double> values() const { return values_; }

    /// Copy with every score multiplied by `factor` (must be finite and positive).
    ScoreMatrix scaled(double factor) const;

private:
    std::size_t n_queries_;
    std::size_t n_references_;
    std::vector<double> values_;
    VoterId technique_;
};

class Election;

/// Validates ballots against `n_candidates` and wraps them in an Election.
/// Throws ValidationError naming the voter and ballot position on failure.
Election validate_election(std::vector<RankedBallot> ballots, std::size_t n_candidates);

/// A set of validated ballots over candidates [0, n_candidates).
class Election {
public:
    const std::vector<RankedBallot>& ballots() const { return ballots_; }
    std::size_t n_candidates() const { return n_candidates_; }
    std::size_t n_ballots() const { return ballots_.size(); }
    /// Length of the longest ballot.
    std::size_t max_depth() const;

private:
    Election(std::vector<RankedBallot> ballots, std::size_t n_candidates)
        : ballots_(std::move(ballots)), n_candidates_(n_candidates) {}

    friend Election validate_election(std::vector<RankedBallot>, std::size_t);

    std::vector<RankedBallot> ballots_;
    std::size_t n_candidates_;
};

inline constexpr std::size_t kDefaultBallotDepth = 10;

/// Ranks the `depth` highest-scoring candidates of `row`, best first.
/// Equal scores (exact comparison) are ordered by ascending candidate index.
RankedBallot ballot_from_scores(std::span<const double> row, std::size_t depth, VoterId voter);

}  // namespace rankfuse
