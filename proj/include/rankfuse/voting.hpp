#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rankfuse/ballot.hpp"

namespace rankfuse {

enum class Scheme { plurality, condorcet, borda, contingent, irv };

inline constexpr Scheme kAllSchemes[] = {Scheme::plurality, Scheme::condorcet, Scheme::borda,
                                         Scheme::contingent, Scheme::irv};

std::string_view scheme_name(Scheme scheme);
/// Inverse of scheme_name; throws ConfigError for unknown names.
Scheme parse_scheme(std::string_view name);

/// First-choice counts. Only candidates holding at least one vote are stored;
/// every other active candidate has an implicit count of zero.
using Tally = std::map<CandidateId, std::size_t>;

/// wins(i, j) = number of ballots ranking i above j. A listed candidate beats
/// an unlisted one; two unlisted candidates are not compared.
class PairwiseMatrix {
public:
    explicit PairwiseMatrix(std::size_t n_candidates)
        : n_(n_candidates), wins_(n_candidates * n_candidates, 0) {}

    std::size_t size() const { return n_; }
    std::uint32_t wins(std::size_t i, std::size_t j) const { return wins_[i * n_ + j]; }
    std::uint32_t& wins(std::size_t i, std::size_t j) { return wins_[i * n_ + j]; }

    /// Candidates that `i` beats strictly head-to-head.
    std::size_t victories(std::size_t i) const;

    friend bool operator==(const PairwiseMatrix&, const PairwiseMatrix&) = default;

private:
    std::size_t n_;
    std::vector<std::uint32_t> wins_;
};

struct RoundLog {
    std::size_t round = 1;
    Tally tally;
    std::optional<CandidateId> eliminated;
    std::size_t exhausted_ballots = 0;

    friend bool operator==(const RoundLog&, const RoundLog&) = default;
};

/// Borda points per candidate, indexed by candidate.
using BordaScores = std::vector<std::uint64_t>;

struct ElectionResult {
    CandidateId winner;
    Scheme scheme = Scheme::plurality;
    double confidence = 0.0;
    std::vector<RoundLog> rounds;
    std::optional<PairwiseMatrix> pairwise;
    std::optional<BordaScores> scores;
    bool tie_broken = false;
    /// Condorcet only: no candidate beat all others, winner chosen by Copeland score.
    bool copeland_fallback = false;
};

ElectionResult plurality(const Election& election);

PairwiseMatrix pairwise_matrix(const Election& election);

/// Condorcet winner if one exists, otherwise highest Copeland score.
ElectionResult condorcet(const Election& election);

/// Linear weights L, L-1, ..., 1 with L the longest ballot, unless `weights` is
/// given. Custom weights must be strictly descending, positive and cover the
/// longest ballot, otherwise ConfigError.
ElectionResult borda(const Election& election,
                     std::optional<std::span<const std::uint64_t>> weights = std::nullopt);

/// Two-round contingent vote: majority in round one, else top two by
/// first-choice count face off with all ballots transferred.
ElectionResult contingent(const Election& election);

/// Instant-runoff: eliminate the weakest candidate until one holds a majority
/// of the non-exhausted ballots.
ElectionResult irv(const Election& election);

/// Dispatch by scheme. `borda_weights` is ignored by the other schemes.
ElectionResult elect(const Election& election, Scheme scheme,
                     std::optional<std::span<const std::uint64_t>> borda_weights = std::nullopt);

}  // namespace rankfuse
