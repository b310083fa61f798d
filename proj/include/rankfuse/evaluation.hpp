#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rankfuse/ballot.hpp"
#include "rankfuse/fusion.hpp"

namespace rankfuse {

/// Accepted reference ids per query. A set with several ids models a
/// frame-tolerance window.
class GroundTruth {
public:
    /// Throws ValidationError on an empty set, or an id >= n_references when given.
    explicit GroundTruth(std::vector<std::vector<CandidateId>> accepted,
                         std::size_t n_references = 0);

    std::size_t n_queries() const { return accepted_.size(); }
    std::span<const CandidateId> accepted(std::size_t query) const { return accepted_.at(query); }
    bool accepts(std::size_t query, CandidateId id) const;

    friend bool operator==(const GroundTruth&, const GroundTruth&) = default;

private:
    std::vector<std::vector<CandidateId>> accepted_;  // each sorted, unique
};

struct MatchRecord {
    std::size_t query_index = 0;
    bool correct = false;
    double confidence = 0.0;
    CandidateId winner;

    friend bool operator==(const MatchRecord&, const MatchRecord&) = default;
};

struct PRPoint {
    double threshold = 0.0;
    double precision = 0.0;
    double recall = 0.0;

    friend bool operator==(const PRPoint&, const PRPoint&) = default;
};

struct PRCurve {
    std::vector<PRPoint> points;  // descending threshold
    double auc = 0.0;

    friend bool operator==(const PRCurve&, const PRCurve&) = default;
};

std::vector<MatchRecord> score_matches(std::span<const FusionOutcome> outcomes,
                                       const GroundTruth& truth);

/// Number of correctly matched queries.
std::size_t performance_bounds(std::span<const MatchRecord> records);

/// Sweeps the distinct confidences in descending order. The area is the
/// trapezoidal integral of precision over recall, starting at recall 0 with
/// the precision of the first point. Without any correct record recall is 0
/// everywhere and the area is 0.
PRCurve pr_curve(std::span<const MatchRecord> records);

}  // namespace rankfuse
