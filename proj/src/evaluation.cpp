#include "rankfuse/evaluation.hpp"

#include <algorithm>
#include <string>

#include "rankfuse/errors.hpp"

namespace rankfuse {

GroundTruth::GroundTruth(std::vector<std::vector<CandidateId>> accepted, std::size_t n_references)
    : accepted_(std::move(accepted)) {
    for (std::size_t q = 0; q < accepted_.size(); ++q) {
        auto& ids = accepted_[q];
        if (ids.empty()) throw ValidationError("ground truth: query " + std::to_string(q) + " accepts no reference");
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        if (n_references > 0 && ids.back().index >= n_references) {
            throw ValidationError("ground truth: query " + std::to_string(q) + " accepts reference " +
                                  std::to_string(ids.back().index) + " but only " + std::to_string(n_references) +
                                  " references exist");
        }
    }
}

bool GroundTruth::accepts(std::size_t query, CandidateId id) const {
    const auto& ids = accepted_.at(query);
    return std::binary_search(ids.begin(), ids.end(), id);
}

std::vector<MatchRecord> score_matches(std::span<const FusionOutcome> outcomes, const GroundTruth& truth) {
    std::vector<MatchRecord> records;
    records.reserve(outcomes.size());
    for (const auto& o : outcomes) {
        if (o.query_index >= truth.n_queries()) {
            throw ValidationError("ground truth has no entry for query " + std::to_string(o.query_index));
        }
        records.push_back(MatchRecord{o.query_index, truth.accepts(o.query_index, o.winner), o.confidence, o.winner});
    }
    return records;
}

std::size_t performance_bounds(std::span<const MatchRecord> records) {
    return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [](const auto& r) { return r.correct; }));
}

PRCurve pr_curve(std::span<const MatchRecord> records) {
    PRCurve curve;
    if (records.empty()) return curve;

    std::vector<const MatchRecord*> sorted;
    sorted.reserve(records.size());
    for (const auto& r : records) sorted.push_back(&r);
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const MatchRecord* a, const MatchRecord* b) { return a->confidence > b->confidence; });

    const std::size_t total_correct = performance_bounds(records);
    std::size_t retrieved = 0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < sorted.size();) {
        const double threshold = sorted[i]->confidence;
        // Records sharing a confidence enter the retrieved set together.
        for (; i < sorted.size() && sorted[i]->confidence == threshold; ++i) {
            ++retrieved;
            if (sorted[i]->correct) ++hits;
        }
        const double precision = static_cast<double>(hits) / static_cast<double>(retrieved);
        const double recall = total_correct == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total_correct);
        curve.points.push_back(PRPoint{threshold, precision, recall});
    }

    if (total_correct == 0) return curve;
    double prev_recall = 0.0;
    double prev_precision = curve.points.front().precision;
    double area = 0.0;
    for (const auto& p : curve.points) {
        area += (p.recall - prev_recall) * (p.precision + prev_precision) / 2.0;
        prev_recall = p.recall;
        prev_precision = p.precision;
    }
    curve.auc = std::clamp(area, 0.0, 1.0);
    return curve;
}

}  // namespace rankfuse
