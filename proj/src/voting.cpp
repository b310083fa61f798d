#include "rankfuse/voting.hpp"

#include <algorithm>
#include <string>

#include "rankfuse/errors.hpp"

namespace rankfuse {

std::string_view scheme_name(Scheme scheme) {
    switch (scheme) {
        case Scheme::plurality: return "plurality";
        case Scheme::condorcet: return "condorcet";
        case Scheme::borda: return "borda";
        case Scheme::contingent: return "contingent";
        case Scheme::irv: return "irv";
    }
    return "unknown";
}

Scheme parse_scheme(std::string_view name) {
    for (Scheme s : kAllSchemes) {
        if (scheme_name(s) == name) return s;
    }
    throw ConfigError("unknown voting scheme '" + std::string(name) +
                      "' (expected plurality, condorcet, borda, contingent or irv)");
}

std::size_t PairwiseMatrix::victories(std::size_t i) const {
    std::size_t count = 0;
    for (std::size_t j = 0; j < n_; ++j) {
        if (j != i && wins(i, j) > wins(j, i)) ++count;
    }
    return count;
}

namespace {

struct Argmax {
    std::size_t index = 0;
    bool tied = false;
};

// Lowest index among the maxima of `values`.
template <typename T>
Argmax argmax(const std::vector<T>& values) {
    Argmax best;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[best.index]) {
            best = {i, false};
        } else if (values[i] == values[best.index]) {
            best.tied = true;
        }
    }
    return best;
}

std::vector<std::size_t> first_choice_counts(const Election& election) {
    std::vector<std::size_t> counts(election.n_candidates(), 0);
    for (const auto& b : election.ballots()) ++counts[b.preferences.front().index];
    return counts;
}

Tally to_tally(const std::vector<std::size_t>& counts) {
    Tally tally;
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] > 0) tally.emplace(CandidateId(static_cast<std::uint32_t>(c)), counts[c]);
    }
    return tally;
}

double share(std::size_t part, std::size_t whole) {
    return whole == 0 ? 0.0 : static_cast<double>(part) / static_cast<double>(whole);
}

}  // namespace

ElectionResult plurality(const Election& election) {
    const auto counts = first_choice_counts(election);
    const auto best = argmax(counts);

    ElectionResult result;
    result.scheme = Scheme::plurality;
    result.winner = CandidateId(static_cast<std::uint32_t>(best.index));
    result.tie_broken = best.tied;
    result.confidence = share(counts[best.index], election.n_ballots());
    result.rounds.push_back(RoundLog{1, to_tally(counts), std::nullopt, 0});
    return result;
}

PairwiseMatrix pairwise_matrix(const Election& election) {
    const std::size_t n = election.n_candidates();
    PairwiseMatrix matrix(n);
    std::vector<char> placed(n);
    for (const auto& ballot : election.ballots()) {
        std::fill(placed.begin(), placed.end(), 0);
        // Each listed candidate beats everything not listed before or at its position.
        for (const CandidateId c : ballot.preferences) {
            placed[c.index] = 1;
            for (std::size_t other = 0; other < n; ++other) {
                if (!placed[other]) ++matrix.wins(c.index, other);
            }
        }
    }
    return matrix;
}

ElectionResult condorcet(const Election& election) {
    const std::size_t n = election.n_candidates();
    auto matrix = pairwise_matrix(election);

    std::vector<std::size_t> copeland(n);
    for (std::size_t c = 0; c < n; ++c) copeland[c] = matrix.victories(c);

    ElectionResult result;
    result.scheme = Scheme::condorcet;
    const auto best = argmax(copeland);
    // A Condorcet winner is the unique candidate with n - 1 strict victories.
    result.copeland_fallback = copeland[best.index] != n - 1;
    result.tie_broken = best.tied;
    result.winner = CandidateId(static_cast<std::uint32_t>(best.index));
    result.confidence = n == 1 ? 1.0 : share(copeland[best.index], n - 1);
    result.pairwise = std::move(matrix);
    return result;
}

ElectionResult borda(const Election& election, std::optional<std::span<const std::uint64_t>> weights) {
    const std::size_t depth = election.max_depth();
    std::vector<std::uint64_t> w;
    if (weights) {
        w.assign(weights->begin(), weights->end());
        if (w.size() < depth) {
            throw ConfigError("borda weights cover " + std::to_string(w.size()) +
                              " positions but ballots rank up to " + std::to_string(depth));
        }
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (w[i] == 0) throw ConfigError("borda weight at position " + std::to_string(i) + " is not positive");
            if (i > 0 && w[i] >= w[i - 1]) {
                throw ConfigError("borda weights must be strictly descending (position " + std::to_string(i) + ")");
            }
        }
    } else {
        w.resize(depth);
        for (std::size_t p = 0; p < depth; ++p) w[p] = depth - p;
    }

    BordaScores scores(election.n_candidates(), 0);
    for (const auto& ballot : election.ballots()) {
        for (std::size_t p = 0; p < ballot.preferences.size(); ++p) scores[ballot.preferences[p].index] += w[p];
    }

    std::uint64_t total = 0;
    for (auto s : scores) total += s;
    const auto best = argmax(scores);

    ElectionResult result;
    result.scheme = Scheme::borda;
    result.winner = CandidateId(static_cast<std::uint32_t>(best.index));
    result.tie_broken = best.tied;
    result.confidence = total == 0 ? 0.0 : static_cast<double>(scores[best.index]) / static_cast<double>(total);
    result.scores = std::move(scores);
    return result;
}

ElectionResult contingent(const Election& election) {
    const std::size_t n = election.n_candidates();
    const std::size_t voters = election.n_ballots();
    const auto counts = first_choice_counts(election);

    ElectionResult result;
    result.scheme = Scheme::contingent;

    const auto leader = argmax(counts);
    if (2 * counts[leader.index] > voters) {
        result.winner = CandidateId(static_cast<std::uint32_t>(leader.index));
        result.confidence = share(counts[leader.index], voters);
        result.rounds.push_back(RoundLog{1, to_tally(counts), std::nullopt, 0});
        return result;
    }

    // No majority implies at least two candidates, so two finalists exist.
    std::vector<std::uint32_t> order(n);
    for (std::uint32_t c = 0; c < n; ++c) order[c] = c;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return counts[a] > counts[b]; });
    const std::uint32_t first = order[0];
    const std::uint32_t second = order[1];
    const bool cutoff_tie = n > 2 && counts[order[2]] == counts[second];
    result.rounds.push_back(RoundLog{1, to_tally(counts), std::nullopt, 0});

    std::vector<std::size_t> final_counts(n, 0);
    std::size_t exhausted = 0;
    for (const auto& ballot : election.ballots()) {
        auto it = std::find_if(ballot.preferences.begin(), ballot.preferences.end(),
                               [&](CandidateId c) { return c.index == first || c.index == second; });
        if (it == ballot.preferences.end()) {
            ++exhausted;
        } else {
            ++final_counts[it->index];
        }
    }

    const std::uint32_t lo = std::min(first, second);
    const std::uint32_t hi = std::max(first, second);
    const bool final_tie = final_counts[lo] == final_counts[hi];
    const std::uint32_t winner = final_counts[hi] > final_counts[lo] ? hi : lo;
    result.winner = CandidateId(winner);
    result.tie_broken = cutoff_tie || final_tie;
    result.confidence = share(final_counts[winner], voters);
    result.rounds.push_back(RoundLog{2, to_tally(final_counts), std::nullopt, exhausted});
    return result;
}

ElectionResult irv(const Election& election) {
    const std::size_t n = election.n_candidates();
    const auto& ballots = election.ballots();

    std::vector<char> active(n, 1);
    std::size_t n_active = n;
    std::vector<std::size_t> cursor(ballots.size(), 0);
    std::vector<std::vector<std::size_t>> piles(n);
    for (std::size_t b = 0; b < ballots.size(); ++b) piles[ballots[b].preferences.front().index].push_back(b);
    std::size_t exhausted = 0;

    ElectionResult result;
    result.scheme = Scheme::irv;

    for (std::size_t round = 1;; ++round) {
        std::vector<std::size_t> counts(n, 0);
        for (std::size_t c = 0; c < n; ++c) counts[c] = piles[c].size();
        const std::size_t live = ballots.size() - exhausted;

        std::size_t leader = n;
        for (std::size_t c = 0; c < n; ++c) {
            if (active[c] && (leader == n || counts[c] > counts[leader])) leader = c;
        }
        if (n_active == 1 || 2 * counts[leader] > live) {
            result.rounds.push_back(RoundLog{round, to_tally(counts), std::nullopt, exhausted});
            result.winner = CandidateId(static_cast<std::uint32_t>(leader));
            result.confidence = share(counts[leader], ballots.size());
            return result;
        }

        std::size_t loser = n;
        bool tied = false;
        for (std::size_t c = 0; c < n; ++c) {
            if (!active[c]) continue;
            if (loser == n || counts[c] < counts[loser]) {
                loser = c;
                tied = false;
            } else if (counts[c] == counts[loser]) {
                tied = true;
            }
        }
        // Order among zero-vote candidates never moves a ballot, so only ties
        // between candidates that hold votes count as broken ties.
        if (tied && counts[loser] > 0) result.tie_broken = true;

        result.rounds.push_back(
            RoundLog{round, to_tally(counts), CandidateId(static_cast<std::uint32_t>(loser)), exhausted});
        active[loser] = 0;
        --n_active;
        for (std::size_t b : piles[loser]) {
            const auto& prefs = ballots[b].preferences;
            std::size_t& pos = cursor[b];
            do {
                ++pos;
            } while (pos < prefs.size() && !active[prefs[pos].index]);
            if (pos < prefs.size()) {
                piles[prefs[pos].index].push_back(b);
            } else {
                ++exhausted;
            }
        }
        piles[loser].clear();
    }
}

ElectionResult elect(const Election& election, Scheme scheme,
                     std::optional<std::span<const std::uint64_t>> borda_weights) {
    switch (scheme) {
        case Scheme::plurality: return plurality(election);
        case Scheme::condorcet: return condorcet(election);
        case Scheme::borda: return borda(election, borda_weights);
        case Scheme::contingent: return contingent(election);
        case Scheme::irv: return irv(election);
    }
    throw ConfigError("unknown voting scheme");
}

}  // namespace rankfuse
