// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "rankfuse/cli.hpp"
#include "rankfuse/evaluation.hpp"
#include "rankfuse/fusion.hpp"
#include "rankfuse/io.hpp"
#include "rankfuse/results.hpp"
#include "rankfuse/significance.hpp"
#include "rankfuse/synthetic.hpp"
#include "rankfuse/voting.hpp"
#include "temp_dir.hpp"

using namespace rankfuse;
using Clock = std::chrono::steady_clock;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& why) {
        if (!ok && pass) {
            pass = false;
            detail = why;
        }
    }
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

bool same_outcome(const ElectionResult& got, const oracle::Outcome& want) {
    return got.winner.index == static_cast<std::uint32_t>(want.winner) && got.confidence == want.confidence &&
           got.tie_broken == want.tie_broken;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    if (code != 0) std::fprintf(stderr, "%s", err.str().c_str());
    return code;
}

// 1. Every scheme equals its naive re-implementation; < 10 s.
Verdict scheme_oracle_equivalence() {
    constexpr int kElections = 2000;
    constexpr double kBudgetSeconds = 10.0;
    Verdict v;
    std::mt19937 rng(20240601);
    const auto start = Clock::now();
    int mismatches = 0;
    for (int i = 0; i < kElections; ++i) {
        const auto e = oracle::random_election(rng, 6, 20, i % 4 == 0);
        const auto election = oracle::to_election(e.ballots, e.n);
        const bool ok = same_outcome(plurality(election), oracle::plurality(e.ballots, e.n)) &&
                        same_outcome(condorcet(election), oracle::condorcet(e.ballots, e.n)) &&
                        condorcet(election).copeland_fallback == oracle::condorcet(e.ballots, e.n).fallback &&
                        same_outcome(borda(election), oracle::borda(e.ballots, e.n)) &&
                        same_outcome(contingent(election), oracle::contingent(e.ballots, e.n)) &&
                        same_outcome(irv(election), oracle::irv(e.ballots, e.n));
        if (!ok) ++mismatches;
    }
    const double elapsed = seconds_since(start);
    v.require(mismatches == 0, std::to_string(mismatches) + " elections disagree with the oracle");
    v.require(elapsed < kBudgetSeconds, "took " + std::to_string(elapsed) + " s");
    v.detail = v.pass ? std::to_string(kElections) + " elections x 5 schemes, 0 mismatches, " +
                            std::to_string(elapsed) + " s"
                      : v.detail;
    return v;
}

// 2. A planted strict-majority first choice wins plurality, contingent and IRV.
Verdict majority_criterion() {
    constexpr int kElections = 500;
    Verdict v;
    std::mt19937 rng(7);
    int failures = 0;
    for (int i = 0; i < kElections; ++i) {
        auto e = oracle::random_election(rng, 6, 20);
        if (e.n < 2) {
            e.n = 2;
            for (auto& b : e.ballots) b.push_back(1);
        }
        const int planted = std::uniform_int_distribution<int>(0, e.n - 1)(rng);
        const std::size_t need = e.ballots.size() / 2 + 1;
        for (std::size_t b = 0; b < need; ++b) {
            auto& ballot = e.ballots[b];
            ballot.erase(std::remove(ballot.begin(), ballot.end(), planted), ballot.end());
            ballot.insert(ballot.begin(), planted);
        }
        const auto election = oracle::to_election(e.ballots, e.n);
        const auto p = static_cast<std::uint32_t>(planted);
        if (plurality(election).winner.index != p || contingent(election).winner.index != p ||
            irv(election).winner.index != p) {
            ++failures;
        }
    }
    v.require(failures == 0, std::to_string(failures) + " of " + std::to_string(kElections) + " elections missed");
    if (v.pass) v.detail = std::to_string(kElections) + " planted-majority elections, 100% elected";
    return v;
}

// 3. Condorcet winners are returned; the symmetric 3-cycle falls back to Copeland + lowest index.
Verdict condorcet_consistency() {
    Verdict v;
    std::mt19937 rng(99);
    int with_winner = 0;
    int misses = 0;
    for (int i = 0; i < 2000; ++i) {
        const auto e = oracle::random_election(rng, 6, 20, i % 2 == 0);
        const int cw = oracle::condorcet_winner(e.ballots, e.n);
        if (cw < 0) continue;
        ++with_winner;
        const auto r = condorcet(oracle::to_election(e.ballots, e.n));
        if (r.winner.index != static_cast<std::uint32_t>(cw) || r.copeland_fallback) ++misses;
    }
    v.require(with_winner > 0, "no election with a Condorcet winner was generated");
    v.require(misses == 0, std::to_string(misses) + " Condorcet winners not elected");

    const auto cycle = condorcet(oracle::to_election({{0, 1, 2}, {1, 2, 0}, {2, 0, 1}}, 3));
    v.require(cycle.winner.index == 0 && cycle.tie_broken && cycle.copeland_fallback,
              "3-cycle did not fall back to Copeland with lowest-index tie-break");
    if (v.pass) {
        v.detail = std::to_string(with_winner) + " elections with a Condorcet winner, all elected; 3-cycle -> 0 (fallback)";
    }
    return v;
}

// 4. Statistic arithmetic, the 1.96 band boundary and exact skew-symmetry.
Verdict mcnemar_arithmetic() {
    constexpr double kTolerance = 1e-4;
    Verdict v;
    const auto stat = mcnemar_statistic({10, 2});
    v.require(std::abs(stat.z - 2.3094) <= kTolerance, "statistic(10, 2) = " + std::to_string(stat.z));
    v.require(z_confidence_band(1.96) == ConfidenceBand::at_least_95, "|z| = 1.96 is not >=95%");
    v.require(z_confidence_band(-1.96) == ConfidenceBand::at_least_95, "z = -1.96 is not >=95%");
    v.require(z_confidence_band(std::nextafter(1.96, 0.0)) == ConfidenceBand::at_least_90,
              "|z| just below 1.96 is not >=90%");

    std::mt19937 rng(4);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<SchemeRecords> records;
        const std::size_t queries = 1 + rng() % 60;
        for (Scheme s : kAllSchemes) {
            std::vector<MatchRecord> r;
            const unsigned bias = 2 + rng() % 5;
            for (std::size_t q = 0; q < queries; ++q) r.push_back({q, rng() % bias != 0, 1.0, CandidateId(0)});
            records.emplace_back(std::string(scheme_name(s)), std::move(r));
        }
        const auto t = pairwise_z_table(records);
        for (std::size_t a = 0; a < t.z.size(); ++a) {
            for (std::size_t b = 0; b < t.z.size(); ++b) {
                v.require(t.z[a][b] == -t.z[b][a], "z-table not skew-symmetric");
            }
        }
    }
    if (v.pass) v.detail = "statistic(10,2) = " + std::to_string(stat.z) + ", band edge at 1.96, skew-symmetry exact";
    return v;
}

// 5. Synthetic end-to-end through the CLI.
Verdict synthetic_end_to_end() {
    constexpr double kBudgetSeconds = 60.0;
    constexpr std::size_t kVoters = 8;
    Verdict v;
    TempDir dir;
    const auto start = Clock::now();

    const std::pair<const char*, std::size_t> shapes[] = {{"livingroom", 32}, {"corridor", 111}, {"17places", 406}};
    for (const auto& [name, n] : shapes) {
        const auto data = (dir / name).string();
        v.require(cli({"synth", "--voters", std::to_string(kVoters), "--queries", std::to_string(n), "--references",
                       std::to_string(n), "--noise", "0", "--seed", "11", "--out", data}) == 0,
                  std::string("synth failed for ") + name);
        v.require(cli({"run", "--manifest", data + "/manifest.txt", "--scheme", "all", "--out", data + "/results"}) == 0,
                  std::string("run failed for ") + name);
        if (!v.pass) return v;
        const auto bundle = load_results(data + "/results");
        v.require(bundle.schemes.size() == 5, "expected 5 schemes");
        for (const auto& s : bundle.schemes) {
            v.require(s.performance_bound == n, std::string(name) + ": " + std::string(scheme_name(s.scheme)) +
                                                    " matched " + std::to_string(s.performance_bound) + "/" +
                                                    std::to_string(n));
            v.require(s.pr.auc == 1.0, std::string(name) + ": " + std::string(scheme_name(s.scheme)) + " auc " +
                                           std::to_string(s.pr.auc));
        }
    }

    // Pure noise: accuracy should sit within 3 sigma of chance.
    constexpr std::size_t kQueries = 1000;
    constexpr std::size_t kReferences = 100;
    const double p = 1.0 / kReferences;
    const double sigma = std::sqrt(p * (1.0 - p) / kQueries);
    const auto noisy = (dir / "noise").string();
    v.require(cli({"synth", "--voters", std::to_string(kVoters), "--queries", std::to_string(kQueries), "--references",
                   std::to_string(kReferences), "--noise", "1", "--seed", "2024", "--out", noisy}) == 0,
              "synth failed for noise run");
    v.require(cli({"run", "--manifest", noisy + "/manifest.txt", "--out", noisy + "/results"}) == 0,
              "run failed for noise run");
    if (!v.pass) return v;
    std::string accuracies;
    for (const auto& s : load_results(noisy + "/results").schemes) {
        const double accuracy = static_cast<double>(s.performance_bound) / kQueries;
        accuracies += std::string(scheme_name(s.scheme)) + "=" + std::to_string(accuracy) + " ";
        v.require(std::abs(accuracy - p) <= 3.0 * sigma,
                  std::string(scheme_name(s.scheme)) + " accuracy " + std::to_string(accuracy) + " outside 0.01 +- " +
                      std::to_string(3.0 * sigma));
    }

    const double elapsed = seconds_since(start);
    v.require(elapsed < kBudgetSeconds, "took " + std::to_string(elapsed) + " s");
    if (v.pass) {
        v.detail = "noise 0: 32/111/406 all matched, auc 1; noise 1: " + accuracies + "(3 sigma = " +
                   std::to_string(3.0 * sigma) + "), " + std::to_string(elapsed) + " s";
    }
    return v;
}

// 6. PR-curve properties and the hand-traced fixture.
Verdict pr_curve_properties() {
    Verdict v;
    const std::vector<MatchRecord> fixture{{0, true, 0.9, CandidateId(0)},
                                           {1, false, 0.8, CandidateId(0)},
                                           {2, true, 0.7, CandidateId(0)}};
    const auto curve = pr_curve(fixture);
    const std::vector<std::pair<double, double>> expected{{1.0, 0.5}, {0.5, 0.5}, {2.0 / 3.0, 1.0}};
    v.require(curve.points.size() == expected.size(), "fixture has wrong number of points");
    for (std::size_t i = 0; v.pass && i < expected.size(); ++i) {
        v.require(curve.points[i].precision == expected[i].first && curve.points[i].recall == expected[i].second,
                  "fixture point " + std::to_string(i) + " differs");
    }

    std::vector<MatchRecord> all_correct;
    for (std::size_t q = 0; q < 25; ++q) all_correct.push_back({q, true, 1.0 - q * 0.03, CandidateId(0)});
    const auto perfect = pr_curve(all_correct);
    for (const auto& p : perfect.points) v.require(p.precision == 1.0, "all-correct precision is not 1");
    v.require(perfect.auc == 1.0, "all-correct auc is not 1");

    std::mt19937 rng(31);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<MatchRecord> records;
        const std::size_t n = 1 + rng() % 50;
        for (std::size_t q = 0; q < n; ++q) {
            records.push_back({q, rng() % 3 != 0, (rng() % 11) / 10.0, CandidateId(0)});
        }
        const auto c = pr_curve(records);
        for (std::size_t i = 1; i < c.points.size(); ++i) {
            v.require(c.points[i].recall >= c.points[i - 1].recall, "recall decreased along the sweep");
        }
        if (performance_bounds(records) > 0) v.require(c.points.back().recall == 1.0, "final recall is not 1");
        v.require(c.auc >= 0.0 && c.auc <= 1.0, "auc outside [0,1]");
    }
    const auto data = generate_synthetic(6, 300, 60, 0.9, 8);
    for (Scheme s : kAllSchemes) {
        FusionConfig config;
        config.scheme = s;
        const auto records = score_matches(run_dataset(data.matrices, config), data.truth);
        const auto c = pr_curve(records);
        for (std::size_t i = 1; i < c.points.size(); ++i) {
            v.require(c.points[i].recall >= c.points[i - 1].recall, "recall decreased on fused outcomes");
        }
    }
    if (v.pass) v.detail = "fixture exact, all-correct precision 1 / auc 1, recall monotone on 1000 random + 5 fused sweeps";
    return v;
}

// 7. Identical inputs give byte-identical summary.json; emit -> load is exact.
Verdict determinism_and_round_trip() {
    Verdict v;
    TempDir dir;
    const auto data = (dir / "data").string();
    v.require(cli({"synth", "--voters", "5", "--queries", "150", "--references", "50", "--noise", "0.9", "--seed",
                   "77", "--out", data}) == 0,
              "synth failed");
    v.require(cli({"run", "--manifest", data + "/manifest.txt", "--out", (dir / "a").string()}) == 0, "first run failed");
    v.require(cli({"run", "--manifest", data + "/manifest.txt", "--out", (dir / "b").string()}) == 0, "second run failed");
    if (!v.pass) return v;
    const auto first = slurp(dir / "a" / "summary.json");
    v.require(!first.empty() && first == slurp(dir / "b" / "summary.json"), "summary.json differs between runs");

    const auto bundle = load_results(dir / "a");
    v.require(summary_json(bundle) == first, "re-serialized summary differs");
    emit_results(bundle, dir / "c");
    v.require(load_results(dir / "c") == bundle, "emit -> load round trip changed values");
    for (const auto& s : bundle.schemes) {
        const std::string name(scheme_name(s.scheme));
        v.require(load_pr_csv(dir / "c" / ("pr_" + name + ".csv")) == s.pr.points, "pr csv round trip differs");
        v.require(load_match_records(dir / "c" / ("matches_" + name + ".csv")) == s.records,
                  "match csv round trip differs");
    }
    const auto synth_again = (dir / "data2").string();
    cli({"synth", "--voters", "5", "--queries", "150", "--references", "50", "--noise", "0.9", "--seed", "77", "--out",
         synth_again});
    v.require(slurp(synth_again + "/technique_3.csv") == slurp(data + "/technique_3.csv"),
              "synthetic matrices differ for the same seed");
    if (v.pass) v.detail = "two runs byte-identical (" + std::to_string(first.size()) + " bytes), round trip exact";
    return v;
}

// 8. Scaling one voter's scores by a positive constant changes no winner.
Verdict scale_invariance() {
    Verdict v;
    const auto data = generate_synthetic(8, 1000, 40, 0.8, 123);
    const double factors[] = {3.7, 1e-3, 1e6};
    std::size_t checks = 0;
    for (Scheme s : kAllSchemes) {
        FusionConfig config;
        config.scheme = s;
        const auto base = run_dataset(data.matrices, config);
        for (std::size_t voter = 0; voter < data.matrices.size(); ++voter) {
            auto scaled = data.matrices;
            scaled[voter] = scaled[voter].scaled(factors[voter % 3]);
            const auto out = run_dataset(scaled, config);
            for (std::size_t q = 0; q < base.size(); ++q) {
                ++checks;
                v.require(out[q].winner == base[q].winner,
                          std::string(scheme_name(s)) + ": winner changed at query " + std::to_string(q));
            }
        }
    }
    if (v.pass) v.detail = std::to_string(checks) + " (scheme, voter, query) winners unchanged";
    return v;
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Verdict()>> criteria[] = {
        {"AC1 scheme-oracle equivalence", scheme_oracle_equivalence},
        {"AC2 majority criterion", majority_criterion},
        {"AC3 Condorcet consistency", condorcet_consistency},
        {"AC4 McNemar arithmetic", mcnemar_arithmetic},
        {"AC5 synthetic end-to-end", synthetic_end_to_end},
        {"AC6 PR-curve properties", pr_curve_properties},
        {"AC7 determinism and round-trip", determinism_and_round_trip},
        {"AC8 scale invariance", scale_invariance},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Verdict verdict;
        try {
            verdict = run();
        } catch (const std::exception& e) {
            verdict.pass = false;
            verdict.detail = std::string("exception: ") + e.what();
        }
        std::printf("[%s] %s: %s\n", verdict.pass ? "PASS" : "FAIL", name, verdict.detail.c_str());
        std::fflush(stdout);
        if (!verdict.pass) ++failed;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
    return failed == 0 ? 0 : 1;
}
