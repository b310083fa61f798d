#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "rankfuse/errors.hpp"
#include "rankfuse/io.hpp"
#include "rankfuse/manifest.hpp"
#include "rankfuse/results.hpp"
#include "rankfuse/synthetic.hpp"
#include "temp_dir.hpp"

using namespace rankfuse;

namespace {

ScoreMatrix parse_matrix(const std::string& text) {
    std::istringstream in(text);
    return parse_score_matrix(in, {"t", 0});
}

GroundTruth parse_truth(const std::string& text, std::optional<std::size_t> n_refs = std::nullopt) {
    std::istringstream in(text);
    return parse_ground_truth(in, n_refs);
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t data_rows(const std::filesystem::path& p) {
    std::istringstream in(slurp(p));
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) ++n;
    return n - 1;
}

}  // namespace

TEST_CASE("score matrix CSV parsing") {
    const auto m = parse_matrix("0.1,0.9\n0.8,0.2");
    CHECK(m.n_queries() == 2);
    CHECK(m.n_references() == 2);
    CHECK(m.at(1, 0) == 0.8);

    CHECK(parse_matrix(" 1 , -2.5e-3 \r\n+3,4\n\n").at(0, 1) == -2.5e-3);

    try {
        parse_matrix("1,2\n3");
        FAIL("expected parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("row 2") != std::string::npos);
    }
    try {
        parse_matrix("1,2\n3,abc");
        FAIL("expected parse error");
    } catch (const ParseError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("row 2") != std::string::npos);
        CHECK(msg.find("column 2") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_matrix("1,NaN\n3,4"), ValidationError);
    CHECK_THROWS_AS(parse_matrix("1,inf"), ValidationError);
    CHECK_THROWS_AS(parse_matrix(""), ParseError);
    CHECK_THROWS_AS(parse_matrix("1\n2"), ValidationError);  // one reference
    CHECK_THROWS_AS(load_score_matrix("/nonexistent/matrix.csv", {"t", 0}), IoError);
}

TEST_CASE("score matrix write/parse round-trips every double exactly") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> values(5 * 7);
        for (auto& v : values) v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
        const ScoreMatrix m(5, 7, values, {"t", 0});
        std::ostringstream out;
        write_score_matrix(m, out);
        const auto back = parse_matrix(out.str());
        CHECK(std::equal(back.values().begin(), back.values().end(), m.values().begin(), m.values().end()));
    }
}

TEST_CASE("ground truth parsing") {
    const auto identity = parse_truth("0: 0\n1: 1");
    CHECK(identity.n_queries() == 2);
    CHECK(identity.accepts(1, CandidateId(1)));

    const auto window = parse_truth("# tolerance window\n0: 3,4,5  # three frames\n");
    CHECK(window.accepted(0).size() == 3);

    CHECK_THROWS_AS(parse_truth("0: 0\n0: 1"), ValidationError);
    CHECK_THROWS_AS(parse_truth("0: 0\n2: 1"), ValidationError);  // query 1 missing
    CHECK_THROWS_AS(parse_truth("0: 5", 5), ValidationError);
    CHECK_THROWS_AS(parse_truth("0 5"), ParseError);
    CHECK_THROWS_AS(parse_truth("0: x"), ParseError);
    CHECK_THROWS_AS(parse_truth(""), ParseError);

    std::ostringstream out;
    write_ground_truth(window, out);
    CHECK(parse_truth(out.str()) == window);
}

TEST_CASE("ballot file parsing") {
    std::istringstream in("# election\nnetvlad: 2 0 1\nhog: 1,2\n0\n");
    const auto ballots = parse_ballots(in);
    REQUIRE(ballots.size() == 3);
    CHECK(ballots[0].voter.name == "netvlad");
    CHECK(ballots[0].preferences.size() == 3);
    CHECK(ballots[1].preferences[1].index == 2);
    CHECK(ballots[2].voter.name == "voter2");

    std::istringstream bad("a: 1 x");
    CHECK_THROWS_AS(parse_ballots(bad), ParseError);
    std::istringstream empty("a:");
    CHECK_THROWS_AS(parse_ballots(empty), ParseError);
}

TEST_CASE("match record files round-trip") {
    const std::vector<MatchRecord> records{{0, true, 0.75, CandidateId(3)}, {1, false, 1.0 / 3.0, CandidateId(9)}};
    std::ostringstream out;
    write_match_records(records, out);
    std::istringstream in(out.str());
    CHECK(parse_match_records(in) == records);

    std::istringstream no_header("0,1,0.5,2\n");
    CHECK_THROWS_AS(parse_match_records(no_header), ParseError);
    std::istringstream bad_conf("query_index,correct,confidence,winner\n0,1,1.5,2\n");
    CHECK_THROWS_AS(parse_match_records(bad_conf), ValidationError);
}

TEST_CASE("manifest parsing") {
    std::istringstream in(
        "# demo\n"
        "technique = netvlad: m/netvlad.csv\n"
        "technique = /abs/hog.csv\n"
        "truth = truth.txt\n"
        "schemes = borda, irv\n"
        "ballot_depth = 5\n"
        "borda_weights = 9,7,5,3,1\n"
        "out = res\n"
        "seed = 12\n"
        "noise = 0.25\n"
        "workers = 2\n");
    const auto m = parse_manifest(in, "/base");
    REQUIRE(m.techniques.size() == 2);
    CHECK(m.techniques[0].name == "netvlad");
    CHECK(m.techniques[0].path == std::filesystem::path("/base/m/netvlad.csv"));
    CHECK(m.techniques[1].name == "hog");
    CHECK(m.techniques[1].path == std::filesystem::path("/abs/hog.csv"));
    CHECK(m.truth == std::filesystem::path("/base/truth.txt"));
    CHECK(m.schemes == std::vector<Scheme>{Scheme::borda, Scheme::irv});
    CHECK(m.ballot_depth == 5);
    CHECK(m.borda_weights == std::vector<std::uint64_t>{9, 7, 5, 3, 1});
    CHECK(m.out_dir == std::filesystem::path("/base/res"));
    CHECK(m.seed == 12u);
    CHECK(m.noise == 0.25);
    CHECK(m.workers == 2);
    CHECK_NOTHROW(m.validate());

    auto parse = [](const std::string& text) {
        std::istringstream s(text);
        return parse_manifest(s, ".");
    };
    CHECK_THROWS_AS(parse("colour = red"), ConfigError);
    CHECK_THROWS_AS(parse("schemes = approval"), ConfigError);
    CHECK_THROWS_AS(parse("ballot_depth = 0"), ConfigError);
    CHECK_THROWS_AS(parse("technique = a.csv\ntruth = t.txt").validate(), ConfigError);
    CHECK_THROWS_AS(parse("technique = a.csv\ntechnique = b.csv").validate(), ConfigError);
    CHECK_THROWS_AS(parse("technique = x: a.csv\ntechnique = x: b.csv\ntruth = t").validate(), ConfigError);
    CHECK_THROWS_AS(parse("synthetic = 1,10,10").validate(), ConfigError);
    CHECK_NOTHROW(parse("synthetic = 3,10,10\nschemes = all").validate());
    CHECK_THROWS_AS(parse("schemes = irv, irv"), ConfigError);
}

TEST_CASE("synthetic generator") {
    SUBCASE("noiseless data puts the truth first for every voter") {
        const auto data = generate_synthetic(4, 50, 20, 0.0, 9);
        for (const auto& m : data.matrices) {
            for (std::size_t q = 0; q < m.n_queries(); ++q) {
                const auto b = ballot_from_scores(m.row(q), 1, m.technique());
                CHECK(data.truth.accepts(q, b.preferences[0]));
            }
        }
    }
    SUBCASE("same seed gives identical matrices, different seed does not") {
        const auto a = generate_synthetic(3, 10, 10, 0.5, 1);
        const auto b = generate_synthetic(3, 10, 10, 0.5, 1);
        const auto c = generate_synthetic(3, 10, 10, 0.5, 2);
        for (std::size_t v = 0; v < 3; ++v) {
            CHECK(std::equal(a.matrices[v].values().begin(), a.matrices[v].values().end(),
                             b.matrices[v].values().begin()));
        }
        CHECK_FALSE(std::equal(a.matrices[0].values().begin(), a.matrices[0].values().end(),
                               c.matrices[0].values().begin()));
    }
    SUBCASE("truth wraps when queries outnumber references") {
        const auto data = generate_synthetic(2, 7, 3, 1.0, 0);
        CHECK(data.truth.accepts(5, CandidateId(2)));
    }
    SUBCASE("argument validation") {
        CHECK_THROWS_AS(generate_synthetic(2, 10, 1, 0.0, 0), ValidationError);
        CHECK_THROWS_AS(generate_synthetic(2, 0, 10, 0.0, 0), ValidationError);
        CHECK_THROWS_AS(generate_synthetic(2, 10, 10, 1.5, 0), ValidationError);
        CHECK_THROWS_AS(generate_synthetic(2, 10, 10, -0.1, 0), ValidationError);
    }
    SUBCASE("written files load back identically") {
        TempDir dir;
        const auto data = generate_synthetic(2, 6, 5, 0.4, 33);
        const auto manifest_path = write_synthetic(data, dir.path(), 33, 0.4);
        const auto manifest = load_manifest(manifest_path);
        REQUIRE(manifest.techniques.size() == 2);
        CHECK(manifest.seed == 33u);
        const auto m0 = load_score_matrix(manifest.techniques[0].path, {"technique_0", 0});
        CHECK(std::equal(m0.values().begin(), m0.values().end(), data.matrices[0].values().begin()));
        CHECK(load_ground_truth(*manifest.truth, 5) == data.truth);
    }
}

TEST_CASE("emit_results writes every artifact and loads back") {
    TempDir dir;
    const auto data = generate_synthetic(4, 40, 15, 0.85, 5);
    FusionConfig config;
    config.ballot_depth = 5;
    auto bundle = run_pipeline(data.matrices, data.truth, kAllSchemes, config);
    bundle.metadata.seed = 5;
    bundle.metadata.noise = 0.85;
    const auto out = dir / "nested/out";
    emit_results(bundle, out);

    CHECK(data_rows(out / "radar.csv") == 5);
    CHECK(data_rows(out / "zscores.csv") == 10);
    const auto radar = load_radar_csv(out / "radar.csv");
    for (std::size_t i = 0; i < radar.size(); ++i) {
        CHECK(radar[i].scheme == scheme_name(bundle.schemes[i].scheme));
        CHECK(radar[i].correct_count == bundle.schemes[i].performance_bound);
        CHECK(radar[i].total_queries == 40);
    }
    for (const auto& s : bundle.schemes) {
        const std::string name(scheme_name(s.scheme));
        CHECK(load_pr_csv(out / ("pr_" + name + ".csv")) == s.pr.points);
        CHECK(load_match_records(out / ("matches_" + name + ".csv")) == s.records);
    }
    const auto zrows = load_zscores_csv(out / "zscores.csv");
    REQUIRE(zrows.size() == 10);
    CHECK(zrows[0].scheme_a == "plurality");
    CHECK(zrows[0].scheme_b == "condorcet");
    CHECK(zrows[0].z == bundle.z_table->z[0][1]);

    const auto loaded = load_results(out);
    CHECK(loaded == bundle);
    CHECK(summary_json(loaded) == slurp(out / "summary.json"));
}

TEST_CASE("emit_results surfaces I/O failures with the path") {
    TempDir dir;
    std::ofstream(dir / "blocker") << "x";
    ResultBundle bundle;
    try {
        emit_results(bundle, dir / "blocker" / "out");
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("blocker") != std::string::npos);
    }
}
