#include "rankfuse/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rankfuse/errors.hpp"
#include "rankfuse/io.hpp"
#include "rankfuse/manifest.hpp"
#include "rankfuse/results.hpp"
#include "rankfuse/synthetic.hpp"

namespace rankfuse {

namespace {

// ISO-8601 time from SOURCE_DATE_EPOCH, if the caller pinned one.
std::optional<std::string> pinned_timestamp() {
    const char* epoch = std::getenv("SOURCE_DATE_EPOCH");
    if (!epoch || !*epoch) return std::nullopt;
    char* end = nullptr;
    const long long seconds = std::strtoll(epoch, &end, 10);
    if (*end != '\0' || seconds < 0) throw ConfigError("SOURCE_DATE_EPOCH must be a non-negative integer");
    const std::time_t t = static_cast<std::time_t>(seconds);
    std::tm utc{};
    gmtime_r(&t, &utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
    return std::string(buf);
}

struct RunOptions {
    std::string manifest;
    std::string schemes;
    std::optional<std::size_t> ballot_depth;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<double> noise;
    std::string synthetic;
    std::string borda_weights;
    std::optional<std::size_t> workers;
};

int command_run(const RunOptions& opt, std::ostream& out) {
    RunManifest manifest;
    if (!opt.manifest.empty()) manifest = load_manifest(opt.manifest);
    if (!opt.schemes.empty()) manifest.schemes = parse_scheme_list(opt.schemes);
    if (opt.ballot_depth) manifest.ballot_depth = *opt.ballot_depth;
    if (!opt.out.empty()) manifest.out_dir = opt.out;
    if (opt.seed) manifest.seed = opt.seed;
    if (opt.noise) manifest.noise = opt.noise;
    if (!opt.synthetic.empty()) manifest.synthetic = parse_synthetic_spec(opt.synthetic);
    if (!opt.borda_weights.empty()) manifest.borda_weights = parse_weight_list(opt.borda_weights);
    if (opt.workers) manifest.workers = *opt.workers;
    manifest.validate();

    std::vector<ScoreMatrix> matrices;
    std::optional<GroundTruth> truth;
    if (manifest.synthetic) {
        const auto& spec = *manifest.synthetic;
        if (!manifest.seed) manifest.seed = 0;
        if (!manifest.noise) manifest.noise = 0.0;
        auto data = generate_synthetic(spec.voters, spec.queries, spec.references, *manifest.noise, *manifest.seed);
        matrices = std::move(data.matrices);
        truth = std::move(data.truth);
    } else {
        for (std::size_t i = 0; i < manifest.techniques.size(); ++i) {
            const auto& t = manifest.techniques[i];
            matrices.push_back(load_score_matrix(t.path, VoterId{t.name, i}));
        }
        truth = load_ground_truth(*manifest.truth, matrices.front().n_references());
    }

    FusionConfig config;
    config.ballot_depth = manifest.ballot_depth;
    config.borda_weights = manifest.borda_weights;
    auto bundle = run_pipeline(matrices, *truth, manifest.schemes, config, manifest.workers);
    bundle.metadata.seed = manifest.seed;
    bundle.metadata.noise = manifest.noise;
    bundle.metadata.created = pinned_timestamp();
    emit_results(bundle, manifest.out_dir);

    out << "queries: " << bundle.metadata.n_queries << ", references: " << bundle.metadata.n_references
        << ", voters: " << bundle.metadata.techniques.size() << '\n';
    for (const auto& s : bundle.schemes) {
        out << scheme_name(s.scheme) << ": " << s.performance_bound << "/" << s.records.size()
            << " correct, auc " << format_double(s.pr.auc) << '\n';
    }
    if (bundle.z_table) write_zscores_csv(*bundle.z_table, out);
    out << "results written to " << manifest.out_dir.string() << '\n';
    return 0;
}

struct ElectOptions {
    std::string ballots;
    std::string schemes = "all";
    std::optional<std::size_t> candidates;
    std::string borda_weights;
    bool json = false;
};

int command_elect(const ElectOptions& opt, std::ostream& out) {
    auto ballots = load_ballots(opt.ballots);
    std::size_t n = 0;
    for (const auto& b : ballots) {
        for (const auto c : b.preferences) n = std::max<std::size_t>(n, c.index + 1);
    }
    if (opt.candidates) n = *opt.candidates;
    const Election election = validate_election(std::move(ballots), n);

    std::optional<std::vector<std::uint64_t>> weights;
    if (!opt.borda_weights.empty()) weights = parse_weight_list(opt.borda_weights);
    std::optional<std::span<const std::uint64_t>> weight_view;
    if (weights) weight_view = std::span<const std::uint64_t>(*weights);

    const auto schemes = parse_scheme_list(opt.schemes);
    for (std::size_t i = 0; i < schemes.size(); ++i) {
        const auto result = elect(election, schemes[i], weight_view);
        if (i) out << '\n';
        if (opt.json) {
            out << audit_json(result) << '\n';
        } else {
            write_audit(result, out);
        }
    }
    return 0;
}

struct CompareOptions {
    std::vector<std::string> inputs;
    std::string out;
};

int command_compare(const CompareOptions& opt, std::ostream& out) {
    std::vector<SchemeRecords> by_scheme;
    for (const auto& input : opt.inputs) {
        std::string name;
        std::filesystem::path path;
        const auto eq = input.find('=');
        if (eq != std::string::npos) {
            name = input.substr(0, eq);
            path = input.substr(eq + 1);
        } else {
            path = input;
            name = path.stem().string();
            if (name.rfind("matches_", 0) == 0) name = name.substr(8);
        }
        by_scheme.emplace_back(name, load_match_records(path));
    }
    const auto table = pairwise_z_table(by_scheme);
    write_zscores_csv(table, out);
    if (!opt.out.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(opt.out, ec);
        if (ec) throw IoError("cannot create output directory '" + opt.out + "': " + ec.message());
        const auto path = std::filesystem::path(opt.out) / "zscores.csv";
        std::ofstream file(path, std::ios::binary | std::ios::trunc);
        if (!file) throw IoError("cannot open '" + path.string() + "' for writing");
        write_zscores_csv(table, file);
    }
    return 0;
}

struct SynthOptions {
    std::size_t voters = 8;
    std::size_t queries = 32;
    std::size_t references = 32;
    double noise = 0.0;
    std::uint64_t seed = 0;
    std::string out = "synthetic";
};

int command_synth(const SynthOptions& opt, std::ostream& out) {
    const auto data = generate_synthetic(opt.voters, opt.queries, opt.references, opt.noise, opt.seed);
    const auto manifest = write_synthetic(data, opt.out, opt.seed, opt.noise);
    out << "wrote " << opt.voters << " score matrices (" << opt.queries << "x" << opt.references
        << ") and ground truth; manifest: " << manifest.string() << '\n';
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Ranked-choice voting fusion for place-recognition ensembles", "rankfuse"};
    app.require_subcommand(1);

    RunOptions run_opt;
    auto* run = app.add_subcommand("run", "Fuse score matrices with every scheme and write results");
    run->add_option("--manifest", run_opt.manifest, "Key-value run manifest")->check(CLI::ExistingFile);
    run->add_option("--scheme", run_opt.schemes, "Comma-separated schemes or 'all'");
    run->add_option("--ballot-depth", run_opt.ballot_depth, "Candidates ranked per voter");
    run->add_option("--out", run_opt.out, "Output directory");
    run->add_option("--seed", run_opt.seed, "Seed for synthetic runs");
    run->add_option("--noise", run_opt.noise, "Noise level in [0,1] for synthetic runs");
    run->add_option("--synthetic", run_opt.synthetic, "Generate data in memory: voters,queries,references");
    run->add_option("--borda-weights", run_opt.borda_weights, "Comma-separated descending Borda weights");
    run->add_option("--workers", run_opt.workers, "Worker threads (0 = all cores)");

    ElectOptions elect_opt;
    auto* elect_cmd = app.add_subcommand("elect", "Run one election from a ballot file and print its audit trail");
    elect_cmd->add_option("ballots", elect_opt.ballots, "Ballot file")->required()->check(CLI::ExistingFile);
    elect_cmd->add_option("--scheme", elect_opt.schemes, "Comma-separated schemes or 'all'");
    elect_cmd->add_option("--candidates", elect_opt.candidates, "Number of candidates (default: highest id + 1)");
    elect_cmd->add_option("--borda-weights", elect_opt.borda_weights, "Comma-separated descending Borda weights");
    elect_cmd->add_flag("--json", elect_opt.json, "Print the audit trail as JSON");

    CompareOptions compare_opt;
    auto* compare = app.add_subcommand("compare", "McNemar z-table from match-record files");
    compare->add_option("records", compare_opt.inputs, "[name=]matches.csv, two or more")->required()->expected(2, -1);
    compare->add_option("--out", compare_opt.out, "Directory for zscores.csv");

    SynthOptions synth_opt;
    auto* synth = app.add_subcommand("synth", "Write a seeded synthetic dataset and manifest");
    synth->add_option("--voters", synth_opt.voters, "Number of techniques")->capture_default_str();
    synth->add_option("--queries", synth_opt.queries, "Number of queries")->capture_default_str();
    synth->add_option("--references", synth_opt.references, "Number of references")->capture_default_str();
    synth->add_option("--noise", synth_opt.noise, "0 = truth always on top, 1 = no signal")->capture_default_str();
    synth->add_option("--seed", synth_opt.seed, "Random seed")->capture_default_str();
    synth->add_option("--out", synth_opt.out, "Output directory")->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (*run) return command_run(run_opt, out);
        if (*elect_cmd) return command_elect(elect_opt, out);
        if (*compare) return command_compare(compare_opt, out);
        if (*synth) return command_synth(synth_opt, out);
    } catch (const std::exception& e) {
        err << "rankfuse: error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

}  // namespace rankfuse
