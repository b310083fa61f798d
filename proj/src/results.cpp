#include "rankfuse/results.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "rankfuse/errors.hpp"
#include "rankfuse/io.hpp"
#include "text_util.hpp"

namespace rankfuse {

using json = nlohmann::ordered_json;

OutcomeSummary summarize(const FusionOutcome& outcome) {
    return OutcomeSummary{outcome.query_index,      outcome.winner,
                          outcome.confidence,       outcome.audit.tie_broken,
                          outcome.audit.copeland_fallback, outcome.audit.rounds.size()};
}

bool operator==(const PairwiseZTable& a, const PairwiseZTable& b) {
    return a.schemes == b.schemes && a.z == b.z && a.band == b.band && a.degenerate == b.degenerate &&
           a.counts == b.counts;
}

bool operator==(const ResultBundle& a, const ResultBundle& b) {
    return a.metadata == b.metadata && a.schemes == b.schemes && a.z_table == b.z_table;
}

ResultBundle run_pipeline(std::span<const ScoreMatrix> matrices, const GroundTruth& truth,
                          std::span<const Scheme> schemes, const FusionConfig& base_config, std::size_t workers) {
    if (schemes.empty()) throw ConfigError("no voting scheme selected");
    if (matrices.empty()) throw ValidationError("no score matrices");
    if (truth.n_queries() != matrices.front().n_queries()) {
        throw ValidationError("ground truth covers " + std::to_string(truth.n_queries()) + " queries, matrices have " +
                              std::to_string(matrices.front().n_queries()));
    }

    ResultBundle bundle;
    auto& meta = bundle.metadata;
    for (const auto& m : matrices) meta.techniques.push_back(m.technique().name);
    meta.n_queries = matrices.front().n_queries();
    meta.n_references = matrices.front().n_references();
    meta.ballot_depth = base_config.ballot_depth;
    meta.borda_weights = base_config.borda_weights;

    std::vector<SchemeRecords> by_scheme;
    for (const Scheme scheme : schemes) {
        FusionConfig config = base_config;
        config.scheme = scheme;
        const auto outcomes = run_dataset(matrices, config, workers);

        SchemeResult result;
        result.scheme = scheme;
        result.outcomes.reserve(outcomes.size());
        for (const auto& o : outcomes) result.outcomes.push_back(summarize(o));
        result.records = score_matches(outcomes, truth);
        result.performance_bound = performance_bounds(result.records);
        result.pr = pr_curve(result.records);
        by_scheme.emplace_back(std::string(scheme_name(scheme)), result.records);
        bundle.schemes.push_back(std::move(result));
    }
    if (by_scheme.size() >= 2) bundle.z_table = pairwise_z_table(by_scheme);
    return bundle;
}

namespace {

template <typename T, typename F>
json matrix_json(const std::vector<std::vector<T>>& m, F&& convert) {
    json rows = json::array();
    for (const auto& row : m) {
        json r = json::array();
        for (const auto& v : row) r.push_back(convert(v));
        rows.push_back(std::move(r));
    }
    return rows;
}

template <typename T, typename F>
std::vector<std::vector<T>> matrix_from_json(const json& j, F&& convert) {
    std::vector<std::vector<T>> m;
    for (const auto& row : j) {
        std::vector<T> r;
        for (const auto& v : row) r.push_back(convert(v));
        m.push_back(std::move(r));
    }
    return m;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Reads a CSV with the given header and returns the data rows split into cells.
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path, std::string_view header,
                                               std::size_t columns) {
    std::istringstream in(read_file(path));
    std::vector<std::vector<std::string>> rows;
    std::string line;
    bool header_seen = false;
    for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
        const auto text = detail::trim(line);
        if (text.empty()) continue;
        if (!header_seen) {
            if (text != header) throw ParseError(detail::where(path.string(), line_no) + ": unexpected header");
            header_seen = true;
            continue;
        }
        const auto cells = detail::split(text, ',');
        if (cells.size() != columns) throw ParseError(detail::where(path.string(), line_no) + ": wrong column count");
        std::vector<std::string> row;
        for (auto c : cells) row.emplace_back(detail::trim(c));
        rows.push_back(std::move(row));
    }
    if (!header_seen) throw ParseError(path.string() + ": empty file");
    return rows;
}

double cell_double(const std::string& cell, const std::filesystem::path& path) {
    const auto v = detail::to_double(cell);
    if (!v) throw ParseError(path.string() + ": bad number '" + cell + "'");
    return *v;
}

std::size_t cell_size(const std::string& cell, const std::filesystem::path& path) {
    const auto v = detail::to_unsigned<std::size_t>(cell);
    if (!v) throw ParseError(path.string() + ": bad count '" + cell + "'");
    return *v;
}

}  // namespace

std::string summary_json(const ResultBundle& bundle) {
    const auto& meta = bundle.metadata;
    json root;
    root["format_version"] = meta.format_version;
    root["pr_definition"] = meta.pr_definition;
    if (meta.created) root["created"] = *meta.created;

    json config;
    config["techniques"] = meta.techniques;
    config["n_queries"] = meta.n_queries;
    config["n_references"] = meta.n_references;
    config["ballot_depth"] = meta.ballot_depth;
    config["borda_weights"] = meta.borda_weights ? json(*meta.borda_weights) : json(nullptr);
    config["seed"] = meta.seed ? json(*meta.seed) : json(nullptr);
    config["noise"] = meta.noise ? json(*meta.noise) : json(nullptr);
    root["config"] = std::move(config);

    json schemes = json::array();
    for (const auto& s : bundle.schemes) {
        json entry;
        entry["scheme"] = scheme_name(s.scheme);
        entry["performance_bound"] = s.performance_bound;
        entry["total_queries"] = s.records.size();
        json points = json::array();
        for (const auto& p : s.pr.points) {
            points.push_back(json{{"threshold", p.threshold}, {"precision", p.precision}, {"recall", p.recall}});
        }
        entry["pr"] = json{{"auc", s.pr.auc}, {"points", std::move(points)}};
        json outcomes = json::array();
        for (std::size_t i = 0; i < s.outcomes.size(); ++i) {
            const auto& o = s.outcomes[i];
            outcomes.push_back(json{{"query", o.query_index},
                                    {"winner", o.winner.index},
                                    {"confidence", o.confidence},
                                    {"correct", s.records.at(i).correct},
                                    {"tie_broken", o.tie_broken},
                                    {"copeland_fallback", o.copeland_fallback},
                                    {"rounds", o.rounds}});
        }
        entry["outcomes"] = std::move(outcomes);
        schemes.push_back(std::move(entry));
    }
    root["schemes"] = std::move(schemes);

    if (bundle.z_table) {
        const auto& t = *bundle.z_table;
        json z;
        z["schemes"] = t.schemes;
        z["z"] = matrix_json(t.z, [](double v) { return v; });
        z["band"] = matrix_json(t.band, [](ConfidenceBand b) { return std::string(band_label(b)); });
        z["degenerate"] = matrix_json(t.degenerate, [](bool v) { return v; });
        z["n_sf"] = matrix_json(t.counts, [](const ContingencyCounts& c) { return c.n_sf; });
        z["n_fs"] = matrix_json(t.counts, [](const ContingencyCounts& c) { return c.n_fs; });
        root["z_table"] = std::move(z);
    } else {
        root["z_table"] = nullptr;
    }
    return root.dump(2) + "\n";
}

ResultBundle parse_summary_json(std::string_view text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("summary.json: ") + e.what());
    }
    try {
        ResultBundle bundle;
        auto& meta = bundle.metadata;
        meta.format_version = root.at("format_version").get<std::string>();
        if (meta.format_version != kFormatVersion) {
            throw ParseError("summary.json: unsupported format version '" + meta.format_version + "'");
        }
        meta.pr_definition = root.at("pr_definition").get<std::string>();
        if (root.contains("created")) meta.created = root["created"].get<std::string>();
        const auto& config = root.at("config");
        meta.techniques = config.at("techniques").get<std::vector<std::string>>();
        meta.n_queries = config.at("n_queries").get<std::size_t>();
        meta.n_references = config.at("n_references").get<std::size_t>();
        meta.ballot_depth = config.at("ballot_depth").get<std::size_t>();
        if (!config.at("borda_weights").is_null()) {
            meta.borda_weights = config["borda_weights"].get<std::vector<std::uint64_t>>();
        }
        if (!config.at("seed").is_null()) meta.seed = config["seed"].get<std::uint64_t>();
        if (!config.at("noise").is_null()) meta.noise = config["noise"].get<double>();

        for (const auto& entry : root.at("schemes")) {
            SchemeResult s;
            s.scheme = parse_scheme(entry.at("scheme").get<std::string>());
            s.performance_bound = entry.at("performance_bound").get<std::size_t>();
            s.pr.auc = entry.at("pr").at("auc").get<double>();
            for (const auto& p : entry["pr"].at("points")) {
                s.pr.points.push_back(PRPoint{p.at("threshold").get<double>(), p.at("precision").get<double>(),
                                              p.at("recall").get<double>()});
            }
            for (const auto& o : entry.at("outcomes")) {
                OutcomeSummary summary{o.at("query").get<std::size_t>(),
                                       CandidateId(o.at("winner").get<std::uint32_t>()),
                                       o.at("confidence").get<double>(),
                                       o.at("tie_broken").get<bool>(),
                                       o.at("copeland_fallback").get<bool>(),
                                       o.at("rounds").get<std::size_t>()};
                s.records.push_back(
                    MatchRecord{summary.query_index, o.at("correct").get<bool>(), summary.confidence, summary.winner});
                s.outcomes.push_back(summary);
            }
            bundle.schemes.push_back(std::move(s));
        }

        const auto& z = root.at("z_table");
        if (!z.is_null()) {
            PairwiseZTable t;
            t.schemes = z.at("schemes").get<std::vector<std::string>>();
            t.z = matrix_from_json<double>(z.at("z"), [](const json& v) { return v.get<double>(); });
            t.band = matrix_from_json<ConfidenceBand>(z.at("band"),
                                                      [](const json& v) { return parse_band(v.get<std::string>()); });
            t.degenerate = matrix_from_json<bool>(z.at("degenerate"), [](const json& v) { return v.get<bool>(); });
            const auto sf = matrix_from_json<std::size_t>(z.at("n_sf"), [](const json& v) { return v.get<std::size_t>(); });
            const auto fs = matrix_from_json<std::size_t>(z.at("n_fs"), [](const json& v) { return v.get<std::size_t>(); });
            t.counts.resize(sf.size());
            for (std::size_t a = 0; a < sf.size(); ++a) {
                for (std::size_t b = 0; b < sf[a].size(); ++b) t.counts[a].push_back({sf[a][b], fs.at(a).at(b)});
            }
            bundle.z_table = std::move(t);
        }
        return bundle;
    } catch (const json::exception& e) {
        throw ParseError(std::string("summary.json: ") + e.what());
    }
}

void write_zscores_csv(const PairwiseZTable& table, std::ostream& out) {
    out << "scheme_a,scheme_b,z,band\n";
    for (std::size_t a = 0; a < table.schemes.size(); ++a) {
        for (std::size_t b = a + 1; b < table.schemes.size(); ++b) {
            out << table.schemes[a] << ',' << table.schemes[b] << ',' << format_double(table.z[a][b]) << ','
                << band_label(table.band[a][b]) << '\n';
        }
    }
}

void emit_results(const ResultBundle& bundle, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());

    std::ostringstream radar;
    radar << "scheme,correct_count,total_queries\n";
    for (const auto& s : bundle.schemes) {
        radar << scheme_name(s.scheme) << ',' << s.performance_bound << ',' << s.records.size() << '\n';

        std::ostringstream pr;
        pr << "threshold,precision,recall\n";
        for (const auto& p : s.pr.points) {
            pr << format_double(p.threshold) << ',' << format_double(p.precision) << ',' << format_double(p.recall)
               << '\n';
        }
        write_file(dir / ("pr_" + std::string(scheme_name(s.scheme)) + ".csv"), pr.str());

        std::ostringstream matches;
        write_match_records(s.records, matches);
        write_file(dir / ("matches_" + std::string(scheme_name(s.scheme)) + ".csv"), matches.str());
    }
    write_file(dir / "radar.csv", radar.str());

    std::ostringstream z;
    if (bundle.z_table) {
        write_zscores_csv(*bundle.z_table, z);
    } else {
        z << "scheme_a,scheme_b,z,band\n";
    }
    write_file(dir / "zscores.csv", z.str());
    write_file(dir / "summary.json", summary_json(bundle));
}

ResultBundle load_results(const std::filesystem::path& dir) {
    return parse_summary_json(read_file(dir / "summary.json"));
}

std::vector<RadarRow> load_radar_csv(const std::filesystem::path& path) {
    std::vector<RadarRow> rows;
    for (const auto& cells : read_csv(path, "scheme,correct_count,total_queries", 3)) {
        rows.push_back(RadarRow{cells[0], cell_size(cells[1], path), cell_size(cells[2], path)});
    }
    return rows;
}

std::vector<PRPoint> load_pr_csv(const std::filesystem::path& path) {
    std::vector<PRPoint> points;
    for (const auto& cells : read_csv(path, "threshold,precision,recall", 3)) {
        points.push_back(PRPoint{cell_double(cells[0], path), cell_double(cells[1], path), cell_double(cells[2], path)});
    }
    return points;
}

std::vector<ZRow> load_zscores_csv(const std::filesystem::path& path) {
    std::vector<ZRow> rows;
    for (const auto& cells : read_csv(path, "scheme_a,scheme_b,z,band", 4)) {
        rows.push_back(ZRow{cells[0], cells[1], cell_double(cells[2], path), parse_band(cells[3])});
    }
    return rows;
}

namespace {

std::string tally_text(const Tally& tally) {
    if (tally.empty()) return "(no votes)";
    std::string s;
    for (const auto& [id, count] : tally) {
        if (!s.empty()) s += ' ';
        s += std::to_string(id.index) + "=" + std::to_string(count);
    }
    return s;
}

constexpr std::size_t kMaxPrintedMatrix = 16;

}  // namespace

void write_audit(const ElectionResult& result, std::ostream& out) {
    out << "scheme: " << scheme_name(result.scheme) << '\n';
    out << "winner: " << result.winner.index << '\n';
    out << "confidence: " << format_double(result.confidence) << '\n';
    out << "tie_broken: " << (result.tie_broken ? "true" : "false") << '\n';
    if (result.scheme == Scheme::condorcet) {
        out << "copeland_fallback: " << (result.copeland_fallback ? "true" : "false") << '\n';
    }
    for (const auto& r : result.rounds) {
        out << "round " << r.round << ": " << tally_text(r.tally);
        if (r.eliminated) out << " | eliminated " << r.eliminated->index;
        out << " | exhausted " << r.exhausted_ballots << '\n';
    }
    if (result.scores) {
        out << "borda scores:";
        for (std::size_t c = 0; c < result.scores->size(); ++c) {
            if ((*result.scores)[c] > 0) out << ' ' << c << '=' << (*result.scores)[c];
        }
        out << '\n';
    }
    if (result.pairwise) {
        const auto& m = *result.pairwise;
        if (m.size() <= kMaxPrintedMatrix) {
            out << "pairwise wins (row beats column):\n";
            for (std::size_t i = 0; i < m.size(); ++i) {
                out << "  " << i << ':';
                for (std::size_t j = 0; j < m.size(); ++j) out << ' ' << m.wins(i, j);
                out << '\n';
            }
        }
        out << "copeland:";
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m.victories(i) > 0) out << ' ' << i << '=' << m.victories(i);
        }
        out << '\n';
    }
}

std::string audit_json(const ElectionResult& result) {
    json j;
    j["scheme"] = scheme_name(result.scheme);
    j["winner"] = result.winner.index;
    j["confidence"] = result.confidence;
    j["tie_broken"] = result.tie_broken;
    j["copeland_fallback"] = result.copeland_fallback;
    json rounds = json::array();
    for (const auto& r : result.rounds) {
        json tally = json::object();
        for (const auto& [id, count] : r.tally) tally[std::to_string(id.index)] = count;
        rounds.push_back(json{{"round", r.round},
                              {"tally", std::move(tally)},
                              {"eliminated", r.eliminated ? json(r.eliminated->index) : json(nullptr)},
                              {"exhausted_ballots", r.exhausted_ballots}});
    }
    j["rounds"] = std::move(rounds);
    j["borda_scores"] = result.scores ? json(*result.scores) : json(nullptr);
    if (result.pairwise) {
        const auto& m = *result.pairwise;
        json rows = json::array();
        for (std::size_t i = 0; i < m.size(); ++i) {
            json row = json::array();
            for (std::size_t k = 0; k < m.size(); ++k) row.push_back(m.wins(i, k));
            rows.push_back(std::move(row));
        }
        j["pairwise"] = std::move(rows);
    } else {
        j["pairwise"] = nullptr;
    }
    return j.dump(2);
}

}  // namespace rankfuse
