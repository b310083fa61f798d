#include "rankfuse/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "rankfuse/errors.hpp"
#include "text_util.hpp"

namespace rankfuse {

using detail::split;
using detail::trim;
using detail::where;

std::string format_double(double value) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

void finish_output(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

ScoreMatrix parse_score_matrix(std::istream& in, VoterId technique, std::string_view source) {
    std::vector<double> values;
    std::size_t columns = 0;
    std::size_t rows = 0;
    std::string line;
    for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
        const auto text = trim(line);
        if (text.empty()) continue;
        const auto cells = split(text, ',');
        if (rows == 0) {
            columns = cells.size();
        } else if (cells.size() != columns) {
            throw ParseError(where(source, line_no) + ": row " + std::to_string(rows + 1) + " has " +
                             std::to_string(cells.size()) + " columns, expected " + std::to_string(columns));
        }
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const auto value = detail::to_double(cells[c]);
            if (!value) {
                throw ParseError(where(source, line_no) + ": row " + std::to_string(rows + 1) + ", column " +
                                 std::to_string(c + 1) + ": '" + std::string(trim(cells[c])) + "' is not a number");
            }
            if (!std::isfinite(*value)) {
                throw ValidationError(where(source, line_no) + ": row " + std::to_string(rows + 1) + ", column " +
                                      std::to_string(c + 1) + ": non-finite score");
            }
            values.push_back(*value);
        }
        ++rows;
    }
    if (rows == 0) throw ParseError(std::string(source) + ": empty score matrix");
    return ScoreMatrix(rows, columns, std::move(values), std::move(technique));
}

ScoreMatrix load_score_matrix(const std::filesystem::path& path, VoterId technique) {
    auto in = open_input(path);
    return parse_score_matrix(in, std::move(technique), path.string());
}

void write_score_matrix(const ScoreMatrix& matrix, std::ostream& out) {
    for (std::size_t q = 0; q < matrix.n_queries(); ++q) {
        const auto row = matrix.row(q);
        for (std::size_t r = 0; r < row.size(); ++r) {
            if (r) out << ',';
            out << format_double(row[r]);
        }
        out << '\n';
    }
}

void save_score_matrix(const ScoreMatrix& matrix, const std::filesystem::path& path) {
    auto out = open_output(path);
    write_score_matrix(matrix, out);
    finish_output(out, path);
}

GroundTruth parse_ground_truth(std::istream& in, std::optional<std::size_t> n_references, std::string_view source) {
    std::vector<std::optional<std::vector<CandidateId>>> entries;
    std::string line;
    for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
        const auto text = trim(detail::strip_comment(line));
        if (text.empty()) continue;
        const auto colon = text.find(':');
        if (colon == std::string_view::npos) {
            throw ParseError(where(source, line_no) + ": expected '<query>: <id>[,<id>...]'");
        }
        const auto query = detail::to_unsigned<std::size_t>(text.substr(0, colon));
        if (!query) throw ParseError(where(source, line_no) + ": bad query index");
        std::vector<CandidateId> ids;
        for (const auto cell : split(text.substr(colon + 1), ',')) {
            const auto id = detail::to_unsigned<std::uint32_t>(cell);
            if (!id) throw ParseError(where(source, line_no) + ": bad reference id '" + std::string(trim(cell)) + "'");
            if (n_references && *id >= *n_references) {
                throw ValidationError(where(source, line_no) + ": reference id " + std::to_string(*id) +
                                      " out of range (n_references = " + std::to_string(*n_references) + ")");
            }
            ids.emplace_back(*id);
        }
        if (*query >= entries.size()) entries.resize(*query + 1);
        if (entries[*query]) {
            throw ValidationError(where(source, line_no) + ": duplicate entry for query " + std::to_string(*query));
        }
        entries[*query] = std::move(ids);
    }
    if (entries.empty()) throw ParseError(std::string(source) + ": empty ground truth");

    std::vector<std::vector<CandidateId>> accepted;
    accepted.reserve(entries.size());
    for (std::size_t q = 0; q < entries.size(); ++q) {
        if (!entries[q]) throw ValidationError(std::string(source) + ": missing entry for query " + std::to_string(q));
        accepted.push_back(std::move(*entries[q]));
    }
    return GroundTruth(std::move(accepted), n_references.value_or(0));
}

GroundTruth load_ground_truth(const std::filesystem::path& path, std::optional<std::size_t> n_references) {
    auto in = open_input(path);
    return parse_ground_truth(in, n_references, path.string());
}

void write_ground_truth(const GroundTruth& truth, std::ostream& out) {
    for (std::size_t q = 0; q < truth.n_queries(); ++q) {
        out << q << ':';
        const auto ids = truth.accepted(q);
        for (std::size_t i = 0; i < ids.size(); ++i) out << (i ? "," : " ") << ids[i].index;
        out << '\n';
    }
}

void save_ground_truth(const GroundTruth& truth, const std::filesystem::path& path) {
    auto out = open_output(path);
    write_ground_truth(truth, out);
    finish_output(out, path);
}

std::vector<RankedBallot> parse_ballots(std::istream& in, std::string_view source) {
    std::vector<RankedBallot> ballots;
    std::string line;
    for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
        auto text = trim(detail::strip_comment(line));
        if (text.empty()) continue;
        RankedBallot ballot;
        ballot.voter.index = ballots.size();
        const auto colon = text.find(':');
        if (colon != std::string_view::npos) {
            ballot.voter.name = std::string(trim(text.substr(0, colon)));
            text = text.substr(colon + 1);
        } else {
            ballot.voter.name = "voter" + std::to_string(ballots.size());
        }
        std::string ids(text);
        for (char& c : ids) {
            if (c == ',') c = ' ';
        }
        for (const auto token : split(ids, ' ')) {
            if (trim(token).empty()) continue;
            const auto id = detail::to_unsigned<std::uint32_t>(token);
            if (!id) throw ParseError(where(source, line_no) + ": bad candidate id '" + std::string(trim(token)) + "'");
            ballot.preferences.emplace_back(*id);
        }
        if (ballot.preferences.empty()) throw ParseError(where(source, line_no) + ": empty ballot");
        ballots.push_back(std::move(ballot));
    }
    return ballots;
}

std::vector<RankedBallot> load_ballots(const std::filesystem::path& path) {
    auto in = open_input(path);
    return parse_ballots(in, path.string());
}

namespace {
constexpr std::string_view kMatchHeader = "query_index,correct,confidence,winner";
}

std::vector<MatchRecord> parse_match_records(std::istream& in, std::string_view source) {
    std::vector<MatchRecord> records;
    std::string line;
    bool header_seen = false;
    for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
        const auto text = trim(line);
        if (text.empty()) continue;
        if (!header_seen) {
            if (text != kMatchHeader) {
                throw ParseError(where(source, line_no) + ": expected header '" + std::string(kMatchHeader) + "'");
            }
            header_seen = true;
            continue;
        }
        const auto cells = split(text, ',');
        if (cells.size() != 4) throw ParseError(where(source, line_no) + ": expected 4 columns");
        const auto query = detail::to_unsigned<std::size_t>(cells[0]);
        const auto correct = detail::to_unsigned<unsigned>(cells[1]);
        const auto confidence = detail::to_double(cells[2]);
        const auto winner = detail::to_unsigned<std::uint32_t>(cells[3]);
        if (!query || !correct || *correct > 1 || !confidence || !winner) {
            throw ParseError(where(source, line_no) + ": malformed match record");
        }
        if (!(*confidence >= 0.0 && *confidence <= 1.0)) {
            throw ValidationError(where(source, line_no) + ": confidence outside [0, 1]");
        }
        records.push_back(MatchRecord{*query, *correct == 1, *confidence, CandidateId(*winner)});
    }
    if (!header_seen) throw ParseError(std::string(source) + ": empty match record file");
    return records;
}

std::vector<MatchRecord> load_match_records(const std::filesystem::path& path) {
    auto in = open_input(path);
    return parse_match_records(in, path.string());
}

void write_match_records(std::span<const MatchRecord> records, std::ostream& out) {
    out << kMatchHeader << '\n';
    for (const auto& r : records) {
        out << r.query_index << ',' << (r.correct ? 1 : 0) << ',' << format_double(r.confidence) << ','
            << r.winner.index << '\n';
    }
}

}  // namespace rankfuse
