#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rankfuse/fusion.hpp"
#include "rankfuse/voting.hpp"

namespace rankfuse {

struct TechniqueSource {
    std::string name;
    std::filesystem::path path;
};

/// In-memory dataset instead of matrix files.
struct SyntheticSpec {
    std::size_t voters = 8;
    std::size_t queries = 0;
    std::size_t references = 0;
};

/// Key-value run description:
///
///   # comment
///   technique = netvlad: matrices/netvlad.csv   (repeatable)
///   truth = truth.txt
///   schemes = plurality, condorcet, borda, contingent, irv   (or "all")
///   ballot_depth = 10
///   borda_weights = 10,9,8,7,6,5,4,3,2,1
///   out = results
///   seed = 7
///   noise = 0.5
///   synthetic = 8,32,32        (voters,queries,references)
///   workers = 0
///
/// Relative paths are resolved against the manifest's directory.
struct RunManifest {
    std::vector<TechniqueSource> techniques;
    std::optional<std::filesystem::path> truth;
    std::vector<Scheme> schemes{std::begin(kAllSchemes), std::end(kAllSchemes)};
    std::size_t ballot_depth = kDefaultBallotDepth;
    std::optional<std::vector<std::uint64_t>> borda_weights;
    std::filesystem::path out_dir = "results";
    std::optional<std::uint64_t> seed;
    std::optional<double> noise;
    std::optional<SyntheticSpec> synthetic;
    std::size_t workers = 0;

    /// Throws ConfigError unless there are >= 2 voters, >= 1 scheme and a usable data source.
    void validate() const;
};

RunManifest parse_manifest(std::istream& in, const std::filesystem::path& base_dir,
                           std::string_view source = "<stream>");
RunManifest load_manifest(const std::filesystem::path& path);

std::vector<Scheme> parse_scheme_list(std::string_view text);
std::vector<std::uint64_t> parse_weight_list(std::string_view text);
SyntheticSpec parse_synthetic_spec(std::string_view text);

}  // namespace rankfuse
