#include "rankfuse/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <string>

#include "rankfuse/errors.hpp"
#include "text_util.hpp"

namespace rankfuse {

using detail::split;
using detail::trim;

std::vector<Scheme> parse_scheme_list(std::string_view text) {
    std::vector<Scheme> schemes;
    if (trim(text) == "all") return {std::begin(kAllSchemes), std::end(kAllSchemes)};
    for (const auto part : split(text, ',')) {
        const auto name = trim(part);
        if (name.empty()) continue;
        const Scheme s = parse_scheme(name);
        if (std::find(schemes.begin(), schemes.end(), s) != schemes.end()) {
            throw ConfigError("scheme '" + std::string(name) + "' listed twice");
        }
        schemes.push_back(s);
    }
    if (schemes.empty()) throw ConfigError("no voting scheme given");
    return schemes;
}

std::vector<std::uint64_t> parse_weight_list(std::string_view text) {
    std::vector<std::uint64_t> weights;
    for (const auto part : split(text, ',')) {
        const auto w = detail::to_unsigned(part);
        if (!w) throw ConfigError("bad borda weight '" + std::string(trim(part)) + "'");
        weights.push_back(*w);
    }
    return weights;
}

SyntheticSpec parse_synthetic_spec(std::string_view text) {
    const auto parts = split(text, ',');
    if (parts.size() != 3) throw ConfigError("synthetic must be voters,queries,references");
    std::size_t dims[3];
    for (std::size_t i = 0; i < 3; ++i) {
        const auto v = detail::to_unsigned<std::size_t>(parts[i]);
        if (!v) throw ConfigError("bad synthetic dimension '" + std::string(trim(parts[i])) + "'");
        dims[i] = *v;
    }
    return SyntheticSpec{dims[0], dims[1], dims[2]};
}

void RunManifest::validate() const {
    if (schemes.empty()) throw ConfigError("manifest lists no voting scheme");
    if (ballot_depth < 1) throw ConfigError("ballot_depth must be at least 1");
    if (noise && !(*noise >= 0.0 && *noise <= 1.0)) throw ConfigError("noise must lie in [0, 1]");
    if (synthetic) {
        if (!techniques.empty()) throw ConfigError("manifest mixes synthetic data with technique files");
        if (synthetic->voters < 2) throw ConfigError("fusion needs at least two voters");
        if (synthetic->queries < 1 || synthetic->references < 2) {
            throw ConfigError("synthetic data needs >= 1 query and >= 2 references");
        }
        return;
    }
    if (techniques.size() < 2) throw ConfigError("manifest needs at least two techniques");
    for (std::size_t i = 0; i < techniques.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (techniques[i].name == techniques[j].name) {
                throw ConfigError("technique name '" + techniques[i].name + "' used twice");
            }
        }
    }
    if (!truth) throw ConfigError("manifest has no ground truth file");
}

RunManifest parse_manifest(std::istream& in, const std::filesystem::path& base_dir, std::string_view source) {
    RunManifest manifest;
    auto resolve = [&](std::string_view p) {
        std::filesystem::path path{std::string(trim(p))};
        return path.is_absolute() ? path : base_dir / path;
    };

    std::string line;
    for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
        const auto text = trim(detail::strip_comment(line));
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string_view::npos) throw ConfigError(detail::where(source, line_no) + ": expected key = value");
        const auto key = trim(text.substr(0, eq));
        const auto value = trim(text.substr(eq + 1));
        const auto at = [&](const std::string& what) { return detail::where(source, line_no) + ": " + what; };

        if (key == "technique") {
            const auto colon = value.find(':');
            TechniqueSource t;
            if (colon == std::string_view::npos) {
                t.path = resolve(value);
                t.name = t.path.stem().string();
            } else {
                t.name = std::string(trim(value.substr(0, colon)));
                t.path = resolve(value.substr(colon + 1));
            }
            if (t.name.empty()) throw ConfigError(at("technique without a name"));
            manifest.techniques.push_back(std::move(t));
        } else if (key == "truth") {
            manifest.truth = resolve(value);
        } else if (key == "schemes") {
            manifest.schemes = parse_scheme_list(value);
        } else if (key == "ballot_depth") {
            const auto v = detail::to_unsigned<std::size_t>(value);
            if (!v || *v < 1) throw ConfigError(at("ballot_depth must be a positive integer"));
            manifest.ballot_depth = *v;
        } else if (key == "borda_weights") {
            manifest.borda_weights = parse_weight_list(value);
        } else if (key == "out") {
            manifest.out_dir = resolve(value);
        } else if (key == "seed") {
            const auto v = detail::to_unsigned(value);
            if (!v) throw ConfigError(at("seed must be a non-negative integer"));
            manifest.seed = *v;
        } else if (key == "noise") {
            const auto v = detail::to_double(value);
            if (!v) throw ConfigError(at("noise must be a number"));
            manifest.noise = *v;
        } else if (key == "synthetic") {
            manifest.synthetic = parse_synthetic_spec(value);
        } else if (key == "workers") {
            const auto v = detail::to_unsigned<std::size_t>(value);
            if (!v) throw ConfigError(at("workers must be a non-negative integer"));
            manifest.workers = *v;
        } else {
            throw ConfigError(at("unknown key '" + std::string(key) + "'"));
        }
    }
    return manifest;
}

RunManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open manifest '" + path.string() + "'");
    return parse_manifest(in, path.parent_path(), path.string());
}

}  // namespace rankfuse
