#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "rankfuse/ballot.hpp"
#include "rankfuse/evaluation.hpp"

namespace rankfuse {

struct SyntheticData {
    std::vector<ScoreMatrix> matrices;
    GroundTruth truth;
};

/// Seeded score matrices with a planted true match. Every score is uniform in
/// [0, 1); the true reference of query q (q mod n_references) gets an extra
/// 1 - noise_level. noise_level = 0 makes the truth every voter's strict top
/// choice, noise_level = 1 removes the signal entirely. Output depends only on
/// the arguments, bit for bit.
SyntheticData generate_synthetic(std::size_t n_voters, std::size_t n_queries,
                                 std::size_t n_references, double noise_level, std::uint64_t seed);

/// Writes technique_<i>.csv, truth.txt and a manifest.txt pointing at them.
/// Returns the manifest path.
std::filesystem::path write_synthetic(const SyntheticData& data, const std::filesystem::path& dir,
                                      std::uint64_t seed, double noise_level);

}  // namespace rankfuse
