#include "rankfuse/synthetic.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <string>

#include "rankfuse/errors.hpp"
#include "rankfuse/io.hpp"

namespace rankfuse {

namespace {

// mt19937_64 and seed_seq are specified exactly by the standard; the
// distribution classes are not, so uniforms are derived by hand.
double unit_uniform(std::mt19937_64& engine) {
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

}  // namespace

SyntheticData generate_synthetic(std::size_t n_voters, std::size_t n_queries, std::size_t n_references,
                                 double noise_level, std::uint64_t seed) {
    if (n_voters < 1) throw ValidationError("synthetic data needs at least one voter");
    if (n_queries < 1) throw ValidationError("synthetic data needs at least one query");
    if (n_references < 2) throw ValidationError("synthetic data needs at least two references");
    if (!(noise_level >= 0.0 && noise_level <= 1.0)) throw ValidationError("noise level must lie in [0, 1]");

    const double boost = 1.0 - noise_level;
    std::vector<ScoreMatrix> matrices;
    matrices.reserve(n_voters);
    for (std::size_t v = 0; v < n_voters; ++v) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(v)};
        std::mt19937_64 engine(seq);
        std::vector<double> values(n_queries * n_references);
        for (std::size_t q = 0; q < n_queries; ++q) {
            const std::size_t truth = q % n_references;
            for (std::size_t r = 0; r < n_references; ++r) {
                double score = unit_uniform(engine);
                if (r == truth) score += boost;
                values[q * n_references + r] = score;
            }
        }
        matrices.emplace_back(n_queries, n_references, std::move(values),
                              VoterId{"technique_" + std::to_string(v), v});
    }

    std::vector<std::vector<CandidateId>> accepted(n_queries);
    for (std::size_t q = 0; q < n_queries; ++q) {
        accepted[q].emplace_back(static_cast<std::uint32_t>(q % n_references));
    }
    return SyntheticData{std::move(matrices), GroundTruth(std::move(accepted), n_references)};
}

std::filesystem::path write_synthetic(const SyntheticData& data, const std::filesystem::path& dir,
                                      std::uint64_t seed, double noise_level) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());

    for (const auto& m : data.matrices) save_score_matrix(m, dir / (m.technique().name + ".csv"));
    save_ground_truth(data.truth, dir / "truth.txt");

    const auto manifest_path = dir / "manifest.txt";
    std::ofstream out(manifest_path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + manifest_path.string() + "' for writing");
    out << "# synthetic dataset: " << data.matrices.size() << " voters, " << data.matrices.front().n_queries()
        << " queries, " << data.matrices.front().n_references() << " references\n";
    for (const auto& m : data.matrices) {
        out << "technique = " << m.technique().name << ": " << m.technique().name << ".csv\n";
    }
    out << "truth = truth.txt\n";
    out << "schemes = all\n";
    out << "seed = " << seed << "\n";
    out << "noise = " << format_double(noise_level) << "\n";
    out << "out = results\n";
    out.flush();
    if (!out) throw IoError("failed writing '" + manifest_path.string() + "'");
    return manifest_path;
}

}  // namespace rankfuse
