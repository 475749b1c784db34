#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "twdp/params.hpp"

namespace twdp {

/// Identifier written into sample-file headers. Engine: std::mt19937_64 seeded
/// with the 64-bit stream seed. Uniforms: top 53 bits scaled by 2^-53.
/// Per sample, in order: u1, u2 -> Box-Muller pair (X, Y) with radius from
/// 1 - u1; u3, u4 -> phases 2 pi u.
inline constexpr const char* kRngAlgorithm = "mt19937_64+splitmix64-xor/box-muller-v1";

/// i.i.d. envelope samples and the inputs that produced them.
struct SampleSet {
    std::vector<double> values;
    GammaParams params_used;
    std::uint64_t seed{0};
};

struct SampleMoments {
    double mu2_hat{0.0};
    double mu4_hat{0.0};
    double mu6_hat{0.0};
    std::size_t n{0};
};

/// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed of an independent stream: base ^ splitmix64(index).
std::uint64_t derive_stream_seed(std::uint64_t base, std::uint64_t index);

/// n samples of |V1 e^{j phi1} + V2 e^{j phi2} + X + jY|. Deterministic in
/// (p, n, seed). Throws DomainError for n == 0.
SampleSet generate(const GammaParams& p, std::size_t n, std::uint64_t seed);

/// Empirical moments of orders 2, 4, 6 with compensated summation.
SampleMoments sample_moments(std::span<const double> values);
SampleMoments sample_moments(const SampleSet& s);

// One-column CSV: '#' header comments with provenance, a column header "r",
// then one value per line.
void write_samples_csv(std::ostream& out, const SampleSet& s);
void write_samples_csv(const std::string& path, const SampleSet& s);
/// Reads values from a samples CSV. '#' lines and a non-numeric header line are
/// skipped; if the header comment carries params/seed they are restored.
SampleSet read_samples_csv(std::istream& in);
SampleSet read_samples_csv(const std::string& path);

}  // namespace twdp
