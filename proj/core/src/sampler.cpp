#include "twdp/sampler.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

#include "twdp/error.hpp"
#include "twdp/format.hpp"

namespace twdp {

namespace {

// Neumaier variant of Kahan summation.
struct CompensatedSum {
    double sum{0.0};
    double carry{0.0};

    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            carry += (sum - t) + x;
        } else {
            carry += (x - t) + sum;
        }
        sum = t;
    }
    double value() const { return sum + carry; }
};

double uniform53(std::mt19937_64& engine) {
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_stream_seed(std::uint64_t base, std::uint64_t index) {
    return base ^ splitmix64(index);
}

SampleSet generate(const GammaParams& p, std::size_t n, std::uint64_t seed) {
    if (n == 0) {
        throw DomainError("generate needs n >= 1");
    }
    const PhysicalComponents c = params_to_physical(p);
    const double sigma = std::sqrt(c.sigma2);
    constexpr double two_pi = 2.0 * std::numbers::pi;

    std::mt19937_64 engine(seed);
    SampleSet out;
    out.params_used = p;
    out.seed = seed;
    out.values.resize(n);
    for (auto& value : out.values) {
        const double u1 = uniform53(engine);
        const double u2 = uniform53(engine);
        const double u3 = uniform53(engine);
        const double u4 = uniform53(engine);
        const double radius = sigma * std::sqrt(-2.0 * std::log(1.0 - u1));
        const double x = radius * std::cos(two_pi * u2);
        const double y = radius * std::sin(two_pi * u2);
        const double phi1 = two_pi * u3;
        const double phi2 = two_pi * u4;
        const double re = c.v1 * std::cos(phi1) + c.v2 * std::cos(phi2) + x;
        const double im = c.v1 * std::sin(phi1) + c.v2 * std::sin(phi2) + y;
        value = std::hypot(re, im);
    }
    return out;
}

SampleMoments sample_moments(std::span<const double> values) {
    if (values.empty()) {
        throw DomainError("sample_moments needs at least one sample");
    }
    CompensatedSum s2;
    CompensatedSum s4;
    CompensatedSum s6;
    for (double r : values) {
        const double r2 = r * r;
        const double r4 = r2 * r2;
        s2.add(r2);
        s4.add(r4);
        s6.add(r4 * r2);
    }
    const double n = static_cast<double>(values.size());
    return {s2.value() / n, s4.value() / n, s6.value() / n, values.size()};
}

SampleMoments sample_moments(const SampleSet& s) {
    return sample_moments(std::span<const double>(s.values));
}

void write_samples_csv(std::ostream& out, const SampleSet& s) {
    out << "# twdp envelope samples " << format_params(s.params_used) << " n=" << s.values.size()
        << " seed=" << s.seed << " rng=" << kRngAlgorithm << '\n';
    out << "r\n";
    for (double v : s.values) {
        out << format_number(v) << '\n';
    }
}

void write_samples_csv(const std::string& path, const SampleSet& s) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error(fmt::format("cannot open '{}' for writing", path));
    }
    write_samples_csv(out, s);
    if (!out) {
        throw std::runtime_error(fmt::format("write to '{}' failed", path));
    }
}

SampleSet read_samples_csv(std::istream& in) {
    SampleSet s;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (line.front() == '#') {
            // Recover provenance when the comment carries it.
            const auto k = line.find(" k=");
            if (k != std::string::npos) {
                const auto n = line.find(" n=", k);
                if (n != std::string::npos) {
                    try {
                        s.params_used = parse_gamma_params(line.substr(k + 1, n - k - 1));
                    } catch (const DomainError&) {
                    }
                }
            }
            const auto seed = line.find(" seed=");
            if (seed != std::string::npos) {
                const char* begin = line.data() + seed + 6;
                std::from_chars(begin, line.data() + line.size(), s.seed);
            }
            continue;
        }
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
        if (ec != std::errc{} || ptr != line.data() + line.size()) {
            if (!header_seen && s.values.empty()) {
                header_seen = true;
                continue;
            }
            throw DomainError(fmt::format("line {}: not a number: '{}'", line_no, line));
        }
        if (!(v >= 0.0)) {
            throw DomainError(fmt::format("line {}: envelope values must be >= 0", line_no));
        }
        s.values.push_back(v);
    }
    return s;
}

SampleSet read_samples_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error(fmt::format("cannot open '{}' for reading", path));
    }
    return read_samples_csv(in);
}

}  // namespace twdp
