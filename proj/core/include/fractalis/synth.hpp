#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "fractalis/series.hpp"

namespace fractalis {

/// Standard normal stream: std::mt19937_64 (whose output sequence the C++
/// standard fixes) feeding a Box-Muller transform on 53-bit uniforms in (0, 1).
/// Same seed, same doubles, on any conforming platform with IEEE libm.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

    double next();
    void fill(std::span<double> out);

private:
    double uniform_open();

    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

enum class SynthKind { WhiteNoise, FGN };

struct SynthSpec {
    SynthKind kind = SynthKind::WhiteNoise;
    std::size_t n = 1024;
    double h = 0.5;  ///< FGN only
    double sigma = 1.0;
    std::uint64_t seed = 1;
    std::string asset_id = "SYNTH";
    Frequency frequency = Frequency::Day1;
    Timestamp start = make_date(2020, 8, 20);
    bool weekdays_only = false;
    ReturnScale scale = ReturnScale::Raw;
};

/// `count` consecutive slots of the given frequency from `start`, skipping
/// Saturdays and Sundays when asked.
[[nodiscard]] std::vector<Timestamp> make_calendar(Timestamp start, std::size_t count, Frequency frequency,
                                                   bool weekdays_only);

/// I.i.d. N(0, sigma^2). Throws Error{TooShort} for n < 16.
[[nodiscard]] std::vector<double> white_noise(std::size_t n, double sigma, std::uint64_t seed);

/// Fractional Gaussian noise with autocovariance
///   gamma(k) = sigma^2 / 2 (|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H}),
/// sampled exactly by circulant embedding of size 2(n-1) (Davies-Harte).
/// Throws Error{TooShort} for n < 16, Error{InvalidArgument} for H outside
/// (0, 1), Error{EmbeddingFailure} if an eigenvalue falls below -1e-10.
[[nodiscard]] std::vector<double> fgn(std::size_t n, double h, double sigma, std::uint64_t seed);

/// Analytic fGn autocovariance at lag k.
[[nodiscard]] double fgn_autocovariance(std::size_t k, double h, double sigma) noexcept;

/// Generates the series described by `spec`, timestamped on its calendar.
[[nodiscard]] ReturnSeries generate(const SynthSpec& spec);

/// Prices whose log returns reproduce `returns`: P_0 = p0 and
/// P_t = P_{t-1} exp(r_t / scale), scale = 100 for percent returns.
/// P_0 is stamped at `origin`, by default one frequency step before the first
/// return. Throws Error{InvalidArgument} unless p0 > 0.
[[nodiscard]] PriceSeries random_walk_prices(const ReturnSeries& returns, double p0,
                                             std::optional<Timestamp> origin = std::nullopt);

}  // namespace fractalis
