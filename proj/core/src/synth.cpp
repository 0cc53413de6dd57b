#include "fractalis/synth.hpp"

#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "fractalis/error.hpp"

namespace fractalis {

namespace {

// FFTW's planner is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(void* p) const noexcept { fftw_free(p); }
};

template <typename T>
std::unique_ptr<T[], FftwFree> fftw_buffer(std::size_t count) {
    auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * count));
    if (!p) throw std::bad_alloc();
    return std::unique_ptr<T[], FftwFree>(p);
}

class Plan {
public:
    explicit Plan(fftw_plan plan) : plan_(plan) {
        if (!plan_) throw Error(ErrorCode::EmbeddingFailure, "FFTW could not create a plan");
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;
    ~Plan() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan_);
    }
    void execute() const { fftw_execute(plan_); }

private:
    fftw_plan plan_;
};

void check_length(std::size_t n) {
    if (n < 16) throw Error(ErrorCode::TooShort, "synthetic series need n >= 16, got " + std::to_string(n));
}

}  // namespace

double NormalStream::uniform_open() {
    // 53 random bits centred in their cell: never 0, never 1.
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double NormalStream::next() {
    if (spare_) {
        const double z = *spare_;
        spare_.reset();
        return z;
    }
    const double u1 = uniform_open();
    const double u2 = uniform_open();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    return radius * std::cos(angle);
}

void NormalStream::fill(std::span<double> out) {
    for (double& v : out) v = next();
}

std::vector<Timestamp> make_calendar(Timestamp start, std::size_t count, Frequency frequency, bool weekdays_only) {
    std::vector<Timestamp> out;
    out.reserve(count);
    const auto step = frequency_step(frequency);
    for (Timestamp t = start; out.size() < count; t += step)
        if (!weekdays_only || is_weekday(t)) out.push_back(t);
    return out;
}

std::vector<double> white_noise(std::size_t n, double sigma, std::uint64_t seed) {
    check_length(n);
    if (!(sigma > 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma must be positive");
    NormalStream rng(seed);
    std::vector<double> out(n);
    for (double& v : out) v = sigma * rng.next();
    return out;
}

double fgn_autocovariance(std::size_t k, double h, double sigma) noexcept {
    const double two_h = 2.0 * h;
    const double kk = static_cast<double>(k);
    const double below = k == 0 ? 1.0 : std::pow(kk - 1.0, two_h);
    return 0.5 * sigma * sigma * (std::pow(kk + 1.0, two_h) - 2.0 * std::pow(kk, two_h) + below);
}

std::vector<double> fgn(std::size_t n, double h, double sigma, std::uint64_t seed) {
    check_length(n);
    if (!(h > 0.0 && h < 1.0)) throw Error(ErrorCode::InvalidArgument, "fGn needs 0 < H < 1");
    if (!(sigma > 0.0)) throw Error(ErrorCode::InvalidArgument, "sigma must be positive");

    const std::size_t m = n - 1;
    const std::size_t size = 2 * m;
    const std::size_t half = m + 1;

    auto row = fftw_buffer<double>(size);
    auto spectrum = fftw_buffer<fftw_complex>(half);
    auto signal = fftw_buffer<double>(size);

    // First row of the circulant: c_0 .. c_m, c_{m-1} .. c_1.
    for (std::size_t k = 0; k <= m; ++k) row[k] = fgn_autocovariance(k, h, sigma);
    for (std::size_t k = 1; k < m; ++k) row[size - k] = row[k];

    std::unique_ptr<Plan> forward, backward;
    {
        std::lock_guard lock(planner_mutex());
        const int len = static_cast<int>(size);
        forward = std::make_unique<Plan>(fftw_plan_dft_r2c_1d(len, row.get(), spectrum.get(), FFTW_ESTIMATE));
        backward = std::make_unique<Plan>(fftw_plan_dft_c2r_1d(len, spectrum.get(), signal.get(), FFTW_ESTIMATE));
    }
    forward->execute();

    // The row is real and symmetric, so its eigenvalues are the real parts.
    std::vector<double> eigen(half);
    for (std::size_t k = 0; k < half; ++k) {
        double lambda = spectrum[k][0];
        if (lambda < -1e-10)
            throw Error(ErrorCode::EmbeddingFailure,
                        "circulant eigenvalue " + std::to_string(lambda) + " at index " + std::to_string(k));
        eigen[k] = std::max(lambda, 0.0);
    }

    NormalStream rng(seed);
    const double dsize = static_cast<double>(size);
    spectrum[0][0] = std::sqrt(eigen[0] / dsize) * rng.next();
    spectrum[0][1] = 0.0;
    for (std::size_t k = 1; k < m; ++k) {
        const double scale = std::sqrt(eigen[k] / (2.0 * dsize));
        spectrum[k][0] = scale * rng.next();
        spectrum[k][1] = scale * rng.next();
    }
    spectrum[m][0] = std::sqrt(eigen[m] / dsize) * rng.next();
    spectrum[m][1] = 0.0;

    backward->execute();
    return std::vector<double>(signal.get(), signal.get() + n);
}

ReturnSeries generate(const SynthSpec& spec) {
    check_length(spec.n);
    const auto values = spec.kind == SynthKind::FGN ? fgn(spec.n, spec.h, spec.sigma, spec.seed)
                                                    : white_noise(spec.n, spec.sigma, spec.seed);
    const auto calendar = make_calendar(spec.start, spec.n, spec.frequency, spec.weekdays_only);
    ReturnSeries out;
    out.asset_id = spec.asset_id;
    out.frequency = spec.frequency;
    out.scale = spec.scale;
    out.points.reserve(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) out.points.push_back({calendar[i], values[i]});
    return out;
}

PriceSeries random_walk_prices(const ReturnSeries& returns, double p0, std::optional<Timestamp> origin) {
    if (!(p0 > 0.0) || !std::isfinite(p0)) throw Error(ErrorCode::InvalidArgument, "initial price must be positive");
    const double scale = returns.scale == ReturnScale::Percent ? 100.0 : 1.0;

    PriceSeries out;
    out.asset_id = returns.asset_id;
    out.frequency = returns.frequency;
    out.points.reserve(returns.size() + 1);
    Timestamp first = origin ? *origin
                             : (returns.empty() ? make_date(1970, 1, 1)
                                                : returns.points.front().time - frequency_step(returns.frequency));
    out.points.push_back({first, p0});
    double price = p0;
    for (const auto& r : returns.points) {
        price *= std::exp(r.value / scale);
        out.points.push_back({r.time, price});
    }
    return out;
}

}  // namespace fractalis
