#include "frogfilter/baselines.hpp"

#include "frogfilter/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace frogfilter {

WindowKind parse_window_kind(std::string_view name) {
    if (name == "blackman") {
        return WindowKind::Blackman;
    }
    if (name == "rectangular") {
        return WindowKind::Rectangular;
    }
    throw ConfigError("unknown window '" + std::string(name) + "' (expected blackman or rectangular)");
}

std::string_view to_string(WindowKind kind) noexcept {
    switch (kind) {
    case WindowKind::Blackman: return "blackman";
    case WindowKind::Rectangular: return "rectangular";
    }
    return "unknown";
}

std::vector<double> make_window(WindowKind kind, std::size_t length) {
    std::vector<double> w(length, 1.0);
    if (kind == WindowKind::Blackman) {
        const double frame = static_cast<double>(length + 1);
        for (std::size_t k = 0; k < length; ++k) {
            const double x = 2.0 * std::numbers::pi * static_cast<double>(k + 1) / frame;
            w[k] = 0.42 - 0.5 * std::cos(x) + 0.08 * std::cos(2.0 * x);
        }
    }
    return w;
}

TransferFunction windowed_fir(std::size_t order, double cutoff, WindowKind window) {
    if (order == 0) {
        throw ConfigError("windowed FIR order must be at least 1");
    }
    if (!(cutoff > 0.0 && cutoff < 1.0)) {
        throw InvalidCutoff("cutoff must lie in (0, 1), got " + std::to_string(cutoff));
    }
    const auto w = make_window(window, order + 1);
    const double center = static_cast<double>(order) / 2.0;
    std::vector<double> b(order + 1);
    for (std::size_t k = 0; k <= order; ++k) {
        // Mirror index pairs share one argument so the taps are exactly symmetric.
        const double t = std::abs(static_cast<double>(k) - center);
        const double x = std::numbers::pi * cutoff * t;
        const double sinc = t == 0.0 ? 1.0 : std::sin(x) / x;
        b[k] = cutoff * sinc * w[k];
    }
    for (std::size_t k = 0; k < (order + 1) / 2; ++k) {
        b[order - k] = b[k];
    }
    // Unit DC gain; short windows otherwise start below the -1 dB line.
    double sum = 0.0;
    for (std::size_t k = 0; k <= order; ++k) {
        sum += b[k];
    }
    for (auto& x : b) {
        x /= sum;
    }
    return TransferFunction::fir(std::move(b));
}

std::vector<double> magnitude_db(const TransferFunction& tf, const FrequencyGrid& grid) {
    const auto mag = evaluate_response(tf, grid);
    const double floor_lin = std::pow(10.0, -kDbFloor / 20.0);
    std::vector<double> db(mag.size());
    for (std::size_t k = 0; k < mag.size(); ++k) {
        db[k] = 20.0 * std::log10(std::max(mag[k], floor_lin));
    }
    return db;
}

namespace {

struct Crossing {
    std::size_t index; // first grid index at or below the level
    double omega;      // interpolated crossing frequency
};

// Linear interpolation of the frequency where db falls to `level` between k-1 and k.
double interpolate(std::span<const double> omega, std::span<const double> db, std::size_t k, double level) {
    if (k == 0) {
        return omega[0];
    }
    const double span = db[k] - db[k - 1];
    const double frac = span == 0.0 ? 1.0 : std::clamp((level - db[k - 1]) / span, 0.0, 1.0);
    return omega[k - 1] + frac * (omega[k] - omega[k - 1]);
}

Crossing find_cutoff(std::span<const double> omega, std::span<const double> db) {
    for (std::size_t k = 1; k < db.size(); ++k) {
        if (db[k] <= -1.0 && db[k - 1] > -1.0) {
            return {k, interpolate(omega, db, k, -1.0)};
        }
    }
    throw NoCutoffFound("response never crosses -1 dB");
}

std::optional<Crossing> find_floor(std::span<const double> omega, std::span<const double> db, std::size_t from,
                                   double floor_db) {
    for (std::size_t k = from; k < db.size(); ++k) {
        if (db[k] <= -floor_db) {
            return Crossing{k, interpolate(omega, db, k, -floor_db)};
        }
    }
    return std::nullopt;
}

void check_grid(const FrequencyGrid& grid) {
    if (grid.size() < kMeasurementGridPoints) {
        throw InvalidGrid("metrics need at least " + std::to_string(kMeasurementGridPoints) + " grid points");
    }
}

} // namespace

FilterMetrics measure_metrics(const TransferFunction& tf, const FrequencyGrid& grid) {
    check_grid(grid);
    const auto db = magnitude_db(tf, grid);
    const auto omega = grid.omega();
    const auto cut = find_cutoff(omega, db);

    FilterMetrics m;
    m.cutoff_freq = cut.omega;
    for (std::size_t k = 0; k < cut.index; ++k) {
        m.passband_ripple_db = std::max(m.passband_ripple_db, std::abs(db[k]));
    }

    std::size_t valley = cut.index;
    while (valley + 1 < db.size() && db[valley + 1] <= db[valley]) {
        ++valley;
    }
    const double peak = *std::max_element(db.begin() + static_cast<std::ptrdiff_t>(valley), db.end());
    m.stopband_attenuation_db = std::clamp(-peak, 0.0, kDbFloor);

    // The valley itself is at or below the floor, so the search always succeeds.
    const auto floor = find_floor(omega, db, cut.index, m.stopband_attenuation_db);
    m.transition_bandwidth = std::max(0.0, floor->omega - cut.omega);
    return m;
}

FilterMetrics measure_metrics(const TransferFunction& tf) {
    return measure_metrics(tf, FrequencyGrid(kMeasurementGridPoints));
}

std::optional<double> transition_bandwidth_at(const TransferFunction& tf, double floor_db,
                                              const FrequencyGrid& grid) {
    check_grid(grid);
    const auto db = magnitude_db(tf, grid);
    const auto omega = grid.omega();
    const auto cut = find_cutoff(omega, db);
    const auto floor = find_floor(omega, db, cut.index, floor_db);
    if (!floor) {
        return std::nullopt;
    }
    return std::max(0.0, floor->omega - cut.omega);
}

TransitionComparison compare_transition(const TransferFunction& first, const TransferFunction& second,
                                        const FrequencyGrid& grid) {
    const auto m1 = measure_metrics(first, grid);
    const auto m2 = measure_metrics(second, grid);
    TransitionComparison out;
    out.floor_db = std::min(m1.stopband_attenuation_db, m2.stopband_attenuation_db);
    out.first = transition_bandwidth_at(first, out.floor_db, grid).value();
    out.second = transition_bandwidth_at(second, out.floor_db, grid).value();
    return out;
}

} // namespace frogfilter
