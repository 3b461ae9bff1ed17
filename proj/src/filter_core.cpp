#include "frogfilter/filter_core.hpp"

#include "frogfilter/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace frogfilter {

TransferFunction TransferFunction::make(std::vector<double> b, std::vector<double> a) {
    TransferFunction tf;
    tf.b = std::move(b);
    tf.a = std::move(a);
    tf.validate();
    return tf;
}

void TransferFunction::validate() const {
    if (b.empty()) {
        throw InvalidTransferFunction("numerator must have at least one coefficient");
    }
    if (a.empty() || a.front() != 1.0) {
        throw InvalidTransferFunction("denominator must start with a[0] == 1");
    }
    auto finite = [](double x) { return std::isfinite(x); };
    if (!std::all_of(b.begin(), b.end(), finite) || !std::all_of(a.begin(), a.end(), finite)) {
        throw InvalidTransferFunction("coefficients must be finite");
    }
}

FrequencyGrid::FrequencyGrid(std::size_t count) {
    if (count < 2) {
        throw InvalidGrid("frequency grid needs at least 2 points, got " + std::to_string(count));
    }
    omega_.resize(count);
    phasors_.resize(count);
    const double last = static_cast<double>(count - 1);
    for (std::size_t k = 0; k < count; ++k) {
        omega_[k] = static_cast<double>(k) / last;
        phasors_[k] = std::polar(1.0, -std::numbers::pi * omega_[k]);
    }
}

std::size_t BandMask::count(Band band) const noexcept {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), band));
}

namespace {

// Horner evaluation of sum_j c[j] w^j.
std::complex<double> polyval(std::span<const double> c, std::complex<double> w) {
    std::complex<double> acc{0.0, 0.0};
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        acc = acc * w + *it;
    }
    return acc;
}

bool in_open_unit(double x) { return x > 0.0 && x < 1.0; }

} // namespace

void evaluate_magnitude(std::span<const double> b, std::span<const double> a,
                        std::span<const std::complex<double>> phasors, std::span<double> out) {
    if (out.size() != phasors.size()) {
        throw LengthMismatch("output span does not match grid size");
    }
    const bool fir = a.size() == 1;
    for (std::size_t k = 0; k < phasors.size(); ++k) {
        const double num = std::abs(polyval(b, phasors[k]));
        const double value = fir ? num / std::abs(a[0]) : num / std::abs(polyval(a, phasors[k]));
        if (!std::isfinite(value)) {
            throw NonFiniteResponse("non-finite magnitude at grid point " + std::to_string(k));
        }
        out[k] = value;
    }
}

MagnitudeResponse evaluate_response(const TransferFunction& tf, const FrequencyGrid& grid) {
    tf.validate();
    MagnitudeResponse response;
    response.values.resize(grid.size());
    evaluate_magnitude(tf.b, tf.a, grid.phasors(), response.values);
    return response;
}

std::vector<double> reflection_coefficients(std::span<const double> a) {
    std::vector<double> ks;
    if (a.size() <= 1) {
        return ks;
    }
    std::vector<double> cur(a.begin(), a.end());
    std::vector<double> next(cur.size());
    ks.reserve(cur.size() - 1);
    for (std::size_t m = cur.size() - 1; m >= 1; --m) {
        const double k = cur[m] / cur[0];
        ks.push_back(k);
        if (!std::isfinite(k) || std::abs(k) >= 1.0) {
            return ks;
        }
        const double denom = 1.0 - k * k;
        for (std::size_t i = 0; i < m; ++i) {
            next[i] = (cur[i] - k * cur[m - i]) / denom;
        }
        std::copy_n(next.begin(), m, cur.begin());
    }
    return ks;
}

bool is_stable(std::span<const double> a) {
    if (a.size() <= 1) {
        return true;
    }
    if (!std::all_of(a.begin(), a.end(), [](double x) { return std::isfinite(x); })) {
        return false;
    }
    const auto ks = reflection_coefficients(a);
    if (ks.size() != a.size() - 1) {
        return false;
    }
    return std::all_of(ks.begin(), ks.end(),
                       [](double k) { return std::abs(k) < 1.0 - kStabilityMargin; });
}

DesignTarget DesignTarget::ideal(BandKind kind, std::vector<BandEdge> edges) {
    const std::size_t expected = (kind == BandKind::LowPass || kind == BandKind::HighPass) ? 1 : 2;
    if (edges.size() != expected) {
        throw InvalidTarget("band specification needs " + std::to_string(expected) + " edge pair(s), got " +
                            std::to_string(edges.size()));
    }
    for (const auto& e : edges) {
        if (!in_open_unit(e.pass) || !in_open_unit(e.stop)) {
            throw InvalidTarget("band edges must lie in (0, 1)");
        }
    }
    // Pass/stop ordering of each pair, then ordering between the two pairs.
    auto pass_below_stop = [](const BandEdge& e) { return e.pass <= e.stop; };
    bool ok = true;
    switch (kind) {
    case BandKind::LowPass: ok = pass_below_stop(edges[0]); break;
    case BandKind::HighPass: ok = !pass_below_stop(edges[0]) || edges[0].pass == edges[0].stop; break;
    case BandKind::BandPass:
        ok = edges[0].stop <= edges[0].pass && pass_below_stop(edges[1]) && edges[0].pass <= edges[1].pass;
        break;
    case BandKind::BandStop:
        ok = pass_below_stop(edges[0]) && edges[1].stop <= edges[1].pass && edges[0].stop <= edges[1].stop;
        break;
    }
    if (!ok) {
        throw InvalidTarget("band edges are not ordered consistently with the band kind");
    }
    return DesignTarget(IdealBands{kind, std::move(edges)});
}

DesignTarget DesignTarget::reference(TransferFunction filter) {
    filter.validate();
    if (!is_stable(filter)) {
        throw InvalidTarget("reference filter is unstable");
    }
    return DesignTarget(ReferenceFilter{std::move(filter)});
}

namespace {

// Label plus the index of the declared region (pass / stop sub-bands) the point falls in.
struct Labeled {
    Band band;
    int region;
};

Labeled classify(const IdealBands& spec, double w) {
    const auto& e = spec.edges;
    switch (spec.kind) {
    case BandKind::LowPass:
        if (w <= e[0].pass) return {Band::Pass, 0};
        if (w >= e[0].stop) return {Band::Stop, 1};
        break;
    case BandKind::HighPass:
        if (w >= e[0].pass) return {Band::Pass, 0};
        if (w <= e[0].stop) return {Band::Stop, 1};
        break;
    case BandKind::BandPass:
        if (w >= e[0].pass && w <= e[1].pass) return {Band::Pass, 0};
        if (w <= e[0].stop) return {Band::Stop, 1};
        if (w >= e[1].stop) return {Band::Stop, 2};
        break;
    case BandKind::BandStop:
        if (w <= e[0].pass) return {Band::Pass, 0};
        if (w >= e[1].pass) return {Band::Pass, 1};
        if (w >= e[0].stop && w <= e[1].stop) return {Band::Stop, 2};
        break;
    }
    return {Band::Transition, -1};
}

} // namespace

DesiredResponse ideal_response(const DesignTarget& target, const FrequencyGrid& grid) {
    if (!target.is_ideal()) {
        throw InvalidTarget("ideal_response requires an ideal band target");
    }
    const auto& spec = target.bands();
    DesiredResponse out;
    out.magnitude.values.resize(grid.size());
    out.mask.labels.resize(grid.size());
    std::array<std::size_t, 3> region_hits{};
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const auto [band, region] = classify(spec, grid[k]);
        out.mask.labels[k] = band;
        out.magnitude.values[k] = band == Band::Pass ? 1.0 : 0.0;
        if (region >= 0) {
            ++region_hits[static_cast<std::size_t>(region)];
        }
    }
    const std::size_t regions = spec.edges.size() == 1 ? 2 : 3;
    for (std::size_t r = 0; r < regions; ++r) {
        if (region_hits[r] == 0) {
            throw EmptyBand("declared band " + std::to_string(r) + " contains no grid point");
        }
    }
    return out;
}

MagnitudeResponse reference_response(const DesignTarget& target, const FrequencyGrid& grid) {
    if (!target.is_reference()) {
        throw InvalidTarget("reference_response requires a reference target");
    }
    return evaluate_response(target.reference_filter(), grid);
}

DesiredResponse desired_response(const DesignTarget& target, const FrequencyGrid& grid) {
    if (target.is_ideal()) {
        return ideal_response(target, grid);
    }
    DesiredResponse out;
    out.magnitude = reference_response(target, grid);
    out.mask.labels.assign(grid.size(), Band::Pass);
    return out;
}

} // namespace frogfilter
