#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace frogfilter {

/**
 * Rational transfer function in powers of z^-1:
 *
 *   H(z) = (b[0] + b[1] z^-1 + ... + b[m] z^-m) / (1 + a[1] z^-1 + ... + a[n] z^-n)
 *
 * a[0] is always exactly 1. FIR filters carry a == {1}.
 */
struct TransferFunction {
    std::vector<double> b{1.0};
    std::vector<double> a{1.0};

    /// Throws InvalidTransferFunction when b is empty or a[0] != 1.
    static TransferFunction make(std::vector<double> b, std::vector<double> a);
    static TransferFunction fir(std::vector<double> b) { return make(std::move(b), {1.0}); }

    [[nodiscard]] bool is_fir() const noexcept { return a.size() == 1; }
    void validate() const;

    friend bool operator==(const TransferFunction&, const TransferFunction&) = default;
};

/// Uniform samples of normalized frequency on [0, 1]; 1 is Nyquist (omega * pi rad/sample).
class FrequencyGrid {
public:
    explicit FrequencyGrid(std::size_t count);

    [[nodiscard]] std::size_t size() const noexcept { return omega_.size(); }
    [[nodiscard]] std::span<const double> omega() const noexcept { return omega_; }
    [[nodiscard]] double operator[](std::size_t k) const noexcept { return omega_[k]; }

    /// e^{-i pi omega_k}, the z^-1 value on the unit circle at each grid point.
    [[nodiscard]] std::span<const std::complex<double>> phasors() const noexcept { return phasors_; }

private:
    std::vector<double> omega_;
    std::vector<std::complex<double>> phasors_;
};

/// Linear (not dB) magnitude, one value per grid point.
struct MagnitudeResponse {
    std::vector<double> values;

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
    [[nodiscard]] double operator[](std::size_t k) const noexcept { return values[k]; }
};

enum class Band : std::uint8_t { Pass, Stop, Transition };

struct BandMask {
    std::vector<Band> labels;

    [[nodiscard]] std::size_t size() const noexcept { return labels.size(); }
    [[nodiscard]] std::size_t count(Band band) const noexcept;
};

enum class BandKind { LowPass, HighPass, BandPass, BandStop };

/// One passband edge paired with its stopband edge. Points strictly between the two are
/// don't-care (Transition).
struct BandEdge {
    double pass;
    double stop;
};

/// Ideal brick-wall band specification.
///   LowPass / HighPass: one edge pair.
///   BandPass / BandStop: two edge pairs, lower band edge first.
struct IdealBands {
    BandKind kind = BandKind::LowPass;
    std::vector<BandEdge> edges;
};

/// Reference filter whose magnitude response is the target.
struct ReferenceFilter {
    TransferFunction filter;
};

class DesignTarget {
public:
    /// Throws InvalidTarget on edges outside (0,1) or mis-ordered edge pairs.
    static DesignTarget ideal(BandKind kind, std::vector<BandEdge> edges);
    /// Throws InvalidTarget when the reference filter is unstable.
    static DesignTarget reference(TransferFunction filter);

    [[nodiscard]] bool is_ideal() const noexcept { return std::holds_alternative<IdealBands>(spec_); }
    [[nodiscard]] bool is_reference() const noexcept { return !is_ideal(); }
    [[nodiscard]] const IdealBands& bands() const { return std::get<IdealBands>(spec_); }
    [[nodiscard]] const TransferFunction& reference_filter() const { return std::get<ReferenceFilter>(spec_).filter; }

private:
    explicit DesignTarget(std::variant<IdealBands, ReferenceFilter> spec) : spec_(std::move(spec)) {}
    std::variant<IdealBands, ReferenceFilter> spec_;
};

struct DesiredResponse {
    MagnitudeResponse magnitude;
    BandMask mask;
};

/// |B(e^{i pi w})| / |A(e^{i pi w})| at every grid point. Throws NonFiniteResponse when a value
/// is not finite.
[[nodiscard]] MagnitudeResponse evaluate_response(const TransferFunction& tf, const FrequencyGrid& grid);

/// Magnitudes for a raw coefficient pair; same contract as evaluate_response.
void evaluate_magnitude(std::span<const double> b, std::span<const double> a,
                        std::span<const std::complex<double>> phasors, std::span<double> out);

/// Reflection coefficients of the Schur-Cohn step-down recursion, highest order first.
/// Stops early (returning a shorter list) at the first coefficient with |k| >= 1.
[[nodiscard]] std::vector<double> reflection_coefficients(std::span<const double> a);

/// True iff every root of the denominator lies strictly inside the unit circle.
[[nodiscard]] bool is_stable(std::span<const double> a);
[[nodiscard]] inline bool is_stable(const TransferFunction& tf) { return is_stable(tf.a); }

inline constexpr double kStabilityMargin = 1e-12;

/// Brick-wall magnitudes (1 in pass, 0 elsewhere) and band labels. Throws EmptyBand.
[[nodiscard]] DesiredResponse ideal_response(const DesignTarget& target, const FrequencyGrid& grid);

[[nodiscard]] MagnitudeResponse reference_response(const DesignTarget& target, const FrequencyGrid& grid);

/// ideal_response or reference_response with an all-Pass mask, depending on the target mode.
[[nodiscard]] DesiredResponse desired_response(const DesignTarget& target, const FrequencyGrid& grid);

} // namespace frogfilter
