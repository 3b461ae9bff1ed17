// Transfer functions, frequency response, stability and desired responses.

#include "frogfilter/errors.hpp"
#include "frogfilter/filter_core.hpp"
#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

using namespace frogfilter;
using Catch::Approx;

namespace {

const TransferFunction kReference = TransferFunction::make({0.1084, 0.5419, 1.0837, 1.0837, 0.5419, 0.1084},
                                                           {1.0, 0.9853, 0.9738, 0.3864, 0.1112, 0.0113});

} // namespace

TEST_CASE("TransferFunction validation", "[filter_core]") {
    REQUIRE_NOTHROW(TransferFunction::make({1.0}, {1.0, -0.5}));
    REQUIRE_THROWS_AS(TransferFunction::make({}, {1.0}), InvalidTransferFunction);
    REQUIRE_THROWS_AS(TransferFunction::make({1.0}, {}), InvalidTransferFunction);
    REQUIRE_THROWS_AS(TransferFunction::make({1.0}, {2.0, 0.5}), InvalidTransferFunction);
    REQUIRE_THROWS_AS(TransferFunction::make({std::nan("")}, {1.0}), InvalidTransferFunction);
    REQUIRE(TransferFunction::fir({0.5, 0.5}).is_fir());
}

TEST_CASE("FrequencyGrid spans DC to Nyquist", "[filter_core]") {
    const FrequencyGrid grid(5);
    REQUIRE(grid.size() == 5);
    const std::vector<double> expected{0.0, 0.25, 0.5, 0.75, 1.0};
    for (std::size_t k = 0; k < 5; ++k) {
        REQUIRE(grid[k] == expected[k]);
    }
    REQUIRE_THROWS_AS(FrequencyGrid(1), InvalidGrid);
    REQUIRE_THROWS_AS(FrequencyGrid(0), InvalidGrid);
}

TEST_CASE("evaluate_response matches a naive DTFT", "[filter_core]") {
    SECTION("reference IIR filter") {
        const FrequencyGrid grid(257);
        const auto r = evaluate_response(kReference, grid);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            REQUIRE(r[k] == Approx(oracle::magnitude(kReference.b, kReference.a, grid[k])).margin(1e-12));
        }
    }

    SECTION("random FIR and IIR fixtures") {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> coef(-1.0, 1.0);
        const FrequencyGrid grid(64);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<double> b(1 + trial % 7);
            for (auto& x : b) {
                x = coef(rng);
            }
            std::vector<double> a{1.0, 0.3 * coef(rng), 0.2 * coef(rng)};
            const auto tf = TransferFunction::make(b, a);
            const auto r = evaluate_response(tf, grid);
            for (std::size_t k = 0; k < grid.size(); ++k) {
                REQUIRE(r[k] == Approx(oracle::magnitude(b, a, grid[k])).margin(1e-12));
            }
        }
    }

    SECTION("DC gain is the coefficient-sum ratio") {
        const FrequencyGrid grid(2);
        const auto r = evaluate_response(kReference, grid);
        double sb = 0.0;
        double sa = 0.0;
        for (const double x : kReference.b) {
            sb += x;
        }
        for (const double x : kReference.a) {
            sa += x;
        }
        REQUIRE(r[0] == Approx(sb / sa).margin(1e-12));
        REQUIRE(r[0] == Approx(1.0).margin(1e-3));
    }

    SECTION("Nyquist gain is the alternating-sum ratio") {
        const FrequencyGrid grid(2);
        const auto r = evaluate_response(kReference, grid);
        double sb = 0.0;
        double sa = 0.0;
        for (std::size_t k = 0; k < kReference.b.size(); ++k) {
            sb += (k % 2 == 0 ? 1.0 : -1.0) * kReference.b[k];
        }
        for (std::size_t k = 0; k < kReference.a.size(); ++k) {
            sa += (k % 2 == 0 ? 1.0 : -1.0) * kReference.a[k];
        }
        REQUIRE(sa == Approx(0.702).margin(1e-12));
        REQUIRE(r[1] == Approx(std::abs(sb / sa)).margin(1e-12));
        REQUIRE(r[1] < 1e-12);
    }

    SECTION("pole on the unit circle is reported") {
        const auto tf = TransferFunction::make({1.0}, {1.0, -1.0});
        REQUIRE_THROWS_AS(evaluate_response(tf, FrequencyGrid(8)), NonFiniteResponse);
    }
}

TEST_CASE("is_stable examples", "[filter_core][stability]") {
    REQUIRE(is_stable(std::vector<double>{1.0}));
    REQUIRE(is_stable(std::vector<double>{1.0, -0.5}));
    REQUIRE_FALSE(is_stable(std::vector<double>{1.0, -2.0}));
    REQUIRE_FALSE(is_stable(std::vector<double>{1.0, -1.0}));
    // Double pole at 0.9.
    REQUIRE(is_stable(std::vector<double>{1.0, -1.8, 0.81}));
    // Poles at 0.5 and 1.1.
    REQUIRE_FALSE(is_stable(std::vector<double>{1.0, -1.6, 0.55}));
    REQUIRE(is_stable(kReference));
}

TEST_CASE("reference denominator roots", "[filter_core][stability]") {
    REQUIRE(oracle::max_root_magnitude(kReference.a) < 1.0);
}

TEST_CASE("is_stable agrees with companion-matrix roots", "[filter_core][stability][property]") {
    std::mt19937_64 rng(2024);
    int checked = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto a = oracle::random_denominator(rng, 6, trial % 2 == 1);
        const double rmax = oracle::max_root_magnitude(a);
        // Skip the numerically ambiguous shell around the unit circle.
        if (std::abs(rmax - 1.0) < 1e-6) {
            continue;
        }
        INFO("trial " << trial << " max |root| " << rmax);
        REQUIRE(is_stable(a) == (rmax < 1.0));
        ++checked;
    }
    REQUIRE(checked >= 95);
}

TEST_CASE("reflection coefficients of a first-order section", "[filter_core][stability]") {
    const auto k = reflection_coefficients(std::vector<double>{1.0, -0.5});
    REQUIRE(k.size() == 1);
    REQUIRE(std::abs(k[0]) == Approx(0.5));
}

TEST_CASE("ideal_response band labels", "[filter_core][target]") {
    const FrequencyGrid grid(5);

    SECTION("brick-wall low-pass at 0.25") {
        const auto d = ideal_response(DesignTarget::ideal(BandKind::LowPass, {{0.25, 0.25}}), grid);
        const std::vector<double> mag{1, 1, 0, 0, 0};
        const std::vector<Band> mask{Band::Pass, Band::Pass, Band::Stop, Band::Stop, Band::Stop};
        REQUIRE(d.magnitude.values == mag);
        REQUIRE(d.mask.labels == mask);
    }

    SECTION("transition band is excluded") {
        const auto d = ideal_response(DesignTarget::ideal(BandKind::LowPass, {{0.25, 0.5}}), grid);
        const std::vector<Band> mask{Band::Pass, Band::Pass, Band::Stop, Band::Stop, Band::Stop};
        REQUIRE(d.mask.labels == mask);
        const auto d2 = ideal_response(DesignTarget::ideal(BandKind::LowPass, {{0.2, 0.6}}), grid);
        const std::vector<Band> mask2{Band::Pass, Band::Transition, Band::Transition, Band::Stop, Band::Stop};
        REQUIRE(d2.mask.labels == mask2);
    }

    SECTION("high-pass mirrors low-pass") {
        const auto d = ideal_response(DesignTarget::ideal(BandKind::HighPass, {{0.75, 0.5}}), grid);
        const std::vector<double> mag{0, 0, 0, 1, 1};
        REQUIRE(d.magnitude.values == mag);
        REQUIRE(d.mask.count(Band::Pass) == 2);
        REQUIRE(d.mask.count(Band::Stop) == 3);
    }

    SECTION("band-pass and band-stop") {
        const FrequencyGrid fine(11);
        const auto bp = ideal_response(DesignTarget::ideal(BandKind::BandPass, {{0.4, 0.2}, {0.6, 0.8}}), fine);
        REQUIRE(bp.mask.count(Band::Pass) == 3);
        REQUIRE(bp.mask.count(Band::Stop) == 6);
        REQUIRE(bp.magnitude[5] == 1.0);
        REQUIRE(bp.magnitude[0] == 0.0);
        const auto bs = ideal_response(DesignTarget::ideal(BandKind::BandStop, {{0.2, 0.4}, {0.8, 0.6}}), fine);
        REQUIRE(bs.magnitude[5] == 0.0);
        REQUIRE(bs.magnitude[0] == 1.0);
    }

    SECTION("invalid targets") {
        REQUIRE_THROWS_AS(DesignTarget::ideal(BandKind::LowPass, {{0.3, 0.2}}), InvalidTarget);
        REQUIRE_THROWS_AS(DesignTarget::ideal(BandKind::LowPass, {{0.0, 0.2}}), InvalidTarget);
        REQUIRE_THROWS_AS(DesignTarget::ideal(BandKind::LowPass, {{0.2, 1.0}}), InvalidTarget);
        REQUIRE_THROWS_AS(DesignTarget::ideal(BandKind::BandPass, {{0.2, 0.1}}), InvalidTarget);
        REQUIRE_THROWS_AS(DesignTarget::reference(TransferFunction::make({1.0}, {1.0, -2.0})), InvalidTarget);
    }

    SECTION("a band with no grid points") {
        REQUIRE_THROWS_AS(ideal_response(DesignTarget::ideal(BandKind::BandPass, {{0.4, 0.2}, {0.45, 0.8}}), FrequencyGrid(3)),
                          EmptyBand);
    }
}

TEST_CASE("reference target is matched everywhere", "[filter_core][target]") {
    const FrequencyGrid grid(32);
    const auto d = desired_response(DesignTarget::reference(kReference), grid);
    REQUIRE(d.mask.count(Band::Pass) == grid.size());
    const auto r = evaluate_response(kReference, grid);
    REQUIRE(d.magnitude.values == r.values);
}
