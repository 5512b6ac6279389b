#include <doctest.h>

#include <cmath>

#include "qml/observable.hpp"
#include "qml/stats.hpp"

using namespace qml;

TEST_CASE("norms against the diagonal dense form") {
    // O = sum o_k Z_k is diagonal; its entries are signed partial sums.
    LocalZObservable o({0.5, -1.25, 2.0});
    const int n = 3;
    double max_abs = 0.0, frob_sq = 0.0, tr = 0.0;
    for (int b = 0; b < (1 << n); ++b) {
        double d = 0.0;
        for (int k = 0; k < n; ++k) d += (b >> (n - 1 - k)) & 1 ? -o.coeff(k) : o.coeff(k);
        max_abs = std::max(max_abs, std::abs(d));
        frob_sq += d * d;
        tr += d;
    }
    CHECK(o.spectral_norm() == doctest::Approx(max_abs).epsilon(1e-14));
    CHECK(o.frob_norm_sq() == doctest::Approx(frob_sq).epsilon(1e-14));
    CHECK(std::abs(tr) <= 1e-14);
}

TEST_CASE("sampled coefficients: moments and determinism") {
    const int n = 12;
    const int draws = 10000;
    {
        Rng rng = substream(41, {0});
        std::vector<double> all;
        for (int t = 0; t < draws / n; ++t) {
            LocalZObservable o = sample_coeffs(n, 1.0, rng);
            for (uint32_t k = 0; k < n; ++k) all.push_back(o.coeff(k));
        }
        double m = mean(all);
        double se = sample_sd(all) / std::sqrt(static_cast<double>(all.size()));
        CHECK(std::abs(m) <= 5.0 * se);
        double var = 0.0;
        for (double v : all) var += v * v;
        var /= static_cast<double>(all.size());
        // Var[o^2] = 2 for a unit normal.
        double var_se = std::sqrt(2.0 / static_cast<double>(all.size()));
        CHECK(std::abs(var - 1.0) <= 5.0 * var_se);
    }
    {
        // variance 2^S / N with S = 3, N = 13
        Rng rng = substream(41, {1});
        const double variance = 8.0 / 13.0;
        std::vector<double> all;
        for (int t = 0; t < 800; ++t) {
            LocalZObservable o = sample_coeffs(13, variance, rng);
            for (uint32_t k = 0; k < 13; ++k) all.push_back(o.coeff(k));
        }
        double var = 0.0;
        for (double v : all) var += v * v;
        var /= static_cast<double>(all.size());
        double var_se = variance * std::sqrt(2.0 / static_cast<double>(all.size()));
        CHECK(std::abs(var - variance) <= 5.0 * var_se);
    }
    {
        Rng a = substream(99, {7});
        Rng b = substream(99, {7});
        LocalZObservable oa = sample_coeffs(6, 1.0, a);
        LocalZObservable ob = sample_coeffs(6, 1.0, b);
        for (uint32_t k = 0; k < 6; ++k) CHECK(oa.coeff(k) == ob.coeff(k));
    }
}

TEST_CASE("delta_s brute force") {
    CHECK(delta_s(LocalZObservable({1.0, 1.0}), 2) == 0.0);
    CHECK(delta_s(LocalZObservable({1.0, 2.0, 4.0}), 1) == doctest::Approx(1.0));
    CHECK(delta_s(LocalZObservable({1.0, 2.0, 4.0}), 2) == doctest::Approx(1.0));
    CHECK(delta_s(LocalZObservable({1.0, 2.0, 4.0}), 3) == doctest::Approx(1.0));

    CHECK_THROWS(delta_s(LocalZObservable({1.0, 2.0}), 0));
    CHECK_THROWS(delta_s(LocalZObservable({1.0, 2.0}), 3));
}

TEST_CASE("delta_s properties") {
    Rng rng = substream(42, {0});
    for (int trial = 0; trial < 20; ++trial) {
        LocalZObservable o = sample_coeffs(7, 1.0, rng);
        double min_sq = o.coeff(0) * o.coeff(0);
        for (uint32_t k = 1; k < 7; ++k) min_sq = std::min(min_sq, o.coeff(k) * o.coeff(k));
        CHECK(delta_s(o, 1) == doctest::Approx(min_sq).epsilon(1e-14));
        double prev = delta_s(o, 1);
        for (int s = 2; s <= 4; ++s) {
            double cur = delta_s(o, s);
            CHECK(cur <= prev + 1e-15);
            prev = cur;
        }
    }
}
