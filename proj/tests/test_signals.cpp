#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "swdiff/signals.hpp"

using namespace swdiff;

TEST_CASE("paper signal derivatives at t = 0 match hand values") {
    const TestSignal sig = paper_signal();
    // a = 2 sin t + 3 cos 3t and its derivative chain evaluated at 0.
    CHECK(eval_signal(sig, 0.0, 0) == 3.0);
    CHECK(eval_signal(sig, 0.0, 1) == 2.0);
    CHECK(eval_signal(sig, 0.0, 2) == -27.0);
    CHECK(eval_signal(sig, 0.0, 3) == -2.0);
    CHECK(eval_signal(sig, 0.0, 4) == 243.0);
    CHECK(eval_signal(sig, 0.0, 5) == 2.0);  // 2 cos 0 - 3*3^5 sin 0
}

TEST_CASE("eval_signal derivative orders are consistent under central differences") {
    const TestSignal sig = paper_signal();
    const double h = 1e-5;
    for (unsigned order = 0; order < 5; ++order) {
        for (double t : {0.3, 1.1, 1.9, 4.2}) {
            const double fd =
                (eval_signal(sig, t + h, order) - eval_signal(sig, t - h, order)) / (2.0 * h);
            const double exact = eval_signal(sig, t, order + 1);
            // FD truncation error ~ h^2 * |a^(order+3)| <= 1e-10 * 3^(order+3) * 5.
            CHECK(std::abs(fd - exact) < 1e-5 * std::pow(3.0, order));
        }
    }
}

TEST_CASE("derivative chain closes: fourth derivative of a pure sinusoid") {
    const TestSignal one{{{1.0, 2.0, PhaseKind::Sine}}, "sin2t"};
    for (double t : {0.0, 0.7, 2.9}) {
        // d^4/dt^4 sin(2t) = 16 sin(2t); the phase rotation is exact so this
        // is the same std::sin call scaled by an exact power of two.
        CHECK(eval_signal(one, t, 4) == 16.0 * eval_signal(one, t, 0));
    }
}

TEST_CASE("derivative_bound is the triangle-inequality coefficient sum") {
    const TestSignal sig = paper_signal();
    CHECK(derivative_bound(sig, 1) == 2.0 + 9.0);
    CHECK(derivative_bound(sig, 2) == 29.0);
    CHECK(derivative_bound(sig, 4) == 245.0);
    CHECK(derivative_bound(sig, 5) == 731.0);
    CHECK_THROWS_AS(derivative_bound(sig, 0), std::invalid_argument);
}

TEST_CASE("derivative_bound dominates sampled derivative magnitudes") {
    const TestSignal sig = paper_signal();
    for (unsigned order = 1; order <= 5; ++order) {
        const double bound = derivative_bound(sig, order);
        for (int i = 0; i <= 1000; ++i)
            CHECK(std::abs(eval_signal(sig, 6.3 * i / 1000.0, order)) <= bound);
    }
}

TEST_CASE("signal construction rejects bad terms") {
    CHECK_THROWS_AS(TestSignal({}, "empty"), std::invalid_argument);
    CHECK_THROWS_AS(TestSignal({{1.0, -2.0, PhaseKind::Sine}}, "neg-omega"), std::invalid_argument);
}

TEST_CASE("noise stream is deterministic for a fixed seed") {
    NoiseSpec spec{NoiseKind::Gaussian, 0.5, 42};
    NoiseGenerator a(spec), b(spec);
    for (int i = 0; i < 1000; ++i) CHECK(a.next() == b.next());
}

TEST_CASE("uniform noise stays within magnitude and has near-zero mean") {
    NoiseSpec spec{NoiseKind::Uniform, 0.25, 7};
    NoiseGenerator gen(spec);
    double sum = 0.0;
    for (int i = 0; i < 200000; ++i) {
        const double v = gen.next();
        REQUIRE(std::abs(v) <= 0.25);
        sum += v;
    }
    CHECK(std::abs(sum / 200000.0) < 0.005);
}

TEST_CASE("gaussian noise has roughly the requested standard deviation") {
    NoiseSpec spec{NoiseKind::Gaussian, 2.0, 11};
    NoiseGenerator gen(spec);
    double sum = 0.0, sq = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double v = gen.next();
        sum += v;
        sq += v * v;
    }
    const double mean = sum / n;
    const double sd = std::sqrt(sq / n - mean * mean);
    CHECK(std::abs(mean) < 0.05);
    CHECK(std::abs(sd - 2.0) < 0.05);
}

TEST_CASE("sample_with_noise validates its grid and adds the seeded stream") {
    const TestSignal sig = paper_signal();
    CHECK_THROWS_AS(sample_with_noise(sig, {}, {}), std::invalid_argument);
    CHECK_THROWS_AS(sample_with_noise(sig, {0.0, 0.0}, {}), std::invalid_argument);

    const std::vector<double> grid = {0.0, 0.1, 0.2, 0.5};
    const auto clean = sample_with_noise(sig, grid, {});
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(clean[i] == eval_signal(sig, grid[i], 0));

    NoiseSpec spec{NoiseKind::Uniform, 1e-3, 3};
    const auto noisy = sample_with_noise(sig, grid, spec);
    NoiseGenerator gen(spec);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(noisy[i] == eval_signal(sig, grid[i], 0) + gen.next());
}
