#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cqs/random.hpp"
#include "cqs/spectral.hpp"

#include <cmath>
#include <numbers>

using namespace cqs;

namespace {

constexpr double pi = std::numbers::pi;

ComplexField random_field(const GridPtr& grid, std::uint64_t seed) {
    Rng rng(seed);
    ComplexField f = make_field(grid);
    for (Complex& z : f.samples) z = Complex{rng.normal(), rng.normal()};
    return f;
}

double rel_diff(const ComplexField& a, const ComplexField& b) {
    double num = 0.0, den = 0.0;
    for (size_t k = 0; k < a.samples.size(); ++k) {
        num += std::norm(a.samples[k] - b.samples[k]);
        den += std::norm(b.samples[k]);
    }
    return std::sqrt(num / std::max(den, 1e-300));
}

// independent quadrature oracle for the L2 norm
double quadrature_l2(const ComplexField& f) {
    double sum = 0.0;
    for (const Complex& z : f.samples) sum += std::norm(z);
    return std::sqrt(sum * f.grid->box_length / f.grid->num_points);
}

}  // namespace

TEST_CASE("grid construction and frequency lattice") {
    GridPtr g = make_grid(2.0 * pi, 8);
    CHECK(g->dx == doctest::Approx(pi / 4.0).epsilon(1e-15));
    std::vector<double> expected{0, 1, 2, 3, -4, -3, -2, -1};
    for (int k = 0; k < 8; ++k) CHECK(g->frequencies[k] == doctest::Approx(expected[k]));
    CHECK(g->dx * g->num_points == doctest::Approx(g->box_length).epsilon(1e-15));

    GridPtr h = make_grid(4.0 * pi, 4);
    CHECK(h->dxi == doctest::Approx(0.5));
    std::vector<double> expected2{0.0, 0.5, -1.0, -0.5};
    for (int k = 0; k < 4; ++k) CHECK(h->frequencies[k] == doctest::Approx(expected2[k]));

    CHECK_THROWS_AS(make_grid(1.0, 7), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(1.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(-1.0, 8), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(0.0, 8), std::invalid_argument);
}

TEST_CASE("transform round trip is the identity") {
    for (int n : {8, 16, 64, 130}) {
        GridPtr g = make_grid(3.7, n);
        ComplexField f = random_field(g, 42 + n);
        ComplexField back = from_spectrum(g, to_spectrum(f));
        CHECK(rel_diff(back, f) < 1e-12);
    }
}

TEST_CASE("japanese bracket") {
    CHECK(japanese_bracket(0.0) == 1.0);
    CHECK(japanese_bracket(1.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(japanese_bracket(-3.0) == doctest::Approx(std::sqrt(10.0)).epsilon(1e-15));
    CHECK(japanese_bracket(-5.0) == japanese_bracket(5.0));
}

TEST_CASE("apply_symbol: identity, derivative, composition") {
    GridPtr g = make_grid(2.0 * pi, 32);
    ComplexField wave = make_field(g, [](double x) { return std::polar(1.0, x); });

    ComplexField same = apply_symbol(wave, [](double) { return Complex{1.0, 0.0}; });
    CHECK(rel_diff(same, wave) < 1e-12);

    // d/dx e^{ix} = i e^{ix}, exact for the spectral derivative
    ComplexField deriv = apply_symbol(wave, [](double xi) { return Complex{0.0, xi}; });
    ComplexField expected = scaled(wave, Complex{0.0, 1.0});
    CHECK(rel_diff(deriv, expected) < 1e-12);

    ComplexField half = apply_symbol(wave, [](double xi) {
        return Complex{std::sqrt(std::abs(xi)), 0.0};
    });
    CHECK(rel_diff(half, wave) < 1e-12);

    // composition equals the product symbol
    ComplexField f = random_field(g, 7);
    auto s1 = [](double xi) { return Complex{1.0 / (1.0 + xi * xi), 0.0}; };
    auto s2 = [](double xi) { return Complex{std::cos(xi), std::sin(xi) * 0.5}; };
    ComplexField two_steps = apply_symbol(apply_symbol(f, s1), s2);
    ComplexField one_step = apply_symbol(f, [&](double xi) { return s1(xi) * s2(xi); });
    CHECK(rel_diff(two_steps, one_step) < 1e-12);

    CHECK_THROWS_AS(
        apply_symbol(f, [](double xi) { return Complex{1.0 / xi, 0.0}; }),
        std::domain_error);
}

TEST_CASE("sobolev norm against the quadrature oracle") {
    GridPtr g = make_grid(2.0 * pi, 64);

    ComplexField zero = make_field(g);
    CHECK(sobolev_norm(zero, 0.0) == 0.0);
    CHECK(sobolev_norm(zero, -1.5) == 0.0);

    ComplexField wave = make_field(g, [](double x) { return std::polar(1.0, x); });
    CHECK(sobolev_norm(wave, 0.0) == doctest::Approx(std::sqrt(2.0 * pi)).epsilon(1e-12));
    CHECK(sobolev_norm(wave, 1.0) ==
          doctest::Approx(std::sqrt(2.0 * pi) * std::sqrt(2.0)).epsilon(1e-12));

    for (std::uint64_t seed : {1u, 2u, 3u}) {
        ComplexField f = random_field(g, seed);
        CHECK(sobolev_norm(f, 0.0) == doctest::Approx(quadrature_l2(f)).epsilon(1e-12));
        CHECK(l2_norm(f) == doctest::Approx(quadrature_l2(f)).epsilon(1e-12));
    }
}

TEST_CASE("sobolev norm is monotone in s") {
    GridPtr g = make_grid(5.0, 48);
    ComplexField f = random_field(g, 11);
    double previous = 0.0;
    bool first = true;
    for (double s : {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0}) {
        double value = sobolev_norm(f, s);
        if (!first) CHECK(value >= previous);
        previous = value;
        first = false;
    }
}

TEST_CASE("dealiased product matches the direct convolution") {
    GridPtr g = make_grid(2.0 * pi, 16);
    const int limit = g->dealias_limit();

    // random band-limited inputs
    Rng rng(99);
    std::vector<Complex> ca(16, Complex{}), cb(16, Complex{});
    for (int k = 0; k < 16; ++k) {
        if (std::abs(g->signed_index(k)) > limit) continue;
        ca[k] = Complex{rng.normal(), rng.normal()};
        cb[k] = Complex{rng.normal(), rng.normal()};
    }
    ComplexField a = from_spectrum(g, ca);
    ComplexField b = from_spectrum(g, cb);

    std::vector<Complex> prod = to_spectrum(dealiased_product(a, b));

    // brute-force convolution over kept mode pairs, no wraparound
    for (int k = 0; k < 16; ++k) {
        int j = g->signed_index(k);
        Complex direct{0.0, 0.0};
        if (std::abs(j) <= limit) {
            for (int k1 = 0; k1 < 16; ++k1) {
                int j1 = g->signed_index(k1);
                int j2 = j - j1;
                if (std::abs(j1) > limit || std::abs(j2) > limit) continue;
                int k2 = j2 >= 0 ? j2 : j2 + 16;
                direct += ca[k1] * cb[k2];
            }
        }
        CHECK(std::abs(prod[k] - direct) < 1e-12);
    }
}

TEST_CASE("integrate is the plain quadrature") {
    GridPtr g = make_grid(4.0, 32);
    ComplexField f = make_field(g, [](double) { return Complex{1.5, -0.25}; });
    Complex total = integrate(f);
    CHECK(total.real() == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(total.imag() == doctest::Approx(-1.0).epsilon(1e-14));
}
