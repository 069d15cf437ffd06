#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "fracmin/analytic_set.hpp"
#include "fracmin/kernel.hpp"
#include "oracles.hpp"

using namespace fracmin;

TEST_CASE("adjacent 1D cells, s = 1/2: closed form 8 - 4*sqrt(2)") {
    double expected = 8.0 - 4.0 * std::sqrt(2.0); // 2.3431457...
    CHECK(oracle::pair_weight_1d(1, 0.5) == doctest::Approx(expected).epsilon(1e-12));
    double w = pair_weight_quadrature(1, {1, 0, 0}, 0.5);
    CHECK(w == doctest::Approx(expected).epsilon(1e-8));
}

TEST_CASE("1D quadrature matches the closed form across offsets and orders") {
    for (double s : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        for (int64_t k : {1, 2, 3, 4, 7}) {
            double w = pair_weight_quadrature(1, {k, 0, 0}, s);
            CHECK(w == doctest::Approx(oracle::pair_weight_1d(k, s)).epsilon(2e-8));
        }
    }
}

TEST_CASE("2D quadrature matches the polar oracle on touching offsets") {
    for (double s : {0.3, 0.5, 0.7}) {
        for (auto d : {std::array<int64_t, 2>{1, 0}, std::array<int64_t, 2>{1, 1},
                       std::array<int64_t, 2>{2, 1}}) {
            double w = pair_weight_quadrature(2, {d[0], d[1], 0}, s);
            double ref = oracle::pair_weight_2d(d, s);
            CHECK(w == doctest::Approx(ref).epsilon(5e-6));
        }
    }
}

TEST_CASE("build_table: zero offset, symmetry, positivity") {
    GridGeometry g(2, {0, 0, 0}, {12, 12, 1}, 0.5);
    KernelTable t = build_table(g, FractionalOrder(0.5));
    CHECK(t.weight({0, 0, 0}) == 0.0);
    for (int64_t i = -6; i <= 6; ++i)
        for (int64_t j = -6; j <= 6; ++j) {
            if (i == 0 && j == 0) continue;
            double w = t.weight({i, j, 0});
            CHECK(w > 0.0);
            CHECK(t.weight({-i, -j, 0}) == w);
            CHECK(t.weight({j, i, 0}) == w);
        }
}

TEST_CASE("far field equals the midpoint rule; offset 10 reference value") {
    GridGeometry g(1, {0, 0, 0}, {64, 1, 1}, 1.0);
    KernelTable t = build_table(g, FractionalOrder(0.5));
    CHECK(t.weight({10, 0, 0}) == doctest::Approx(std::pow(10.0, -1.5)).epsilon(1e-3));
    for (int64_t k = 5; k < 64; k += 7)
        CHECK(t.weight({k, 0, 0}) ==
              doctest::Approx(pair_weight_midpoint(1, {k, 0, 0}, 0.5)).epsilon(1e-12));
}

TEST_CASE("radial monotonicity of the table") {
    GridGeometry g(2, {0, 0, 0}, {16, 16, 1}, 0.25);
    KernelTable t = build_table(g, FractionalOrder(0.4));
    struct Entry {
        double r2;
        double w;
    };
    std::vector<Entry> entries;
    for (int64_t i = 0; i <= 15; ++i)
        for (int64_t j = 0; j <= 15; ++j) {
            if (i == 0 && j == 0) continue;
            entries.push_back({double(i * i + j * j), t.weight({i, j, 0})});
        }
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.r2 < b.r2; });
    for (size_t k = 1; k < entries.size(); ++k)
        if (entries[k].r2 > entries[k - 1].r2 + 1e-12)
            CHECK(entries[k].w < entries[k - 1].w);
}

TEST_CASE("refinement consistency of the quadrature weights") {
    // Halving h and summing refined weights over the parent pair reproduces
    // the parent weight. In h = 1 units: w(delta) = 2^(s-n) * sum over child
    // offsets of w(2*delta + b - a).
    for (double s : {0.3, 0.7}) {
        for (auto d : {std::array<int64_t, 2>{1, 0}, std::array<int64_t, 2>{1, 1},
                       std::array<int64_t, 2>{3, 2}}) {
            double parent = pair_weight_quadrature(2, {d[0], d[1], 0}, s);
            double sum = 0.0;
            for (int ax = 0; ax < 2; ++ax)
                for (int ay = 0; ay < 2; ++ay)
                    for (int bx = 0; bx < 2; ++bx)
                        for (int by = 0; by < 2; ++by)
                            sum += pair_weight_quadrature(
                                2, {2 * d[0] + bx - ax, 2 * d[1] + by - ay, 0}, s);
            sum *= std::pow(0.5, 2.0 * 2.0 - s) * std::pow(2.0, 2.0); // (h/2)^(n-s) vs h^...
            // child weight in h/2 units scales by (1/2)^(n-s); 4^n child pairs
            CHECK(std::pow(0.5, 2.0 - s) * 0.0 + sum ==
                  doctest::Approx(parent).epsilon(1e-6));
        }
    }
}

TEST_CASE("scaling h -> lambda h multiplies weights by lambda^(n-s)") {
    GridGeometry g1(2, {0, 0, 0}, {10, 10, 1}, 0.5);
    GridGeometry g2(2, {0, 0, 0}, {10, 10, 1}, 1.25);
    FractionalOrder ord(0.6);
    KernelTable t1 = build_table(g1, ord);
    KernelTable t2 = build_table(g2, ord);
    double lambda = g2.h / g1.h;
    double factor = std::pow(lambda, 2.0 - ord.s);
    for (int64_t i = 0; i <= 9; ++i)
        for (int64_t j = 0; j <= 9; ++j) {
            if (i == 0 && j == 0) continue;
            CHECK(t2.weight({i, j, 0}) ==
                  doctest::Approx(factor * t1.weight({i, j, 0})).epsilon(1e-13));
        }
}

TEST_CASE("tail_integral closed form") {
    CHECK(tail_integral(1, 0.5, 1.0) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(tail_integral(1, 0.5, 4.0) == doctest::Approx(2.0).epsilon(1e-14));
    // Monotone decay to zero in R.
    double prev = tail_integral(2, 0.3, 0.5);
    for (double R : {1.0, 2.0, 4.0, 8.0, 64.0, 1024.0}) {
        double v = tail_integral(2, 0.3, R);
        CHECK(v < prev);
        prev = v;
    }
    CHECK(prev < 1e-1);
    CHECK(tail_integral(3, 0.5, 1e12) < 1e-5);
}

TEST_CASE("kernel cache round trip") {
    GridGeometry g(2, {0, 0, 0}, {9, 7, 1}, 0.125);
    FractionalOrder ord(0.45);
    KernelTable t = build_table(g, ord);
    auto dir = std::filesystem::temp_directory_path() / "fracmin_kernel_cache";
    kernel_cache_save(t, dir.string());
    auto loaded = kernel_cache_try_load(g, ord, dir.string());
    REQUIRE(loaded.has_value());
    CHECK(loaded->raw() == t.raw());
    // A different s must miss.
    CHECK(!kernel_cache_try_load(g, FractionalOrder(0.46), dir.string()).has_value());
    std::filesystem::remove_all(dir);
}

TEST_CASE("h scaling of quadrature vs physical table") {
    GridGeometry g(1, {0, 0, 0}, {32, 1, 1}, 0.01);
    FractionalOrder ord(0.5);
    KernelTable t = build_table(g, ord);
    double w1 = oracle::pair_weight_1d(1, 0.5) * std::pow(g.h, 1.0 - 0.5);
    CHECK(t.weight({1, 0, 0}) == doctest::Approx(w1).epsilon(1e-8));
}
