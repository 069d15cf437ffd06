#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <random>

#include "fracmin/analytic_set.hpp"
#include "fracmin/grid.hpp"

using namespace fracmin;

TEST_CASE("cells_in_ball radius below half-spacing is empty") {
    GridGeometry g(1, {0, 0, 0}, {4, 1, 1}, 1.0);
    CellSet s = cells_in_ball(g, {2.0, 0, 0}, 0.4);
    CHECK(s.count() == 0);
}

TEST_CASE("cells_in_ball symmetric inclusion in 1D") {
    GridGeometry g(1, {0, 0, 0}, {4, 1, 1}, 1.0);
    CellSet s = cells_in_ball(g, {2.0, 0, 0}, 1.0);
    CHECK(s.count() == 2);
    CHECK(s.contains(g.locate({1.5, 0, 0})));
    CHECK(s.contains(g.locate({2.5, 0, 0})));
}

TEST_CASE("cells_in_ball matches disk area within 2%") {
    GridGeometry g(2, {0, 0, 0}, {100, 100, 1}, 0.1);
    CellSet s = cells_in_ball(g, {5.0, 5.0, 0}, 2.0);
    double area = double(s.count()) * g.h * g.h;
    CHECK(area == doctest::Approx(M_PI * 4.0).epsilon(0.02));
}

TEST_CASE("cells_in_ball monotone in radius") {
    GridGeometry g(2, {-1, -1, 0}, {32, 32, 1}, 2.0 / 32);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(-0.8, 0.8);
    for (int it = 0; it < 20; ++it) {
        Vec c{unif(rng), unif(rng), 0};
        double r1 = 0.1 + 0.4 * std::generate_canonical<double, 53>(rng);
        double r2 = r1 + 0.3 * std::generate_canonical<double, 53>(rng);
        CellSet a = cells_in_ball(g, c, r1);
        CellSet b = cells_in_ball(g, c, r2);
        CHECK(set_difference(a, b).count() == 0);
    }
}

TEST_CASE("measure basics") {
    GridGeometry g(1, {0, 0, 0}, {10, 1, 1}, 0.5);
    CellSet empty(g);
    CHECK(measure(empty) == 0.0);
    CellSet full(g, true);
    CHECK(measure(full) == doctest::Approx(5.0));
    std::mt19937_64 rng(3);
    CellSet random(g);
    int64_t k = 0;
    for (int64_t c = 0; c < g.cell_count(); ++c)
        if (rng() % 2) {
            random.set(c, true);
            ++k;
        }
    CHECK(measure(random) == doctest::Approx(double(k) * 0.5));
}

TEST_CASE("complement involution and measure additivity") {
    GridGeometry g(2, {0, 0, 0}, {16, 16, 1}, 0.25);
    std::mt19937_64 rng(11);
    CellSet a(g), b(g);
    for (int64_t c = 0; c < g.cell_count(); ++c) {
        a.set(c, rng() % 3 == 0);
        b.set(c, rng() % 2 == 0);
    }
    CHECK(set_complement(set_complement(a)) == a);
    double lhs = measure(set_union(a, b)) + measure(set_intersection(a, b));
    CHECK(lhs == doctest::Approx(measure(a) + measure(b)));
}

TEST_CASE("boundary_cells of an all-IN field is empty") {
    GridGeometry g(2, {0, 0, 0}, {8, 8, 1}, 1.0);
    PhaseField f(g, Label::In);
    CHECK(boundary_cells(f).count() == 0);
}

TEST_CASE("boundary_cells of a 1D half-line") {
    GridGeometry g(1, {-2, 0, 0}, {4, 1, 1}, 1.0);
    PhaseField f(g);
    for (int64_t c = 0; c < g.cell_count(); ++c)
        f.set_label(c, g.center(c)[0] <= 0.0 ? Label::In : Label::Out);
    CellSet b = boundary_cells(f);
    CHECK(b.count() == 2);
    CHECK(b.contains(g.locate({-0.5, 0, 0})));
    CHECK(b.contains(g.locate({0.5, 0, 0})));
}

TEST_CASE("boundary cell count of a disk tracks the circumference") {
    GridGeometry g(2, {-2, -2, 0}, {80, 80, 1}, 0.05);
    PhaseField f(g);
    AnalyticSetPtr disk = make_ball({0, 0, 0}, 1.0);
    for (int64_t c = 0; c < g.cell_count(); ++c)
        f.set_label(c, disk->contains(g.center(c)) ? Label::In : Label::Out);
    CellSet b = boundary_cells(f);
    // Two one-cell-thick rings; each ring length is close to 2*pi.
    double per_ring = double(b.count()) * g.h / 2.0;
    CHECK(per_ring == doctest::Approx(2.0 * M_PI).epsilon(0.20));
}

TEST_CASE("boundary_cells rejects unresolved fields") {
    GridGeometry g(1, {0, 0, 0}, {4, 1, 1}, 1.0);
    PhaseField f(g);
    f.set_free(2, true);
    f.set_label(2, Label::Free);
    CHECK_THROWS(boundary_cells(f));
}

TEST_CASE("free label outside free region is rejected") {
    GridGeometry g(1, {0, 0, 0}, {4, 1, 1}, 1.0);
    PhaseField f(g);
    CHECK_THROWS(f.set_label(1, Label::Free));
}

TEST_CASE("PGM mask round trip") {
    GridGeometry g(2, {0, 0, 0}, {13, 9, 1}, 1.0);
    PhaseField f(g);
    std::mt19937_64 rng(5);
    for (int64_t c = 0; c < g.cell_count(); ++c)
        f.set_label(c, rng() % 2 ? Label::In : Label::Out);
    auto path = std::filesystem::temp_directory_path() / "fracmin_mask_test.pgm";
    write_mask(path.string(), f);
    CellSet back = read_mask(path.string(), g);
    CHECK(back == f.inside());
    std::filesystem::remove(path);
}

TEST_CASE("text mask round trip in 1D") {
    GridGeometry g(1, {0, 0, 0}, {17, 1, 1}, 0.3);
    PhaseField f(g);
    std::mt19937_64 rng(9);
    for (int64_t c = 0; c < g.cell_count(); ++c)
        f.set_label(c, rng() % 2 ? Label::In : Label::Out);
    auto path = std::filesystem::temp_directory_path() / "fracmin_mask_test.txt";
    write_mask(path.string(), f);
    CellSet back = read_mask(path.string(), g);
    CHECK(back == f.inside());
    std::filesystem::remove(path);
}
