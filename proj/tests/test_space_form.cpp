#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "maxvol/rng.hpp"
#include "maxvol/space_form.hpp"

using namespace maxvol;

namespace {

constexpr double kPi = std::numbers::pi;

SpaceFormPoint basis_point(Curvature k, int n, int i, double sign = 1.0) {
    Vec c(n + 1, 0.0);
    c[i] = sign;
    if (k == Curvature::Flat && i != 0) c[0] = 1.0;
    return space_form_point(k, std::move(c));
}

SpaceFormPoint random_point(Curvature k, int n, std::mt19937_64& eng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    switch (k) {
        case Curvature::Spherical:
            return space_form_point(k, random_unit_vector(n + 1, eng));
        case Curvature::Flat: {
            Vec c(n + 1);
            c[0] = 1.0;
            for (int i = 1; i <= n; ++i) c[i] = 4.0 * unif(eng) - 2.0;
            return space_form_point(k, std::move(c));
        }
        case Curvature::Hyperbolic: {
            Vec x = random_unit_vector(n, eng);
            double t = 2.0 * unif(eng);
            Vec c(n + 1);
            c[0] = std::cosh(t);
            for (int i = 1; i <= n; ++i) c[i] = std::sinh(t) * x[i - 1];
            return space_form_point(k, std::move(c));
        }
    }
    throw std::logic_error("unreachable");
}

// Test-only oracle: hinge construction. Opens a hinge of angle theta with
// two sides of the given lengths and measures the far distance; bisects on
// theta until the far distance matches d_yz. Independent of the law-of-
// cosines route used by comparison_angle.
double hinge_angle_oracle(Curvature k, double d_xy, double d_xz, double d_yz) {
    int n = 2;
    SpaceFormPoint x = basis_point(k, n, 0);
    Vec e1(n + 1, 0.0), e2(n + 1, 0.0);
    e1[1] = 1.0;
    e2[2] = 1.0;
    auto far_dist = [&](double theta) {
        Vec w(n + 1, 0.0);
        for (int i = 0; i <= n; ++i)
            w[i] = std::cos(theta) * e1[i] + std::sin(theta) * e2[i];
        SpaceFormPoint y = exp_map(x, tangent_vector(x, e1), d_xy);
        SpaceFormPoint z = exp_map(x, tangent_vector(x, w), d_xz);
        return distance(y, z);
    };
    double lo = 0.0, hi = kPi;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (far_dist(mid) < d_yz)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Test-only oracle: plain midpoint-rule quadrature of the radial volume
// integrand, independent of the adaptive scheme in the library.
double quadrature_volume_oracle(int n, Curvature k, double r, int steps) {
    double acc = 0.0;
    for (int i = 0; i < steps; ++i) {
        double t = r * (i + 0.5) / steps;
        acc += std::pow(sn(k, t), n - 1);
    }
    return unit_sphere_area(n) * acc * r / steps;
}

} // namespace

TEST_CASE("distance closed forms") {
    auto e0s = basis_point(Curvature::Spherical, 3, 0);
    auto e1s = basis_point(Curvature::Spherical, 3, 1);
    CHECK(distance(e0s, e1s) == doctest::Approx(kPi / 2).epsilon(1e-14));

    auto a = space_form_point(Curvature::Flat, {1, 0, 0});
    auto b = space_form_point(Curvature::Flat, {1, 3, 4});
    CHECK(distance(a, b) == doctest::Approx(5.0).epsilon(1e-15));

    auto h0 = space_form_point(Curvature::Hyperbolic, {1, 0, 0});
    auto h1 = space_form_point(Curvature::Hyperbolic,
                               {std::cosh(1.0), std::sinh(1.0), 0});
    CHECK(distance(h0, h1) == doctest::Approx(1.0).epsilon(1e-13));

    CHECK(distance(h0, h0) == 0.0);
    CHECK_THROWS_AS(distance(e0s, a), DomainError);
    auto hneg = space_form_point(Curvature::Hyperbolic, {-1, 0, 0});
    CHECK_THROWS_AS(distance(h0, hneg), DomainError);
}

TEST_CASE("exp_map closed forms") {
    auto x = basis_point(Curvature::Spherical, 2, 0);
    auto v = tangent_vector(x, {0, 1, 0});
    for (double t : {0.3, 1.2, 2.9}) {
        auto y = exp_map(x, v, t);
        CHECK(y.coords[0] == doctest::Approx(std::cos(t)).epsilon(1e-14));
        CHECK(y.coords[1] == doctest::Approx(std::sin(t)).epsilon(1e-14));
    }

    auto f = space_form_point(Curvature::Flat, {1, 0.5, -0.25});
    auto vf = tangent_vector(f, {0, 1, 0});
    auto same = exp_map(f, vf, 0.0);
    CHECK(distance(f, same) == doctest::Approx(0.0));

    auto h = space_form_point(Curvature::Hyperbolic, {1, 0, 0});
    auto vh = tangent_vector(h, {0, 1, 0});
    auto hy = exp_map(h, vh, 1.0);
    CHECK(hy.coords[0] == doctest::Approx(std::cosh(1.0)).epsilon(1e-14));
    CHECK(hy.coords[1] == doctest::Approx(std::sinh(1.0)).epsilon(1e-14));

    CHECK_THROWS_AS(exp_map(x, tangent_vector(x, {0, 0.5, 0}), 1.0),
                    DomainError);
}

TEST_CASE("log_map basics and errors") {
    auto x = space_form_point(Curvature::Flat, {1, 0, 0});
    auto y = space_form_point(Curvature::Flat, {1, 2, 0});
    auto v = log_map(x, y);
    CHECK(v.comps[1] == doctest::Approx(1.0));
    CHECK(v.comps[2] == doctest::Approx(0.0));

    auto e0 = basis_point(Curvature::Spherical, 2, 0);
    for (double t : {0.2, 1.5, 3.0}) {
        Vec c = {std::cos(t), std::sin(t), 0};
        auto w = log_map(e0, space_form_point(Curvature::Spherical, c));
        CHECK(w.comps[1] == doctest::Approx(1.0).epsilon(1e-12));
    }
    auto anti = basis_point(Curvature::Spherical, 2, 0, -1.0);
    CHECK_THROWS_AS(log_map(e0, anti), AmbiguityError);
    CHECK_THROWS_AS(log_map(e0, e0), DegeneracyError);
}

TEST_CASE("exp/log round trip on random pairs") {
    for (Curvature k : {Curvature::Hyperbolic, Curvature::Flat,
                        Curvature::Spherical}) {
        auto eng = make_engine(7 + curvature_value(k));
        int checked = 0;
        double worst = 0.0;
        while (checked < 10000) {
            auto x = random_point(k, 3, eng);
            auto y = random_point(k, 3, eng);
            double d = distance(x, y);
            if (d < 1e-6 || (k == Curvature::Spherical && d > kPi - 1e-3))
                continue;
            auto v = log_map(x, y);
            auto y2 = exp_map(x, v, d);
            worst = std::max(worst, distance(y, y2));
            ++checked;
        }
        CHECK(worst < 1e-9);
    }
}

TEST_CASE("comparison angle closed cases") {
    CHECK(comparison_angle(Curvature::Flat, 3, 4, 5) ==
          doctest::Approx(kPi / 2).epsilon(1e-14));
    CHECK(comparison_angle(Curvature::Spherical, kPi / 2, kPi / 2, kPi / 2) ==
          doctest::Approx(kPi / 2).epsilon(1e-13));

    // hyperbolic equilateral, frozen from the hinge-construction oracle
    double oracle = hinge_angle_oracle(Curvature::Hyperbolic, 1, 1, 1);
    double direct = comparison_angle(Curvature::Hyperbolic, 1, 1, 1);
    CHECK(direct == doctest::Approx(oracle).epsilon(1e-10));
    double closed = std::acos(std::cosh(1.0) * (std::cosh(1.0) - 1.0) /
                              (std::sinh(1.0) * std::sinh(1.0)));
    CHECK(direct == doctest::Approx(closed).epsilon(1e-14));

    CHECK_THROWS_AS(comparison_angle(Curvature::Flat, 1, 1, 3), DomainError);
    CHECK_THROWS_AS(comparison_angle(Curvature::Flat, 0, 1, 1),
                    DegeneracyError);
}

TEST_CASE("comparison angle degenerate hinge and monotonicity") {
    for (Curvature k : {Curvature::Hyperbolic, Curvature::Flat,
                        Curvature::Spherical}) {
        double a = 0.7, b = 0.9;
        CHECK(std::abs(comparison_angle(k, a, b, a + b) - kPi) < 1e-9);
        double prev = 0.0;
        for (int i = 1; i <= 40; ++i) {
            double c = (a + b) * i / 41.0;
            if (c <= std::abs(a - b)) continue;
            double ang = comparison_angle(k, a, b, c);
            CHECK(ang >= prev - 1e-12);
            prev = ang;
        }
    }
}

TEST_CASE("triangle inequality on random triples") {
    for (Curvature k : {Curvature::Hyperbolic, Curvature::Flat,
                        Curvature::Spherical}) {
        auto eng = make_engine(99 + curvature_value(k));
        double worst = 0.0;
        for (int i = 0; i < 100000; ++i) {
            auto x = random_point(k, 2, eng);
            auto y = random_point(k, 2, eng);
            auto z = random_point(k, 2, eng);
            double xy = distance(x, y), yz = distance(y, z), xz = distance(x, z);
            worst = std::max(worst, xz - xy - yz);
            if (std::abs(distance(y, x) - xy) > 1e-15) worst = 1.0;
        }
        CHECK(worst <= 1e-10);
    }
}

TEST_CASE("ball volume closed forms and quadrature") {
    for (Curvature k : {Curvature::Hyperbolic, Curvature::Flat,
                        Curvature::Spherical})
        CHECK(ball_volume(1, k, 0.8) == doctest::Approx(1.6).epsilon(1e-14));

    CHECK(ball_volume(2, Curvature::Flat, 1.3) ==
          doctest::Approx(kPi * 1.3 * 1.3).epsilon(1e-14));

    // frozen against the midpoint quadrature oracle of 2 pi sin(t)
    double oracle = quadrature_volume_oracle(2, Curvature::Spherical, 0.9,
                                             200000);
    CHECK(ball_volume(2, Curvature::Spherical, 0.9) ==
          doctest::Approx(oracle).epsilon(1e-9));
    CHECK(ball_volume(2, Curvature::Spherical, 0.9) ==
          doctest::Approx(2 * kPi * (1 - std::cos(0.9))).epsilon(1e-14));

    // general-dimension quadrature path against the oracle
    for (Curvature k : {Curvature::Hyperbolic, Curvature::Spherical}) {
        double got = ball_volume(5, k, 1.1);
        double want = quadrature_volume_oracle(5, k, 1.1, 400000);
        CHECK(got == doctest::Approx(want).epsilon(1e-8));
    }

    CHECK_THROWS_AS(ball_volume(2, Curvature::Flat, -1.0), DomainError);
    CHECK_THROWS_AS(ball_volume(2, Curvature::Spherical, 3.5), DomainError);
}

TEST_CASE("ball volume is strictly increasing and matches Monte Carlo") {
    // rejection sampling in the ambient box, flat n = 3
    auto eng = make_engine(123);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    int hits = 0;
    const int total = 200000;
    const double r = 0.77;
    for (int i = 0; i < total; ++i) {
        double x = unif(eng), y = unif(eng), z = unif(eng);
        if (x * x + y * y + z * z <= r * r) ++hits;
    }
    double box = 8.0;
    double est = box * hits / total;
    double se = box * std::sqrt(est / box * (1 - est / box) / total);
    CHECK(std::abs(ball_volume(3, Curvature::Flat, r) - est) < 3 * se);

    double prev = 0.0;
    for (int i = 1; i <= 12; ++i) {
        double v = ball_volume(3, Curvature::Hyperbolic, 0.2 * i);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("unit sphere areas") {
    CHECK(unit_sphere_area(2) == doctest::Approx(2 * kPi).epsilon(1e-14));
    CHECK(unit_sphere_area(3) == doctest::Approx(4 * kPi).epsilon(1e-14));
    CHECK(unit_sphere_area(4) ==
          doctest::Approx(2 * kPi * kPi).epsilon(1e-14));
}
