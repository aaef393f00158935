#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "maxvol/gromov_hausdorff.hpp"
#include "maxvol/rng.hpp"

using namespace maxvol;

namespace {

FiniteMetricSpace from_points(const std::vector<Vec>& pts) {
    int n = static_cast<int>(pts.size());
    std::vector<double> d(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) d[i * n + j] = norm(sub(pts[i], pts[j]));
    std::vector<std::string> labels(n);
    for (int i = 0; i < n; ++i) labels[i] = std::to_string(i);
    return FiniteMetricSpace::from_matrix(std::move(labels), std::move(d),
                                          Curvature::Flat);
}

FiniteMetricSpace random_space(int n, std::mt19937_64& eng) {
    std::uniform_real_distribution<double> unif(0.0, 2.0);
    std::vector<Vec> pts;
    for (int i = 0; i < n; ++i) pts.push_back({unif(eng), unif(eng)});
    return from_points(pts);
}

} // namespace

TEST_CASE("hausdorff distance basics") {
    auto s = from_points({{0, 0}, {1, 0}, {0, 3}});
    CHECK(hausdorff(s, {0, 1, 2}, {0, 1, 2}) == 0.0);
    CHECK(hausdorff(s, {0}, {0, 1, 2}) > 0.0);
    // directed part from a subset into a superset is zero: max comes from
    // the other direction
    CHECK(hausdorff(s, {0, 1}, {0, 1, 2}) == doctest::Approx(3.0));
    CHECK(hausdorff(s, {0}, {2}) == doctest::Approx(3.0));
    CHECK_THROWS_AS(hausdorff(s, {}, {0}), DomainError);
}

TEST_CASE("exact GH on tiny spaces") {
    auto x = from_points({{0, 0}, {1, 0}});
    CHECK(gh_exact_small(x, x) == 0.0);

    auto pt = from_points({{5, 5}});
    CHECK(gh_exact_small(x, pt) == doctest::Approx(0.5));
    CHECK(gh_exact_small(pt, x) == doctest::Approx(0.5));

    auto eng = make_engine(42);
    for (int trial = 0; trial < 20; ++trial) {
        auto a = random_space(3 + trial % 3, eng);
        auto b = random_space(3 + (trial + 1) % 3, eng);
        CHECK(gh_exact_small(a, b) ==
              doctest::Approx(gh_exact_small(b, a)).epsilon(1e-12));
    }

    auto big = random_space(7, eng);
    CHECK_THROWS_AS(gh_exact_small(big, big), DomainError);
}

TEST_CASE("gh lower bound never exceeds the exact value") {
    auto eng = make_engine(7);
    auto x0 = from_points({{0, 0}, {2, 0}});
    auto y0 = from_points({{0, 0}, {1, 0}});
    CHECK(gh_lower(x0, y0) >= 0.5 - 1e-12); // diameter bound
    for (int trial = 0; trial < 100; ++trial) {
        auto a = random_space(2 + trial % 5, eng);
        auto b = random_space(2 + (trial / 2) % 5, eng);
        double lo = gh_lower(a, b);
        double ex = gh_exact_small(a, b);
        CHECK(lo <= ex + 1e-10);
    }
    CHECK(gh_lower(x0, x0) == 0.0);
}

TEST_CASE("metric perturbation with shortest-path repair") {
    auto eng = make_engine(12);
    auto s = random_space(12, eng);
    auto same = perturb_metric(s, 0.0, 5);
    for (int i = 0; i < s.size(); ++i)
        for (int j = 0; j < s.size(); ++j)
            CHECK(same.dist(i, j) == s.dist(i, j));

    auto p = perturb_metric(s, 0.1, 5);
    // entries within the multiplicative band before closure; closure only
    // decreases, so the upper bound still holds
    for (int i = 0; i < s.size(); ++i)
        for (int j = 0; j < s.size(); ++j) {
            CHECK(p.dist(i, j) <= s.dist(i, j) * 1.1 + 1e-12);
            // exact triangle inequality after closure
            for (int k = 0; k < s.size(); ++k)
                CHECK(p.dist(i, j) <= p.dist(i, k) + p.dist(k, j) + 1e-12);
        }
    CHECK_THROWS_AS(perturb_metric(s, 0.5, 1), DomainError);

    CHECK(gh_lower(s, p) <= 0.1 * s.diameter() + 1e-9);
}

TEST_CASE("graph oracle matches closed forms on the double disk") {
    auto params = model_params(2, Curvature::Flat, 1.0);
    GraphOracle oracle(ModelKind::DoubleDisk, params, params.r / 50);

    // same-sheet pair
    auto a = model_point(params, 0.3, {1, 0}, Sheet::Plus);
    auto b = model_point(params, 0.6, {0, 1}, Sheet::Plus);
    double truth = model_distance(ModelKind::DoubleDisk, a, b);
    double est = oracle.query(a, b);
    CHECK(est >= truth - 1e-9);
    CHECK(est <= truth * 1.02);

    // cross-sheet centers: 2r
    auto c1 = model_point(params, 0.0, {1, 0}, Sheet::Plus);
    auto c2 = model_point(params, 0.0, {1, 0}, Sheet::Minus);
    double est2 = oracle.query(c1, c2);
    CHECK(est2 >= 2.0 - 1e-9);
    CHECK(est2 <= 2.0 * 1.02);

    // mirror pair: 2(r-t)
    auto m1 = model_point(params, 0.5, {0, 1}, Sheet::Plus);
    auto m2 = model_point(params, 0.5, {0, 1}, Sheet::Minus);
    double est3 = oracle.query(m1, m2);
    CHECK(est3 >= 1.0 - 1e-9);
    CHECK(est3 <= 1.0 * 1.03);
}

TEST_CASE("graph oracle refinement is monotone by construction") {
    auto params = model_params(2, Curvature::Spherical, 1.0);
    GraphOracle coarse(ModelKind::DoubleDisk, params, params.r / 25);
    GraphOracle fine(ModelKind::DoubleDisk, params, params.r / 50);
    auto eng = make_engine(3);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < 25; ++i) {
        auto x = model_point(params, unif(eng), random_unit_vector(2, eng),
                             Sheet::Plus);
        auto y = model_point(params, unif(eng), random_unit_vector(2, eng),
                             Sheet::Minus);
        double ec = coarse.query(x, y);
        double ef = fine.query(x, y);
        CHECK(ef <= ec + 1e-12);
        // oracle estimates are admissible-path lengths: never below truth
        CHECK(ef >= model_distance(ModelKind::DoubleDisk, x, y) - 1e-9);
    }
}

TEST_CASE("graph oracle covers crosscap and purse identifications") {
    auto params = model_params(2, Curvature::Flat, 1.0);
    GraphOracle cc(ModelKind::Crosscap, params, params.r / 50);
    // antipodal boundary points are identified: distance about 0
    auto b1 = model_point(params, 1.0, {1, 0}, Sheet::Plus);
    auto b2 = model_point(params, 1.0, {-1, 0}, Sheet::Plus);
    CHECK(cc.query(b1, b2) <= 0.08);

    GraphOracle pu(ModelKind::Purse, params, params.r / 50);
    auto q1 = model_point(params, 1.0, {0.6, 0.8}, Sheet::Plus);
    auto q2 = model_point(params, 1.0, {0.6, -0.8}, Sheet::Plus);
    CHECK(pu.query(q1, q2) <= 0.08);

    // crosscap radial distances survive the quotient
    auto center = model_point(params, 0.0, {1, 0}, Sheet::Plus);
    auto mid = model_point(params, 0.55, {0.6, 0.8}, Sheet::Plus);
    double est = cc.query(center, mid);
    CHECK(est >= 0.55 - 1e-9);
    CHECK(est <= 0.55 * 1.03);
}

TEST_CASE("strainer margins degrade continuously under perturbation") {
    auto params = model_params(2, Curvature::Flat, 1.0);
    std::vector<ModelPoint> pts;
    pts.push_back(model_point(params, 0.0, {1, 0}, Sheet::Plus));
    pts.push_back(model_point(params, 0.6, {1, 0}, Sheet::Plus));
    pts.push_back(model_point(params, 0.6, {-1, 0}, Sheet::Plus));
    pts.push_back(model_point(params, 0.6, {0, 1}, Sheet::Plus));
    pts.push_back(model_point(params, 0.6, {0, -1}, Sheet::Plus));
    auto mbs = model_backed_space(ModelKind::Disk, params, pts);
    StrainerSpec spec{0, {{1, 2}, {3, 4}}, 0.3, 0.3};
    double base = is_strained(mbs.metric, spec).margin;
    REQUIRE(base > 0);
    for (double amp : {0.01, 0.02}) {
        auto pert = perturb_metric(mbs.metric, amp, 77);
        double m = is_strained(pert, spec).margin;
        // O(amplitude) drift of the measured margin
        CHECK(std::abs(m - base) <= 20.0 * amp);
    }
}
