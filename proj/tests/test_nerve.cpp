#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "nervekit/json_io.hpp"
#include "nervekit/metric_space.hpp"
#include "nervekit/model_space.hpp"
#include "nervekit/nerve.hpp"

using namespace nervekit;

namespace {

// circle of unit circumference with n samples; balls of the given radius
// around every sample
CoveringFamily all_sample_family(const ModelSpace& M, double eps, double r_min, double r_max) {
    CoveringFamily fam;
    fam.r_min = r_min;
    fam.r_max = r_max;
    const FiniteMetricSpace* X = &M.space();
    int n = M.n;
    fam.at = [X, n, eps](double r) {
        std::vector<int> centers(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) centers[static_cast<std::size_t>(i)] = i;
        return covering_from_centers(*X, std::move(centers), r, eps);
    };
    return fam;
}

}  // namespace

TEST_CASE("build_nerve hollow triangle") {
    ModelSpace M = generate_circle(1.0 / (2.0 * M_PI), 6);
    Covering cov = covering_from_centers(M.space(), {0, 2, 4}, 0.2, 0.1);
    NerveComplex K = build_nerve(cov);
    REQUIRE(K.n_vertices == 3);
    REQUIRE(K.contains({0}));
    REQUIRE(K.contains({0, 1}));
    REQUIRE(K.contains({1, 2}));
    REQUIRE(K.contains({0, 2}));
    REQUIRE(!K.contains({0, 1, 2}));  // pairwise overlaps, empty triple
    REQUIRE(K.f_vector() == std::vector<std::size_t>{3, 3});
    REQUIRE(K.euler_characteristic() == 0);
    REQUIRE(K.connected());
}

TEST_CASE("build_nerve disjoint balls") {
    FiniteMetricSpace two = FiniteMetricSpace::from_rows({{0.0, 10.0}, {10.0, 0.0}});
    Covering cov = build_ball_covering(two, 1.0, 0);
    NerveComplex K = build_nerve(cov);
    REQUIRE(K.size() == 2);
    REQUIRE(K.contains({0}));
    REQUIRE(K.contains({1}));
    REQUIRE(!K.contains({0, 1}));
    REQUIRE(!K.connected());
    REQUIRE(K.dim() == 0);
}

TEST_CASE("circle nerve is a thickened cycle") {
    ModelSpace M = generate_circle(1.0, 240);
    Covering cov = build_ball_covering(M.space(), 0.05, 0);
    NerveComplex K = build_nerve(cov);
    REQUIRE(K.connected());
    REQUIRE(K.euler_characteristic() == 0);
    REQUIRE(K.dim() + 1 <= cov.max_point_overlap());

    // each ball holds 7 consecutive samples, so the k-simplices through a
    // fixed sample are the (k+1)-subsets of its 7-element support window
    std::vector<std::size_t> f = K.f_vector();
    REQUIRE(f.size() == 7);
    auto choose = [](int n, int k) {
        std::size_t v = 1;
        for (int i = 1; i <= k; ++i) v = v * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
        return v;
    };
    for (int k = 0; k < 7; ++k) REQUIRE(f[static_cast<std::size_t>(k)] == 240 * choose(6, k));
}

TEST_CASE("build_nerve is monotone in the radius") {
    ModelSpace M = generate_circle(1.0 / (2.0 * M_PI), 36);
    std::vector<int> centers;
    for (int i = 0; i < 36; ++i) centers.push_back(i);
    Covering small = covering_from_centers(M.space(), centers, 0.08, 0.05);
    Covering large = covering_from_centers(M.space(), centers, 0.12, 0.05);
    NerveComplex Ks = build_nerve(small);
    NerveComplex Kl = build_nerve(large);
    REQUIRE(Ks.subcomplex_of(Kl));
    REQUIRE(!Kl.subcomplex_of(Ks));
}

TEST_CASE("nerve truncation") {
    ModelSpace M = generate_circle(1.0, 60);
    Covering cov = build_ball_covering(M.space(), 0.2, 0);
    int needed = 0;
    for (int x = 0; x < M.n; ++x)
        needed = std::max(needed, static_cast<int>(cov.support_of(x).size()) - 1);
    REQUIRE(needed >= 2);
    REQUIRE_THROWS_AS(build_nerve(cov, 1), TruncationTooLow);
    NerveComplex full = build_nerve(cov);
    NerveComplex capped = build_nerve(cov, needed);
    REQUIRE(nerves_equal(full, capped));
}

TEST_CASE("nerves_equal") {
    NerveComplex hollow, filled;
    hollow.n_vertices = filled.n_vertices = 3;
    hollow.insert({0, 1});
    hollow.insert({1, 2});
    hollow.insert({0, 2});
    filled.insert({0, 1, 2});
    REQUIRE(nerves_equal(hollow, hollow));
    REQUIRE(!nerves_equal(hollow, filled));
    NerveComplex other;
    other.n_vertices = 4;
    REQUIRE_THROWS_AS(nerves_equal(hollow, other), VertexCountMismatch);
}

TEST_CASE("stable_threshold on a constant family returns the midpoint") {
    ModelSpace M = generate_circle(1.0 / (2.0 * M_PI), 12);
    CoveringFamily fam = all_sample_family(M, 0.05, 0.10, 0.15);
    // no pairwise distance falls in [0.10, 0.15] (multiples of 1/12), so the
    // nerve never changes across the whole grid
    double r = stable_threshold(fam, 0.01, 10);
    REQUIRE(r == Catch::Approx(0.125));
    REQUIRE(nerves_equal(build_nerve(fam.at(r - 0.01)), build_nerve(fam.at(r + 0.01))));
}

TEST_CASE("stable_threshold avoids a known jump") {
    FiniteMetricSpace path =
        FiniteMetricSpace::from_rows({{0.0, 1.0, 2.0}, {1.0, 0.0, 1.0}, {2.0, 1.0, 0.0}});
    CoveringFamily fam;
    fam.r_min = 0.5;
    fam.r_max = 1.5;
    fam.at = [&path](double r) { return covering_from_centers(path, {0, 1, 2}, r, 1.0); };
    // with open balls the edges appear only for r > 1, so a stable window may
    // touch 1.0 from below but never cross it
    double r = stable_threshold(fam, 0.2, 20);
    REQUIRE((r + 0.2 <= 1.0 || r - 0.2 > 1.0));
    REQUIRE(nerves_equal(build_nerve(fam.at(r - 0.2)), build_nerve(fam.at(r + 0.2))));

    // pin the window astride the jump and the scan must give up
    CoveringFamily tight = fam;
    tight.r_min = 0.9;
    tight.r_max = 1.1;
    try {
        stable_threshold(tight, 0.09, 20);
        FAIL("expected NoStableRadius");
    } catch (const NoStableRadius& e) {
        REQUIRE(e.r_min == 0.9);
        REQUIRE(e.r_max == 1.1);
        REQUIRE(e.c0 == 0.09);
    }
}

TEST_CASE("stable_threshold rejects non-monotone families") {
    FiniteMetricSpace path =
        FiniteMetricSpace::from_rows({{0.0, 1.0, 2.0}, {1.0, 0.0, 1.0}, {2.0, 1.0, 0.0}});
    CoveringFamily fam;
    fam.r_min = 0.9;
    fam.r_max = 1.1;
    // radius decreases while the parameter grows: nerve shrinks
    fam.at = [&path](double r) { return covering_from_centers(path, {0, 1, 2}, 2.0 - r, 1.0); };
    REQUIRE_THROWS_AS(stable_threshold(fam, 0.09, 20), Error);
}

TEST_CASE("jittered circle keeps the nerve at a stable radius") {
    const double eps = 0.05;
    const double eta = eps / 50.0;  // 0.001
    const double c0 = 5.0 * eta;    // 0.005
    const double R = 1.0 / (2.0 * M_PI);

    ModelSpace plain = generate_circle(R, 36);
    CoveringFamily fam = all_sample_family(plain, eps, eps, 3.0 * eps);
    double r = stable_threshold(fam, c0, 20);
    NerveComplex K = build_nerve(fam.at(r));

    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        ModelSpace moved = generate_circle(R, 36, eta, seed);
        CoveringFamily jfam = all_sample_family(moved, eps, eps, 3.0 * eps);
        double rj = stable_threshold(jfam, c0, 20);
        REQUIRE(rj == r);  // same grid point survives the jitter
        NerveComplex Kj = build_nerve(jfam.at(rj));
        REQUIRE(nerves_equal(K, Kj));
    }
}

TEST_CASE("complex JSON round trip") {
    ModelSpace M = generate_circle(1.0, 30);
    Covering cov = build_ball_covering(M.space(), 0.3, 0);
    NerveComplex K = build_nerve(cov);
    NerveComplex back = load_complex(complex_to_json(K));
    REQUIRE(nerves_equal(K, back));
}
