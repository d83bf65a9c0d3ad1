#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "nervekit/gromov_hausdorff.hpp"
#include "nervekit/model_space.hpp"
#include "nervekit/util.hpp"

using namespace nervekit;

namespace {

FiniteMetricSpace two_point(double d) {
    return FiniteMetricSpace::from_rows({{0.0, d}, {d, 0.0}});
}

FiniteMetricSpace one_point() { return FiniteMetricSpace::from_rows({{0.0}}); }

DiscreteMap map_of(const FiniteMetricSpace& X, const FiniteMetricSpace& Y, std::vector<int> v) {
    DiscreteMap f;
    f.domain = &X;
    f.target = &Y;
    f.values = std::move(v);
    return f;
}

// random points in the unit square with the Euclidean metric
FiniteMetricSpace random_planar(int n, Rng& rng) {
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < n; ++i) pts.emplace_back(rng.next_double(), rng.next_double());
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(n),
                                          std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                std::hypot(pts[static_cast<std::size_t>(i)].first - pts[static_cast<std::size_t>(j)].first,
                           pts[static_cast<std::size_t>(i)].second - pts[static_cast<std::size_t>(j)].second);
    return FiniteMetricSpace::from_rows(rows);
}

}  // namespace

TEST_CASE("map distortion and covering defect") {
    ModelSpace M = generate_circle(1.0, 8);
    const FiniteMetricSpace& X = M.space();
    std::vector<int> id(8);
    for (int i = 0; i < 8; ++i) id[static_cast<std::size_t>(i)] = i;
    DiscreteMap ident = map_of(X, X, id);
    REQUIRE(map_distortion(ident) == 0.0);
    REQUIRE(covering_defect(ident) == 0.0);

    FiniteMetricSpace Y = two_point(1.0);
    DiscreteMap constant = map_of(Y, Y, {0, 0});
    REQUIRE(map_distortion(constant) == 1.0);
    REQUIRE(covering_defect(constant) == 1.0);

    DiscreteMap broken;
    broken.values = {0};
    REQUIRE_THROWS_AS(map_distortion(broken), DomainMismatch);
    REQUIRE_THROWS_AS(covering_defect(broken), DomainMismatch);
}

TEST_CASE("approximation defect of a map pair") {
    FiniteMetricSpace X = two_point(1.0);
    FiniteMetricSpace Y = two_point(3.0);

    // identity pair on one space is a perfect approximation
    DiscreteMap idX = map_of(X, X, {0, 1});
    REQUIRE(approximation_defect(idX, idX) == 0.0);
    ApproxPair self = make_approx_pair(idX, idX);
    REQUIRE(self.defect == 0.0);
    REQUIRE(self.f(1) == 1);

    // bijections between the two-point spaces distort every pair by exactly 2
    DiscreteMap f = map_of(X, Y, {0, 1});
    DiscreteMap g = map_of(Y, X, {0, 1});
    REQUIRE(approximation_defect(f, g) == 2.0);

    // maps must go between the same two spaces, in opposite directions
    REQUIRE_THROWS_AS(approximation_defect(f, f), DomainMismatch);
    // and must be total
    DiscreteMap partial = map_of(Y, X, {0});
    REQUIRE_THROWS_AS(approximation_defect(f, partial), DomainMismatch);
}

TEST_CASE("gh oracle on two-point spaces") {
    FiniteMetricSpace X = two_point(1.0);
    FiniteMetricSpace Y = two_point(3.0);

    GHBounds b = gh_exact_small(X, Y);
    REQUIRE(b.distortion_gh == 1.0);
    REQUIRE(b.approx_gh == 2.0);

    // symmetric in the arguments
    GHBounds r = gh_exact_small(Y, X);
    REQUIRE(r.distortion_gh == b.distortion_gh);
    REQUIRE(r.approx_gh == b.approx_gh);
}

TEST_CASE("gh oracle degenerate cases") {
    // a space against itself
    Rng rng(17);
    FiniteMetricSpace X = random_planar(4, rng);
    GHBounds self = gh_exact_small(X, X);
    REQUIRE(self.distortion_gh == 0.0);
    REQUIRE(self.approx_gh == 0.0);

    // one point against a two-point space of diameter 2
    GHBounds b = gh_exact_small(one_point(), two_point(2.0));
    REQUIRE(b.distortion_gh == 1.0);
    REQUIRE(b.approx_gh == 2.0);

    // size cap
    ModelSpace big = generate_circle(1.0, 6);
    try {
        gh_exact_small(big.space(), X);
        FAIL("expected TooLarge");
    } catch (const TooLarge& e) {
        REQUIRE(e.n == 6);
        REQUIRE(e.cap == 5);
    }
}

TEST_CASE("distortion and approximation estimates sandwich each other") {
    // the two routes are kept separate; on every pair the approximation
    // defect sits between the correspondence bound and twice it
    Rng rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        int nx = 1 + static_cast<int>(rng.next_index(4));
        int ny = 1 + static_cast<int>(rng.next_index(4));
        FiniteMetricSpace X = random_planar(nx, rng);
        FiniteMetricSpace Y = random_planar(ny, rng);
        GHBounds b = gh_exact_small(X, Y);
        REQUIRE(b.distortion_gh >= 0.0);
        REQUIRE(b.distortion_gh <= b.approx_gh + 1e-12);
        REQUIRE(b.approx_gh <= 2.0 * b.distortion_gh + 1e-12);
    }
}

TEST_CASE("lh_certificate validates an identity fixture") {
    ModelSpace M = generate_circle(1.0, 12);
    const FiniteMetricSpace& X = M.space();
    std::vector<int> id(12);
    for (int i = 0; i < 12; ++i) id[static_cast<std::size_t>(i)] = i;
    ApproxPair pair = make_approx_pair(map_of(X, X, id), map_of(X, X, id));

    const double span = 0.05;
    SampleHomotopy F = tabulate_homotopy<int, int>(id, uniform_times(span, 4),
                                                   [](int x, double) { return x; });
    LHCertificate cert = lh_certificate(pair, F, F);
    REQUIRE(cert.time_span == span);
    REQUIRE(cert.pair.defect == 0.0);
    // the identity is exactly 1-Lipschitz, and a time-constant identity track
    // is 1-Lipschitz for the L1 product metric
    REQUIRE(cert.lip_f.lipschitz == 1.0);
    REQUIRE(cert.lip_g.lipschitz == 1.0);
    REQUIRE(cert.lip_F.lipschitz == 1.0);
    REQUIRE(cert.lip_G.lipschitz == 1.0);
    REQUIRE(cert.lipschitz == 1.0);
}

TEST_CASE("lh_certificate rejects bad homotopies with witnesses") {
    ModelSpace M = generate_circle(1.0, 6);
    const FiniteMetricSpace& X = M.space();
    std::vector<int> id(6);
    for (int i = 0; i < 6; ++i) id[static_cast<std::size_t>(i)] = i;
    ApproxPair pair = make_approx_pair(map_of(X, X, id), map_of(X, X, id));
    SampleHomotopy F = tabulate_homotopy<int, int>(id, uniform_times(0.05, 2),
                                                   [](int x, double) { return x; });

    // wrong starting slice at sample 3
    SampleHomotopy bad0 = F;
    bad0.values[3][0] = 4;
    try {
        lh_certificate(pair, bad0, F);
        FAIL("expected EndpointMismatch");
    } catch (const EndpointMismatch& e) {
        REQUIRE(e.which == "F(.,0)=g(f(x))");
        REQUIRE(e.sample == 3);
        REQUIRE(e.expected == 3);
        REQUIRE(e.actual == 4);
    }

    // wrong final slice at sample 1
    SampleHomotopy bad1 = F;
    bad1.values[1][2] = 0;
    try {
        lh_certificate(pair, F, bad1);
        FAIL("expected EndpointMismatch");
    } catch (const EndpointMismatch& e) {
        REQUIRE(e.which == "G(.,span)=y");
        REQUIRE(e.sample == 1);
        REQUIRE(e.expected == 1);
        REQUIRE(e.actual == 0);
    }

    // mismatched time spans
    SampleHomotopy slow = tabulate_homotopy<int, int>(id, uniform_times(0.1, 2),
                                                      [](int x, double) { return x; });
    try {
        lh_certificate(pair, F, slow);
        FAIL("expected TimeMismatch");
    } catch (const TimeMismatch& e) {
        REQUIRE(e.span_f == 0.05);
        REQUIRE(e.span_g == 0.1);
    }

    // grid that misses samples
    SampleHomotopy sparse = tabulate_homotopy<int, int>({0, 1, 2}, uniform_times(0.05, 2),
                                                        [](int x, double) { return x; });
    REQUIRE_THROWS_AS(lh_certificate(pair, sparse, F), DomainMismatch);
}

TEST_CASE("index matching between a circle and its jitter is a tight approximation") {
    const double eta = 0.001;
    ModelSpace A = generate_circle(1.0 / (2.0 * M_PI), 36);
    ModelSpace B = generate_circle(1.0 / (2.0 * M_PI), 36, eta, 3);
    std::vector<int> id(36);
    for (int i = 0; i < 36; ++i) id[static_cast<std::size_t>(i)] = i;
    DiscreteMap f = map_of(A.space(), B.space(), id);
    DiscreteMap g = map_of(B.space(), A.space(), id);
    // each sample moves by at most eta, so every distance changes by at most 2 eta
    double defect = approximation_defect(f, g);
    REQUIRE(defect > 0.0);
    REQUIRE(defect <= 2.0 * eta);
}
