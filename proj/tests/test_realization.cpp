#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "nervekit/cone.hpp"
#include "nervekit/model_space.hpp"
#include "nervekit/realization.hpp"
#include "nervekit/util.hpp"

using namespace nervekit;

namespace {

RealizationPoint pt(std::vector<std::pair<int, double>> w, double scale) {
    return make_point(std::move(w), scale);
}

}  // namespace

TEST_CASE("make_point sorts, merges, and drops exact zeros") {
    RealizationPoint p = pt({{3, 0.25}, {1, 0.5}, {3, 0.25}, {2, 0.0}}, 0.05);
    REQUIRE(p.w.size() == 2);
    REQUIRE(p.w[0] == std::make_pair(1, 0.5));
    REQUIRE(p.w[1] == std::make_pair(3, 0.5));
    REQUIRE(p.support() == Simplex{1, 3});
    REQUIRE(p.weight(3) == 0.5);
    REQUIRE(p.weight(2) == 0.0);
    REQUIRE(p.weight_sum() == 1.0);

    RealizationPoint v = vertex_point(7, 0.05);
    REQUIRE(v.w.size() == 1);
    REQUIRE(v.weight(7) == 1.0);

    RealizationPoint b = barycenter_point({0, 2, 5}, 0.05);
    REQUIRE(b.support() == Simplex{0, 2, 5});
    REQUIRE(b.weight(2) == 1.0 / 3.0);
}

TEST_CASE("ambient distance matches the embedded Euclidean values") {
    const double eps = 0.05;
    RealizationPoint a = vertex_point(0, eps);
    RealizationPoint b = vertex_point(1, eps);

    REQUIRE(ambient_distance(a, a) == 0.0);
    // distinct vertices are basis vectors of norm eps
    REQUIRE(ambient_distance(a, b) == eps * std::sqrt(2.0));
    REQUIRE(ambient_distance(a, b) == ambient_distance(b, a));

    // vertex to barycenter of a k-simplex
    for (int k = 1; k <= 3; ++k) {
        Simplex sigma;
        for (int v = 0; v <= k; ++v) sigma.push_back(v);
        const double c = 1.0 / static_cast<double>(k + 1);
        const double want = eps * std::sqrt((1.0 - c) * (1.0 - c) + k * c * c);
        double got = ambient_distance(vertex_point(0, eps), barycenter_point(sigma, eps));
        REQUIRE(got == Catch::Approx(want).margin(1e-15));
    }

    try {
        ambient_distance(vertex_point(0, 0.05), vertex_point(0, 0.1));
        FAIL("expected ScaleMismatch");
    } catch (const ScaleMismatch& e) {
        REQUIRE(e.a == 0.05);
        REQUIRE(e.b == 0.1);
    }
}

TEST_CASE("convex combination is exact at endpoints and for equal operands") {
    const double eps = 0.05;
    RealizationPoint a = pt({{0, 0.25}, {1, 0.75}}, eps);
    RealizationPoint b = pt({{1, 0.5}, {4, 0.5}}, eps);

    REQUIRE(convex_combination(a, b, 0.0) == a);
    REQUIRE(convex_combination(a, b, 1.0) == b);
    REQUIRE(convex_combination(a, a, 0.3) == a);

    RealizationPoint m = convex_combination(a, b, 0.25);
    REQUIRE(m.support() == Simplex{0, 1, 4});
    REQUIRE(m.weight(0) == Catch::Approx(0.1875).margin(1e-15));
    REQUIRE(m.weight(1) == Catch::Approx(0.6875).margin(1e-15));
    REQUIRE(m.weight(4) == Catch::Approx(0.125).margin(1e-15));
    REQUIRE(m.weight_sum() == Catch::Approx(1.0).margin(1e-15));

    REQUIRE_THROWS_AS(convex_combination(a, pt({{0, 1.0}}, 0.1), 0.5), ScaleMismatch);
}

TEST_CASE("barycentric coordinates round trip through the chart") {
    const double eps = 0.05;
    Simplex sigma{1, 4, 7};
    RealizationPoint p = pt({{1, 0.2}, {7, 0.8}}, eps);
    std::vector<double> b = barycentric_over(p, sigma);
    REQUIRE(b == std::vector<double>{0.2, 0.0, 0.8});
    REQUIRE(from_barycentric(sigma, b, eps) == p);

    // support outside the chart
    REQUIRE_THROWS_AS(barycentric_over(pt({{2, 1.0}}, eps), sigma), DomainMismatch);
}

TEST_CASE("barycentric split passes through the barycenter") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t k1 = 2 + rng.next_index(3);  // simplex dims 1..3
        std::vector<double> b(k1);
        double s = 0.0;
        for (double& v : b) { v = 0.01 + rng.next_double(); s += v; }
        for (double& v : b) v /= s;

        BarycentricSplit sp = split_through_barycenter(b);
        double m = *std::min_element(b.begin(), b.end());
        REQUIRE(sp.t == static_cast<double>(k1) * m);
        if (sp.t < 1.0) {
            REQUIRE(*std::min_element(sp.y.begin(), sp.y.end()) == 0.0);
            double ys = 0.0;
            for (double v : sp.y) ys += v;
            REQUIRE(ys == Catch::Approx(1.0).margin(1e-15));
        }
        std::vector<double> back = recompose_split(sp);
        for (std::size_t i = 0; i < k1; ++i)
            REQUIRE(back[i] == Catch::Approx(b[i]).margin(1e-12));
    }

    // boundary input is returned unchanged with t = 0
    std::vector<double> edge{0.0, 0.3, 0.7};
    BarycentricSplit sp = split_through_barycenter(edge);
    REQUIRE(sp.t == 0.0);
    REQUIRE(sp.y == edge);

    // the barycenter itself has t = 1
    std::vector<double> center{0.25, 0.25, 0.25, 0.25};
    REQUIRE(split_through_barycenter(center).t == 1.0);
}

TEST_CASE("radial projection lands on the target exactly") {
    const double eps = 0.05;

    // height zero is already on the target
    {
        std::vector<double> b{0.4, 0.6};
        RadialImage r = radial_projection(b, 0.0, eps);
        REQUIRE(r.psi == b);
        REQUIRE(r.u == 0.0);
    }
    // wall points are already on the target, at any height
    {
        std::vector<double> b{0.0, 0.55, 0.45};
        RadialImage r = radial_projection(b, 0.03, eps);
        REQUIRE(r.psi == b);
        REQUIRE(r.u == 0.03);
    }
    // the vertical ray over the barycenter hits the base
    {
        std::vector<double> b{0.5, 0.5};
        RadialImage r = radial_projection(b, 0.03, eps);
        REQUIRE(r.psi == b);
        REQUIRE(r.u == 0.0);
    }
    // hand-computed wall hit: (0.9, 0.1) at t = 0.04 meets wall 1 at height 0.025
    {
        RadialImage r = radial_projection({0.9, 0.1}, 0.04, eps);
        REQUIRE(r.psi[1] == 0.0);
        REQUIRE(r.psi[0] == Catch::Approx(1.0).margin(1e-15));
        REQUIRE(r.u == Catch::Approx(0.025).margin(1e-15));
    }
    // hand-computed base hit: (0.9, 0.1) at t = 0.01 projects to the base
    {
        RadialImage r = radial_projection({0.9, 0.1}, 0.01, eps);
        REQUIRE(r.u == 0.0);
        REQUIRE(r.psi[0] == Catch::Approx(0.5 + (10.0 / 9.0) * 0.4).margin(1e-12));
        REQUIRE(r.psi[0] + r.psi[1] == Catch::Approx(1.0).margin(1e-15));
    }

    // every interior query lands on the target and projecting again is a no-op
    Rng rng(23);
    for (int trial = 0; trial < 500; ++trial) {
        std::size_t k1 = 2 + rng.next_index(3);
        std::vector<double> b(k1);
        double s = 0.0;
        for (double& v : b) { v = 0.05 + rng.next_double(); s += v; }
        for (double& v : b) v /= s;
        double t = rng.next_double(0.0, eps);

        RadialImage r = radial_projection(b, t, eps);
        double mn = *std::min_element(r.psi.begin(), r.psi.end());
        REQUIRE(mn >= 0.0);
        REQUIRE((r.u == 0.0 || mn == 0.0));  // base or wall, hit exactly
        REQUIRE(r.u >= 0.0);
        REQUIRE(r.u <= eps);
        double sum = 0.0;
        for (double v : r.psi) sum += v;
        REQUIRE(sum == Catch::Approx(1.0).margin(1e-15));

        RadialImage again = radial_projection(r.psi, r.u, eps);
        REQUIRE(again.psi == r.psi);
        REQUIRE(again.u == r.u);
    }

    REQUIRE_THROWS_AS(radial_projection({0.5, 0.5}, 2.0 * eps, eps), ApexInput);
    REQUIRE_THROWS_AS(radial_projection({1.0}, 0.01, eps), DomainMismatch);
}

TEST_CASE("length distance runs along the complex") {
    const double eps = 0.05;
    NerveComplex path;
    path.n_vertices = 3;
    path.insert({0, 1});
    path.insert({1, 2});

    // within a common simplex the length metric is the straight chord
    RealizationPoint a = pt({{0, 0.3}, {1, 0.7}}, eps);
    RealizationPoint b = pt({{0, 0.9}, {1, 0.1}}, eps);
    REQUIRE(length_distance(path, a, b) == ambient_distance(a, b));
    REQUIRE(length_distance(path, a, a) == 0.0);

    // opposite ends of the path must pass through the middle vertex
    double across = length_distance(path, vertex_point(0, eps), vertex_point(2, eps));
    REQUIRE(across == Catch::Approx(2.0 * eps * std::sqrt(2.0)).margin(1e-12));
    REQUIRE(across >= ambient_distance(vertex_point(0, eps), vertex_point(2, eps)));

    // a shared vertex is a single graph node: two edges at order 3 give 7 nodes
    SubdivisionGraph g(path, 3, eps);
    REQUIRE(g.n_nodes() == 7);
    REQUIRE_THROWS_AS(g.query(vertex_point(0, 0.1), vertex_point(2, 0.1)), ScaleMismatch);

    NerveComplex isolated;
    isolated.n_vertices = 2;
    isolated.insert({0});
    isolated.insert({1});
    REQUIRE_THROWS_AS(length_distance(isolated, vertex_point(0, eps), vertex_point(1, eps)),
                      Disconnected);

    // query point outside every simplex
    REQUIRE_THROWS_AS(length_distance(path, pt({{0, 0.5}, {2, 0.5}}, eps), vertex_point(0, eps)),
                      DomainMismatch);
}

TEST_CASE("cone metric closed forms") {
    ModelSpace M = generate_circle(1.0, 60);
    const FiniteMetricSpace& X = M.space();
    const double eps = 0.35;

    // apex identification
    ConePoint apex = ConePoint::apex(eps);
    REQUIRE(ConePoint::make(17, eps, eps).base == -1);
    REQUIRE(ConePoint::make(17, eps, eps).same_as(apex, eps));
    REQUIRE(apex.is_apex(eps));
    REQUIRE(cone_distance(apex, ConePoint::make(3, eps, eps), eps, X) == 0.0);

    for (int x : {0, 7, 29}) {
        for (double t : {0.0, 0.1, 0.2, 0.34}) {
            ConePoint p = ConePoint::make(x, t, eps);
            // vertical segments have length equal to the height difference
            REQUIRE(cone_distance(ConePoint::make(x, 0.0, eps), p, eps, X) ==
                    Catch::Approx(t).margin(1e-12));
            // the apex sits at distance eps - t
            REQUIRE(cone_distance(p, apex, eps, X) == Catch::Approx(eps - t).margin(1e-15));
            REQUIRE(cone_distance(p, p, eps, X) == 0.0);
        }
    }

    // base slice: chord length of the unrolled sector, 2 eps sin(d/2)
    for (int x : {0, 11}) {
        for (int y : {5, 23, 41}) {
            double d = X.dist(x, y);
            double want = 2.0 * eps * std::sin(0.5 * std::min(M_PI, d));
            REQUIRE(cone_distance(ConePoint::make(x, 0.0, eps), ConePoint::make(y, 0.0, eps), eps,
                                  X) == Catch::Approx(want).margin(1e-12));
        }
    }

    REQUIRE_FALSE(ConePoint::make(2, 0.1, eps).same_as(ConePoint::make(3, 0.1, eps), eps));
    REQUIRE_FALSE(ConePoint::make(2, 0.1, eps).same_as(apex, eps));
}

TEST_CASE("cone metric satisfies the triangle inequality") {
    ModelSpace M = generate_circle(1.0, 97);
    const FiniteMetricSpace& X = M.space();
    const double eps = 0.35;

    Rng rng(5);
    auto draw = [&]() {
        int base = static_cast<int>(rng.next_index(static_cast<std::size_t>(M.n)));
        double t = rng.next_double(0.0, eps);
        std::size_t roll = rng.next_index(10);
        if (roll == 0) t = 0.0;
        if (roll == 1) t = eps;  // apex
        return ConePoint::make(base, t, eps);
    };
    for (int trial = 0; trial < 10000; ++trial) {
        ConePoint a = draw(), b = draw(), c = draw();
        double ab = cone_distance(a, b, eps, X);
        double bc = cone_distance(b, c, eps, X);
        double ac = cone_distance(a, c, eps, X);
        REQUIRE(ac <= ab + bc + 1e-9);
        REQUIRE(ab == cone_distance(b, a, eps, X));
    }
}

TEST_CASE("cylinder metric is the L2 product") {
    ModelSpace M = generate_circle(1.0, 60);
    const FiniteMetricSpace& X = M.space();
    const double eps = 0.35;

    CylinderPoint p{pt({{0, 0.5}, {1, 0.5}}, eps), ConePoint::make(4, 0.1, eps)};
    CylinderPoint q{vertex_point(1, eps), ConePoint::make(9, 0.0, eps)};

    double dr = ambient_distance(p.theta, q.theta);
    double dc = cone_distance(p.c, q.c, eps, X);
    double d = cylinder_distance(p, q, eps, X);
    REQUIRE(d == Catch::Approx(std::sqrt(dr * dr + dc * dc)).margin(1e-15));
    REQUIRE(d == cylinder_distance(q, p, eps, X));
    REQUIRE(cylinder_distance(p, p, eps, X) == 0.0);
    REQUIRE(p == p);
    REQUIRE_FALSE(p == q);
}
