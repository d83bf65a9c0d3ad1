#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "errors.hpp"
#include "metric_space.hpp"
#include "util.hpp"

namespace nervekit {

enum class ModelKind { circle, sphere, flat_torus, interval };

inline std::string kind_name(ModelKind k) {
    switch (k) {
        case ModelKind::circle: return "circle";
        case ModelKind::sphere: return "sphere";
        case ModelKind::flat_torus: return "flat_torus";
        case ModelKind::interval: return "interval";
    }
    return "?";
}

inline ModelKind kind_from_name(const std::string& s) {
    if (s == "circle") return ModelKind::circle;
    if (s == "sphere") return ModelKind::sphere;
    if (s == "flat_torus") return ModelKind::flat_torus;
    if (s == "interval") return ModelKind::interval;
    throw UnsupportedKind(s);
}

struct ModelParams {
    double radius = 1.0;      // circle / sphere
    double a = 1.0, b = 1.0;  // flat torus side lengths
    int nu = 0, nv = 0;       // flat torus lattice dimensions
    double length = 1.0;      // interval
    double jitter = 0.0;      // circle only: uniform arc jitter amplitude
    std::uint64_t seed = 0;   // jitter seed
};

// Sampled model space with an analytic intrinsic metric and geodesic,
// contraction, and snapping oracles.  Continuum positions are interpreted per
// kind: circle = arc coordinate, sphere = unit vector, torus = (u, v),
// interval = coordinate.
class ModelSpace {
public:
    ModelKind kind;
    ModelParams params;
    int n = 0;
    std::vector<std::array<double, 3>> pos;

    const FiniteMetricSpace& space() const { return space_; }
    double dist(int i, int j) const { return space_.dist(i, j); }

    double circumference() const { return 2.0 * M_PI * params.radius; }

    double convexity_radius() const {
        switch (kind) {
            case ModelKind::circle: return circumference() / 4.0;
            case ModelKind::sphere: return M_PI * params.radius / 2.0;
            case ModelKind::flat_torus: return std::min(params.a, params.b) / 4.0;
            case ModelKind::interval: return std::numeric_limits<double>::infinity();
        }
        return 0.0;
    }

    // Smallest positive pairwise sample distance; resolution of the sampling.
    double min_gap() const { return min_gap_; }

    // Largest nearest-neighbor distance; how coarse the sampling gets.
    double mesh() const { return mesh_; }

    // Point at `frac` in [0, 1] of the way from sample x to sample y along a
    // shortest geodesic.  Ties between the two arcs pick the positive
    // direction, deterministically.
    std::array<double, 3> geodesic_position(int x, int y, double frac) const {
        const auto& A = pos[static_cast<std::size_t>(x)];
        const auto& B = pos[static_cast<std::size_t>(y)];
        switch (kind) {
            case ModelKind::circle: {
                const double circ = circumference();
                double delta = wrap_signed(B[0] - A[0], circ);
                return {wrap_mod(A[0] + frac * delta, circ), 0.0, 0.0};
            }
            case ModelKind::interval:
                return {A[0] + frac * (B[0] - A[0]), 0.0, 0.0};
            case ModelKind::flat_torus: {
                double du = wrap_signed(B[0] - A[0], params.a);
                double dv = wrap_signed(B[1] - A[1], params.b);
                return {wrap_mod(A[0] + frac * du, params.a), wrap_mod(A[1] + frac * dv, params.b), 0.0};
            }
            case ModelKind::sphere: {
                double dot = A[0] * B[0] + A[1] * B[1] + A[2] * B[2];
                std::array<double, 3> cr = {A[1] * B[2] - A[2] * B[1], A[2] * B[0] - A[0] * B[2],
                                            A[0] * B[1] - A[1] * B[0]};
                double sn = std::sqrt(cr[0] * cr[0] + cr[1] * cr[1] + cr[2] * cr[2]);
                double theta = std::atan2(sn, dot);
                if (theta < 1e-15) return A;
                std::array<double, 3> Bd = B;
                if (sn < 1e-12) {
                    // Near-antipodal: route through a fixed auxiliary axis.
                    Bd = orthogonal_unit(A);
                    theta = M_PI / 2.0;
                    frac = frac * 2.0;  // two quarter arcs; only the first matters for snapping
                    if (frac > 1.0) frac = 1.0;
                }
                const double s = std::sin(theta);
                const double ca = std::sin((1.0 - frac) * theta) / s;
                const double cb = std::sin(frac * theta) / s;
                std::array<double, 3> out = {ca * A[0] + cb * Bd[0], ca * A[1] + cb * Bd[1],
                                             ca * A[2] + cb * Bd[2]};
                double nrm = std::sqrt(out[0] * out[0] + out[1] * out[1] + out[2] * out[2]);
                for (auto& v : out) v /= nrm;
                return out;
            }
        }
        return A;
    }

    // Distance from a continuum position to sample i.
    double position_dist(const std::array<double, 3>& g, int i) const {
        const auto& P = pos[static_cast<std::size_t>(i)];
        switch (kind) {
            case ModelKind::circle: {
                const double circ = circumference();
                double d = std::fabs(wrap_signed(g[0] - P[0], circ));
                return d;
            }
            case ModelKind::interval:
                return std::fabs(g[0] - P[0]);
            case ModelKind::flat_torus: {
                double du = wrap_signed(g[0] - P[0], params.a);
                double dv = wrap_signed(g[1] - P[1], params.b);
                return std::sqrt(du * du + dv * dv);
            }
            case ModelKind::sphere: {
                double dot = g[0] * P[0] + g[1] * P[1] + g[2] * P[2];
                std::array<double, 3> cr = {g[1] * P[2] - g[2] * P[1], g[2] * P[0] - g[0] * P[2],
                                            g[0] * P[1] - g[1] * P[0]};
                double sn = std::sqrt(cr[0] * cr[0] + cr[1] * cr[1] + cr[2] * cr[2]);
                return params.radius * std::atan2(sn, dot);
            }
        }
        return 0.0;
    }

    // Nearest sample to a continuum position, ties to the lowest index.
    int snap(const std::array<double, 3>& g) const {
        int best = 0;
        double bd = position_dist(g, 0);
        for (int i = 1; i < n; ++i) {
            double d = position_dist(g, i);
            if (d < bd) { bd = d; best = i; }
        }
        return best;
    }

    // Nearest sample among members only.
    int snap_within(const std::array<double, 3>& g, const std::vector<int>& members) const {
        int best = -1;
        double bd = std::numeric_limits<double>::infinity();
        for (int i : members) {
            double d = position_dist(g, i);
            if (d < bd) { bd = d; best = i; }
        }
        return best;
    }

    void finalize() {
        const std::size_t nn = static_cast<std::size_t>(n);
        std::vector<double> flat(nn * nn, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                double d = analytic_dist(i, j);
                flat[static_cast<std::size_t>(i) * nn + j] = d;
                flat[static_cast<std::size_t>(j) * nn + i] = d;
            }
        space_ = FiniteMetricSpace(std::move(flat), n);
        min_gap_ = std::numeric_limits<double>::infinity();
        mesh_ = 0.0;
        for (int i = 0; i < n; ++i) {
            double nearest = std::numeric_limits<double>::infinity();
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                double d = space_.dist(i, j);
                if (d > 0.0) { min_gap_ = std::min(min_gap_, d); nearest = std::min(nearest, d); }
            }
            if (std::isfinite(nearest)) mesh_ = std::max(mesh_, nearest);
        }
        if (!std::isfinite(min_gap_)) min_gap_ = 1.0;
    }

private:
    double analytic_dist(int i, int j) const {
        if (i == j) return 0.0;
        return position_dist(pos[static_cast<std::size_t>(i)], j);
    }

    static double wrap_mod(double v, double period) {
        double r = std::fmod(v, period);
        if (r < 0.0) r += period;
        return r;
    }

    // Signed representative in (-period/2, period/2]; exact ties go positive.
    static double wrap_signed(double v, double period) {
        double r = wrap_mod(v, period);
        if (r > period / 2.0) r -= period;
        return r;
    }

    static std::array<double, 3> orthogonal_unit(const std::array<double, 3>& a) {
        std::array<double, 3> e = std::fabs(a[0]) < 0.9 ? std::array<double, 3>{1, 0, 0}
                                                        : std::array<double, 3>{0, 1, 0};
        std::array<double, 3> c = {a[1] * e[2] - a[2] * e[1], a[2] * e[0] - a[0] * e[2],
                                   a[0] * e[1] - a[1] * e[0]};
        double nrm = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
        return {c[0] / nrm, c[1] / nrm, c[2] / nrm};
    }

    FiniteMetricSpace space_;
    double min_gap_ = 1.0;
    double mesh_ = 0.0;
};

inline ModelSpace generate_circle(double radius, int n, double jitter = 0.0, std::uint64_t seed = 0) {
    if (n < 1) throw EmptySpace("circle needs at least one sample");
    ModelSpace M;
    M.kind = ModelKind::circle;
    M.params.radius = radius;
    M.params.jitter = jitter;
    M.params.seed = seed;
    M.n = n;
    const double circ = 2.0 * M_PI * radius;
    Rng rng(seed);
    M.pos.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double s = circ * static_cast<double>(i) / n;
        if (jitter > 0.0) s += rng.next_double(-jitter, jitter);
        s = std::fmod(s, circ);
        if (s < 0.0) s += circ;
        M.pos.push_back({s, 0.0, 0.0});
    }
    M.finalize();
    return M;
}

inline ModelSpace generate_sphere(double radius, int n) {
    if (n < 1) throw EmptySpace("sphere needs at least one sample");
    ModelSpace M;
    M.kind = ModelKind::sphere;
    M.params.radius = radius;
    M.n = n;
    const double golden = M_PI * (3.0 - std::sqrt(5.0));  // Fibonacci lattice step
    M.pos.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double z = 1.0 - 2.0 * (i + 0.5) / n;
        double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        double phi = golden * i;
        M.pos.push_back({r * std::cos(phi), r * std::sin(phi), z});
    }
    M.finalize();
    return M;
}

inline ModelSpace generate_flat_torus(double a, double b, int nu, int nv) {
    if (nu < 1 || nv < 1) throw EmptySpace("torus lattice needs positive dimensions");
    ModelSpace M;
    M.kind = ModelKind::flat_torus;
    M.params.a = a;
    M.params.b = b;
    M.params.nu = nu;
    M.params.nv = nv;
    M.n = nu * nv;
    M.pos.reserve(static_cast<std::size_t>(M.n));
    for (int i = 0; i < nu; ++i)
        for (int j = 0; j < nv; ++j) M.pos.push_back({a * static_cast<double>(i) / nu, b * static_cast<double>(j) / nv, 0.0});
    M.finalize();
    return M;
}

inline ModelSpace generate_interval(double length, int n) {
    if (n < 1) throw EmptySpace("interval needs at least one sample");
    ModelSpace M;
    M.kind = ModelKind::interval;
    M.params.length = length;
    M.n = n;
    M.pos.reserve(static_cast<std::size_t>(n));
    if (n == 1) {
        M.pos.push_back({0.0, 0.0, 0.0});
    } else {
        for (int i = 0; i < n; ++i) M.pos.push_back({length * static_cast<double>(i) / (n - 1), 0.0, 0.0});
    }
    M.finalize();
    return M;
}

// Chebyshev center of a sample subset: the member minimizing the max distance
// to the subset, ties to the lowest index.
inline int chebyshev_center(const FiniteMetricSpace& X, const std::vector<int>& subset) {
    if (subset.empty()) throw EmptySpace("chebyshev center of an empty set");
    int best = subset.front();
    double bd = std::numeric_limits<double>::infinity();
    for (int c : subset) {
        double worst = 0.0;
        for (int y : subset) worst = std::max(worst, X.dist(c, y));
        if (worst < bd) { bd = worst; best = c; }
    }
    return best;
}

// Geodesic contraction of a sample subset toward a center.  Every orbit is a
// precomputed chain of member samples with strictly decreasing distance to
// the center, walked at the uniform speed that makes the farthest point
// arrive at time eps/10; x arrives at (eps/10) * d(x,c) / max_y d(y,c).
class ContractionOracle {
public:
    ContractionOracle(const ModelSpace& M, std::vector<int> element, int center, double eps)
        : model_(&M), element_(std::move(element)), center_(center), eps_(eps) {
        std::sort(element_.begin(), element_.end());
        if (!std::binary_search(element_.begin(), element_.end(), center_))
            throw BadContraction("contraction center is not a member of the element");
        r_max_ = 0.0;
        for (int y : element_) r_max_ = std::max(r_max_, M.dist(center_, y));
    }

    const std::vector<int>& element() const { return element_; }
    int center() const { return center_; }
    double eps() const { return eps_; }
    double radius() const { return r_max_; }

    double arrival(int x) const {
        if (r_max_ == 0.0) return 0.0;
        return (eps_ / 10.0) * model_->dist(x, center_) / r_max_;
    }

    // phi(x, t): exact identity at t = 0, exactly the center for t >= arrival
    // (in particular for all t >= eps/10), monotone approach in between.
    int eval(int x, double t) const {
        if (!std::binary_search(element_.begin(), element_.end(), x))
            throw DomainMismatch("contraction queried outside its element");
        if (t <= 0.0) return x;
        const double a = arrival(x);
        if (t >= a || a == 0.0) return center_;
        const Chain& ch = chain(x);
        if (ch.total == 0.0) return center_;
        const double target = (t / a) * ch.total;
        // Latest chain point not past the target arc position.
        std::size_t k = 0;
        while (k + 1 < ch.nodes.size() && ch.cum[k + 1] <= target) ++k;
        // Round to the nearer of k, k+1; ties stay at k so t -> index is monotone.
        if (k + 1 < ch.nodes.size() && (ch.cum[k + 1] - target) < (target - ch.cum[k])) ++k;
        return ch.nodes[k];
    }

private:
    struct Chain {
        std::vector<int> nodes;   // element samples, d(node, center) strictly decreasing
        std::vector<double> cum;  // cumulative metric length
        double total = 0.0;
    };

    const Chain& chain(int x) const {
        auto it = chains_.find(x);
        if (it != chains_.end()) return it->second;
        Chain ch;
        ch.nodes.push_back(x);
        ch.cum.push_back(0.0);
        const double d = model_->dist(x, center_);
        if (d > 0.0) {
            const double step = std::max(model_->min_gap() / 2.0, d / 4096.0);
            const int m = static_cast<int>(std::ceil(d / step));
            double last_dc = d;
            for (int k = 1; k <= m; ++k) {
                auto g = model_->geodesic_position(x, center_, static_cast<double>(k) / m);
                int s = model_->snap_within(g, element_);
                if (s == ch.nodes.back()) continue;
                const double dc = model_->dist(s, center_);
                if (dc < last_dc) {
                    ch.cum.push_back(ch.cum.back() + model_->dist(ch.nodes.back(), s));
                    ch.nodes.push_back(s);
                    last_dc = dc;
                }
            }
            if (ch.nodes.back() != center_) {
                ch.cum.push_back(ch.cum.back() + model_->dist(ch.nodes.back(), center_));
                ch.nodes.push_back(center_);
            }
        }
        ch.total = ch.cum.back();
        return chains_.emplace(x, std::move(ch)).first->second;
    }

    const ModelSpace* model_;
    std::vector<int> element_;
    int center_;
    double eps_;
    double r_max_;
    mutable std::map<int, Chain> chains_;  // lazy; not thread-safe
};

// Metric ball on the sample with an explicit member set, used for enclosing
// balls and nested families.
struct MetricBall {
    int center = -1;
    double radius = 0.0;
    std::vector<int> element;  // sorted
    std::vector<char> member;
};

inline MetricBall sample_ball(const ModelSpace& M, int center, double radius) {
    MetricBall b;
    b.center = center;
    b.radius = radius;
    b.member.assign(static_cast<std::size_t>(M.n), 0);
    for (int y = 0; y < M.n; ++y) {
        if (M.dist(center, y) < radius) {
            b.element.push_back(y);
            b.member[static_cast<std::size_t>(y)] = 1;
        }
    }
    return b;
}

// Smallest sample-centered ball containing `points`, padded by `pad` plus a
// strictness bump so every listed point is strictly inside.  Throws when the
// needed radius reaches the convexity radius of the model.
inline MetricBall enclosing_ball(const ModelSpace& M, const std::vector<int>& points,
                                 double pad = 0.0) {
    if (points.empty()) throw EmptySpace("enclosing ball of an empty set");
    int best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (int c = 0; c < M.n; ++c) {
        double worst = 0.0;
        for (int y : points) worst = std::max(worst, M.dist(c, y));
        if (worst < bd) { bd = worst; best = c; }
    }
    const double radius = bd + pad + 1e-9 * (1.0 + bd);
    if (radius >= M.convexity_radius()) throw NoContainingBall(radius, M.convexity_radius());
    return sample_ball(M, best, radius);
}

}  // namespace nervekit
