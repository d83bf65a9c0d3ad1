#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "errors.hpp"
#include "util.hpp"

namespace nervekit {

inline constexpr double kTriangleTol = 1e-12;

// Finite metric space given by a full distance matrix.  Row-major storage;
// labels are optional display names.
class FiniteMetricSpace {
public:
    FiniteMetricSpace() = default;

    FiniteMetricSpace(std::vector<double> dist, int n, std::vector<std::string> labels = {})
        : n_(n), dist_(std::move(dist)), labels_(std::move(labels)) {
        if (labels_.empty()) {
            labels_.reserve(static_cast<std::size_t>(n_));
            for (int i = 0; i < n_; ++i) labels_.push_back("p" + std::to_string(i));
        }
    }

    static FiniteMetricSpace from_rows(const std::vector<std::vector<double>>& rows,
                                       std::vector<std::string> labels = {}) {
        const int n = static_cast<int>(rows.size());
        std::vector<double> flat;
        flat.reserve(static_cast<std::size_t>(n) * n);
        for (const auto& r : rows) {
            if (static_cast<int>(r.size()) != n) throw MetricFormatError("distance matrix is not square");
            flat.insert(flat.end(), r.begin(), r.end());
        }
        return FiniteMetricSpace(std::move(flat), n, std::move(labels));
    }

    int size() const { return n_; }
    double dist(int i, int j) const { return dist_[static_cast<std::size_t>(i) * n_ + j]; }
    const std::vector<double>& raw() const { return dist_; }
    const std::vector<std::string>& labels() const { return labels_; }

    double diameter() const {
        double d = 0.0;
        for (double v : dist_) d = std::max(d, v);
        return d;
    }

private:
    int n_ = 0;
    std::vector<double> dist_;
    std::vector<std::string> labels_;
};

// Checks symmetry, zero diagonal, nonnegativity, and the triangle inequality
// (absolute tolerance kTriangleTol).  On a triangle failure the worst triple
// (i, k, j) with d(i,k) > d(i,j) + d(j,k) is reported.
inline void validate_metric(const FiniteMetricSpace& X, double tol = kTriangleTol) {
    const int n = X.size();
    if (n == 0) throw EmptySpace("metric space has no points");
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double d = X.dist(i, j);
            if (!std::isfinite(d)) throw MetricFormatError("dist[" + std::to_string(i) + "][" + std::to_string(j) + "] is not finite");
            if (d < 0.0) throw NegativeEntry(i, j, d);
            if (X.dist(j, i) != d) throw AsymmetricMatrix(i, j, d, X.dist(j, i));
        }
        if (X.dist(i, i) != 0.0) throw MetricFormatError("dist[" + std::to_string(i) + "][" + std::to_string(i) + "] must be 0");
    }
    double worst = 0.0;
    int wi = -1, wk = -1, wj = -1;
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            const double dik = X.dist(i, k);
            for (int j = 0; j < n; ++j) {
                const double excess = dik - (X.dist(i, j) + X.dist(j, k));
                if (excess > worst) {
                    worst = excess;
                    wi = i; wk = k; wj = j;
                }
            }
        }
    }
    if (worst > tol) throw TriangleViolation(wi, wk, wj, worst);
}

// Maximal delta-discrete subset: greedy first-fit over a seeded shuffle of the
// points.  Output is sorted; points are pairwise >= delta apart and every
// point of X lies within < delta of the result (maximality).
inline std::vector<int> maximal_discrete_set(const FiniteMetricSpace& X, double delta,
                                             std::uint64_t seed) {
    if (X.size() == 0) throw EmptySpace("cannot build a net on an empty space");
    if (!(delta > 0.0)) throw MetricFormatError("net separation must be positive");
    std::vector<int> picked;
    for (int cand : shuffled_indices(static_cast<std::size_t>(X.size()), seed)) {
        bool ok = true;
        for (int p : picked) {
            if (X.dist(cand, p) < delta) { ok = false; break; }
        }
        if (ok) picked.push_back(cand);
    }
    std::sort(picked.begin(), picked.end());
    return picked;
}

// Covering of X by metric balls: element j is the open ball of `radius`
// around centers[j], stored as a sorted index list plus a membership bitmap.
struct Covering {
    const FiniteMetricSpace* space = nullptr;
    std::vector<int> centers;
    double radius = 0.0;
    double scale = 0.0;                      // the epsilon the covering was built for
    std::vector<std::vector<int>> elements;  // sorted sample indices per element
    std::vector<std::vector<char>> member;   // member[j][x] = 1 iff x in element j

    int n_elements() const { return static_cast<int>(elements.size()); }

    bool contains(int j, int x) const { return member[static_cast<std::size_t>(j)][static_cast<std::size_t>(x)] != 0; }

    // Elements containing sample x, ascending.
    std::vector<int> support_of(int x) const {
        std::vector<int> s;
        for (int j = 0; j < n_elements(); ++j)
            if (contains(j, x)) s.push_back(j);
        return s;
    }

    // True iff the elements indexed by `simplex` share a sample point: the
    // defining predicate of the sample nerve.
    bool common_point(const std::vector<int>& simplex) const {
        const int n = space->size();
        for (int x = 0; x < n; ++x) {
            bool all = true;
            for (int j : simplex) {
                if (!contains(j, x)) { all = false; break; }
            }
            if (all) return true;
        }
        return false;
    }

    // Sorted sample indices of the intersection of the given elements.
    std::vector<int> intersection(const std::vector<int>& simplex) const {
        std::vector<int> out;
        const int n = space->size();
        for (int x = 0; x < n; ++x) {
            bool all = true;
            for (int j : simplex) {
                if (!contains(j, x)) { all = false; break; }
            }
            if (all) out.push_back(x);
        }
        return out;
    }

    // Max over j of the number of elements meeting element j (self included).
    int max_pairwise_overlap() const {
        const int m = n_elements();
        int best = 0;
        for (int j = 0; j < m; ++j) {
            int cnt = 0;
            for (int i = 0; i < m; ++i) {
                bool meets = false;
                for (int x : elements[static_cast<std::size_t>(i)]) {
                    if (contains(j, x)) { meets = true; break; }
                }
                if (meets) ++cnt;
            }
            best = std::max(best, cnt);
        }
        return best;
    }

    // Max over samples x of the number of elements containing x.  Bounds the
    // nerve dimension: dim <= max_point_overlap() - 1.
    int max_point_overlap() const {
        int best = 0;
        for (int x = 0; x < space->size(); ++x) {
            int cnt = 0;
            for (int j = 0; j < n_elements(); ++j)
                if (contains(j, x)) ++cnt;
            best = std::max(best, cnt);
        }
        return best;
    }
};

inline Covering covering_from_centers(const FiniteMetricSpace& X, std::vector<int> centers,
                                      double radius, double scale) {
    Covering cov;
    cov.space = &X;
    cov.centers = std::move(centers);
    cov.radius = radius;
    cov.scale = scale;
    const int n = X.size();
    cov.elements.reserve(cov.centers.size());
    cov.member.reserve(cov.centers.size());
    for (int c : cov.centers) {
        std::vector<int> elem;
        std::vector<char> bits(static_cast<std::size_t>(n), 0);
        for (int x = 0; x < n; ++x) {
            if (X.dist(c, x) < radius) {  // open balls
                elem.push_back(x);
                bits[static_cast<std::size_t>(x)] = 1;
            }
        }
        cov.elements.push_back(std::move(elem));
        cov.member.push_back(std::move(bits));
    }
    return cov;
}

// Good covering built from an eps/2-net: elements are open balls of radius
// 2*eps around the net points.  Every eps-ball around a sample is then inside
// some element (checked), and the union covers X.
inline Covering build_ball_covering(const FiniteMetricSpace& X, double eps, std::uint64_t seed) {
    if (X.size() == 0) throw EmptySpace("cannot cover an empty space");
    if (!(eps > 0.0)) throw MetricFormatError("covering scale must be positive");
    std::vector<int> centers = maximal_discrete_set(X, eps / 2.0, seed);
    Covering cov = covering_from_centers(X, std::move(centers), 2.0 * eps, eps);
    // Net maximality gives a center within eps/2 of every sample, so the
    // eps-ball around x sits inside that center's 2*eps-ball.
    for (int x = 0; x < X.size(); ++x) {
        bool ok = false;
        for (int c : cov.centers) {
            if (X.dist(c, x) < eps / 2.0 || c == x) { ok = true; break; }
        }
        if (!ok) throw MetricFormatError("net is not maximal: sample " + std::to_string(x) + " is uncovered");
    }
    return cov;
}

// Greedy doubling estimate: for each radius r, the max over centers x of the
// number of r/2-balls a first-fit greedy needs to cover the closed ball
// B(x, r).  Closed balls; an upper bound on the optimal count.
inline std::vector<int> doubling_constant(const FiniteMetricSpace& X, const std::vector<double>& radii) {
    if (X.size() == 0) throw EmptySpace("cannot measure doubling on an empty space");
    const int n = X.size();
    std::vector<int> out;
    out.reserve(radii.size());
    for (double r : radii) {
        int worst = 0;
        for (int x = 0; x < n; ++x) {
            std::vector<int> target;
            for (int y = 0; y < n; ++y)
                if (X.dist(x, y) <= r) target.push_back(y);
            std::vector<char> covered(target.size(), 0);
            int count = 0;
            for (std::size_t i = 0; i < target.size(); ++i) {
                if (covered[i]) continue;
                const int c = target[i];
                ++count;
                for (std::size_t k = i; k < target.size(); ++k)
                    if (!covered[k] && X.dist(c, target[k]) <= r / 2.0) covered[k] = 1;
            }
            worst = std::max(worst, count);
        }
        out.push_back(worst);
    }
    return out;
}

// Distance from sample x to the complement of the element (1-Lipschitz on the
// sample; 0 when x lies outside; +infinity when the element is everything).
inline double dist_to_complement(const FiniteMetricSpace& X, const std::vector<char>& member, int x) {
    if (!member[static_cast<std::size_t>(x)]) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (int y = 0; y < X.size(); ++y)
        if (!member[static_cast<std::size_t>(y)]) best = std::min(best, X.dist(x, y));
    return best;
}

inline double dist_to_complement(const Covering& cov, int j, int x) {
    return dist_to_complement(*cov.space, cov.member[static_cast<std::size_t>(j)], x);
}

}  // namespace nervekit
