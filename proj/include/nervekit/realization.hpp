#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "nerve.hpp"

namespace nervekit {

// Point of the geometric realization with vertices embedded as standard
// basis vectors of norm `scale`.  Weights are barycentric: nonnegative,
// summing to 1, keyed by vertex index; exact zeros are dropped so the
// support is the true support.
struct RealizationPoint {
    std::vector<std::pair<int, double>> w;  // sorted by vertex index
    double scale = 0.0;

    double weight(int v) const {
        auto it = std::lower_bound(w.begin(), w.end(), v,
                                   [](const std::pair<int, double>& p, int key) { return p.first < key; });
        return (it != w.end() && it->first == v) ? it->second : 0.0;
    }

    Simplex support() const {
        Simplex s;
        s.reserve(w.size());
        for (const auto& [v, _] : w) s.push_back(v);
        return s;
    }

    double weight_sum() const {
        double s = 0.0;
        for (const auto& [_, wv] : w) s += wv;
        return s;
    }

    bool operator==(const RealizationPoint& o) const { return scale == o.scale && w == o.w; }
    bool operator!=(const RealizationPoint& o) const { return !(*this == o); }
    bool operator<(const RealizationPoint& o) const {
        if (scale != o.scale) return scale < o.scale;
        return w < o.w;
    }
};

inline RealizationPoint make_point(std::vector<std::pair<int, double>> weights, double scale) {
    std::sort(weights.begin(), weights.end());
    std::vector<std::pair<int, double>> kept;
    kept.reserve(weights.size());
    for (auto& [v, wv] : weights) {
        if (!kept.empty() && kept.back().first == v) {
            kept.back().second += wv;
            continue;
        }
        if (wv != 0.0) kept.emplace_back(v, wv);
    }
    RealizationPoint p;
    p.w = std::move(kept);
    p.scale = scale;
    return p;
}

inline RealizationPoint vertex_point(int v, double scale) { return {{{v, 1.0}}, scale}; }

inline RealizationPoint barycenter_point(const Simplex& s, double scale) {
    RealizationPoint p;
    p.scale = scale;
    const double wv = 1.0 / static_cast<double>(s.size());
    for (int v : s) p.w.emplace_back(v, wv);
    return p;
}

// Euclidean distance of the embedded weight vectors: scale * ||wa - wb||_2.
inline double ambient_distance(const RealizationPoint& a, const RealizationPoint& b) {
    if (a.scale != b.scale) throw ScaleMismatch(a.scale, b.scale);
    double ss = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.w.size() || j < b.w.size()) {
        if (j == b.w.size() || (i < a.w.size() && a.w[i].first < b.w[j].first)) {
            ss += a.w[i].second * a.w[i].second;
            ++i;
        } else if (i == a.w.size() || b.w[j].first < a.w[i].first) {
            ss += b.w[j].second * b.w[j].second;
            ++j;
        } else {
            double d = a.w[i].second - b.w[j].second;
            ss += d * d;
            ++i;
            ++j;
        }
    }
    return a.scale * std::sqrt(ss);
}

// (1-lam)*a + lam*b.  Exact at the endpoints and for equal operands, so
// fixed-point identities downstream hold without rounding.
inline RealizationPoint convex_combination(const RealizationPoint& a, const RealizationPoint& b, double lam) {
    if (a.scale != b.scale) throw ScaleMismatch(a.scale, b.scale);
    if (lam == 0.0 || a == b) return a;
    if (lam == 1.0) return b;
    std::vector<std::pair<int, double>> out;
    out.reserve(a.w.size() + b.w.size());
    std::size_t i = 0, j = 0;
    const double ca = 1.0 - lam;
    while (i < a.w.size() || j < b.w.size()) {
        if (j == b.w.size() || (i < a.w.size() && a.w[i].first < b.w[j].first)) {
            out.emplace_back(a.w[i].first, ca * a.w[i].second);
            ++i;
        } else if (i == a.w.size() || b.w[j].first < a.w[i].first) {
            out.emplace_back(b.w[j].first, lam * b.w[j].second);
            ++j;
        } else {
            out.emplace_back(a.w[i].first, ca * a.w[i].second + lam * b.w[j].second);
            ++i;
            ++j;
        }
    }
    return make_point(std::move(out), a.scale);
}

// Barycentric coordinates of p over the simplex `sigma`; requires
// supp p within sigma.
inline std::vector<double> barycentric_over(const RealizationPoint& p, const Simplex& sigma) {
    std::vector<double> b(sigma.size(), 0.0);
    std::size_t j = 0;
    for (const auto& [v, wv] : p.w) {
        while (j < sigma.size() && sigma[j] < v) ++j;
        if (j == sigma.size() || sigma[j] != v)
            throw DomainMismatch("point support is not inside the chart simplex");
        b[j] = wv;
    }
    return b;
}

inline RealizationPoint from_barycentric(const Simplex& sigma, const std::vector<double>& b, double scale) {
    RealizationPoint p;
    p.scale = scale;
    for (std::size_t i = 0; i < sigma.size(); ++i)
        if (b[i] != 0.0) p.w.emplace_back(sigma[i], b[i]);
    return p;
}

// Decomposition of a simplex point through the barycenter: x = t*x_* + (1-t)*y
// with y on the boundary, t = (k+1) * min_i b_i.
struct BarycentricSplit {
    double t = 0.0;
    std::vector<double> y;  // boundary point in the same chart; min coordinate is exactly 0
};

inline BarycentricSplit split_through_barycenter(const std::vector<double>& b) {
    const std::size_t k1 = b.size();
    BarycentricSplit out;
    double m = b[0];
    std::size_t arg = 0;
    for (std::size_t i = 1; i < k1; ++i)
        if (b[i] < m) { m = b[i]; arg = i; }
    out.t = static_cast<double>(k1) * m;
    out.y.assign(k1, 0.0);
    if (m == 0.0) {
        out.y = b;  // already on the boundary
        return out;
    }
    if (out.t >= 1.0) {
        // x is the barycenter itself; the boundary point is immaterial
        out.t = 1.0;
        out.y[0] = 1.0;
        for (std::size_t i = 1; i < k1; ++i) out.y[i] = 0.0;
        return out;
    }
    const double denom = 1.0 - out.t;
    for (std::size_t i = 0; i < k1; ++i) out.y[i] = (b[i] - m) / denom;
    out.y[arg] = 0.0;  // exact wall membership
    // renormalize the rounding drift into the largest coordinate
    double s = 0.0;
    for (double v : out.y) s += v;
    if (s > 0.0) {
        std::size_t big = 0;
        for (std::size_t i = 1; i < k1; ++i)
            if (out.y[i] > out.y[big]) big = i;
        out.y[big] += 1.0 - s;
    }
    return out;
}

inline std::vector<double> recompose_split(const BarycentricSplit& sp) {
    const std::size_t k1 = sp.y.size();
    std::vector<double> b(k1, 0.0);
    for (std::size_t i = 0; i < k1; ++i) b[i] = sp.t / static_cast<double>(k1) + (1.0 - sp.t) * sp.y[i];
    return b;
}

// Radial projection of (b, t) in sigma x [0, eps] from the point
// (barycenter, 2*eps) onto sigma x {0} union boundary(sigma) x [0, eps].
// Points already on the target are returned unchanged; a wall hit lands with
// that coordinate exactly 0; a base hit lands with height exactly 0.
struct RadialImage {
    std::vector<double> psi;  // barycentric coordinates over the same simplex
    double u = 0.0;           // height
};

inline RadialImage radial_projection(const std::vector<double>& b, double t, double eps) {
    const std::size_t k1 = b.size();
    if (k1 < 2) throw DomainMismatch("radial projection needs a simplex of dimension >= 1");
    if (t >= 2.0 * eps) throw ApexInput("radial projection queried at the projection apex height");
    RadialImage out;
    if (t == 0.0) {
        out.psi = b;
        out.u = 0.0;
        return out;
    }
    double mn = b[0];
    for (double v : b) mn = std::min(mn, v);
    if (mn == 0.0) {
        out.psi = b;
        out.u = t;
        return out;
    }
    const double c = 1.0 / static_cast<double>(k1);
    double lam = 2.0 * eps / (2.0 * eps - t);  // base hit
    std::size_t wall = k1;                     // k1 means "base"
    for (std::size_t i = 0; i < k1; ++i) {
        if (b[i] < c) {
            double li = c / (c - b[i]);
            if (li < lam) { lam = li; wall = i; }
        }
    }
    out.psi.assign(k1, 0.0);
    for (std::size_t i = 0; i < k1; ++i) out.psi[i] = std::max(0.0, c + lam * (b[i] - c));
    out.u = 2.0 * eps + lam * (t - 2.0 * eps);
    if (wall == k1) {
        out.u = 0.0;
    } else {
        out.psi[wall] = 0.0;
        out.u = std::min(std::max(out.u, 0.0), eps);
    }
    // renormalize drift into the largest coordinate
    double s = 0.0;
    for (double v : out.psi) s += v;
    std::size_t big = 0;
    for (std::size_t i = 1; i < k1; ++i)
        if (out.psi[i] > out.psi[big]) big = i;
    out.psi[big] += 1.0 - s;
    return out;
}

// Shortest-path upper bound for the length metric: nodes are the order-`sub`
// lattice points of every simplex, edges are straight chords inside each
// simplex weighted by ambient distance.  Query points are attached to every
// node of each simplex whose chart contains them.
class SubdivisionGraph {
public:
    SubdivisionGraph(const NerveComplex& K, int sub, double scale) : scale_(scale), sub_(sub) {
        if (sub < 1) throw DegenerateDomain("subdivision order must be >= 1");
        for (const auto& sigma : K.maximal()) {
            std::vector<std::vector<int>> comps;
            std::vector<int> cur(sigma.size(), 0);
            enumerate(static_cast<int>(sigma.size()), sub, 0, cur, comps);
            std::vector<int> ids;
            ids.reserve(comps.size());
            for (const auto& comp : comps) {
                RealizationPoint p;
                p.scale = scale;
                for (std::size_t i = 0; i < sigma.size(); ++i)
                    if (comp[i] > 0) p.w.emplace_back(sigma[i], static_cast<double>(comp[i]) / sub);
                ids.push_back(node_id(p));
            }
            for (std::size_t i = 0; i < ids.size(); ++i)
                for (std::size_t j = i + 1; j < ids.size(); ++j) add_edge(ids[i], ids[j]);
            simplex_nodes_.emplace_back(sigma, std::move(ids));
        }
    }

    double query(const RealizationPoint& a, const RealizationPoint& b) const {
        if (a.scale != scale_ || b.scale != scale_) throw ScaleMismatch(a.scale, scale_);
        if (a == b) return 0.0;
        std::vector<std::vector<std::pair<int, double>>> extra(2);
        bool common = false;
        for (const auto& [sigma, ids] : simplex_nodes_) {
            bool ina = inside(a.support(), sigma), inb = inside(b.support(), sigma);
            if (ina && inb) common = true;
            if (ina)
                for (int id : ids) extra[0].emplace_back(id, ambient_distance(a, nodes_[static_cast<std::size_t>(id)]));
            if (inb)
                for (int id : ids) extra[1].emplace_back(id, ambient_distance(b, nodes_[static_cast<std::size_t>(id)]));
        }
        if (extra[0].empty() || extra[1].empty())
            throw DomainMismatch("query point lies in no simplex of the complex");
        if (common) return ambient_distance(a, b);  // straight segment inside one simplex
        // Dijkstra from a over grid nodes, finishing through b's attachments.
        const std::size_t n = nodes_.size();
        std::vector<double> dist(n, std::numeric_limits<double>::infinity());
        std::priority_queue<std::pair<double, int>, std::vector<std::pair<double, int>>, std::greater<>> pq;
        for (auto& [id, wgt] : extra[0]) {
            if (wgt < dist[static_cast<std::size_t>(id)]) {
                dist[static_cast<std::size_t>(id)] = wgt;
                pq.emplace(wgt, id);
            }
        }
        double best = std::numeric_limits<double>::infinity();
        std::vector<double> to_b(n, std::numeric_limits<double>::infinity());
        for (auto& [id, wgt] : extra[1]) to_b[static_cast<std::size_t>(id)] = wgt;
        while (!pq.empty()) {
            auto [d, v] = pq.top();
            pq.pop();
            if (d > dist[static_cast<std::size_t>(v)]) continue;
            if (d >= best) break;
            if (std::isfinite(to_b[static_cast<std::size_t>(v)]))
                best = std::min(best, d + to_b[static_cast<std::size_t>(v)]);
            for (const auto& [w, len] : adj_[static_cast<std::size_t>(v)]) {
                double nd = d + len;
                if (nd < dist[static_cast<std::size_t>(w)]) {
                    dist[static_cast<std::size_t>(w)] = nd;
                    pq.emplace(nd, w);
                }
            }
        }
        if (!std::isfinite(best)) throw Disconnected("no path between the query points");
        return best;
    }

    std::size_t n_nodes() const { return nodes_.size(); }

private:
    static void enumerate(int k1, int left, int at, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
        if (at == k1 - 1) {
            cur[static_cast<std::size_t>(at)] = left;
            out.push_back(cur);
            return;
        }
        for (int v = 0; v <= left; ++v) {
            cur[static_cast<std::size_t>(at)] = v;
            enumerate(k1, left - v, at + 1, cur, out);
        }
    }

    static bool inside(const Simplex& small, const Simplex& big) {
        return std::includes(big.begin(), big.end(), small.begin(), small.end());
    }

    int node_id(const RealizationPoint& p) {
        auto it = index_.find(p);
        if (it != index_.end()) return it->second;
        int id = static_cast<int>(nodes_.size());
        index_.emplace(p, id);
        nodes_.push_back(p);
        adj_.emplace_back();
        return id;
    }

    void add_edge(int a, int b) {
        if (a == b) return;
        double d = ambient_distance(nodes_[static_cast<std::size_t>(a)], nodes_[static_cast<std::size_t>(b)]);
        adj_[static_cast<std::size_t>(a)].emplace_back(b, d);
        adj_[static_cast<std::size_t>(b)].emplace_back(a, d);
    }

    double scale_;
    int sub_;
    std::vector<RealizationPoint> nodes_;
    std::map<RealizationPoint, int> index_;
    std::vector<std::vector<std::pair<int, double>>> adj_;
    std::vector<std::pair<Simplex, std::vector<int>>> simplex_nodes_;
};

inline double length_distance(const NerveComplex& K, const RealizationPoint& a, const RealizationPoint& b,
                              int subdivision = 3) {
    SubdivisionGraph g(K, subdivision, a.scale);
    return g.query(a, b);
}

}  // namespace nervekit
