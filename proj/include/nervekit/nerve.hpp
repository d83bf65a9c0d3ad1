#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "errors.hpp"
#include "metric_space.hpp"

namespace nervekit {

using Simplex = std::vector<int>;  // sorted vertex indices

inline Simplex sorted_simplex(Simplex s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

// Simplicial complex on covering-element indices; closed under faces.
class NerveComplex {
public:
    int n_vertices = 0;

    bool contains(const Simplex& s) const { return simplices_.count(s) > 0; }

    int dim() const {
        int d = -1;
        for (const auto& s : simplices_) d = std::max(d, static_cast<int>(s.size()) - 1);
        return d;
    }

    std::size_t size() const { return simplices_.size(); }
    const std::set<Simplex>& simplices() const { return simplices_; }

    // Inserts a simplex together with every face.
    void insert(const Simplex& s) {
        Simplex cur = sorted_simplex(s);
        if (cur.empty()) return;
        insert_closed(cur);
    }

    std::vector<std::size_t> f_vector() const {
        std::vector<std::size_t> f(static_cast<std::size_t>(dim() + 1), 0);
        for (const auto& s : simplices_) ++f[s.size() - 1];
        return f;
    }

    long long euler_characteristic() const {
        long long chi = 0;
        for (const auto& s : simplices_) chi += (s.size() % 2 == 1) ? 1 : -1;
        return chi;
    }

    std::vector<Simplex> maximal() const {
        std::vector<Simplex> out;
        for (const auto& s : simplices_) {
            bool is_max = true;
            // s is maximal iff no extension by one vertex is present.
            for (int v = 0; v < n_vertices && is_max; ++v) {
                if (std::binary_search(s.begin(), s.end(), v)) continue;
                Simplex t = s;
                t.insert(std::lower_bound(t.begin(), t.end(), v), v);
                if (simplices_.count(t)) is_max = false;
            }
            if (is_max) out.push_back(s);
        }
        return out;
    }

    std::vector<Simplex> simplices_of_dim(int d) const {
        std::vector<Simplex> out;
        for (const auto& s : simplices_)
            if (static_cast<int>(s.size()) == d + 1) out.push_back(s);
        return out;
    }

    // Degree of each present vertex in the 1-skeleton.
    std::map<int, int> vertex_degrees() const {
        std::map<int, int> deg;
        for (const auto& s : simplices_)
            if (s.size() == 1) deg[s[0]] = 0;
        for (const auto& s : simplices_) {
            if (s.size() == 2) {
                ++deg[s[0]];
                ++deg[s[1]];
            }
        }
        return deg;
    }

    bool connected() const {
        std::vector<int> verts;
        for (const auto& s : simplices_)
            if (s.size() == 1) verts.push_back(s[0]);
        if (verts.empty()) return true;
        std::map<int, std::vector<int>> adj;
        for (const auto& s : simplices_)
            if (s.size() == 2) {
                adj[s[0]].push_back(s[1]);
                adj[s[1]].push_back(s[0]);
            }
        std::set<int> seen;
        std::vector<int> stack = {verts[0]};
        seen.insert(verts[0]);
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w : adj[v])
                if (seen.insert(w).second) stack.push_back(w);
        }
        return seen.size() == verts.size();
    }

    bool operator==(const NerveComplex& o) const {
        return n_vertices == o.n_vertices && simplices_ == o.simplices_;
    }

    // a.subcomplex_of(b): every simplex of a is a simplex of b.
    bool subcomplex_of(const NerveComplex& o) const {
        for (const auto& s : simplices_)
            if (!o.contains(s)) return false;
        return true;
    }

private:
    void insert_closed(const Simplex& s) {
        if (simplices_.count(s)) return;
        simplices_.insert(s);
        if (s.size() > 1) {
            for (std::size_t drop = 0; drop < s.size(); ++drop) {
                Simplex face;
                face.reserve(s.size() - 1);
                for (std::size_t i = 0; i < s.size(); ++i)
                    if (i != drop) face.push_back(s[i]);
                insert_closed(face);
            }
        }
    }

    std::set<Simplex> simplices_;
};

// Nerve of a covering: a set of elements spans a simplex iff some sample lies
// in all of them.  On a sample substrate that existential check over samples
// is exact and complete, so it is enough to enumerate subsets of each
// sample's support.
inline NerveComplex build_nerve(const Covering& cov, int max_dim = -1) {
    const int m = cov.n_elements();
    NerveComplex K;
    K.n_vertices = m;
    int needed = 0;
    for (int x = 0; x < cov.space->size(); ++x)
        needed = std::max(needed, static_cast<int>(cov.support_of(x).size()) - 1);
    if (max_dim >= 0 && max_dim < needed) throw TruncationTooLow(max_dim, needed);
    std::set<Simplex> seen_supports;
    for (int x = 0; x < cov.space->size(); ++x) {
        Simplex supp = cov.support_of(x);
        if (supp.empty() || !seen_supports.insert(supp).second) continue;
        const std::size_t k = supp.size();
        for (std::size_t mask = 1; mask < (std::size_t(1) << k); ++mask) {
            Simplex s;
            for (std::size_t i = 0; i < k; ++i)
                if (mask & (std::size_t(1) << i)) s.push_back(supp[i]);
            K.insert(s);
        }
    }
    return K;
}

inline bool nerves_equal(const NerveComplex& a, const NerveComplex& b) {
    if (a.n_vertices != b.n_vertices) throw VertexCountMismatch(a.n_vertices, b.n_vertices);
    return a.simplices() == b.simplices();
}

// Radius-parametrized covering family on [r_min, r_max].
struct CoveringFamily {
    std::function<Covering(double)> at;
    double r_min = 0.0;
    double r_max = 0.0;
};

// Pigeonhole scan for a radius whose nerve is unchanged across [r-c0, r+c0].
// Scans the uniform grid from the midpoint outward, so a family with a
// constant nerve returns the midpoint.  Nerve monotonicity in the radius is
// asserted across all evaluated radii.
inline double stable_threshold(const CoveringFamily& family, double c0, int steps, int max_dim = -1) {
    if (steps < 1 || family.r_max <= family.r_min) throw DegenerateDomain("stable_threshold needs a nondegenerate radius grid");
    std::map<double, NerveComplex> memo;
    auto nerve_at = [&](double r) -> const NerveComplex& {
        auto it = memo.find(r);
        if (it != memo.end()) return it->second;
        return memo.emplace(r, build_nerve(family.at(r), max_dim)).first->second;
    };
    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(steps) + 1);
    {
        // midpoint first, then alternate outward; lower index wins ties
        double half = steps / 2.0;
        std::vector<int> idx(static_cast<std::size_t>(steps) + 1);
        for (int i = 0; i <= steps; ++i) idx[static_cast<std::size_t>(i)] = i;
        std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
            return std::fabs(a - half) < std::fabs(b - half);
        });
        order = idx;
    }
    double found = std::numeric_limits<double>::quiet_NaN();
    for (int i : order) {
        double r = family.r_min + (family.r_max - family.r_min) * static_cast<double>(i) / steps;
        if (r - c0 < family.r_min || r + c0 > family.r_max) continue;
        if (nerves_equal(nerve_at(r - c0), nerve_at(r + c0))) { found = r; break; }
    }
    // monotonicity assertion over everything evaluated
    const NerveComplex* prev = nullptr;
    for (const auto& [r, K] : memo) {
        if (prev && !prev->subcomplex_of(K))
            throw Error("non_monotone_family", "covering family nerve is not monotone in the radius");
        prev = &K;
    }
    if (!std::isfinite(found)) throw NoStableRadius(family.r_min, family.r_max, c0);
    return found;
}

}  // namespace nervekit
