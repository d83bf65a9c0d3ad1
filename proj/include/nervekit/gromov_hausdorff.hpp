#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "discrete.hpp"
#include "errors.hpp"
#include "metric_space.hpp"
#include "verify.hpp"

namespace nervekit {

// max over pairs of | d_Y(f a, f b) - d_X(a, b) |
inline double map_distortion(const DiscreteMap& f) {
    if (!f.domain || !f.target) throw DomainMismatch("map is missing its domain or target space");
    const FiniteMetricSpace& X = *f.domain;
    const FiniteMetricSpace& Y = *f.target;
    double worst = 0.0;
    for (int a = 0; a < X.size(); ++a)
        for (int b = a + 1; b < X.size(); ++b)
            worst = std::max(worst, std::fabs(Y.dist(f(a), f(b)) - X.dist(a, b)));
    return worst;
}

// max over target points of the distance to the image: how far f is from
// being onto.
inline double covering_defect(const DiscreteMap& f) {
    if (!f.domain || !f.target) throw DomainMismatch("map is missing its domain or target space");
    const FiniteMetricSpace& Y = *f.target;
    double worst = 0.0;
    for (int y = 0; y < Y.size(); ++y) {
        double best = std::numeric_limits<double>::infinity();
        for (int v : f.values) best = std::min(best, Y.dist(v, y));
        worst = std::max(worst, best);
    }
    return worst;
}

// Minimal tolerance at which f: X -> Y and g: Y -> X are both approximations:
// the max of the two distortions and the two covering defects.
inline double approximation_defect(const DiscreteMap& f, const DiscreteMap& g) {
    if (!f.domain || !f.target || !g.domain || !g.target)
        throw DomainMismatch("approximation maps are missing spaces");
    if (f.domain != g.target || f.target != g.domain)
        throw DomainMismatch("approximation maps do not go between the same two spaces");
    if (f.size() != f.domain->size() || g.size() != g.domain->size())
        throw DomainMismatch("approximation maps are not total");
    return std::max(std::max(map_distortion(f), map_distortion(g)),
                    std::max(covering_defect(f), covering_defect(g)));
}

struct ApproxPair {
    DiscreteMap f;  // X -> Y
    DiscreteMap g;  // Y -> X
    double defect = 0.0;
};

inline ApproxPair make_approx_pair(DiscreteMap f, DiscreteMap g) {
    double d = approximation_defect(f, g);
    return {std::move(f), std::move(g), d};
}

struct GHBounds {
    double distortion_gh = 0.0;  // half the minimal correspondence distortion
    double approx_gh = 0.0;      // minimal approximation defect over map pairs
};

// Exhaustive GH oracles for small spaces.  Every correspondence contains a
// sub-correspondence of the form graph(f) u graph(g), and dropping pairs
// never increases distortion, so minimizing over map pairs is exact.  The
// approximation route separates: min over pairs of max(A_f, B_g) equals
// max(min A_f, min B_g).
inline GHBounds gh_exact_small(const FiniteMetricSpace& X, const FiniteMetricSpace& Y,
                               std::size_t cap = 5) {
    if (static_cast<std::size_t>(X.size()) > cap) throw TooLarge(static_cast<std::size_t>(X.size()), cap);
    if (static_cast<std::size_t>(Y.size()) > cap) throw TooLarge(static_cast<std::size_t>(Y.size()), cap);
    const int nx = X.size();
    const int ny = Y.size();

    std::vector<std::vector<int>> fs;  // all maps X -> Y
    {
        std::vector<int> cur(static_cast<std::size_t>(nx), 0);
        for (;;) {
            fs.push_back(cur);
            int i = 0;
            while (i < nx && ++cur[static_cast<std::size_t>(i)] == ny) cur[static_cast<std::size_t>(i++)] = 0;
            if (i == nx) break;
        }
    }
    std::vector<std::vector<int>> gs;  // all maps Y -> X
    {
        std::vector<int> cur(static_cast<std::size_t>(ny), 0);
        for (;;) {
            gs.push_back(cur);
            int i = 0;
            while (i < ny && ++cur[static_cast<std::size_t>(i)] == nx) cur[static_cast<std::size_t>(i++)] = 0;
            if (i == ny) break;
        }
    }

    auto dis_f = [&](const std::vector<int>& f) {
        double w = 0.0;
        for (int a = 0; a < nx; ++a)
            for (int b = a + 1; b < nx; ++b)
                w = std::max(w, std::fabs(Y.dist(f[static_cast<std::size_t>(a)], f[static_cast<std::size_t>(b)]) - X.dist(a, b)));
        return w;
    };
    auto dis_g = [&](const std::vector<int>& g) {
        double w = 0.0;
        for (int a = 0; a < ny; ++a)
            for (int b = a + 1; b < ny; ++b)
                w = std::max(w, std::fabs(X.dist(g[static_cast<std::size_t>(a)], g[static_cast<std::size_t>(b)]) - Y.dist(a, b)));
        return w;
    };
    auto covdef_f = [&](const std::vector<int>& f) {
        double w = 0.0;
        for (int y = 0; y < ny; ++y) {
            double best = std::numeric_limits<double>::infinity();
            for (int v : f) best = std::min(best, Y.dist(v, y));
            w = std::max(w, best);
        }
        return w;
    };
    auto covdef_g = [&](const std::vector<int>& g) {
        double w = 0.0;
        for (int x = 0; x < nx; ++x) {
            double best = std::numeric_limits<double>::infinity();
            for (int v : g) best = std::min(best, X.dist(v, x));
            w = std::max(w, best);
        }
        return w;
    };

    std::vector<double> f_dis(fs.size()), g_dis(gs.size());
    double best_defect_f = std::numeric_limits<double>::infinity();
    double best_defect_g = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < fs.size(); ++i) {
        f_dis[i] = dis_f(fs[i]);
        best_defect_f = std::min(best_defect_f, std::max(f_dis[i], covdef_f(fs[i])));
    }
    for (std::size_t j = 0; j < gs.size(); ++j) {
        g_dis[j] = dis_g(gs[j]);
        best_defect_g = std::min(best_defect_g, std::max(g_dis[j], covdef_g(gs[j])));
    }

    double best_dis = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < fs.size(); ++i) {
        for (std::size_t j = 0; j < gs.size(); ++j) {
            double w = std::max(f_dis[i], g_dis[j]);
            if (w >= best_dis) continue;  // cross terms only grow the max
            const std::vector<int>& f = fs[i];
            const std::vector<int>& g = gs[j];
            for (int x = 0; x < nx && w < best_dis; ++x)
                for (int y = 0; y < ny; ++y)
                    w = std::max(w, std::fabs(Y.dist(f[static_cast<std::size_t>(x)], y) -
                                              X.dist(x, g[static_cast<std::size_t>(y)])));
            best_dis = std::min(best_dis, w);
        }
    }

    GHBounds out;
    out.distortion_gh = best_dis / 2.0;
    out.approx_gh = std::max(best_defect_f, best_defect_g);
    return out;
}

// One Lipschitz-homotopy-distance witness: approximations f, g plus sampled
// homotopies F: g o f ~ id_X and G: f o g ~ id_Y with a shared time span and
// a single measured Lipschitz constant covering all four maps.
struct LHCertificate {
    ApproxPair pair;
    double time_span = 0.0;
    double lipschitz = 0.0;
    LipschitzReport lip_f, lip_g, lip_F, lip_G;
};

inline LHCertificate lh_certificate(const ApproxPair& pair, const SampleHomotopy& F,
                                    const SampleHomotopy& G) {
    if (F.span() != G.span()) throw TimeMismatch(F.span(), G.span());
    const FiniteMetricSpace& X = *pair.f.domain;
    const FiniteMetricSpace& Y = *pair.g.domain;
    if (F.n_points() != static_cast<std::size_t>(X.size()) || G.n_points() != static_cast<std::size_t>(Y.size()))
        throw DomainMismatch("homotopy grids do not cover the sample sets");

    const std::size_t lastF = F.n_times() - 1;
    for (std::size_t i = 0; i < F.n_points(); ++i) {
        int x = F.domain[i];
        int expected = pair.g(pair.f(x));
        if (F.at(i, 0) != expected) throw EndpointMismatch("F(.,0)=g(f(x))", x, expected, F.at(i, 0));
    }
    for (std::size_t i = 0; i < F.n_points(); ++i) {
        int x = F.domain[i];
        if (F.at(i, lastF) != x) throw EndpointMismatch("F(.,span)=x", x, x, F.at(i, lastF));
    }
    const std::size_t lastG = G.n_times() - 1;
    for (std::size_t i = 0; i < G.n_points(); ++i) {
        int y = G.domain[i];
        int expected = pair.f(pair.g(y));
        if (G.at(i, 0) != expected) throw EndpointMismatch("G(.,0)=f(g(y))", y, expected, G.at(i, 0));
    }
    for (std::size_t i = 0; i < G.n_points(); ++i) {
        int y = G.domain[i];
        if (G.at(i, lastG) != y) throw EndpointMismatch("G(.,span)=y", y, y, G.at(i, lastG));
    }

    LHCertificate cert;
    cert.pair = pair;
    cert.time_span = F.span();
    cert.lip_f = measured_lipschitz(pair.f, "f");
    cert.lip_g = measured_lipschitz(pair.g, "g");
    cert.lip_F = measured_lipschitz(F, X, X, "F");
    cert.lip_G = measured_lipschitz(G, Y, Y, "G");
    cert.lipschitz = std::max(std::max(cert.lip_f.lipschitz, cert.lip_g.lipschitz),
                              std::max(cert.lip_F.lipschitz, cert.lip_G.lipschitz));
    return cert;
}

}  // namespace nervekit
