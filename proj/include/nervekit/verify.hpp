#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "discrete.hpp"
#include "errors.hpp"
#include "metric_space.hpp"
#include "util.hpp"

namespace nervekit {

struct LipschitzReport {
    std::string map_id;
    double lipschitz = 0.0;
    std::size_t witness_a = 0, witness_b = 0;  // flat indices into the enumerated domain
    std::string metric = "sample";
    std::size_t pairs = 0;
    bool subsampled = false;
};

// Exact max of dist_val(a,b) / dist_dom(a,b) over sampled pairs; zero-distance
// domain pairs are skipped.  Exhaustive up to `cap` pairs, then a seeded
// uniform subsample of `cap` pairs with the count reported.  The witness is
// the first maximizing pair in enumeration order.
template <class DD, class DV>
LipschitzReport measured_lipschitz_fn(std::string map_id, std::size_t n, DD&& dist_dom,
                                      DV&& dist_val, std::string metric = "sample",
                                      std::uint64_t seed = 0, std::size_t cap = 4000000) {
    if (n < 2) throw DegenerateDomain("Lipschitz measurement needs at least two domain points");
    LipschitzReport rep;
    rep.map_id = std::move(map_id);
    rep.metric = std::move(metric);
    const std::size_t total = n * (n - 1) / 2;
    auto consider = [&rep](std::size_t a, std::size_t b, double dd, double dv) {
        if (dd <= 0.0) return;
        const double ratio = dv / dd;
        if (ratio > rep.lipschitz) {
            rep.lipschitz = ratio;
            rep.witness_a = a;
            rep.witness_b = b;
        }
    };
    if (total <= cap) {
        for (std::size_t a = 0; a + 1 < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b) consider(a, b, dist_dom(a, b), dist_val(a, b));
        rep.pairs = total;
        rep.subsampled = false;
    } else {
        Rng rng(seed);
        std::size_t drawn = 0;
        while (drawn < cap) {
            std::size_t a = rng.next_index(n);
            std::size_t b = rng.next_index(n);
            if (a == b) continue;
            if (a > b) std::swap(a, b);
            consider(a, b, dist_dom(a, b), dist_val(a, b));
            ++drawn;
        }
        rep.pairs = cap;
        rep.subsampled = true;
    }
    return rep;
}

inline LipschitzReport measured_lipschitz(const DiscreteMap& f, std::string map_id = "map",
                                          std::uint64_t seed = 0, std::size_t cap = 4000000) {
    if (!f.domain || !f.target) throw DomainMismatch("map is missing its domain or target space");
    const FiniteMetricSpace& X = *f.domain;
    const FiniteMetricSpace& Y = *f.target;
    return measured_lipschitz_fn(
        std::move(map_id), static_cast<std::size_t>(f.size()),
        [&X](std::size_t a, std::size_t b) { return X.dist(static_cast<int>(a), static_cast<int>(b)); },
        [&](std::size_t a, std::size_t b) {
            return Y.dist(f(static_cast<int>(a)), f(static_cast<int>(b)));
        },
        "sample", seed, cap);
}

// Homotopy Lipschitz constant over the product grid domain x times, with the
// L1 product metric d(x,x') + |s - s'| in the denominator.
inline LipschitzReport measured_lipschitz(const SampleHomotopy& h, const FiniteMetricSpace& dom,
                                          const FiniteMetricSpace& val, std::string map_id = "homotopy",
                                          std::uint64_t seed = 0, std::size_t cap = 4000000) {
    const std::size_t T = h.n_times();
    const std::size_t N = h.n_points();
    if (T == 0) throw DegenerateDomain("homotopy has an empty time grid");
    auto point = [&h](std::size_t flat) { return h.domain[flat / h.n_times()]; };
    auto time = [&h](std::size_t flat) { return h.times[flat % h.n_times()]; };
    return measured_lipschitz_fn(
        std::move(map_id), N * T,
        [&](std::size_t a, std::size_t b) {
            return dom.dist(point(a), point(b)) + std::fabs(time(a) - time(b));
        },
        [&](std::size_t a, std::size_t b) {
            return val.dist(h.at(a / T, a % T), h.at(b / T, b % T));
        },
        "l1-product", seed, cap);
}

// Strong deformation retraction contract on a sampled homotopy: identity at
// time 0, final slice inside the target, and (when `fixed`) target points
// stay put at every time.  Failures are results, not errors; the first
// violation in condition-major scan order is reported.
struct RetractionCheck {
    bool pass = true;
    std::string violation;  // identity_at_zero | final_slice | fixed_set
    std::size_t sample = 0;
    std::size_t time_index = 0;
};

template <class P, class InTarget, class Eq>
RetractionCheck verify_retraction_with(const DiscreteHomotopy<P, P>& h, InTarget&& in_target,
                                       Eq&& eq, bool fixed = true) {
    RetractionCheck rc;
    if (h.n_times() == 0 || h.n_points() == 0) {
        rc.pass = false;
        rc.violation = "empty";
        return rc;
    }
    const std::size_t last = h.n_times() - 1;
    for (std::size_t i = 0; i < h.n_points(); ++i) {
        if (!eq(h.at(i, 0), h.domain[i])) {
            rc.pass = false;
            rc.violation = "identity_at_zero";
            rc.sample = i;
            rc.time_index = 0;
            return rc;
        }
    }
    for (std::size_t i = 0; i < h.n_points(); ++i) {
        if (!in_target(h.at(i, last))) {
            rc.pass = false;
            rc.violation = "final_slice";
            rc.sample = i;
            rc.time_index = last;
            return rc;
        }
    }
    if (fixed) {
        for (std::size_t i = 0; i < h.n_points(); ++i) {
            if (!in_target(h.domain[i])) continue;
            for (std::size_t k = 0; k <= last; ++k) {
                if (!eq(h.at(i, k), h.domain[i])) {
                    rc.pass = false;
                    rc.violation = "fixed_set";
                    rc.sample = i;
                    rc.time_index = k;
                    return rc;
                }
            }
        }
    }
    return rc;
}

inline RetractionCheck verify_retraction(const SampleHomotopy& h, const std::vector<char>& target,
                                         bool fixed = true) {
    if (target.empty()) throw EmptySpace("retraction target is empty");
    return verify_retraction_with(
        h,
        [&target](int v) {
            return v >= 0 && static_cast<std::size_t>(v) < target.size() &&
                   target[static_cast<std::size_t>(v)] != 0;
        },
        [](int a, int b) { return a == b; }, fixed);
}

}  // namespace nervekit
