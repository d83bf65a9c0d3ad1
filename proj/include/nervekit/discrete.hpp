#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "metric_space.hpp"

namespace nervekit {

// Map between sampled spaces: sample i of the domain goes to sample
// values[i] of the target.
struct DiscreteMap {
    const FiniteMetricSpace* domain = nullptr;
    const FiniteMetricSpace* target = nullptr;
    std::vector<int> values;

    int operator()(int i) const { return values[static_cast<std::size_t>(i)]; }
    int size() const { return static_cast<int>(values.size()); }
};

inline std::vector<double> uniform_times(double span, int steps) {
    std::vector<double> t;
    t.reserve(static_cast<std::size_t>(steps) + 1);
    for (int k = 0; k <= steps; ++k) t.push_back(span * static_cast<double>(k) / steps);
    t.back() = span;  // exact endpoint
    return t;
}

// Track of a homotopy sampled on a grid: domain points crossed with a time
// grid 0 = t_0 < ... < t_m = span.  values[i][k] is the image of domain
// point i at time t_k.  Endpoint rows are the two maps being connected.
template <class D, class V>
struct DiscreteHomotopy {
    std::vector<D> domain;
    std::vector<double> times;
    std::vector<std::vector<V>> values;

    double span() const { return times.empty() ? 0.0 : times.back(); }
    std::size_t n_points() const { return domain.size(); }
    std::size_t n_times() const { return times.size(); }
    const V& at(std::size_t i, std::size_t k) const { return values[i][k]; }

    std::vector<V> slice(std::size_t k) const {
        std::vector<V> out;
        out.reserve(domain.size());
        for (std::size_t i = 0; i < domain.size(); ++i) out.push_back(values[i][k]);
        return out;
    }
};

using SampleHomotopy = DiscreteHomotopy<int, int>;

// Tabulate a two-argument evaluator over domain x times.
template <class D, class V, class F>
DiscreteHomotopy<D, V> tabulate_homotopy(std::vector<D> domain, std::vector<double> times, F&& f) {
    DiscreteHomotopy<D, V> h;
    h.domain = std::move(domain);
    h.times = std::move(times);
    h.values.resize(h.domain.size());
    for (std::size_t i = 0; i < h.domain.size(); ++i) {
        h.values[i].reserve(h.times.size());
        for (double t : h.times) h.values[i].push_back(f(h.domain[i], t));
    }
    return h;
}

}  // namespace nervekit
