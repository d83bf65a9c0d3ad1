#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "gromov_hausdorff.hpp"
#include "homotopy.hpp"
#include "metric_space.hpp"
#include "model_space.hpp"
#include "nerve.hpp"
#include "realization.hpp"

namespace nervekit {

// A point (radius 0) or ball to be enclosed by a larger ball.
struct BallSpec {
    int center = -1;
    double radius = 0.0;
};

// Smallest sample-centered ball whose element contains every listed point and
// every listed ball's element, via d(c, item) + item.radius.  Containment of
// the member sets is exact because the radius gets a strictness bump.
inline MetricBall enclosing_ball_covering(const ModelSpace& M, const std::vector<BallSpec>& items,
                                          double pad = 0.0) {
    if (items.empty()) throw EmptySpace("enclosing ball of an empty collection");
    int best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (int c = 0; c < M.n; ++c) {
        double worst = 0.0;
        for (const auto& it : items) worst = std::max(worst, M.dist(c, it.center) + it.radius);
        if (worst < bd) { bd = worst; best = c; }
    }
    const double radius = bd + pad + 1e-9 * (1.0 + bd);
    if (radius >= M.convexity_radius()) throw NoContainingBall(radius, M.convexity_radius());
    return sample_ball(M, best, radius);
}

// Map from a realized complex into model samples.  hull_ball(sigma) must
// return a ball whose element contains eval of every point supported on
// sigma; that contract is what makes extensions compose.
class RealizedMap {
public:
    virtual ~RealizedMap() = default;
    virtual int eval(const RealizationPoint& p) const = 0;
    virtual BallSpec hull_ball(const Simplex& sigma) const = 0;
};

// Skeleton-by-skeleton Lipschitz extension of vertex values (and of a given
// map on a subcomplex L) over the whole complex: split each point through
// its carrier's barycenter and contract the recursive boundary value toward
// the carrier's chart center, f(x) = phi(f(y(x)), eps * t(x)).  Values agree
// with the inputs on vertices and on |L| exactly.
class Extension : public RealizedMap {
public:
    Extension(const NerveComplex& K, const ModelSpace& M, double eps, std::vector<int> vertex_values,
              const NerveComplex* L = nullptr, const RealizedMap* f_L = nullptr, double pad = 0.0)
        : K_(&K), model_(&M), eps_(eps), values_(std::move(vertex_values)), L_(L), f_L_(f_L), pad_(pad) {
        if (values_.size() != static_cast<std::size_t>(K.n_vertices))
            throw VertexCountMismatch(values_.size(), static_cast<std::size_t>(K.n_vertices));
        for (int v : values_)
            if (v < 0 || v >= M.n) throw DomainMismatch("vertex value is not a model sample");
        if ((L_ == nullptr) != (f_L_ == nullptr))
            throw DomainMismatch("subcomplex and its map must be supplied together");
        if (L_) {
            if (!L_->subcomplex_of(K)) throw DomainMismatch("L is not a subcomplex of K");
            for (int v = 0; v < K.n_vertices; ++v) {
                if (!L_->contains({v})) continue;
                int got = f_L_->eval(vertex_point(v, eps_));
                if (got != values_[static_cast<std::size_t>(v)])
                    throw DomainMismatch("subcomplex map disagrees with a vertex value");
            }
        }
    }

    int eval(const RealizationPoint& p) const override {
        Simplex tau = p.support();
        if (!K_->contains(tau)) throw DomainMismatch("point is not supported on a complex simplex");
        if (tau.size() == 1) return values_[static_cast<std::size_t>(tau[0])];
        if (L_ && L_->contains(tau)) return f_L_->eval(p);
        std::vector<double> b = barycentric_over(p, tau);
        BarycentricSplit split = split_through_barycenter(b);
        const Chart& ch = chart(tau);
        // contractions land on their center by time eps/10
        if (split.t >= 0.1) return ch.oracle->center();
        int fy = eval(from_barycentric(tau, split.y, p.scale));
        return ch.oracle->eval(fy, eps_ * split.t);
    }

    BallSpec hull_ball(const Simplex& sigma) const override {
        if (sigma.size() == 1) return {values_[static_cast<std::size_t>(sigma[0])], 0.0};
        if (L_ && L_->contains(sigma)) return f_L_->hull_ball(sigma);
        const Chart& ch = chart(sigma);
        return {ch.ball.center, ch.ball.radius};
    }

    const ModelSpace& model() const { return *model_; }
    double eps() const { return eps_; }
    std::size_t charts_built() const { return charts_.size(); }

private:
    struct Chart {
        MetricBall ball;
        std::shared_ptr<const ContractionOracle> oracle;
    };

    const Chart& chart(const Simplex& tau) const {
        auto it = charts_.find(tau);
        if (it != charts_.end()) return it->second;
        // hull witnesses: one ball per proper nonempty face
        std::vector<BallSpec> items;
        const std::size_t k1 = tau.size();
        for (std::size_t mask = 1; mask + 1 < (static_cast<std::size_t>(1) << k1); ++mask) {
            Simplex face;
            for (std::size_t i = 0; i < k1; ++i)
                if (mask & (static_cast<std::size_t>(1) << i)) face.push_back(tau[i]);
            items.push_back(hull_ball(face));
        }
        Chart ch;
        ch.ball = enclosing_ball_covering(*model_, items, pad_);
        ch.oracle = std::make_shared<ContractionOracle>(*model_, ch.ball.element, ch.ball.center, eps_);
        return charts_.emplace(tau, std::move(ch)).first->second;
    }

    const NerveComplex* K_;
    const ModelSpace* model_;
    double eps_;
    std::vector<int> values_;
    const NerveComplex* L_;
    const RealizedMap* f_L_;
    double pad_;
    mutable std::map<Simplex, Chart> charts_;  // lazy; not thread-safe
};

// Per-simplex model elements U_sigma with B_sigma inside U_sigma and
// U_tau containing U_sigma whenever tau is a face of sigma, built by reverse
// induction from the maximal simplices; both containments are then verified
// exhaustively on the member sets.
inline std::map<Simplex, MetricBall> nested_family(const Covering& cov, const NerveComplex& K,
                                                   const ModelSpace& model) {
    if (cov.space->size() != model.n) throw DomainMismatch("covering and model have different sample counts");
    std::vector<Simplex> order(K.simplices().begin(), K.simplices().end());
    std::stable_sort(order.begin(), order.end(),
                     [](const Simplex& a, const Simplex& b) { return a.size() > b.size(); });
    std::map<Simplex, MetricBall> family;
    for (const Simplex& sigma : order) {
        std::vector<BallSpec> items;
        for (int x : cov.intersection(sigma)) items.push_back({x, 0.0});
        if (items.empty()) throw MissingFamilyMember("nerve simplex has an empty intersection");
        for (int v = 0; v < K.n_vertices; ++v) {
            if (std::binary_search(sigma.begin(), sigma.end(), v)) continue;
            Simplex up = sigma;
            up.push_back(v);
            std::sort(up.begin(), up.end());
            auto it = family.find(up);
            if (it != family.end()) items.push_back({it->second.center, it->second.radius});
        }
        try {
            family.emplace(sigma, enclosing_ball_covering(model, items));
        } catch (const NoContainingBall& e) {
            throw RadiusOverflow(e.radius, e.convexity_radius);
        }
    }
    // exhaustive verification of both containment conditions
    for (const auto& [sigma, ball] : family) {
        for (int x : cov.intersection(sigma))
            if (!ball.member[static_cast<std::size_t>(x)])
                throw MissingFamilyMember("nested element misses an intersection point");
        for (const auto& [tau, tball] : family) {
            if (tau.size() >= sigma.size()) continue;
            if (!std::includes(sigma.begin(), sigma.end(), tau.begin(), tau.end())) continue;
            for (int y : ball.element)
                if (!tball.member[static_cast<std::size_t>(y)])
                    throw MissingFamilyMember("nested elements fail face containment");
        }
    }
    return family;
}

// --- Homotopies between close maps via the prism triangulation -------------

// Staircase triangulation of |K| x [0,1]: vertices are the two sheet copies
// of K's vertices, and each k-simplex sigma contributes the k+1 cells
// {sigma_0..sigma_i bottom, sigma_i..sigma_k top}.
inline NerveComplex prism_complex(const NerveComplex& K) {
    NerveComplex P;
    P.n_vertices = 2 * K.n_vertices;
    for (const Simplex& sigma : K.maximal()) {
        const int k = static_cast<int>(sigma.size()) - 1;
        for (int i = 0; i <= k; ++i) {
            Simplex cell;
            for (int j = 0; j <= i; ++j) cell.push_back(sigma[static_cast<std::size_t>(j)]);
            for (int j = i; j <= k; ++j) cell.push_back(K.n_vertices + sigma[static_cast<std::size_t>(j)]);
            std::sort(cell.begin(), cell.end());
            P.insert(cell);
        }
    }
    return P;
}

inline NerveComplex sheet_complex(const NerveComplex& K) {
    NerveComplex S;
    S.n_vertices = 2 * K.n_vertices;
    for (const Simplex& sigma : K.maximal()) {
        S.insert(sigma);
        Simplex top = sigma;
        for (int& v : top) v += K.n_vertices;
        S.insert(top);
    }
    return S;
}

// The two sheets of the prism, each evaluated by its own extension.
class SheetMap : public RealizedMap {
public:
    SheetMap(const Extension& e0, const Extension& e1, int n_base)
        : e0_(&e0), e1_(&e1), n_(n_base) {}

    int eval(const RealizationPoint& p) const override {
        Simplex tau = p.support();
        if (tau.back() < n_) return e0_->eval(p);
        if (tau.front() >= n_) {
            RealizationPoint q = p;
            for (auto& [v, w] : q.w) v -= n_;
            return e1_->eval(q);
        }
        throw DomainMismatch("sheet map queried between the sheets");
    }

    BallSpec hull_ball(const Simplex& sigma) const override {
        if (sigma.back() < n_) return e0_->hull_ball(sigma);
        if (sigma.front() >= n_) {
            Simplex base = sigma;
            for (int& v : base) v -= n_;
            return e1_->hull_ball(base);
        }
        throw DomainMismatch("sheet map queried between the sheets");
    }

private:
    const Extension* e0_;
    const Extension* e1_;
    int n_;
};

// Homotopy between two maps on |K| that are uniformly within `span` of each
// other: both sheets keep their own extensions, and the prism interior is
// filled by one more extension.  Time slices 0 and span reproduce the input
// maps exactly.
class PrismHomotopy {
public:
    PrismHomotopy(const NerveComplex& K, const ModelSpace& M, double eps, double span,
                  std::vector<int> f0, std::vector<int> f1)
        : base_(&K), model_(&M), eps_(eps), span_(span) {
        if (f0.size() != static_cast<std::size_t>(K.n_vertices) || f0.size() != f1.size())
            throw VertexCountMismatch(f0.size(), f1.size());
        if (!(span > 0.0)) throw DegenerateDomain("homotopy needs a positive time span");
        int worst = -1;
        double wd = 0.0;
        for (int v = 0; v < K.n_vertices; ++v) {
            double d = M.dist(f0[static_cast<std::size_t>(v)], f1[static_cast<std::size_t>(v)]);
            if (d > wd) { wd = d; worst = v; }
        }
        if (wd > span) throw TooFar(worst, wd, span);
        e0_ = std::make_unique<Extension>(K, M, eps, f0);
        e1_ = std::make_unique<Extension>(K, M, eps, f1);
        prism_ = std::make_unique<NerveComplex>(prism_complex(K));
        sheets_ = std::make_unique<NerveComplex>(sheet_complex(K));
        sheet_map_ = std::make_unique<SheetMap>(*e0_, *e1_, K.n_vertices);
        std::vector<int> both = std::move(f0);
        both.insert(both.end(), f1.begin(), f1.end());
        full_ = std::make_unique<Extension>(*prism_, M, eps, std::move(both), sheets_.get(),
                                            sheet_map_.get());
    }

    double span() const { return span_; }
    const NerveComplex& prism() const { return *prism_; }
    const Extension& filler() const { return *full_; }

    // Value at (p, s) for p over the base complex, s in [0, span].
    int eval(const RealizationPoint& p, double s) const {
        const double T = std::min(1.0, std::max(0.0, s / span_));
        Simplex tau = p.support();
        std::vector<double> b = barycentric_over(p, tau);
        const int k = static_cast<int>(tau.size()) - 1;
        // smallest i whose suffix mass fits under T; top gets beta, bottom alpha
        std::vector<double> suffix(static_cast<std::size_t>(k) + 2, 0.0);
        for (int j = k; j >= 0; --j)
            suffix[static_cast<std::size_t>(j)] =
                suffix[static_cast<std::size_t>(j) + 1] + b[static_cast<std::size_t>(j)];
        int i = 0;
        while (suffix[static_cast<std::size_t>(i) + 1] > T) ++i;
        double beta_i = T - suffix[static_cast<std::size_t>(i) + 1];
        double alpha_i = b[static_cast<std::size_t>(i)] - beta_i;
        if (alpha_i < 0.0) { alpha_i = 0.0; beta_i = b[static_cast<std::size_t>(i)]; }
        RealizationPoint q;
        q.scale = p.scale;
        for (int j = 0; j < i; ++j)
            q.w.emplace_back(tau[static_cast<std::size_t>(j)], b[static_cast<std::size_t>(j)]);
        if (alpha_i != 0.0) q.w.emplace_back(tau[static_cast<std::size_t>(i)], alpha_i);
        if (beta_i != 0.0)
            q.w.emplace_back(base_->n_vertices + tau[static_cast<std::size_t>(i)], beta_i);
        for (int j = i + 1; j <= k; ++j)
            q.w.emplace_back(base_->n_vertices + tau[static_cast<std::size_t>(j)],
                             b[static_cast<std::size_t>(j)]);
        return full_->eval(q);
    }

    int eval_vertex(int v, double s) const { return eval(vertex_point(v, eps_), s); }

    // Tabulate over the base vertices; vertex_to_sample relabels the domain
    // (vertex i of K is sample vertex_to_sample[i] of the underlying space).
    SampleHomotopy tabulate(int steps, const std::vector<int>* vertex_to_sample = nullptr) const {
        std::vector<int> domain(static_cast<std::size_t>(base_->n_vertices));
        for (int v = 0; v < base_->n_vertices; ++v)
            domain[static_cast<std::size_t>(v)] =
                vertex_to_sample ? (*vertex_to_sample)[static_cast<std::size_t>(v)] : v;
        SampleHomotopy h;
        h.domain = std::move(domain);
        h.times = uniform_times(span_, steps);
        h.values.resize(h.domain.size());
        for (int v = 0; v < base_->n_vertices; ++v) {
            auto& row = h.values[static_cast<std::size_t>(v)];
            row.reserve(h.times.size());
            for (double t : h.times) row.push_back(eval_vertex(v, t));
        }
        return h;
    }

private:
    const NerveComplex* base_;
    const ModelSpace* model_;
    double eps_;
    double span_;
    std::unique_ptr<Extension> e0_, e1_;
    std::unique_ptr<NerveComplex> prism_, sheets_;
    std::unique_ptr<SheetMap> sheet_map_;
    std::unique_ptr<Extension> full_;
};

inline PrismHomotopy homotopy_from_closeness(const NerveComplex& K, const ModelSpace& M, double eps,
                                             double span, std::vector<int> f0, std::vector<int> f1) {
    return PrismHomotopy(K, M, eps, span, std::move(f0), std::move(f1));
}

// --- Transfer of an approximation through the nerve ------------------------

struct TransferResult {
    DiscreteMap F;                      // X sample -> Y sample
    double displacement = 0.0;          // max distance from the input approximation
    int displacement_witness = -1;
    LipschitzReport lip;
    std::shared_ptr<Extension> extension;
    std::shared_ptr<NerveComplex> nerve;
};

// F = (extension of v_j -> approx(center_j)) o Theta: realize X in its nerve
// and push the vertices through the approximation.
inline TransferResult transfer_map(const Covering& covX, const DiscreteMap& approx,
                                   const ModelSpace& modelY) {
    const FiniteMetricSpace& X = *covX.space;
    if (approx.domain != covX.space) throw DomainMismatch("approximation domain is not the covered space");
    if (approx.target != &modelY.space()) throw DomainMismatch("approximation target is not the model");
    PartitionOfUnity pou = partition_of_unity(covX);
    TransferResult out;
    out.nerve = std::make_shared<NerveComplex>(build_nerve(covX));
    std::vector<RealizationPoint> thetas = theta_map(pou, out.nerve.get());
    std::vector<int> vertex_values;
    vertex_values.reserve(covX.centers.size());
    for (int c : covX.centers) vertex_values.push_back(approx(c));
    out.extension = std::make_shared<Extension>(*out.nerve, modelY, covX.scale, std::move(vertex_values));
    out.F.domain = covX.space;
    out.F.target = &modelY.space();
    out.F.values.resize(static_cast<std::size_t>(X.size()));
    for (int x = 0; x < X.size(); ++x) {
        int y = out.extension->eval(thetas[static_cast<std::size_t>(x)]);
        out.F.values[static_cast<std::size_t>(x)] = y;
        double d = modelY.space().dist(y, approx(x));
        if (d > out.displacement) { out.displacement = d; out.displacement_witness = x; }
    }
    out.lip = measured_lipschitz(out.F, "transfer");
    return out;
}

}  // namespace nervekit
