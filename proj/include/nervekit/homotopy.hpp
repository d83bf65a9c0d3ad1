#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cone.hpp"
#include "discrete.hpp"
#include "errors.hpp"
#include "metric_space.hpp"
#include "model_space.hpp"
#include "nerve.hpp"
#include "realization.hpp"

namespace nervekit {

// xi_j = f_j / sum_i f_i with f_j the distance to the complement of U_j.
// Each f_j is 1-Lipschitz and positive exactly on U_j, so supports are exact.
struct PartitionOfUnity {
    const Covering* cov = nullptr;
    std::vector<std::vector<double>> f;   // [sample][element] complement distances
    std::vector<std::vector<double>> xi;  // [sample][element] normalized rows
    double min_row_sum = 0.0;
    int L_point = 0;

    double lip_xi_bound() const { return (1.0 + 2.0 * L_point) / cov->scale; }
    double lip_theta_bound() const { return 2.0 * L_point * (1.0 + 2.0 * L_point); }
};

inline PartitionOfUnity partition_of_unity(const Covering& cov) {
    const FiniteMetricSpace& X = *cov.space;
    const int n = X.size();
    const int m = cov.n_elements();
    PartitionOfUnity pou;
    pou.cov = &cov;
    pou.f.assign(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(m), 0.0));
    pou.xi = pou.f;
    pou.min_row_sum = std::numeric_limits<double>::infinity();
    for (int x = 0; x < n; ++x) {
        double sum = 0.0;
        for (int j = 0; j < m; ++j) {
            double fj = dist_to_complement(cov, j, x);
            // an element with empty complement is uniformly deep; use its radius
            if (!std::isfinite(fj)) fj = cov.radius;
            pou.f[static_cast<std::size_t>(x)][static_cast<std::size_t>(j)] = fj;
            sum += fj;
        }
        if (sum < cov.scale) throw ThinCovering(x, sum, cov.scale);
        pou.min_row_sum = std::min(pou.min_row_sum, sum);
        for (int j = 0; j < m; ++j)
            pou.xi[static_cast<std::size_t>(x)][static_cast<std::size_t>(j)] =
                pou.f[static_cast<std::size_t>(x)][static_cast<std::size_t>(j)] / sum;
    }
    pou.L_point = cov.max_point_overlap();
    return pou;
}

// Theta(x) = sum_j xi_j(x) v_j.  The support of Theta(x) is exactly the set
// of elements containing x, which has a common point (x itself), so it spans
// a nerve simplex.  When a nerve is supplied the membership is checked
// against it instead, to surface covering/nerve inconsistencies.
inline std::vector<RealizationPoint> theta_map(const PartitionOfUnity& pou, const NerveComplex* K = nullptr) {
    const Covering& cov = *pou.cov;
    const int n = cov.space->size();
    const int m = cov.n_elements();
    std::vector<RealizationPoint> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int x = 0; x < n; ++x) {
        RealizationPoint p;
        p.scale = cov.scale;
        for (int j = 0; j < m; ++j) {
            double w = pou.xi[static_cast<std::size_t>(x)][static_cast<std::size_t>(j)];
            if (w != 0.0) p.w.emplace_back(j, w);
        }
        Simplex supp = p.support();
        if (K ? !K->contains(supp) : !cov.common_point(supp))
            throw SupportNotSimplex("support of Theta at sample " + std::to_string(x) +
                                    " does not span a simplex");
        out.push_back(std::move(p));
    }
    return out;
}

// --- The mapping-cylinder homotopies -------------------------------------

inline void require_in_domain(const Covering& cov, const RealizationPoint& theta, int x) {
    for (const auto& [j, _] : theta.w)
        if (!cov.contains(j, x))
            throw NotInD("base sample " + std::to_string(x) + " lies outside element " + std::to_string(j));
}

inline CylinderPoint cylinder_base(const Covering& cov, const RealizationPoint& theta, int x) {
    require_in_domain(cov, theta, x);
    return {theta, ConePoint{x, 0.0}};
}

inline CylinderPoint cylinder_apex(const RealizationPoint& theta, double eps) {
    return {theta, ConePoint::apex(eps)};
}

// H((theta, x), s) = (((s/eps) Theta(x) + (1 - s/eps) theta), x) on the
// height-0 slice.  Exact at s = 0 and s = eps and on the fixed set
// theta = Theta(x).
inline DiscreteHomotopy<CylinderPoint, CylinderPoint> homotopy_H(
    const PartitionOfUnity& pou, const std::vector<RealizationPoint>& thetas,
    std::vector<CylinderPoint> domain, std::vector<double> times) {
    const Covering& cov = *pou.cov;
    for (const auto& p : domain) {
        if (p.c.t != 0.0) throw NotInD("H domain point has positive cone height");
        require_in_domain(cov, p.theta, p.c.base);
    }
    const double eps = cov.scale;
    return tabulate_homotopy<CylinderPoint, CylinderPoint>(
        std::move(domain), std::move(times), [&thetas, eps](const CylinderPoint& p, double s) {
            const RealizationPoint& target = thetas[static_cast<std::size_t>(p.c.base)];
            return CylinderPoint{convex_combination(p.theta, target, s / eps), p.c};
        });
}

// F((theta, [x,t]), s) = (theta, [x, (1 - s/eps) t + s]).  Exact at the
// endpoints and on the apex slice.
inline DiscreteHomotopy<CylinderPoint, CylinderPoint> homotopy_F(std::vector<CylinderPoint> domain,
                                                                 double eps, std::vector<double> times) {
    return tabulate_homotopy<CylinderPoint, CylinderPoint>(
        std::move(domain), std::move(times), [eps](const CylinderPoint& p, double s) {
            double h;
            if (s == 0.0) h = p.c.t;
            else if (s == eps || p.c.t == eps) h = eps;
            else h = (1.0 - s / eps) * p.c.t + s;
            return CylinderPoint{p.theta, ConePoint::make(p.c.base, h, eps)};
        });
}

// --- Per-simplex strong deformation retraction Phi_sigma -------------------

// Point of sigma x K(U_sigma): barycentric coordinates over sigma plus a
// cone point whose base is a model sample in U_sigma.
struct ChartPoint {
    std::vector<double> b;
    ConePoint c;

    bool same_as(const ChartPoint& o, double eps) const {
        return b == o.b && c.same_as(o.c, eps);
    }
};

namespace detail {

inline double cutoff_g(double s, double eps) {
    if (s <= eps / 3.0) return eps;
    if (s >= eps) return 0.0;
    return 1.5 * (eps - s);
}

inline double cutoff_mu(double s, double eps) {
    if (s <= eps / 2.0) return 0.0;
    if (s >= 2.0 * eps / 3.0) return eps;
    return 6.0 * (s - eps / 2.0);
}

inline double cutoff_nu(double s, double eps) {
    if (s <= 2.0 * eps / 3.0) return 0.0;
    if (s >= 0.75 * eps) return eps;
    return 12.0 * (s - 2.0 * eps / 3.0);
}

// height interpolation between the two plateaus of u
inline double wall_height(double u, double t, double eps) {
    if (u <= eps / 10.0) return u;
    if (u >= eps / 2.0) return t;
    if (u == t) return t;
    const double s0 = u - eps / 10.0;  // gauge of the inner plateau
    const double s1 = eps / 2.0 - u;   // gauge of the outer plateau
    return (s1 * u + s0 * t) / (s0 + s1);
}

inline std::vector<double> blend_coords(const std::vector<double>& a, const std::vector<double>& b,
                                        double lam) {
    if (lam == 0.0 || a == b) return a;
    if (lam == 1.0) return b;
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = (1.0 - lam) * a[i] + lam * b[i];
    return out;
}

}  // namespace detail

// Strong deformation retraction of sigma x K(U) onto
// sigma x U x {0} union boundary(sigma) x K(U).  Case 1 (a vertex) cones the
// contraction down to the base; Case 2 follows the radial projection with the
// mu/nu/g cutoff schedule.  All endpoint and fixed-set identities are exact
// because every branch returns its inputs by value, never recomputed.
class PhiSigma {
public:
    PhiSigma(Simplex sigma, std::shared_ptr<const ContractionOracle> oracle, double eps)
        : sigma_(std::move(sigma)), oracle_(std::move(oracle)), eps_(eps) {
        if (sigma_.empty()) throw EmptySpace("Phi_sigma over the empty simplex");
    }

    const Simplex& sigma() const { return sigma_; }
    int dim() const { return static_cast<int>(sigma_.size()) - 1; }
    double eps() const { return eps_; }
    const ContractionOracle& oracle() const { return *oracle_; }

    ChartPoint eval(const ChartPoint& p, double s) const {
        if (s <= 0.0) return p;
        const int x = p.c.is_apex(eps_) ? oracle_->center() : p.c.base;
        const double t = p.c.t;
        if (dim() == 0) {
            // r([x,t]) = [phi(x,t), 0]; Phi([x,t],s) = [phi(x,(s/eps)t), (g(s)/eps) t]
            const double g = detail::cutoff_g(s, eps_);
            const double arg = (s == eps_) ? t : (s / eps_) * t;
            const double h = (g == eps_) ? t : (g == 0.0 ? 0.0 : (g / eps_) * t);
            return {p.b, ConePoint::make(oracle_->eval(x, arg), h, eps_)};
        }
        RadialImage r = radial_projection(p.b, t, eps_);
        const double w = detail::wall_height(r.u, t, eps_);
        const double mu = detail::cutoff_mu(s, eps_);
        const double nu = detail::cutoff_nu(s, eps_);
        const double diff = (t == r.u) ? 0.0 : t - r.u;
        double arg;
        if (mu == 0.0) arg = 0.0;
        else if (mu == eps_) arg = diff;
        else arg = (mu / eps_) * diff;
        double h;
        if (nu == 0.0 || w == t) h = t;
        else if (nu == eps_) h = w;
        else h = (1.0 - nu / eps_) * t + (nu / eps_) * w;
        std::vector<double> bb = detail::blend_coords(p.b, r.psi, s / eps_);
        return {std::move(bb), ConePoint::make(oracle_->eval(x, arg), h, eps_)};
    }

    ChartPoint retract(const ChartPoint& p) const { return eval(p, eps_); }

    // membership in the retraction target set
    bool in_target(const ChartPoint& p) const {
        if (p.c.t == 0.0) return true;  // sigma x U x {0}
        double mn = p.b[0];
        for (double v : p.b) mn = std::min(mn, v);
        return mn == 0.0;  // boundary(sigma) x K(U)
    }

private:
    Simplex sigma_;
    std::shared_ptr<const ContractionOracle> oracle_;
    double eps_;
};

// Tabulated Phi_sigma over a chart sample grid.
inline DiscreteHomotopy<ChartPoint, ChartPoint> phi_sigma_homotopy(const PhiSigma& phi,
                                                                   std::vector<ChartPoint> domain,
                                                                   std::vector<double> times) {
    return tabulate_homotopy<ChartPoint, ChartPoint>(
        std::move(domain), std::move(times),
        [&phi](const ChartPoint& p, double s) { return phi.eval(p, s); });
}

// --- Glued retraction and the inverse map zeta ----------------------------

// Per-simplex charts (intersection, Chebyshev center, contraction) built
// lazily, so pipelines never materialize the full nerve.  When a nerve is
// supplied, carriers are required to be its simplices.
class RetractionSystem {
public:
    RetractionSystem(const Covering& cov, const ModelSpace& model, const NerveComplex* K = nullptr)
        : cov_(&cov), model_(&model), K_(K) {
        if (cov.space->size() != model.n)
            throw DomainMismatch("covering and model have different sample counts");
    }

    struct Chart {
        Simplex sigma;
        std::vector<int> element;
        int center = -1;
        std::shared_ptr<const ContractionOracle> oracle;
        std::shared_ptr<const PhiSigma> phi;
    };

    const Chart& chart(const Simplex& sigma) const {
        auto it = charts_.find(sigma);
        if (it != charts_.end()) return it->second;
        if (K_ && !K_->contains(sigma))
            throw MissingFamilyMember("no contraction assigned to a carrier simplex");
        Chart ch;
        ch.sigma = sigma;
        ch.element = cov_->intersection(sigma);
        if (ch.element.empty())
            throw MissingFamilyMember("carrier simplex has an empty intersection");
        ch.center = chebyshev_center(*cov_->space, ch.element);
        double r_max = 0.0;
        for (int y : ch.element) r_max = std::max(r_max, model_->dist(ch.center, y));
        if (r_max >= model_->convexity_radius()) throw NotConvex(r_max, model_->convexity_radius());
        ch.oracle = std::make_shared<ContractionOracle>(*model_, ch.element, ch.center, cov_->scale);
        ch.phi = std::make_shared<PhiSigma>(sigma, ch.oracle, cov_->scale);
        return charts_.emplace(sigma, std::move(ch)).first->second;
    }

    // Reverse-skeleta composition of the per-simplex retraction endpoints:
    // each stage either lands on the height-0 slice or strictly shrinks the
    // carrier, so at most dim+1 stages run.
    CylinderPoint retract(const CylinderPoint& p, std::vector<CylinderPoint>* trace = nullptr) const {
        const double eps = cov_->scale;
        CylinderPoint cur = p;
        if (trace) trace->push_back(cur);
        while (cur.c.t != 0.0) {
            Simplex sigma = cur.theta.support();
            const Chart& ch = chart(sigma);
            ChartPoint q{barycentric_over(cur.theta, sigma), cur.c};
            ChartPoint out = ch.phi->retract(q);
            RealizationPoint theta2 = from_barycentric(sigma, out.b, cur.theta.scale);
            if (!out.c.is_apex(eps) && out.c.t != 0.0) {
                if (theta2.support().size() >= sigma.size())
                    throw BadContraction("retraction stage failed to shrink its carrier");
            }
            cur = CylinderPoint{std::move(theta2), out.c};
            if (trace) trace->push_back(cur);
        }
        const Simplex supp = cur.theta.support();
        for (int j : supp)
            if (!cov_->contains(j, cur.c.base))
                throw BadContraction("retraction output left its carrier elements");
        return cur;
    }

    const Covering& covering() const { return *cov_; }
    const ModelSpace& model() const { return *model_; }
    std::size_t charts_built() const { return charts_.size(); }

private:
    const Covering* cov_;
    const ModelSpace* model_;
    const NerveComplex* K_;
    mutable std::map<Simplex, Chart> charts_;  // lazy; not thread-safe
};

// zeta = q o Phi-bar o Psi: send theta to the apex of its carrier's cone,
// retract to the height-0 slice, and read off the base sample.
inline int zeta_map(const RetractionSystem& rs, const RealizationPoint& theta,
                    std::vector<CylinderPoint>* trace = nullptr) {
    CylinderPoint apex = cylinder_apex(theta, rs.covering().scale);
    CylinderPoint down = rs.retract(apex, trace);
    return down.c.base;
}

// Round trip zeta(Theta(x)) for every sample, with the containment
// certificate: the result shares a covering element with x.
struct RoundTrip {
    std::vector<int> zeta_theta;
    std::vector<char> shares_element;
    std::vector<double> displacement;
    double max_displacement = 0.0;
    bool all_share = true;
};

inline RoundTrip round_trip(const RetractionSystem& rs, const std::vector<RealizationPoint>& thetas) {
    const Covering& cov = rs.covering();
    const FiniteMetricSpace& X = *cov.space;
    RoundTrip rt;
    const int n = X.size();
    rt.zeta_theta.resize(static_cast<std::size_t>(n));
    rt.shares_element.assign(static_cast<std::size_t>(n), 0);
    rt.displacement.resize(static_cast<std::size_t>(n));
    for (int x = 0; x < n; ++x) {
        int z = zeta_map(rs, thetas[static_cast<std::size_t>(x)]);
        rt.zeta_theta[static_cast<std::size_t>(x)] = z;
        bool share = false;
        for (int j = 0; j < cov.n_elements() && !share; ++j)
            if (cov.contains(j, x) && cov.contains(j, z)) share = true;
        rt.shares_element[static_cast<std::size_t>(x)] = share ? 1 : 0;
        rt.all_share = rt.all_share && share;
        double d = X.dist(x, z);
        rt.displacement[static_cast<std::size_t>(x)] = d;
        rt.max_displacement = std::max(rt.max_displacement, d);
    }
    return rt;
}

// Contraction of one covering element as a sampled homotopy.
inline SampleHomotopy ball_contraction(const ModelSpace& M, std::vector<int> element, int center,
                                       double eps, int steps = 16) {
    double r_max = 0.0;
    for (int y : element) r_max = std::max(r_max, M.dist(center, y));
    if (r_max >= M.convexity_radius()) throw NotConvex(r_max, M.convexity_radius());
    ContractionOracle oracle(M, element, center, eps);
    return tabulate_homotopy<int, int>(oracle.element(), uniform_times(eps, steps),
                                       [&oracle](int x, double t) { return oracle.eval(x, t); });
}

}  // namespace nervekit
