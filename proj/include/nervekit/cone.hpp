#pragma once

#include <cmath>
#include <string>

#include "errors.hpp"
#include "metric_space.hpp"
#include "realization.hpp"

namespace nervekit {

// Point of the height-eps Euclidean cone over a sample space.  All points at
// height eps are one point (the apex); the canonical apex has base -1 so the
// identification is an exact comparison.
struct ConePoint {
    int base = -1;
    double t = 0.0;

    static ConePoint make(int base, double t, double eps) {
        ConePoint p;
        if (t == eps) {
            p.base = -1;
            p.t = eps;
        } else {
            p.base = base;
            p.t = t;
        }
        return p;
    }

    static ConePoint apex(double eps) { return {-1, eps}; }

    bool is_apex(double eps) const { return t == eps; }

    bool same_as(const ConePoint& o, double eps) const {
        if (is_apex(eps) || o.is_apex(eps)) return is_apex(eps) && o.is_apex(eps);
        return base == o.base && t == o.t;
    }
};

// Law-of-cosines cone metric: the base distance enters as an angle capped at
// pi, the heights as radii eps - t.
inline double cone_distance(const ConePoint& a, const ConePoint& b, double eps,
                            const FiniteMetricSpace& base_space) {
    const double ra = eps - a.t;
    const double rb = eps - b.t;
    if (ra == 0.0 && rb == 0.0) return 0.0;  // both apex
    if (ra == 0.0) return rb;
    if (rb == 0.0) return ra;
    const double ang = std::min(M_PI, base_space.dist(a.base, b.base));
    const double ss = ra * ra + rb * rb - 2.0 * ra * rb * std::cos(ang);
    return std::sqrt(std::max(0.0, ss));
}

// Point of the mapping cylinder: a realization point together with a cone
// point over the intersection of its support's covering elements.  The
// height-0 slice is the domain D; height eps is the realization copy.
struct CylinderPoint {
    RealizationPoint theta;
    ConePoint c;

    bool operator==(const CylinderPoint& o) const {
        return theta == o.theta && c.base == o.c.base && c.t == o.c.t;
    }
};

// Product metric on the cylinder: realization ambient part and cone part
// combined as L2.  The homotopy *time* axis is combined as L1 elsewhere;
// this is the spatial metric only.
inline double cylinder_distance(const CylinderPoint& a, const CylinderPoint& b, double eps,
                                const FiniteMetricSpace& base_space) {
    const double dr = ambient_distance(a.theta, b.theta);
    const double dc = cone_distance(a.c, b.c, eps, base_space);
    return std::sqrt(dr * dr + dc * dc);
}

}  // namespace nervekit
