#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nervekit {

// Base for all contract violations raised by the library.  Every subclass
// carries the witness data that makes the failure reproducible.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& msg)
        : std::runtime_error(msg), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

class MetricFormatError : public Error {
public:
    explicit MetricFormatError(const std::string& msg) : Error("MetricFormatError", msg) {}
};

class NegativeEntry : public Error {
public:
    NegativeEntry(int i, int j, double value)
        : Error("NegativeEntry",
                "dist[" + std::to_string(i) + "][" + std::to_string(j) + "] = " +
                    std::to_string(value) + " is negative"),
          i(i), j(j), value(value) {}
    int i, j;
    double value;
};

class AsymmetricMatrix : public Error {
public:
    AsymmetricMatrix(int i, int j, double dij, double dji)
        : Error("AsymmetricMatrix",
                "dist[" + std::to_string(i) + "][" + std::to_string(j) + "] = " +
                    std::to_string(dij) + " != dist[" + std::to_string(j) + "][" +
                    std::to_string(i) + "] = " + std::to_string(dji)),
          i(i), j(j), dij(dij), dji(dji) {}
    int i, j;
    double dij, dji;
};

// Worst violating triple: d(i,k) > d(i,j) + d(j,k) + tolerance.
class TriangleViolation : public Error {
public:
    TriangleViolation(int i, int k, int j, double excess)
        : Error("TriangleViolation",
                "triangle inequality fails on triple (" + std::to_string(i) + "," +
                    std::to_string(k) + "," + std::to_string(j) + ") by " +
                    std::to_string(excess)),
          i(i), k(k), j(j), excess(excess) {}
    int i, k, j;
    double excess;
};

class EmptySpace : public Error {
public:
    explicit EmptySpace(const std::string& msg) : Error("EmptySpace", msg) {}
};

class UnsupportedKind : public Error {
public:
    explicit UnsupportedKind(const std::string& kind)
        : Error("UnsupportedKind", "unknown model kind '" + kind + "'"), kind(kind) {}
    std::string kind;
};

class NotConvex : public Error {
public:
    NotConvex(double radius, double convexity_radius)
        : Error("NotConvex",
                "set radius " + std::to_string(radius) + " exceeds convexity radius " +
                    std::to_string(convexity_radius)),
          radius(radius), convexity_radius(convexity_radius) {}
    double radius, convexity_radius;
};

class DomainMismatch : public Error {
public:
    explicit DomainMismatch(const std::string& msg) : Error("DomainMismatch", msg) {}
};

class TooLarge : public Error {
public:
    TooLarge(std::size_t n, std::size_t cap)
        : Error("TooLarge",
                "space with " + std::to_string(n) + " points exceeds exhaustive cap " +
                    std::to_string(cap)),
          n(n), cap(cap) {}
    std::size_t n, cap;
};

class EndpointMismatch : public Error {
public:
    EndpointMismatch(const std::string& which, int sample, int expected, int actual)
        : Error("EndpointMismatch",
                which + " endpoint mismatch at sample " + std::to_string(sample) +
                    ": expected " + std::to_string(expected) + ", got " +
                    std::to_string(actual)),
          which(which), sample(sample), expected(expected), actual(actual) {}
    std::string which;
    int sample, expected, actual;
};

class TimeMismatch : public Error {
public:
    TimeMismatch(double span_f, double span_g)
        : Error("TimeMismatch",
                "homotopy time spans differ: " + std::to_string(span_f) + " vs " +
                    std::to_string(span_g)),
          span_f(span_f), span_g(span_g) {}
    double span_f, span_g;
};

class VertexCountMismatch : public Error {
public:
    VertexCountMismatch(std::size_t a, std::size_t b)
        : Error("VertexCountMismatch",
                "complexes have " + std::to_string(a) + " and " + std::to_string(b) +
                    " vertices"),
          a(a), b(b) {}
    std::size_t a, b;
};

class NoStableRadius : public Error {
public:
    NoStableRadius(double r_min, double r_max, double c0)
        : Error("NoStableRadius",
                "no radius in [" + std::to_string(r_min) + ", " + std::to_string(r_max) +
                    "] has an identical nerve across +-" + std::to_string(c0)),
          r_min(r_min), r_max(r_max), c0(c0) {}
    double r_min, r_max, c0;
};

class TruncationTooLow : public Error {
public:
    TruncationTooLow(int max_dim, int needed)
        : Error("TruncationTooLow",
                "max_dim " + std::to_string(max_dim) + " would drop simplices; need >= " +
                    std::to_string(needed)),
          max_dim(max_dim), needed(needed) {}
    int max_dim, needed;
};

class Disconnected : public Error {
public:
    explicit Disconnected(const std::string& msg) : Error("Disconnected", msg) {}
};

class ApexInput : public Error {
public:
    explicit ApexInput(const std::string& msg) : Error("ApexInput", msg) {}
};

class ScaleMismatch : public Error {
public:
    ScaleMismatch(double a, double b)
        : Error("ScaleMismatch",
                "realization scales differ: " + std::to_string(a) + " vs " + std::to_string(b)),
          a(a), b(b) {}
    double a, b;
};

class ThinCovering : public Error {
public:
    ThinCovering(int sample, double sum, double required)
        : Error("ThinCovering",
                "sum of complement distances at sample " + std::to_string(sample) + " is " +
                    std::to_string(sum) + " < " + std::to_string(required)),
          sample(sample), sum(sum), required(required) {}
    int sample;
    double sum, required;
};

class SupportNotSimplex : public Error {
public:
    explicit SupportNotSimplex(const std::string& msg) : Error("SupportNotSimplex", msg) {}
};

class NotInD : public Error {
public:
    explicit NotInD(const std::string& msg) : Error("NotInD", msg) {}
};

class BadContraction : public Error {
public:
    explicit BadContraction(const std::string& msg) : Error("BadContraction", msg) {}
};

class MissingFamilyMember : public Error {
public:
    explicit MissingFamilyMember(const std::string& msg) : Error("MissingFamilyMember", msg) {}
};

class NoContainingBall : public Error {
public:
    NoContainingBall(double radius, double convexity_radius)
        : Error("NoContainingBall",
                "enclosing ball radius " + std::to_string(radius) +
                    " reaches the convexity radius " + std::to_string(convexity_radius)),
          radius(radius), convexity_radius(convexity_radius) {}
    double radius, convexity_radius;
};

class RadiusOverflow : public Error {
public:
    RadiusOverflow(double radius, double convexity_radius)
        : Error("RadiusOverflow",
                "nested element radius " + std::to_string(radius) +
                    " reaches the convexity radius " + std::to_string(convexity_radius)),
          radius(radius), convexity_radius(convexity_radius) {}
    double radius, convexity_radius;
};

class TooFar : public Error {
public:
    TooFar(int sample, double distance, double bound)
        : Error("TooFar",
                "maps are " + std::to_string(distance) + " apart at sample " +
                    std::to_string(sample) + ", allowed " + std::to_string(bound)),
          sample(sample), distance(distance), bound(bound) {}
    int sample;
    double distance, bound;
};

class DegenerateDomain : public Error {
public:
    explicit DegenerateDomain(const std::string& msg) : Error("DegenerateDomain", msg) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error("IoError", msg) {}
};

}  // namespace nervekit
