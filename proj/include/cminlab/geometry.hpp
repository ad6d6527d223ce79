#pragma once

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace cminlab {

using Vec = std::vector<double>;

inline double sqr(double x) { return x * x; }

/// Chart kinds supported by the toolkit. Metrics:
///  - Euclidean: flat ambient distance
///  - Cylinder: flat distance with wraparound on the periodic coordinates
///  - EmbeddedSphere: chord metric on S^n inside R^{n+1}
///  - SolidTorus: S^1 x D^2 embedded in C^2 = R^4, ambient chord distance
enum class ChartKind { Euclidean, Cylinder, EmbeddedSphere, SolidTorus };

class PhaseSpace {
public:
    ChartKind kind;
    int dim;          // intrinsic dimension
    int ambient_dim;  // coordinates stored per point
    std::string name;
    Vec periods;      // cylinder charts: period per coordinate, 0 = unwrapped axis

    static std::shared_ptr<const PhaseSpace> euclidean(int dim, std::string name = "");
    static std::shared_ptr<const PhaseSpace> cylinder(Vec periods, std::string name = "");
    static std::shared_ptr<const PhaseSpace> embedded_sphere(int dim, std::string name = "");
    static std::shared_ptr<const PhaseSpace> solid_torus(std::string name = "");

    double distance(const Vec& a, const Vec& b) const;

    /// Idempotent retraction onto the chart (wrap angles, renormalise spheres,
    /// clamp the disc factor). Integration applies this after every step.
    Vec project(Vec x) const;

    bool on_space(const Vec& x, double tol = 1e-9) const;

    /// True when distance() coincides with the ambient Euclidean metric, which
    /// makes grid-bucket nearest-neighbour indexing applicable.
    bool ambient_euclidean_metric() const { return kind != ChartKind::Cylinder; }

private:
    PhaseSpace() = default;
};

struct PhasePoint {
    Vec coords;
    std::shared_ptr<const PhaseSpace> space;
};

inline double PhaseSpace::distance(const Vec& a, const Vec& b) const {
    if ((int)a.size() != ambient_dim || (int)b.size() != ambient_dim)
        throw std::invalid_argument("PhaseSpace::distance: dimension mismatch");
    double s = 0;
    if (kind == ChartKind::Cylinder) {
        for (int i = 0; i < ambient_dim; ++i) {
            double d = a[i] - b[i];
            double p = periods[i];
            if (p > 0) {
                d = std::fmod(d, p);
                if (d > 0.5 * p) d -= p;
                if (d < -0.5 * p) d += p;
            }
            s += d * d;
        }
    } else {
        for (int i = 0; i < ambient_dim; ++i) s += sqr(a[i] - b[i]);
    }
    return std::sqrt(s);
}

inline Vec PhaseSpace::project(Vec x) const {
    if ((int)x.size() != ambient_dim)
        throw std::invalid_argument("PhaseSpace::project: dimension mismatch");
    switch (kind) {
    case ChartKind::Euclidean:
        return x;
    case ChartKind::Cylinder:
        for (int i = 0; i < ambient_dim; ++i) {
            double p = periods[i];
            if (p <= 0) continue;
            x[i] = std::fmod(x[i], p);
            if (x[i] >= 0.5 * p) x[i] -= p;
            if (x[i] < -0.5 * p) x[i] += p;
        }
        return x;
    case ChartKind::EmbeddedSphere: {
        double n = 0;
        for (double c : x) n += c * c;
        n = std::sqrt(n);
        if (n == 0) throw std::domain_error("PhaseSpace::project: cannot project origin onto sphere");
        for (double& c : x) c /= n;
        return x;
    }
    case ChartKind::SolidTorus: {
        double n1 = std::sqrt(sqr(x[0]) + sqr(x[1]));
        if (n1 == 0) throw std::domain_error("PhaseSpace::project: z1 = 0 has no retraction onto S^1");
        x[0] /= n1;
        x[1] /= n1;
        double n2 = std::sqrt(sqr(x[2]) + sqr(x[3]));
        if (n2 > 1.0) { x[2] /= n2; x[3] /= n2; }
        return x;
    }
    }
    throw std::logic_error("PhaseSpace::project: unknown chart kind");
}

inline bool PhaseSpace::on_space(const Vec& x, double tol) const {
    if ((int)x.size() != ambient_dim) return false;
    switch (kind) {
    case ChartKind::Euclidean:
        return true;
    case ChartKind::Cylinder:
        for (int i = 0; i < ambient_dim; ++i) {
            double p = periods[i];
            if (p > 0 && (x[i] < -0.5 * p - tol || x[i] > 0.5 * p + tol)) return false;
        }
        return true;
    case ChartKind::EmbeddedSphere: {
        double n = 0;
        for (double c : x) n += c * c;
        return std::abs(std::sqrt(n) - 1.0) <= tol;
    }
    case ChartKind::SolidTorus: {
        double n1 = std::sqrt(sqr(x[0]) + sqr(x[1]));
        double n2 = std::sqrt(sqr(x[2]) + sqr(x[3]));
        return std::abs(n1 - 1.0) <= tol && n2 <= 1.0 + tol;
    }
    }
    return false;
}

inline std::shared_ptr<const PhaseSpace> PhaseSpace::euclidean(int dim, std::string name) {
    if (dim < 1) throw std::invalid_argument("PhaseSpace::euclidean: dim must be positive");
    auto s = std::shared_ptr<PhaseSpace>(new PhaseSpace());
    s->kind = ChartKind::Euclidean;
    s->dim = s->ambient_dim = dim;
    s->name = name.empty() ? ("R^" + std::to_string(dim)) : std::move(name);
    return s;
}

inline std::shared_ptr<const PhaseSpace> PhaseSpace::cylinder(Vec periods, std::string name) {
    if (periods.empty()) throw std::invalid_argument("PhaseSpace::cylinder: need at least one coordinate");
    auto s = std::shared_ptr<PhaseSpace>(new PhaseSpace());
    s->kind = ChartKind::Cylinder;
    s->dim = s->ambient_dim = (int)periods.size();
    s->periods = std::move(periods);
    s->name = name.empty() ? "cylinder" : std::move(name);
    return s;
}

inline std::shared_ptr<const PhaseSpace> PhaseSpace::embedded_sphere(int dim, std::string name) {
    if (dim < 1) throw std::invalid_argument("PhaseSpace::embedded_sphere: dim must be positive");
    auto s = std::shared_ptr<PhaseSpace>(new PhaseSpace());
    s->kind = ChartKind::EmbeddedSphere;
    s->dim = dim;
    s->ambient_dim = dim + 1;
    s->name = name.empty() ? ("S^" + std::to_string(dim)) : std::move(name);
    return s;
}

inline std::shared_ptr<const PhaseSpace> PhaseSpace::solid_torus(std::string name) {
    auto s = std::shared_ptr<PhaseSpace>(new PhaseSpace());
    s->kind = ChartKind::SolidTorus;
    s->dim = 3;
    s->ambient_dim = 4;
    s->name = name.empty() ? "S^1xD^2" : std::move(name);
    return s;
}

}  // namespace cminlab
