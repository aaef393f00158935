#include "maxvol/space_form.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace maxvol {

namespace {

constexpr double kPi = std::numbers::pi;

double clamped_acos(double a, double tol = 1e-12) {
    if (a > 1.0) {
        if (a > 1.0 + tol) throw DomainError("acos argument exceeds 1");
        a = 1.0;
    } else if (a < -1.0) {
        if (a < -1.0 - tol) throw DomainError("acos argument below -1");
        a = -1.0;
    }
    return std::acos(a);
}

bool same_component(const SpaceFormPoint& x, const SpaceFormPoint& y) {
    if (x.k == Curvature::Spherical) return true;
    return (x.coords[0] > 0) == (y.coords[0] > 0);
}

// Integrand weight for ball volumes.
double radial_weight(Curvature k, double t, int n) {
    return std::pow(sn(k, t), n - 1);
}

double adaptive_simpson(double (*f)(Curvature, double, int), Curvature k,
                        int n, double a, double b, double fa, double fm,
                        double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(k, lm, n), frm = f(k, rm, n);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(f, k, n, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
           adaptive_simpson(f, k, n, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

double integrate_radial(Curvature k, int n, double r, double rel_tol) {
    double fa = radial_weight(k, 0.0, n);
    double fb = radial_weight(k, r, n);
    double fm = radial_weight(k, 0.5 * r, n);
    double whole = r / 6.0 * (fa + 4.0 * fm + fb);
    double scale = std::max(std::abs(whole), 1e-30);
    return adaptive_simpson(radial_weight, k, n, 0.0, r, fa, fm, fb, whole,
                            rel_tol * scale, 60);
}

} // namespace

Curvature curvature_from_int(int k) {
    switch (k) {
        case -1: return Curvature::Hyperbolic;
        case 0: return Curvature::Flat;
        case 1: return Curvature::Spherical;
    }
    throw DomainError("curvature must be -1, 0 or 1, got " + std::to_string(k));
}

const char* curvature_name(Curvature k) {
    switch (k) {
        case Curvature::Hyperbolic: return "-1";
        case Curvature::Flat: return "0";
        case Curvature::Spherical: return "1";
    }
    return "?";
}

double sn(Curvature k, double t) {
    switch (k) {
        case Curvature::Spherical: return std::sin(t);
        case Curvature::Flat: return t;
        case Curvature::Hyperbolic: return std::sinh(t);
    }
    return t;
}

double cs(Curvature k, double t) {
    switch (k) {
        case Curvature::Spherical: return std::cos(t);
        case Curvature::Flat: return 1.0;
        case Curvature::Hyperbolic: return std::cosh(t);
    }
    return 1.0;
}

double ambient_dot(Curvature k, const Vec& a, const Vec& b) {
    double s = (k == Curvature::Hyperbolic) ? -a[0] * b[0] : a[0] * b[0];
    for (std::size_t i = 1; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

SpaceFormPoint space_form_point(Curvature k, Vec coords) {
    if (coords.size() < 2)
        throw DomainError("space form points need at least 2 ambient coordinates");
    const double tol = 1e-12;
    switch (k) {
        case Curvature::Spherical: {
            double n2 = dot(coords, coords);
            if (std::abs(n2 - 1.0) > 32 * tol)
                throw DomainError("spherical point is off the unit sphere");
            break;
        }
        case Curvature::Flat: {
            if (std::abs(std::abs(coords[0]) - 1.0) > tol)
                throw DomainError("flat point must lie on a slice x0 = +-1");
            break;
        }
        case Curvature::Hyperbolic: {
            double q = ambient_dot(k, coords, coords);
            if (std::abs(q + 1.0) > 64 * tol)
                throw DomainError("hyperbolic point is off the hyperboloid");
            if (coords[0] == 0.0)
                throw DomainError("hyperbolic point must have nonzero x0");
            break;
        }
    }
    return SpaceFormPoint{k, std::move(coords)};
}

TangentVector tangent_vector(const SpaceFormPoint& base, Vec comps) {
    if (comps.size() != base.coords.size())
        throw DomainError("tangent vector dimension mismatch");
    if (base.k == Curvature::Flat) {
        if (std::abs(comps[0]) > 1e-9)
            throw DomainError("flat tangents must have zero e0 component");
    } else {
        double ip = ambient_dot(base.k, base.coords, comps);
        double scale = std::max(1.0, norm(comps));
        if (std::abs(ip) > 1e-9 * scale)
            throw DomainError("vector is not tangent to the model at its base");
    }
    return TangentVector{base, std::move(comps)};
}

double tangent_norm(const TangentVector& v) {
    // The restriction of the ambient form to a tangent space is positive
    // definite in all three models.
    return std::sqrt(std::max(0.0, ambient_dot(v.base.k, v.comps, v.comps)));
}

double distance(const SpaceFormPoint& x, const SpaceFormPoint& y) {
    if (x.k != y.k) throw DomainError("distance between different curvatures");
    if (x.coords.size() != y.coords.size())
        throw DomainError("distance between different dimensions");
    if (!same_component(x, y))
        throw DomainError("points lie on different model components");
    switch (x.k) {
        case Curvature::Spherical: {
            // chord form keeps full precision for nearby points
            double chord = norm(sub(x.coords, y.coords));
            return 2.0 * std::asin(std::min(1.0, 0.5 * chord));
        }
        case Curvature::Flat:
            return norm(sub(x.coords, y.coords));
        case Curvature::Hyperbolic: {
            Vec d = sub(x.coords, y.coords);
            double q = ambient_dot(x.k, d, d); // 4 sinh^2(dist/2)
            return 2.0 * std::asinh(0.5 * std::sqrt(std::max(0.0, q)));
        }
    }
    return 0.0;
}

SpaceFormPoint exp_map(const SpaceFormPoint& x, const TangentVector& v,
                       double t) {
    double nv = tangent_norm(v);
    if (std::abs(nv - 1.0) > 1e-9)
        throw DomainError("exp_map requires a unit tangent vector");
    Vec out(x.coords.size());
    double c = cs(x.k, t), s = sn(x.k, t);
    if (x.k == Curvature::Flat) {
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = x.coords[i] + t * v.comps[i];
    } else {
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = c * x.coords[i] + s * v.comps[i];
    }
    return space_form_point(x.k, std::move(out));
}

TangentVector log_map(const SpaceFormPoint& x, const SpaceFormPoint& y) {
    double d = distance(x, y);
    if (d < 1e-12)
        throw DegeneracyError("log_map of coincident points");
    if (x.k == Curvature::Spherical && d > kPi - 1e-6)
        throw AmbiguityError("log_map of a near-antipodal pair is not unique");
    Vec w(x.coords.size());
    if (x.k == Curvature::Flat) {
        w = sub(y.coords, x.coords);
        w[0] = 0.0;
    } else {
        // y = cs(d) x + sn(d) v  =>  v = (y - cs(d) x) / sn(d)
        double c = cs(x.k, d), s = sn(x.k, d);
        for (std::size_t i = 0; i < w.size(); ++i)
            w[i] = (y.coords[i] - c * x.coords[i]) / s;
    }
    // renormalize against rounding
    double n = std::sqrt(std::max(ambient_dot(x.k, w, w), 1e-300));
    for (auto& c : w) c /= n;
    return TangentVector{x, std::move(w)};
}

double comparison_angle(Curvature k, double d_xy, double d_xz, double d_yz) {
    const double tol = 1e-12;
    if (d_xy < 0 || d_xz < 0 || d_yz < 0)
        throw DomainError("comparison_angle: negative side length");
    if (d_xy <= tol || d_xz <= tol)
        throw DegeneracyError("comparison_angle: hinge side has zero length");
    if (d_yz > d_xy + d_xz + tol || d_xy > d_xz + d_yz + tol ||
        d_xz > d_xy + d_yz + tol)
        throw DomainError("comparison_angle: triangle inequality violated");
    if (k == Curvature::Spherical && d_xy + d_xz + d_yz > 2 * kPi + tol)
        throw DomainError("comparison_angle: spherical perimeter exceeds 2*pi");
    double arg = 0.0;
    switch (k) {
        case Curvature::Flat:
            arg = (d_xy * d_xy + d_xz * d_xz - d_yz * d_yz) /
                  (2.0 * d_xy * d_xz);
            break;
        case Curvature::Spherical:
            arg = (std::cos(d_yz) - std::cos(d_xy) * std::cos(d_xz)) /
                  (std::sin(d_xy) * std::sin(d_xz));
            break;
        case Curvature::Hyperbolic:
            arg = (std::cosh(d_xy) * std::cosh(d_xz) - std::cosh(d_yz)) /
                  (std::sinh(d_xy) * std::sinh(d_xz));
            break;
    }
    return clamped_acos(arg, 1e-9);
}

double unit_sphere_area(int n) {
    if (n < 1) throw DomainError("unit_sphere_area requires n >= 1");
    if (n == 1) return 2.0; // S^0 = two points
    return 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n);
}

double ball_volume(int n, Curvature k, double r) {
    if (n < 1) throw DomainError("ball_volume requires n >= 1");
    if (r <= 0) throw DomainError("ball_volume requires r > 0");
    if (k == Curvature::Spherical && r >= kPi)
        throw DomainError("spherical ball radius must be below pi");
    if (n == 1) return 2.0 * r;
    double area = unit_sphere_area(n);
    switch (k) {
        case Curvature::Flat:
            return area * std::pow(r, n) / n;
        case Curvature::Spherical:
            if (n == 2) return 2.0 * kPi * (1.0 - std::cos(r));
            if (n == 3) return 2.0 * kPi * (r - std::sin(r) * std::cos(r));
            break;
        case Curvature::Hyperbolic:
            if (n == 2) return 2.0 * kPi * (std::cosh(r) - 1.0);
            if (n == 3) return 2.0 * kPi * (std::sinh(r) * std::cosh(r) - r);
            break;
    }
    return area * integrate_radial(k, n, r, 1e-11);
}

} // namespace maxvol
