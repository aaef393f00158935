#pragma once

#include <vector>

#include "maxvol/errors.hpp"
#include "maxvol/linalg.hpp"

namespace maxvol {

/// Curvature sign of a simply connected space form. After rescaling,
/// only the three unit values matter.
enum class Curvature : int { Hyperbolic = -1, Flat = 0, Spherical = 1 };

Curvature curvature_from_int(int k);
inline int curvature_value(Curvature k) { return static_cast<int>(k); }
const char* curvature_name(Curvature k);

/// Generalized sine: solution of s'' + k s = 0 with s(0)=0, s'(0)=1.
double sn(Curvature k, double t);
/// Generalized cosine: derivative of sn.
double cs(Curvature k, double t);

/// A point of S^n, {±e0} x R^n, or H^n_± in ambient coordinates.
///
/// Sphere: |x| = 1.  Flat: x0 = ±1 selects the affine slice.
/// Hyperbolic: Minkowski square -x0^2 + sum x_i^2 = -1 with x0 > 0 on
/// the upper sheet and x0 < 0 on the lower one.
struct SpaceFormPoint {
    Curvature k = Curvature::Flat;
    Vec coords;
};

/// Validates the model invariants (1e-12 tolerance) and returns the point.
SpaceFormPoint space_form_point(Curvature k, Vec coords);

inline int dimension(const SpaceFormPoint& x) {
    return static_cast<int>(x.coords.size()) - 1;
}

/// Ambient bilinear form: Minkowski for k = -1, Euclidean otherwise.
double ambient_dot(Curvature k, const Vec& a, const Vec& b);

struct TangentVector {
    SpaceFormPoint base;
    Vec comps;
};

/// Checks tangency (orthogonal to the base point under the ambient form;
/// zero e0 component in the flat case) within 1e-9.
TangentVector tangent_vector(const SpaceFormPoint& base, Vec comps);

double tangent_norm(const TangentVector& v);

/// Geodesic distance between two points of the same space form component.
double distance(const SpaceFormPoint& x, const SpaceFormPoint& y);

/// Point at arc length t along the unit-speed geodesic from x with
/// initial direction v. Throws DomainError if v is not unit within 1e-9.
SpaceFormPoint exp_map(const SpaceFormPoint& x, const TangentVector& v,
                       double t);

/// Unit initial direction of the segment from x to y.
/// Throws AmbiguityError for near-antipodal spherical pairs
/// (distance > pi - 1e-6) and DegeneracyError for coincident points.
TangentVector log_map(const SpaceFormPoint& x, const SpaceFormPoint& y);

/// Angle at the vertex joining sides d_xy and d_xz of the triangle with
/// these side lengths in the curvature-k model plane. Result in [0, pi].
double comparison_angle(Curvature k, double d_xy, double d_xz, double d_yz);

/// Surface measure of the unit sphere S^{n-1} in R^n.
double unit_sphere_area(int n);

/// Volume of the metric r-ball in the n-dimensional space form:
/// vol(S^{n-1}) * integral of sn_k(t)^{n-1} over [0, r].
/// Closed forms where available, adaptive quadrature otherwise.
double ball_volume(int n, Curvature k, double r);

} // namespace maxvol
