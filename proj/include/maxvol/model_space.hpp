#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "maxvol/space_form.hpp"

namespace maxvol {

/// Parameters shared by all model spaces: dimension n >= 2, curvature
/// sign k, disk radius r > 0 (r < pi/2 when k = 1 so that the two
/// ambient disks stay disjoint).
struct ModelParams {
    int n = 2;
    Curvature k = Curvature::Flat;
    double r = 1.0;

    bool operator==(const ModelParams&) const = default;
};

ModelParams model_params(int n, Curvature k, double r);

enum class ModelKind { Disk, DoubleDisk, Crosscap, Purse };

const char* model_kind_name(ModelKind kind);
ModelKind model_kind_from_name(const std::string& name);

enum class Sheet : int { Plus = 1, Minus = -1 };

/// A model point in normal coordinates: radial distance t in [0, r] from
/// the sheet center, unit direction u in R^n, and the sheet tag.
/// Crosscap and purse representatives always live on the plus sheet.
struct ModelPoint {
    ModelParams params;
    double t = 0.0;
    Vec u;           // unit vector, length n
    Sheet sheet = Sheet::Plus;
};

/// Validates ranges and fixes the degenerate direction at t = 0 to e1.
ModelPoint model_point(const ModelParams& params, double t, Vec u, Sheet sheet);

/// Canonical representative of the gluing-locus identifications:
///   t = r on the double disk  -> sheet +
///   t = r on the crosscap     -> sheet +, u the lexicographic min of {u, -u}
///   t = r on the purse        -> sheet +, last component of u >= 0
ModelPoint canonicalize(ModelKind kind, ModelPoint x);

bool same_model_point(ModelKind kind, const ModelPoint& a, const ModelPoint& b,
                      double tol = 1e-9);

/// Ambient space-form realization: exp from +-e0 along (0, u) by t.
SpaceFormPoint ambient(const ModelPoint& x);

/// Inverse of `ambient` for a point known to lie on the given sheet.
ModelPoint from_ambient(const ModelParams& params, const SpaceFormPoint& p,
                        Sheet sheet);

/// Center of the plus disk and the n reference points on the gluing
/// sphere (for k = 1 the ambient direction is -e_i, otherwise +e_i).
/// reference(n) is used only by the purse.
struct BasePoints {
    ModelPoint center;                 // p0
    std::vector<ModelPoint> reference; // p1 ... pn
};

BasePoints base_points(const ModelParams& params);

/// The free involution of the double disk, (t, u, s) -> (t, -u, -s);
/// on crosscap/purse representatives the induced involution (t, -u, +).
/// Unsupported on the plain disk.
ModelPoint involution_A(ModelKind kind, const ModelPoint& x);

/// Reflection in the hyperplane spanned by e0..e_{n-1}: negates the last
/// component of u.
ModelPoint reflect_R(const ModelPoint& x);

/// Options for the boundary-crossing minimization.
struct SolverOpts {
    int coarse_samples = 0;   // 0 = auto: max(64, 32 n)
    double tol = 1e-10;       // convergence tolerance on the objective
    int max_restarts = 3;     // local refinements from the best seeds
};

/// Outcome of a distance query, including the crossing witness when the
/// minimal path passes through the gluing locus.
struct DistanceResult {
    double value = 0.0;
    bool crossed = false;
    double crossing_angle = 0.0; // angle from u_x along the search arc
    Vec crossing_dir;            // boundary direction b of the crossing
    int lift = 0;                // crosscap: 0 = direct lift, 1 = involved lift
};

/// Intrinsic distance on the chosen model space.
double model_distance(ModelKind kind, const ModelPoint& x, const ModelPoint& y,
                      const SolverOpts& opts = {});

DistanceResult model_distance_detail(ModelKind kind, const ModelPoint& x,
                                     const ModelPoint& y,
                                     const SolverOpts& opts = {});

/// Intra-sheet distance of two normal-coordinate points given the cosine
/// of the angle between their directions (closed form).
double sheet_distance(Curvature k, double t1, double t2, double cos_gamma);

enum class SampleMode { Uniform, Grid };

/// Uniform mode: density proportional to the volume element sn_k(t)^{n-1};
/// grid mode: product grid in (t, direction, sheet). Deterministic in seed.
std::vector<ModelPoint> sample_points(ModelKind kind, const ModelParams& params,
                                      int count, SampleMode mode,
                                      std::uint64_t seed);

/// Radial foot on the gluing sphere: ((r, u_x, sheet_x), r - t).
std::pair<ModelPoint, double> nearest_boundary(const ModelPoint& x);

/// Unit-speed geodesic flow for `len` from x with initial direction `dir`
/// (ambient tangent components at ambient(x)). Continues across the
/// gluing locus using the identification of the given kind. On the plain
/// disk a crossing raises DomainError.
ModelPoint model_exp(ModelKind kind, const ModelPoint& x, const Vec& dir,
                     double len);

/// Orthonormal tangent frame (n ambient vectors) at ambient(x).
std::vector<Vec> tangent_frame(const ModelPoint& x);

/// Uniform samples of the metric ball B(center, radius) on the double
/// disk or the purse, with respect to the volume measure.
std::vector<ModelPoint> sample_ball(ModelKind kind, const ModelPoint& center,
                                    double radius, int count,
                                    std::uint64_t seed,
                                    const SolverOpts& opts = {});

/// Total volume of the model space.
double model_volume(ModelKind kind, const ModelParams& params);

/// Plain-text record `kind k n r t u... sheet` at 17 significant digits.
std::string format_model_point(ModelKind kind, const ModelPoint& x);
std::pair<ModelKind, ModelPoint> parse_model_point(const std::string& line);

} // namespace maxvol
