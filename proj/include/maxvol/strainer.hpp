#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "maxvol/model_space.hpp"
#include "maxvol/space_form.hpp"

namespace maxvol {

/// A finite metric space with a curvature-lower-bound tag. The triangle
/// inequality is enforced (within 1e-9) at construction.
class FiniteMetricSpace {
  public:
    static FiniteMetricSpace from_matrix(std::vector<std::string> labels,
                                         std::vector<double> dist_row_major,
                                         Curvature curv_lb);

    int size() const { return n_; }
    double dist(int i, int j) const { return d_[i * n_ + j]; }
    Curvature curv_lb() const { return curv_lb_; }
    const std::string& label(int i) const { return labels_[i]; }
    const std::vector<double>& raw() const { return d_; }

    double diameter() const;
    /// max over points of the distance to all others (used by lower bounds)
    std::vector<double> eccentricities() const;

  private:
    FiniteMetricSpace() = default;
    int n_ = 0;
    Curvature curv_lb_ = Curvature::Flat;
    std::vector<std::string> labels_;
    std::vector<double> d_;
};

/// Text format: header `n curv_lb`, then the strict upper triangle
/// row by row, whitespace separated.
void write_metric_space(std::ostream& os, const FiniteMetricSpace& s);
FiniteMetricSpace read_metric_space(std::istream& is);

/// Pairwise model distances of a point sample, kept alongside the points
/// so charts can smooth distance functions by ball averaging.
struct ModelBackedSpace {
    ModelKind kind = ModelKind::DoubleDisk;
    ModelParams params;
    std::vector<ModelPoint> points;
    FiniteMetricSpace metric;
};

ModelBackedSpace model_backed_space(ModelKind kind, const ModelParams& params,
                                    std::vector<ModelPoint> points,
                                    const SolverOpts& opts = {});

/// Comparison angle at x of the triangle (a, x, b), computed at the
/// space's curvature lower bound.
double cmp_angle_metric(const FiniteMetricSpace& s, int a, int x, int b);

struct StrainerSpec {
    int x = 0;
    std::vector<std::pair<int, int>> pairs; // (a_i, b_i)
    double delta = 0.1;
    double r = 0.1;
};

struct StrainerCheck {
    bool ok = false;
    double margin = 0.0;       // slack of the tightest inequality
    std::string tightest;      // which inequality was tightest
};

/// Verifies the five inequality families of an (n, delta, r)-strainer.
StrainerCheck is_strained(const FiniteMetricSpace& s, const StrainerSpec& spec);

/// Greedy strainer search: picks pairs maximizing the minimum slack,
/// dimension by dimension, with lexicographic tie-breaks. Returns nullopt
/// when no candidate pair attains positive slack.
std::optional<StrainerSpec> find_strainer(const FiniteMetricSpace& s, int x,
                                          int count, double delta, double r);

/// Distance coordinates x -> (dist(a_1, x), ..., dist(a_n, x)).
std::vector<double> distance_chart(const FiniteMetricSpace& s,
                                   const StrainerSpec& spec, int point);

/// Worst-case deviation of chart-image distances from metric distances
/// over all pairs drawn from `sample` (coincident pairs skipped).
double chart_distortion(const FiniteMetricSpace& s, const StrainerSpec& spec,
                        const std::vector<int>& sample);

/// Chart coordinates smoothed by averaging each distance function over a
/// ball around its anchor; the extra regularity makes finite-difference
/// Jacobians meaningful. Deterministic per seed.
class SmoothedChart {
  public:
    SmoothedChart(const ModelBackedSpace& space, const StrainerSpec& spec,
                  double eta, int mc_samples, std::uint64_t seed);

    int dim() const { return static_cast<int>(anchor_balls_.size()); }
    std::vector<double> eval(const ModelPoint& y) const;
    double eval_coordinate(int i, const ModelPoint& y) const;
    const std::vector<ModelPoint>& anchors() const { return anchors_; }
    double eta() const { return eta_; }

  private:
    ModelKind kind_;
    double eta_;
    SolverOpts opts_;
    std::vector<ModelPoint> anchors_;
    std::vector<std::vector<ModelPoint>> anchor_balls_;
};

struct GlobalStrainerSpec {
    std::vector<std::vector<int>> a_sets;
    std::vector<std::vector<int>> b_sets;
    double delta = 0.1;
};

struct GlobalStrainerCheck {
    bool ok = false;
    double margin = 0.0;
};

/// Checks the global strainer inequalities on a space with curv_lb = 1.
GlobalStrainerCheck check_global_strainer(const FiniteMetricSpace& s,
                                          const GlobalStrainerSpec& spec);

/// Explicit map to the round sphere from a global strainer:
/// x -> normalized (cos dist(A_1, x), ..., cos dist(A_m, x)).
std::vector<double> global_strainer_sphere_map(const FiniteMetricSpace& s,
                                               const GlobalStrainerSpec& spec,
                                               int point);

struct SphereMapReport {
    double max_distortion = 0.0;  // |arc(Psi x, Psi y) / d(x, y) - 1|
    double min_normalization = 0.0;
    int worst_i = -1, worst_j = -1;
};

SphereMapReport sphere_map_distortion(const FiniteMetricSpace& s,
                                      const GlobalStrainerSpec& spec,
                                      const std::vector<int>& sample);

/// |angle(y1, x, z) + angle(y2, x, z) - pi| for a 1-strainer (y1, y2) at
/// x; a diagnostic of how close the space is to straight along (y1, y2).
double supplement_angle_defect(const FiniteMetricSpace& s, int y1, int y2,
                               int x, int z);

} // namespace maxvol
