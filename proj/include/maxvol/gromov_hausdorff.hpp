#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "maxvol/model_space.hpp"
#include "maxvol/strainer.hpp"

namespace maxvol {

/// Hausdorff distance between two index subsets of a common space.
double hausdorff(const FiniteMetricSpace& s, const std::vector<int>& a,
                 const std::vector<int>& b);

/// Exact Gromov-Hausdorff distance by exhaustive correspondence search;
/// restricted to |X| + |Y| <= 12. Every minimal correspondence is the
/// union of a map X -> Y and a map Y -> X, so those are enumerated with
/// branch-and-bound pruning.
double gh_exact_small(const FiniteMetricSpace& x, const FiniteMetricSpace& y);

/// Cheap lower bound: max of the diameter gap and the eccentricity-set
/// Hausdorff gap, both divided by two.
double gh_lower(const FiniteMetricSpace& x, const FiniteMetricSpace& y);

/// Multiplies entries by independent factors in [1-amplitude, 1+amplitude]
/// and repairs the result to a metric by shortest-path closure.
FiniteMetricSpace perturb_metric(const FiniteMetricSpace& s, double amplitude,
                                 std::uint64_t seed);

/// Epsilon-net Dijkstra oracle for model distances. Nets are nested
/// (each refinement halves the spacing and keeps all coarser nodes and
/// edges), so estimates are monotone under refinement by construction.
/// Supports n = 2 models.
class GraphOracle {
  public:
    GraphOracle(ModelKind kind, const ModelParams& params, double net_epsilon);

    /// Upper estimate of the model distance (admissible-path length).
    double query(const ModelPoint& x, const ModelPoint& y) const;

    double resolution() const { return eps_; }
    int node_count() const { return static_cast<int>(node_t_.size()); }

  private:
    struct Edge {
        int to;
        double w;
    };

    int locate_or_add_query(const ModelPoint& p,
                            std::vector<std::pair<int, double>>& links) const;

    ModelKind kind_;
    ModelParams params_;
    double eps_;
    std::vector<double> node_t_;
    std::vector<double> node_theta_;
    std::vector<int> node_sheet_; // +1 / -1
    std::vector<int> node_level_;
    std::vector<std::vector<Edge>> adj_;
};

std::vector<double> graph_oracle(ModelKind kind, const ModelParams& params,
                                 double net_epsilon,
                                 const std::vector<std::pair<ModelPoint, ModelPoint>>& pairs);

} // namespace maxvol
