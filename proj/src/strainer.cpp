#include "maxvol/strainer.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "maxvol/rng.hpp"

namespace maxvol {

namespace {

constexpr double kPi = std::numbers::pi;

} // namespace

FiniteMetricSpace FiniteMetricSpace::from_matrix(
    std::vector<std::string> labels, std::vector<double> dist_row_major,
    Curvature curv_lb) {
    FiniteMetricSpace s;
    s.n_ = static_cast<int>(labels.size());
    if (dist_row_major.size() != static_cast<std::size_t>(s.n_) * s.n_)
        throw DomainError("distance matrix size does not match label count");
    s.labels_ = std::move(labels);
    s.curv_lb_ = curv_lb;
    s.d_ = std::move(dist_row_major);
    const int n = s.n_;
    for (int i = 0; i < n; ++i) {
        if (s.d_[i * n + i] != 0.0)
            throw DomainError("distance matrix has nonzero diagonal");
        for (int j = i + 1; j < n; ++j) {
            double dij = s.d_[i * n + j], dji = s.d_[j * n + i];
            if (dij < 0) throw DomainError("negative distance entry");
            if (std::abs(dij - dji) > 1e-12)
                throw DomainError("distance matrix is not symmetric");
            double v = 0.5 * (dij + dji);
            s.d_[i * n + j] = s.d_[j * n + i] = v;
        }
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = 0; k < n; ++k)
                if (s.d_[i * n + j] > s.d_[i * n + k] + s.d_[k * n + j] + 1e-9)
                    throw DomainError("triangle inequality violated at (" +
                                      std::to_string(i) + "," + std::to_string(j) +
                                      "," + std::to_string(k) + ")");
    return s;
}

double FiniteMetricSpace::diameter() const {
    double m = 0.0;
    for (double v : d_) m = std::max(m, v);
    return m;
}

std::vector<double> FiniteMetricSpace::eccentricities() const {
    std::vector<double> ecc(n_, 0.0);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            ecc[i] = std::max(ecc[i], dist(i, j));
    return ecc;
}

void write_metric_space(std::ostream& os, const FiniteMetricSpace& s) {
    os << s.size() << ' ' << curvature_value(s.curv_lb()) << '\n';
    char buf[64];
    for (int i = 0; i < s.size(); ++i) {
        for (int j = i + 1; j < s.size(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", s.dist(i, j));
            os << buf << (j + 1 < s.size() ? ' ' : '\n');
        }
    }
}

FiniteMetricSpace read_metric_space(std::istream& is) {
    int n = 0, k = 0;
    if (!(is >> n >> k) || n < 1)
        throw DomainError("malformed metric space header");
    std::vector<double> d(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double v;
            if (!(is >> v)) throw DomainError("metric space file truncated");
            d[i * n + j] = d[j * n + i] = v;
        }
    std::vector<std::string> labels(n);
    for (int i = 0; i < n; ++i) labels[i] = std::to_string(i);
    return FiniteMetricSpace::from_matrix(std::move(labels), std::move(d),
                                          curvature_from_int(k));
}

ModelBackedSpace model_backed_space(ModelKind kind, const ModelParams& params,
                                    std::vector<ModelPoint> points,
                                    const SolverOpts& opts) {
    const int n = static_cast<int>(points.size());
    std::vector<double> d(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            d[i * n + j] = d[j * n + i] =
                model_distance(kind, points[i], points[j], opts);
    std::vector<std::string> labels(n);
    for (int i = 0; i < n; ++i) labels[i] = std::to_string(i);
    FiniteMetricSpace metric = FiniteMetricSpace::from_matrix(
        std::move(labels), std::move(d), params.k);
    return ModelBackedSpace{kind, params, std::move(points), std::move(metric)};
}

double cmp_angle_metric(const FiniteMetricSpace& s, int a, int x, int b) {
    if (a == x || b == x)
        throw DegeneracyError("comparison angle needs distinct hinge points");
    return comparison_angle(s.curv_lb(), s.dist(x, a), s.dist(x, b),
                            s.dist(a, b));
}

namespace {

struct ConstraintTracker {
    double margin = 1e300;
    std::string tightest;
    void feed(double slack, const char* what) {
        if (slack < margin) {
            margin = slack;
            tightest = what;
        }
    }
};

// Slack of all constraints a new pair adds against the already accepted
// ones. Angle failures count as -inf-like slack.
double pair_slack(const FiniteMetricSpace& s, int x,
                  const std::vector<std::pair<int, int>>& accepted, int a,
                  int b, double delta, double r) {
    auto angle = [&](int p, int q) -> double {
        try {
            return cmp_angle_metric(s, p, x, q);
        } catch (const GeometryError&) {
            return -1e9;
        }
    };
    double m = std::min(s.dist(x, a), s.dist(x, b)) - r;
    m = std::min(m, angle(a, b) - (kPi - delta));
    for (const auto& [ai, bi] : accepted) {
        m = std::min(m, angle(a, ai) - (kPi / 2 - delta));
        m = std::min(m, angle(a, bi) - (kPi / 2 - delta));
        m = std::min(m, angle(b, ai) - (kPi / 2 - delta));
        m = std::min(m, angle(b, bi) - (kPi / 2 - delta));
    }
    return m;
}

} // namespace

StrainerCheck is_strained(const FiniteMetricSpace& s, const StrainerSpec& spec) {
    ConstraintTracker t;
    const auto& pairs = spec.pairs;
    const int x = spec.x;
    auto angle = [&](int p, int q) { return cmp_angle_metric(s, p, x, q); };
    try {
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            auto [ai, bi] = pairs[i];
            t.feed(angle(ai, bi) - (kPi - spec.delta), "opposite-pair angle");
            t.feed(std::min(s.dist(x, ai), s.dist(x, bi)) - spec.r,
                   "strainer distance");
            for (std::size_t j = 0; j < pairs.size(); ++j) {
                if (i == j) continue;
                auto [aj, bj] = pairs[j];
                t.feed(angle(ai, bj) - (kPi / 2 - spec.delta), "cross angle a-b");
                if (i < j) {
                    t.feed(angle(ai, aj) - (kPi / 2 - spec.delta),
                           "cross angle a-a");
                    t.feed(angle(bi, bj) - (kPi / 2 - spec.delta),
                           "cross angle b-b");
                }
            }
        }
    } catch (const GeometryError&) {
        return {false, -1e9, "degenerate configuration"};
    }
    return {t.margin > 0.0, t.margin, t.tightest};
}

std::optional<StrainerSpec> find_strainer(const FiniteMetricSpace& s, int x,
                                          int count, double delta, double r) {
    std::vector<int> candidates;
    for (int i = 0; i < s.size(); ++i)
        if (i != x && s.dist(x, i) > r) candidates.push_back(i);

    StrainerSpec spec;
    spec.x = x;
    spec.delta = delta;
    spec.r = r;
    for (int dim = 0; dim < count; ++dim) {
        double best = 0.0;
        int best_a = -1, best_b = -1;
        for (int a : candidates) {
            for (int b : candidates) {
                if (a == b) continue;
                bool used = false;
                for (const auto& [pa, pb] : spec.pairs)
                    if (a == pa || a == pb || b == pa || b == pb) used = true;
                if (used) continue;
                double slack = pair_slack(s, x, spec.pairs, a, b, delta, r);
                // lex iteration order makes the first maximum the tie-break
                if (slack > best) {
                    best = slack;
                    best_a = a;
                    best_b = b;
                }
            }
        }
        if (best_a < 0) return std::nullopt;
        spec.pairs.emplace_back(best_a, best_b);
    }
    return spec;
}

std::vector<double> distance_chart(const FiniteMetricSpace& s,
                                   const StrainerSpec& spec, int point) {
    std::vector<double> out;
    out.reserve(spec.pairs.size());
    for (const auto& [a, b] : spec.pairs) out.push_back(s.dist(a, point));
    return out;
}

double chart_distortion(const FiniteMetricSpace& s, const StrainerSpec& spec,
                        const std::vector<int>& sample) {
    double worst = 0.0;
    std::vector<std::vector<double>> charts;
    charts.reserve(sample.size());
    for (int idx : sample) charts.push_back(distance_chart(s, spec, idx));
    for (std::size_t i = 0; i < sample.size(); ++i) {
        for (std::size_t j = i + 1; j < sample.size(); ++j) {
            double metric = s.dist(sample[i], sample[j]);
            if (metric < 1e-12) continue;
            double img = 0.0;
            for (std::size_t c = 0; c < charts[i].size(); ++c) {
                double t = charts[i][c] - charts[j][c];
                img += t * t;
            }
            worst = std::max(worst, std::abs(std::sqrt(img) / metric - 1.0));
        }
    }
    return worst;
}

SmoothedChart::SmoothedChart(const ModelBackedSpace& space,
                             const StrainerSpec& spec, double eta,
                             int mc_samples, std::uint64_t seed)
    : kind_(space.kind), eta_(eta) {
    if (eta <= 0) throw DomainError("smoothed chart needs eta > 0");
    if (mc_samples < 1) throw DomainError("smoothed chart needs samples");
    for (std::size_t i = 0; i < spec.pairs.size(); ++i) {
        const ModelPoint& anchor = space.points[spec.pairs[i].first];
        anchors_.push_back(anchor);
        anchor_balls_.push_back(sample_ball(kind_, anchor, eta, mc_samples,
                                            derive_seed(seed, i)));
    }
}

double SmoothedChart::eval_coordinate(int i, const ModelPoint& y) const {
    const auto& ball = anchor_balls_[i];
    double acc = 0.0;
    for (const auto& z : ball) acc += model_distance(kind_, y, z, opts_);
    return acc / ball.size();
}

std::vector<double> SmoothedChart::eval(const ModelPoint& y) const {
    std::vector<double> out(anchor_balls_.size());
    for (std::size_t i = 0; i < anchor_balls_.size(); ++i)
        out[i] = eval_coordinate(static_cast<int>(i), y);
    return out;
}

GlobalStrainerCheck check_global_strainer(const FiniteMetricSpace& s,
                                          const GlobalStrainerSpec& spec) {
    if (s.curv_lb() != Curvature::Spherical)
        throw DomainError("global strainers require curvature lower bound 1");
    if (spec.a_sets.size() != spec.b_sets.size())
        throw DomainError("global strainer needs matching A/B families");
    double margin = 1e300;
    const std::size_t m = spec.a_sets.size();
    for (std::size_t i = 0; i < m; ++i) {
        for (int a : spec.a_sets[i])
            for (int b : spec.b_sets[i])
                margin = std::min(margin, s.dist(a, b) - (kPi - spec.delta));
        for (std::size_t j = 0; j < m; ++j) {
            if (i == j) continue;
            for (int a : spec.a_sets[i]) {
                for (int b : spec.b_sets[j])
                    margin = std::min(margin,
                                      spec.delta - std::abs(s.dist(a, b) - kPi / 2));
                for (int a2 : spec.a_sets[j])
                    if (i < j)
                        margin = std::min(margin, spec.delta -
                                                      std::abs(s.dist(a, a2) - kPi / 2));
            }
            if (i < j)
                for (int b : spec.b_sets[i])
                    for (int b2 : spec.b_sets[j])
                        margin = std::min(margin, spec.delta -
                                                      std::abs(s.dist(b, b2) - kPi / 2));
        }
    }
    return {margin > 0.0, margin};
}

namespace {

double set_distance(const FiniteMetricSpace& s, const std::vector<int>& set,
                    int point) {
    double d = 1e300;
    for (int a : set) d = std::min(d, s.dist(a, point));
    return d;
}

} // namespace

std::vector<double> global_strainer_sphere_map(const FiniteMetricSpace& s,
                                               const GlobalStrainerSpec& spec,
                                               int point) {
    std::vector<double> out(spec.a_sets.size());
    double norm2 = 0.0;
    for (std::size_t i = 0; i < spec.a_sets.size(); ++i) {
        out[i] = std::cos(set_distance(s, spec.a_sets[i], point));
        norm2 += out[i] * out[i];
    }
    if (norm2 < 1e-12)
        throw DomainError("sphere map normalization vanishes");
    double inv = 1.0 / std::sqrt(norm2);
    for (auto& c : out) c *= inv;
    return out;
}

SphereMapReport sphere_map_distortion(const FiniteMetricSpace& s,
                                      const GlobalStrainerSpec& spec,
                                      const std::vector<int>& sample) {
    SphereMapReport rep;
    rep.min_normalization = 1e300;
    std::vector<std::vector<double>> images;
    images.reserve(sample.size());
    for (int idx : sample) {
        double norm2 = 0.0;
        std::vector<double> raw(spec.a_sets.size());
        for (std::size_t i = 0; i < spec.a_sets.size(); ++i) {
            raw[i] = std::cos(set_distance(s, spec.a_sets[i], idx));
            norm2 += raw[i] * raw[i];
        }
        rep.min_normalization = std::min(rep.min_normalization, std::sqrt(norm2));
        images.push_back(global_strainer_sphere_map(s, spec, idx));
    }
    for (std::size_t i = 0; i < sample.size(); ++i) {
        for (std::size_t j = i + 1; j < sample.size(); ++j) {
            double metric = s.dist(sample[i], sample[j]);
            if (metric < 1e-12) continue;
            double ip = 0.0;
            for (std::size_t c = 0; c < images[i].size(); ++c)
                ip += images[i][c] * images[j][c];
            double arc = std::acos(std::clamp(ip, -1.0, 1.0));
            double dev = std::abs(arc / metric - 1.0);
            if (dev > rep.max_distortion) {
                rep.max_distortion = dev;
                rep.worst_i = sample[i];
                rep.worst_j = sample[j];
            }
        }
    }
    return rep;
}

double supplement_angle_defect(const FiniteMetricSpace& s, int y1, int y2,
                               int x, int z) {
    double a1 = cmp_angle_metric(s, y1, x, z);
    double a2 = cmp_angle_metric(s, y2, x, z);
    return std::abs(a1 + a2 - kPi);
}

} // namespace maxvol
