#include "maxvol/gromov_hausdorff.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <queue>

#include "maxvol/rng.hpp"

namespace maxvol {

namespace {

constexpr double kPi = std::numbers::pi;

} // namespace

double hausdorff(const FiniteMetricSpace& s, const std::vector<int>& a,
                 const std::vector<int>& b) {
    if (a.empty() || b.empty())
        throw DomainError("hausdorff distance of an empty subset");
    double h = 0.0;
    for (int i : a) {
        double inf = 1e300;
        for (int j : b) inf = std::min(inf, s.dist(i, j));
        h = std::max(h, inf);
    }
    for (int j : b) {
        double inf = 1e300;
        for (int i : a) inf = std::min(inf, s.dist(i, j));
        h = std::max(h, inf);
    }
    return h;
}

namespace {

struct GhSearch {
    const FiniteMetricSpace& X;
    const FiniteMetricSpace& Y;
    int nx, ny;
    std::vector<int> f; // X -> Y
    std::vector<int> g; // Y -> X
    double best;

    GhSearch(const FiniteMetricSpace& x, const FiniteMetricSpace& y)
        : X(x), Y(y), nx(x.size()), ny(y.size()), f(nx, -1), g(ny, -1),
          best(std::max(x.diameter(), y.diameter())) {}

    void search_g(int yi, double cur) {
        if (cur >= best) return;
        if (yi == ny) {
            best = cur;
            return;
        }
        for (int xi = 0; xi < nx; ++xi) {
            double m = cur;
            // against earlier g-pairs
            for (int yj = 0; yj < yi && m < best; ++yj)
                m = std::max(m, std::abs(X.dist(xi, g[yj]) - Y.dist(yi, yj)));
            // against all f-pairs
            for (int xj = 0; xj < nx && m < best; ++xj)
                m = std::max(m, std::abs(X.dist(xi, xj) - Y.dist(yi, f[xj])));
            if (m < best) {
                g[yi] = xi;
                search_g(yi + 1, m);
            }
        }
        g[yi] = -1;
    }

    void search_f(int xi, double cur) {
        if (cur >= best) return;
        if (xi == nx) {
            search_g(0, cur);
            return;
        }
        for (int yi = 0; yi < ny; ++yi) {
            double m = cur;
            for (int xj = 0; xj < xi && m < best; ++xj)
                m = std::max(m, std::abs(X.dist(xi, xj) - Y.dist(yi, f[xj])));
            if (m < best) {
                f[xi] = yi;
                search_f(xi + 1, m);
            }
        }
        f[xi] = -1;
    }
};

} // namespace

double gh_exact_small(const FiniteMetricSpace& x, const FiniteMetricSpace& y) {
    if (x.size() + y.size() > 12)
        throw DomainError("gh_exact_small is limited to 12 points total");
    if (x.size() == 0 || y.size() == 0)
        throw DomainError("gh_exact_small of an empty space");
    // Any minimal correspondence restricts to a pair of maps f: X->Y,
    // g: Y->X whose union has no larger distortion.
    GhSearch search(x, y);
    search.search_f(0, 0.0);
    return 0.5 * search.best;
}

double gh_lower(const FiniteMetricSpace& x, const FiniteMetricSpace& y) {
    double lb = 0.5 * std::abs(x.diameter() - y.diameter());
    // eccentricity sets as subsets of the real line
    auto ex = x.eccentricities();
    auto ey = y.eccentricities();
    double h = 0.0;
    for (double a : ex) {
        double inf = 1e300;
        for (double b : ey) inf = std::min(inf, std::abs(a - b));
        h = std::max(h, inf);
    }
    for (double b : ey) {
        double inf = 1e300;
        for (double a : ex) inf = std::min(inf, std::abs(a - b));
        h = std::max(h, inf);
    }
    return std::max(lb, 0.5 * h);
}

FiniteMetricSpace perturb_metric(const FiniteMetricSpace& s, double amplitude,
                                 std::uint64_t seed) {
    if (amplitude < 0.0 || amplitude > 0.2)
        throw DomainError("perturbation amplitude must lie in [0, 0.2]");
    const int n = s.size();
    std::vector<double> d(static_cast<std::size_t>(n) * n, 0.0);
    auto eng = make_engine(seed);
    std::uniform_real_distribution<double> unif(1.0 - amplitude,
                                                1.0 + amplitude);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double v = s.dist(i, j) * (amplitude == 0.0 ? 1.0 : unif(eng));
            d[i * n + j] = d[j * n + i] = v;
        }
    // shortest-path closure repairs the triangle inequality exactly
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                d[i * n + j] = std::min(d[i * n + j],
                                        d[i * n + k] + d[k * n + j]);
    std::vector<std::string> labels(n);
    for (int i = 0; i < n; ++i) labels[i] = s.label(i);
    return FiniteMetricSpace::from_matrix(std::move(labels), std::move(d),
                                          s.curv_lb());
}

// ---------------------------------------------------------------------
// epsilon-net graph oracle (n = 2)
// ---------------------------------------------------------------------

namespace {

constexpr int kBaseRings = 25;
constexpr int kMaxLevel = 5;

int ring_angle_count(Curvature k, double t, double eps) {
    if (t <= 0.0) return 1;
    double needed = 2.0 * kPi * sn(k, t) / eps;
    int count = 4;
    while (count < needed) count *= 2;
    return count;
}

} // namespace

GraphOracle::GraphOracle(ModelKind kind, const ModelParams& params,
                         double net_epsilon)
    : kind_(kind), params_(params) {
    if (params.n != 2)
        throw DomainError("the graph oracle supports n = 2 models");
    if (net_epsilon <= 0) throw DomainError("net epsilon must be positive");
    int level = 0;
    while (params.r / (kBaseRings << level) > net_epsilon) {
        if (++level > kMaxLevel)
            throw ResolutionError("requested net is too fine");
    }
    const int rings = kBaseRings << level;
    eps_ = params.r / rings;
    const Curvature k = params.k;
    const int sheets = (kind == ModelKind::DoubleDisk) ? 2 : 1;

    // ring birth level: coarsest level whose ring set contains this ring
    auto ring_birth = [&](int j) {
        int b = level;
        while (b > 0 && j % 2 == 0) {
            j /= 2;
            --b;
        }
        return b;
    };

    // nodes, ring by ring
    std::vector<std::vector<int>> ring_first(sheets); // node id of angle 0
    std::vector<int> ring_counts(rings + 1);
    std::vector<int> ring_births(rings + 1);
    for (int j = 0; j <= rings; ++j) {
        double t = params.r * j / rings;
        ring_counts[j] = ring_angle_count(k, t, eps_);
        ring_births[j] = ring_birth(j);
    }
    for (int s = 0; s < sheets; ++s) {
        ring_first[s].resize(rings + 1);
        for (int j = 0; j <= rings; ++j) {
            ring_first[s][j] = static_cast<int>(node_t_.size());
            double t = params.r * j / rings;
            int cnt = ring_counts[j];
            for (int i = 0; i < cnt; ++i) {
                node_t_.push_back(t);
                node_theta_.push_back(2.0 * kPi * i / cnt);
                node_sheet_.push_back(s == 0 ? 1 : -1);
                // angle birth: first level whose angular grid contains it
                int ab = 0;
                if (cnt > 1) {
                    for (int lvl = 0; lvl <= level; ++lvl) {
                        int c_lvl = ring_angle_count(
                            k, t, params.r / (kBaseRings << lvl));
                        if (i % (cnt / c_lvl) == 0) {
                            ab = lvl;
                            break;
                        }
                    }
                }
                node_level_.push_back(std::max(ring_births[j], ab));
            }
        }
    }

    const int total = static_cast<int>(node_t_.size());
    adj_.assign(total, {});

    auto add_edge = [&](int u, int v, double w) {
        adj_[u].push_back({v, w});
        adj_[v].push_back({u, w});
    };

    // Same-sheet edges. A pair is linked when its distance is at most
    // 3 eps at the coarser of the two birth levels, so coarse nodes keep
    // their long edges and refinements only ever add paths.
    auto max_angle_window = [&](double t1, double t2, double radius) {
        // invert the half-angle distance form for the angular reach
        double cross = sn(k, t1) * sn(k, t2);
        if (cross < 1e-30) return kPi;
        double num;
        switch (k) {
            case Curvature::Flat:
                num = 0.25 * (radius * radius - (t1 - t2) * (t1 - t2));
                break;
            case Curvature::Spherical: {
                double h = std::sin(0.5 * (t1 - t2));
                double hr = std::sin(0.5 * radius);
                num = hr * hr - h * h;
                break;
            }
            case Curvature::Hyperbolic: {
                double h = std::sinh(0.5 * (t1 - t2));
                double hr = std::sinh(0.5 * radius);
                num = hr * hr - h * h;
                break;
            }
            default:
                num = 0.0;
        }
        if (num <= 0.0) return 0.0;
        double s2 = num / cross;
        if (s2 >= 1.0) return kPi;
        return 2.0 * std::asin(std::sqrt(s2));
    };

    for (int s = 0; s < sheets; ++s) {
        for (int j1 = 0; j1 <= rings; ++j1) {
            for (int j2 = j1; j2 <= rings; ++j2) {
                double t1 = params.r * j1 / rings;
                double t2 = params.r * j2 / rings;
                int pair_lvl = std::max(ring_births[j1], ring_births[j2]);
                double pair_radius = 3.0 * params.r / (kBaseRings << pair_lvl);
                if (t2 - t1 > pair_radius) break;
                int c1 = ring_counts[j1], c2 = ring_counts[j2];
                double win = max_angle_window(t1, t2, pair_radius) + 1e-12;
                int wsteps = (c2 > 1)
                                 ? std::min(c2 / 2,
                                            static_cast<int>(win * c2 /
                                                             (2.0 * kPi)) + 1)
                                 : 0;
                for (int i1 = 0; i1 < c1; ++i1) {
                    int u = ring_first[s][j1] + i1;
                    double th1 = node_theta_[u];
                    int center = (c2 > 1)
                                     ? static_cast<int>(std::lround(
                                           th1 * c2 / (2.0 * kPi)))
                                     : 0;
                    // within a ring each unordered pair appears once as a
                    // positive offset (window stays below half the ring)
                    int lo = (j1 == j2) ? 1 : -wsteps;
                    int hi = (j1 == j2) ? std::min(wsteps, (c2 - 1) / 2) : wsteps;
                    for (int off = lo; off <= hi; ++off) {
                        int i2 = ((j1 == j2 ? i1 : center) + off) % c2;
                        if (i2 < 0) i2 += c2;
                        int v = ring_first[s][j2] + i2;
                        int lvl = std::max(node_level_[u], node_level_[v]);
                        double radius = 3.0 * params.r / (kBaseRings << lvl);
                        if (t2 - t1 > radius) continue;
                        double dth = std::abs(th1 - node_theta_[v]);
                        dth = std::min(dth, 2.0 * kPi - dth);
                        double d = sheet_distance(k, t1, t2, dth);
                        if (d <= radius) add_edge(u, v, d);
                    }
                }
            }
        }
    }

    // identification edges along the gluing locus
    int bc = ring_counts[rings];
    int bplus = ring_first[0][rings];
    switch (kind) {
        case ModelKind::Disk:
            break;
        case ModelKind::DoubleDisk: {
            int bminus = ring_first[1][rings];
            for (int i = 0; i < bc; ++i) add_edge(bplus + i, bminus + i, 0.0);
            break;
        }
        case ModelKind::Crosscap:
            for (int i = 0; i < bc / 2; ++i)
                add_edge(bplus + i, bplus + (i + bc / 2) % bc, 0.0);
            break;
        case ModelKind::Purse:
            for (int i = 1; i < bc / 2; ++i)
                add_edge(bplus + i, bplus + bc - i, 0.0);
            break;
    }
}

double GraphOracle::query(const ModelPoint& x, const ModelPoint& y) const {
    auto links_of = [&](const ModelPoint& p) {
        ModelPoint cp = canonicalize(kind_, p);
        std::vector<std::pair<int, double>> links;
        double th = std::atan2(cp.u[1], cp.u[0]);
        if (th < 0) th += 2.0 * kPi;
        int want_sheet = (cp.sheet == Sheet::Plus) ? 1 : -1;
        for (std::size_t v = 0; v < node_t_.size(); ++v) {
            if (node_sheet_[v] != want_sheet) continue;
            if (std::abs(node_t_[v] - cp.t) > 3.0 * eps_) continue;
            double dth = std::abs(node_theta_[v] - th);
            dth = std::min(dth, 2.0 * kPi - dth);
            double d = sheet_distance(params_.k, cp.t, node_t_[v], dth);
            if (d <= 3.0 * eps_)
                links.emplace_back(static_cast<int>(v), d);
        }
        return links;
    };
    auto src = links_of(x);
    auto dst = links_of(y);
    if (src.empty() || dst.empty())
        throw ResolutionError("query point is not covered by the net");

    std::vector<double> target_link(node_t_.size(),
                                    std::numeric_limits<double>::infinity());
    for (auto& [v, w] : dst) target_link[v] = std::min(target_link[v], w);

    std::vector<double> dist(node_t_.size(),
                             std::numeric_limits<double>::infinity());
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    for (auto& [v, w] : src) {
        if (w < dist[v]) {
            dist[v] = w;
            heap.push({w, v});
        }
    }
    double best = std::numeric_limits<double>::infinity();
    while (!heap.empty()) {
        auto [du, u] = heap.top();
        heap.pop();
        if (du > dist[u]) continue;
        if (du >= best) break;
        if (std::isfinite(target_link[u]))
            best = std::min(best, du + target_link[u]);
        for (const Edge& e : adj_[u]) {
            double nd = du + e.w;
            if (nd < dist[e.to]) {
                dist[e.to] = nd;
                heap.push({nd, e.to});
            }
        }
    }
    if (!std::isfinite(best))
        throw ResolutionError("net is disconnected between the endpoints");
    return best;
}

std::vector<double> graph_oracle(
    ModelKind kind, const ModelParams& params, double net_epsilon,
    const std::vector<std::pair<ModelPoint, ModelPoint>>& pairs) {
    GraphOracle oracle(kind, params, net_epsilon);
    std::vector<double> out;
    out.reserve(pairs.size());
    for (const auto& [x, y] : pairs) out.push_back(oracle.query(x, y));
    return out;
}

} // namespace maxvol
