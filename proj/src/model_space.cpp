#include "maxvol/model_space.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "maxvol/rng.hpp"

namespace maxvol {

namespace {

constexpr double kPi = std::numbers::pi;

Vec basis_direction(int n, int i) {
    Vec u(n, 0.0);
    u[i] = 1.0;
    return u;
}

/// Stable angle in [0, pi] between unit vectors.
double angle_between(const Vec& a, const Vec& b) {
    double chord = norm(sub(a, b));
    return 2.0 * std::asin(std::min(1.0, 0.5 * chord));
}

bool lex_less(const Vec& a, const Vec& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i] - 1e-15) return true;
        if (a[i] > b[i] + 1e-15) return false;
    }
    return false;
}

Vec sheet_center(const ModelParams& params, Sheet sheet) {
    Vec c(params.n + 1, 0.0);
    c[0] = (sheet == Sheet::Plus) ? 1.0 : -1.0;
    return c;
}

/// Interpolates along the minimizing arc from u toward w on S^{n-1};
/// alpha in [0, gamma] with gamma the full angle.
Vec slerp(const Vec& u, const Vec& w, double gamma, double alpha) {
    if (gamma < 1e-14) return u;
    double s = std::sin(gamma);
    Vec b = add(scale(u, std::sin(gamma - alpha) / s),
                scale(w, std::sin(alpha) / s));
    return normalized(b);
}

// -- one-dimensional objective of the boundary-crossing search ----------

// Distance from a point at radius t to the boundary point at direction
// angle alpha, within one sheet. Written in cancellation-free half-angle
// form so that small distances keep full precision.
struct RadialLeg {
    Curvature k;
    double t, r;
    double sn_t_sn_r; // sn(t) sn(r)

    RadialLeg(Curvature k_, double t_, double r_)
        : k(k_), t(t_), r(r_), sn_t_sn_r(sn(k_, t_) * sn(k_, r_)) {}

    double eval(double alpha) const {
        double half = std::sin(0.5 * alpha);
        double cross = sn_t_sn_r * half * half;
        switch (k) {
            case Curvature::Flat:
                return std::sqrt((t - r) * (t - r) + 4.0 * cross);
            case Curvature::Spherical: {
                double h = std::sin(0.5 * (t - r));
                double hav = h * h + cross;
                return 2.0 * std::asin(std::min(1.0, std::sqrt(std::max(0.0, hav))));
            }
            case Curvature::Hyperbolic: {
                double h = std::sinh(0.5 * (t - r));
                return 2.0 * std::asinh(std::sqrt(std::max(0.0, h * h + cross)));
            }
        }
        return 0.0;
    }
};

struct CrossingObjective {
    RadialLeg a, b;
    double gamma;
    double operator()(double alpha) const {
        return a.eval(alpha) + b.eval(gamma - alpha);
    }
};

/// Derivative-free Brent minimization on [lo, hi].
template <class F>
std::pair<double, double> brent_min(const F& f, double lo, double hi,
                                    double xtol, int max_iter) {
    const double gold = 0.3819660112501051;
    double a = lo, b = hi;
    double x = a + gold * (b - a), w = x, v = x;
    double fx = f(x), fw = fx, fv = fx;
    double d = 0.0, e = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        double m = 0.5 * (a + b);
        double tol1 = xtol * std::abs(x) + 1e-15;
        double tol2 = 2.0 * tol1;
        if (std::abs(x - m) <= tol2 - 0.5 * (b - a)) break;
        bool parabolic = false;
        if (std::abs(e) > tol1) {
            double q1 = (x - w) * (fx - fv);
            double q2 = (x - v) * (fx - fw);
            double p = (x - v) * q2 - (x - w) * q1;
            double q = 2.0 * (q2 - q1);
            if (q > 0) p = -p;
            q = std::abs(q);
            double e_old = e;
            e = d;
            if (std::abs(p) < std::abs(0.5 * q * e_old) && p > q * (a - x) &&
                p < q * (b - x)) {
                d = p / q;
                double u = x + d;
                if (u - a < tol2 || b - u < tol2)
                    d = (m > x) ? tol1 : -tol1;
                parabolic = true;
            }
        }
        if (!parabolic) {
            e = (x < m) ? b - x : a - x;
            d = gold * e;
        }
        double u = (std::abs(d) >= tol1) ? x + d : x + (d > 0 ? tol1 : -tol1);
        double fu = f(u);
        if (fu <= fx) {
            if (u < x) b = x; else a = x;
            v = w; fv = fw;
            w = x; fw = fx;
            x = u; fx = fu;
        } else {
            if (u < x) a = u; else b = u;
            if (fu <= fw || w == x) {
                v = w; fv = fw;
                w = u; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u; fv = fu;
            }
        }
    }
    return {x, fx};
}

struct CrossingSolution {
    double value;
    double alpha;
};

/// Minimizes leg(t1) + leg(t2) over crossing angles alpha in [0, gamma].
/// Coarse scan first, then local refinement from the best seeds.
CrossingSolution solve_crossing(Curvature k, double r, double t1, double t2,
                                double gamma, int coarse, const SolverOpts& opts) {
    CrossingObjective obj{RadialLeg(k, t1, r), RadialLeg(k, t2, r), gamma};
    if (gamma < 1e-14)
        return {obj(0.0), 0.0};

    coarse = std::max(coarse, 8);
    std::vector<double> vals(coarse + 1);
    for (int j = 0; j <= coarse; ++j)
        vals[j] = obj(gamma * j / coarse);

    // candidate seeds: local minima of the coarse profile, endpoints included
    std::vector<int> seeds;
    for (int j = 0; j <= coarse; ++j) {
        double left = (j > 0) ? vals[j - 1] : vals[j] + 1.0;
        double right = (j < coarse) ? vals[j + 1] : vals[j] + 1.0;
        if (vals[j] <= left && vals[j] <= right) seeds.push_back(j);
    }
    std::sort(seeds.begin(), seeds.end(),
              [&](int a, int b) { return vals[a] < vals[b]; });
    if (static_cast<int>(seeds.size()) > opts.max_restarts)
        seeds.resize(opts.max_restarts);

    double best_val = vals[0];
    double best_alpha = 0.0;
    if (vals[coarse] < best_val) {
        best_val = vals[coarse];
        best_alpha = gamma;
    }
    for (int j : seeds) {
        double lo = gamma * std::max(0, j - 1) / coarse;
        double hi = gamma * std::min(coarse, j + 1) / coarse;
        auto [x, fx] = brent_min(obj, lo, hi, 1e-10, 200);
        if (fx < best_val - 1e-15 ||
            (std::abs(fx - best_val) <= 1e-15 && x < best_alpha)) {
            best_val = fx;
            best_alpha = x;
        }
    }
    return {best_val, best_alpha};
}

int resolve_coarse(const SolverOpts& opts, int n) {
    return opts.coarse_samples > 0 ? opts.coarse_samples : std::max(64, 32 * n);
}

void check_same_model(const ModelPoint& x, const ModelPoint& y) {
    if (!(x.params == y.params))
        throw DomainError("model points live on different model spaces");
}

ModelPoint purse_rep(ModelPoint x) {
    if (x.sheet == Sheet::Minus)
        throw DomainError("purse points live on the single plus disk");
    return x;
}

} // namespace

ModelParams model_params(int n, Curvature k, double r) {
    if (n < 2) throw DomainError("model spaces require dimension n >= 2");
    if (r <= 0) throw DomainError("model radius must be positive");
    if (k == Curvature::Spherical && r >= kPi / 2)
        throw DomainError("spherical models require r < pi/2");
    return ModelParams{n, k, r};
}

const char* model_kind_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::Disk: return "disk";
        case ModelKind::DoubleDisk: return "double-disk";
        case ModelKind::Crosscap: return "crosscap";
        case ModelKind::Purse: return "purse";
    }
    return "?";
}

ModelKind model_kind_from_name(const std::string& name) {
    if (name == "disk") return ModelKind::Disk;
    if (name == "double-disk") return ModelKind::DoubleDisk;
    if (name == "crosscap") return ModelKind::Crosscap;
    if (name == "purse") return ModelKind::Purse;
    throw DomainError("unknown model kind: " + name);
}

ModelPoint model_point(const ModelParams& params, double t, Vec u, Sheet sheet) {
    if (static_cast<int>(u.size()) != params.n)
        throw DomainError("model point direction has wrong dimension");
    if (t < -1e-12 || t > params.r + 1e-12)
        throw DomainError("model point radius outside [0, r]");
    t = std::clamp(t, 0.0, params.r);
    if (t == 0.0) {
        u = basis_direction(params.n, 0);
    } else {
        double nu = norm(u);
        if (std::abs(nu - 1.0) > 1e-12) {
            if (std::abs(nu - 1.0) > 1e-6)
                throw DomainError("model point direction must be a unit vector");
            u = scale(u, 1.0 / nu);
        }
    }
    return ModelPoint{params, t, std::move(u), sheet};
}

ModelPoint canonicalize(ModelKind kind, ModelPoint x) {
    if (kind == ModelKind::Crosscap || kind == ModelKind::Purse) {
        if (x.sheet == Sheet::Minus) {
            if (kind == ModelKind::Purse)
                throw DomainError("purse points live on the single plus disk");
            // crosscap representative of (t, u, -) is (t, -u, +)
            x.u = scale(x.u, -1.0);
            x.sheet = Sheet::Plus;
        }
    }
    if (x.t >= x.params.r - 1e-15) {
        x.t = x.params.r;
        x.sheet = Sheet::Plus;
        switch (kind) {
            case ModelKind::Crosscap: {
                Vec neg = scale(x.u, -1.0);
                if (lex_less(neg, x.u)) x.u = std::move(neg);
                break;
            }
            case ModelKind::Purse:
                if (x.u[x.params.n - 1] < 0.0)
                    x.u[x.params.n - 1] = -x.u[x.params.n - 1];
                break;
            default:
                break;
        }
    }
    if (x.t == 0.0) {
        x.u = basis_direction(x.params.n, 0);
        if (kind != ModelKind::DoubleDisk) x.sheet = Sheet::Plus;
    }
    return x;
}

bool same_model_point(ModelKind kind, const ModelPoint& a, const ModelPoint& b,
                      double tol) {
    if (!(a.params == b.params)) return false;
    ModelPoint ca = canonicalize(kind, a);
    ModelPoint cb = canonicalize(kind, b);
    if (std::abs(ca.t - cb.t) > tol) return false;
    if (ca.t < tol) return true; // both centers
    if (ca.sheet != cb.sheet) return false;
    return norm(sub(ca.u, cb.u)) <= tol;
}

SpaceFormPoint ambient(const ModelPoint& x) {
    const auto& [n, k, r] = x.params;
    Vec c = sheet_center(x.params, x.sheet);
    Vec out(n + 1);
    double cst = cs(k, x.t), snt = sn(k, x.t);
    out[0] = cst * c[0];
    for (int i = 0; i < n; ++i) out[i + 1] = snt * x.u[i];
    return space_form_point(k, std::move(out));
}

ModelPoint from_ambient(const ModelParams& params, const SpaceFormPoint& p,
                        Sheet sheet) {
    SpaceFormPoint center = space_form_point(params.k, sheet_center(params, sheet));
    double t = distance(center, p);
    if (t > params.r + 1e-9)
        throw DomainError("ambient point is outside the disk");
    t = std::min(t, params.r);
    Vec u;
    if (t < 1e-14) {
        u = basis_direction(params.n, 0);
        t = 0.0;
    } else {
        TangentVector v = log_map(center, p);
        u.assign(v.comps.begin() + 1, v.comps.end());
        u = normalized(u);
    }
    return model_point(params, t, std::move(u), sheet);
}

BasePoints base_points(const ModelParams& params) {
    BasePoints bp;
    bp.center = model_point(params, 0.0, basis_direction(params.n, 0), Sheet::Plus);
    double sign = (params.k == Curvature::Spherical) ? -1.0 : 1.0;
    for (int i = 0; i < params.n; ++i) {
        Vec u = scale(basis_direction(params.n, i), sign);
        bp.reference.push_back(model_point(params, params.r, std::move(u), Sheet::Plus));
    }
    return bp;
}

ModelPoint involution_A(ModelKind kind, const ModelPoint& x) {
    if (kind == ModelKind::Disk)
        throw DomainError("the involution swaps sheets; the plain disk has only one");
    ModelPoint out = x;
    out.u = scale(x.u, -1.0);
    if (kind == ModelKind::DoubleDisk)
        out.sheet = (x.sheet == Sheet::Plus) ? Sheet::Minus : Sheet::Plus;
    else
        out.sheet = Sheet::Plus; // induced involution on quotient representatives
    if (out.t == 0.0) out.u = basis_direction(x.params.n, 0);
    return canonicalize(kind, std::move(out));
}

ModelPoint reflect_R(const ModelPoint& x) {
    ModelPoint out = x;
    if (out.t > 0.0) out.u[x.params.n - 1] = -out.u[x.params.n - 1];
    return out;
}

double sheet_distance(Curvature k, double t1, double t2, double gamma) {
    RadialLeg leg(k, t1, t2); // reuse: same closed form with r := t2
    return leg.eval(gamma);
}

DistanceResult model_distance_detail(ModelKind kind, const ModelPoint& x,
                                     const ModelPoint& y,
                                     const SolverOpts& opts) {
    check_same_model(x, y);
    const auto& [n, k, r] = x.params;
    const int coarse = resolve_coarse(opts, n);
    DistanceResult res;

    auto direct = [&](const ModelPoint& a, const ModelPoint& b) {
        return sheet_distance(k, a.t, b.t, angle_between(a.u, b.u));
    };
    auto crossing = [&](const ModelPoint& a, const Vec& target_dir,
                        double t_other) {
        double gamma = angle_between(a.u, target_dir);
        return std::make_pair(solve_crossing(k, r, a.t, t_other, gamma, coarse, opts),
                              gamma);
    };

    switch (kind) {
        case ModelKind::Disk: {
            if (x.sheet != Sheet::Plus || y.sheet != Sheet::Plus)
                throw DomainError("disk points live on the single plus sheet");
            res.value = direct(x, y);
            return res;
        }
        case ModelKind::DoubleDisk: {
            if (x.sheet == y.sheet) {
                res.value = direct(x, y);
                return res;
            }
            auto [sol, gamma] = crossing(x, y.u, y.t);
            res.value = sol.value;
            res.crossed = true;
            res.crossing_angle = sol.alpha;
            res.crossing_dir = slerp(x.u, y.u, gamma, sol.alpha);
            return res;
        }
        case ModelKind::Crosscap: {
            ModelPoint cx = canonicalize(kind, x);
            ModelPoint cy = canonicalize(kind, y);
            double d0 = direct(cx, cy);
            Vec anti = scale(cy.u, -1.0);
            auto [sol, gamma] = crossing(cx, anti, cy.t);
            if (d0 <= sol.value) {
                res.value = d0;
                res.lift = 0;
            } else {
                res.value = sol.value;
                res.lift = 1;
                res.crossed = true;
                res.crossing_angle = sol.alpha;
                res.crossing_dir = slerp(cx.u, anti, gamma, sol.alpha);
            }
            return res;
        }
        case ModelKind::Purse: {
            ModelPoint cx = purse_rep(x);
            ModelPoint cy = purse_rep(y);
            double d0 = direct(cx, cy);
            Vec mirrored = cy.u;
            mirrored[n - 1] = -mirrored[n - 1];
            auto [sol, gamma] = crossing(cx, mirrored, cy.t);
            if (d0 <= sol.value) {
                res.value = d0;
            } else {
                res.value = sol.value;
                res.crossed = true;
                res.crossing_angle = sol.alpha;
                res.crossing_dir = slerp(cx.u, mirrored, gamma, sol.alpha);
            }
            return res;
        }
    }
    throw DomainError("unknown model kind");
}

double model_distance(ModelKind kind, const ModelPoint& x, const ModelPoint& y,
                      const SolverOpts& opts) {
    return model_distance_detail(kind, x, y, opts).value;
}

std::pair<ModelPoint, double> nearest_boundary(const ModelPoint& x) {
    ModelPoint b = x;
    b.t = x.params.r;
    if (x.t == 0.0) b.u = basis_direction(x.params.n, 0);
    return {std::move(b), x.params.r - x.t};
}

namespace {

double sample_radius(const ModelParams& params, std::mt19937_64& eng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    if (params.k == Curvature::Flat)
        return params.r * std::pow(unif(eng), 1.0 / params.n);
    double envelope = sn(params.k, params.r);
    while (true) {
        double t = params.r * unif(eng);
        double accept = std::pow(sn(params.k, t) / envelope, params.n - 1);
        if (unif(eng) <= accept) return t;
    }
}

std::vector<Vec> grid_directions(int n, int count) {
    std::vector<Vec> dirs;
    if (count <= 0) return dirs;
    if (n == 2) {
        for (int j = 0; j < count; ++j) {
            double a = 2.0 * kPi * j / count;
            dirs.push_back({std::cos(a), std::sin(a)});
        }
    } else if (n == 3) {
        // Fibonacci sphere
        const double ga = kPi * (3.0 - std::sqrt(5.0));
        for (int j = 0; j < count; ++j) {
            double z = 1.0 - 2.0 * (j + 0.5) / count;
            double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
            dirs.push_back({rho * std::cos(ga * j), rho * std::sin(ga * j), z});
        }
    } else {
        auto eng = make_engine(0x9d2c5680u); // fixed: the grid is a pure function
        for (int j = 0; j < count; ++j) dirs.push_back(random_unit_vector(n, eng));
    }
    return dirs;
}

} // namespace

std::vector<ModelPoint> sample_points(ModelKind kind, const ModelParams& params,
                                      int count, SampleMode mode,
                                      std::uint64_t seed) {
    if (count < 1) throw DomainError("sample_points requires count >= 1");
    std::vector<ModelPoint> pts;
    pts.reserve(count);
    const bool two_sheets = (kind == ModelKind::DoubleDisk);

    if (mode == SampleMode::Uniform) {
        auto eng = make_engine(seed);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        for (int i = 0; i < count; ++i) {
            Sheet sheet = Sheet::Plus;
            if (two_sheets && unif(eng) < 0.5) sheet = Sheet::Minus;
            double t = sample_radius(params, eng);
            Vec u = random_unit_vector(params.n, eng);
            pts.push_back(canonicalize(
                kind, model_point(params, t, std::move(u), sheet)));
        }
        return pts;
    }

    // grid mode
    if (count == 1) {
        pts.push_back(model_point(params, 0.0, basis_direction(params.n, 0),
                                  Sheet::Plus));
        return pts;
    }
    int sheets = two_sheets ? 2 : 1;
    int per_sheet = (count + sheets - 1) / sheets;
    int m_t = std::max(2, static_cast<int>(std::round(
                               std::pow(per_sheet, 1.0 / params.n))));
    int m_dir = std::max(1, (per_sheet + m_t - 1) / m_t);
    auto dirs = grid_directions(params.n, m_dir);
    for (int s = 0; s < sheets && static_cast<int>(pts.size()) < count; ++s) {
        Sheet sheet = (s == 0) ? Sheet::Plus : Sheet::Minus;
        for (int j = 0; j < m_t && static_cast<int>(pts.size()) < count; ++j) {
            double t = params.r * j / (m_t - 1);
            if (t == 0.0) {
                pts.push_back(canonicalize(
                    kind, model_point(params, 0.0,
                                      basis_direction(params.n, 0), sheet)));
                continue;
            }
            for (const auto& u : dirs) {
                if (static_cast<int>(pts.size()) >= count) break;
                pts.push_back(canonicalize(kind, model_point(params, t, u, sheet)));
            }
        }
    }
    return pts;
}

namespace {

struct GeodesicState {
    SpaceFormPoint p;
    Vec v; // unit ambient tangent
};

GeodesicState flow_within_sheet(Curvature k, const GeodesicState& st, double s) {
    Vec p(st.p.coords.size()), v(st.p.coords.size());
    if (k == Curvature::Flat) {
        for (std::size_t i = 0; i < p.size(); ++i) {
            p[i] = st.p.coords[i] + s * st.v[i];
            v[i] = st.v[i];
        }
    } else {
        double c = cs(k, s), sg = sn(k, s);
        double kk = static_cast<double>(curvature_value(k));
        for (std::size_t i = 0; i < p.size(); ++i) {
            p[i] = c * st.p.coords[i] + sg * st.v[i];
            v[i] = -kk * sg * st.p.coords[i] + c * st.v[i];
        }
    }
    return {space_form_point(k, std::move(p)), std::move(v)};
}

/// Smallest s in (eps, limit] at which the within-sheet geodesic from the
/// state reaches radial distance r from the sheet center; negative if none.
double crossing_length(const ModelParams& params, const Vec& center,
                       const GeodesicState& st, double limit) {
    const double eps = 1e-13;
    Curvature k = params.k;
    double r = params.r;
    if (k == Curvature::Flat) {
        Vec d = sub(st.p.coords, center);
        double b = dot(d, st.v);
        double c0 = dot(d, d) - r * r;
        double disc = b * b - c0;
        if (disc < 0) return -1.0;
        double s = -b + std::sqrt(disc);
        return (s > eps && s <= limit) ? s : -1.0;
    }
    // cs-type profile of the radial distance along the geodesic:
    // f(s) = cs(t(s)) = alpha cs(s) + beta sn(s), crossing at f = cs(r).
    double sgn = center[0] > 0 ? 1.0 : -1.0;
    double alpha, beta, target;
    if (k == Curvature::Spherical) {
        alpha = sgn * st.p.coords[0];
        beta = sgn * st.v[0];
        target = std::cos(r);
        double rho = std::hypot(alpha, beta);
        if (rho < target) return -1.0;
        double delta = std::atan2(beta, alpha);
        double step = std::acos(std::min(1.0, target / rho));
        double best = -1.0;
        for (double cand : {delta - step, delta + step}) {
            for (int wrap = 0; wrap < 3; ++wrap) {
                double s = cand + 2.0 * kPi * wrap;
                if (s > eps && s <= limit) {
                    // crossing must be outward: d/ds cs(t) < 0
                    double fp = -alpha * std::sin(s) + beta * std::cos(s);
                    if (fp < 0 && (best < 0 || s < best)) best = s;
                }
            }
        }
        return best;
    }
    // hyperbolic: alpha cosh s + beta sinh s = cosh r, via x = e^s
    alpha = center[0] > 0 ? st.p.coords[0] : -st.p.coords[0];
    beta = center[0] > 0 ? st.v[0] : -st.v[0];
    target = std::cosh(r);
    double A = 0.5 * (alpha + beta), B = 0.5 * (alpha - beta);
    // A x^2 - target x + B = 0
    if (std::abs(A) < 1e-300) return -1.0;
    double disc = target * target - 4.0 * A * B;
    if (disc < 0) return -1.0;
    double sq = std::sqrt(disc);
    double best = -1.0;
    for (double x : {(target - sq) / (2.0 * A), (target + sq) / (2.0 * A)}) {
        if (x <= 0) continue;
        double s = std::log(x);
        if (s > eps && s <= limit) {
            double fp = alpha * std::sinh(s) + beta * std::cosh(s);
            if (fp > 0 && (best < 0 || s < best)) best = s;
        }
    }
    return best;
}

} // namespace

std::vector<Vec> tangent_frame(const ModelPoint& x) {
    SpaceFormPoint p = ambient(x);
    Curvature k = x.params.k;
    int n = x.params.n;
    std::vector<Vec> frame;
    for (int cand = 1; cand <= n + 1 && static_cast<int>(frame.size()) < n;
         ++cand) {
        int idx = cand % (n + 1); // e1, ..., en, then e0
        Vec v(n + 1, 0.0);
        v[idx] = 1.0;
        if (k == Curvature::Flat) {
            if (idx == 0) continue;
        } else {
            double ip = ambient_dot(k, v, p.coords);
            double q = ambient_dot(k, p.coords, p.coords); // +1 or -1
            axpy(-ip / q, p.coords, v);
        }
        for (const auto& f : frame) axpy(-ambient_dot(k, v, f), f, v);
        double nn = std::sqrt(std::max(0.0, ambient_dot(k, v, v)));
        if (nn > 1e-8) {
            frame.push_back(scale(v, 1.0 / nn));
        }
    }
    if (static_cast<int>(frame.size()) != n)
        throw NumericalError("could not build a tangent frame", 0.0);
    return frame;
}

ModelPoint model_exp(ModelKind kind, const ModelPoint& x, const Vec& dir,
                     double len) {
    const ModelParams& params = x.params;
    Curvature k = params.k;
    if (len < 0) throw DomainError("model_exp requires nonnegative length");
    GeodesicState st{ambient(x), dir};
    double nv = std::sqrt(std::max(0.0, ambient_dot(k, dir, dir)));
    if (std::abs(nv - 1.0) > 1e-9)
        throw DomainError("model_exp requires a unit tangent direction");
    Sheet sheet = x.sheet;
    double remaining = len;
    for (int hops = 0; hops < 64; ++hops) {
        Vec center = sheet_center(params, sheet);
        double s = crossing_length(params, center, st, remaining);
        if (kind == ModelKind::Disk && s >= 0 && s < remaining - 1e-12)
            throw DomainError("geodesic leaves the disk");
        if (s < 0 || kind == ModelKind::Disk) {
            GeodesicState out = flow_within_sheet(k, st, remaining);
            return canonicalize(kind, from_ambient(params, out.p, sheet));
        }
        // advance to the crossing and apply the gluing identification
        GeodesicState at = flow_within_sheet(k, st, s);
        remaining -= s;
        ModelPoint z = from_ambient(params, at.p, sheet);
        z.t = params.r;
        // split the velocity into outward radial and boundary-tangential parts
        Vec rho(params.n + 1);
        double snr = sn(k, params.r);
        double csr = cs(k, params.r);
        double kk = static_cast<double>(curvature_value(k));
        double c0 = (sheet == Sheet::Plus) ? 1.0 : -1.0;
        rho[0] = -kk * snr * c0;
        for (int i = 0; i < params.n; ++i) rho[i + 1] = csr * z.u[i];
        double a = ambient_dot(k, at.v, rho);
        Vec w = at.v;
        axpy(-a, rho, w);
        Vec du(params.n);
        for (int i = 0; i < params.n; ++i) du[i] = w[i + 1] / snr;

        Vec u2 = z.u;
        Vec du2 = du;
        Sheet sheet2 = sheet;
        switch (kind) {
            case ModelKind::DoubleDisk:
                sheet2 = (sheet == Sheet::Plus) ? Sheet::Minus : Sheet::Plus;
                break;
            case ModelKind::Crosscap:
                u2 = scale(z.u, -1.0);
                du2 = scale(du, -1.0);
                sheet2 = Sheet::Plus;
                break;
            case ModelKind::Purse:
                u2[params.n - 1] = -u2[params.n - 1];
                du2[params.n - 1] = -du2[params.n - 1];
                sheet2 = Sheet::Plus;
                break;
            default:
                break;
        }
        ModelPoint z2 = model_point(params, params.r, u2, sheet2);
        SpaceFormPoint p2 = ambient(z2);
        double c02 = (sheet2 == Sheet::Plus) ? 1.0 : -1.0;
        Vec rho2(params.n + 1);
        rho2[0] = -kk * snr * c02;
        for (int i = 0; i < params.n; ++i) rho2[i + 1] = csr * u2[i];
        Vec v2(params.n + 1, 0.0);
        axpy(-a, rho2, v2); // inward on the new sheet
        for (int i = 0; i < params.n; ++i) v2[i + 1] += snr * du2[i];
        // guard against drift
        double n2 = std::sqrt(std::max(0.0, ambient_dot(k, v2, v2)));
        if (n2 < 1e-12)
            throw NumericalError("degenerate velocity after gluing", remaining);
        st = {std::move(p2), scale(v2, 1.0 / n2)};
        sheet = sheet2;
        if (remaining <= 1e-13) {
            return canonicalize(kind, std::move(z2));
        }
    }
    throw NumericalError("too many gluing crossings in model_exp", remaining);
}

std::vector<ModelPoint> sample_ball(ModelKind kind, const ModelPoint& center,
                                    double radius, int count,
                                    std::uint64_t seed, const SolverOpts& opts) {
    if (radius <= 0) throw DomainError("sample_ball requires radius > 0");
    const ModelParams& params = center.params;
    if (kind == ModelKind::Crosscap)
        throw DomainError("sample_ball does not support the crosscap");

    // Mirror centers whose within-sheet balls cover the metric ball.
    std::vector<ModelPoint> mirrors{center};
    if (kind == ModelKind::DoubleDisk) {
        ModelPoint m = center;
        m.sheet = (center.sheet == Sheet::Plus) ? Sheet::Minus : Sheet::Plus;
        mirrors.push_back(std::move(m));
    } else if (kind == ModelKind::Purse) {
        ModelPoint m = reflect_R(center);
        if (center.t > 0.0 && std::abs(center.u[params.n - 1]) > 1e-15)
            mirrors.push_back(std::move(m));
    }

    std::vector<std::vector<Vec>> frames;
    for (const auto& m : mirrors) frames.push_back(tangent_frame(m));
    std::vector<SpaceFormPoint> mirror_ambient;
    for (const auto& m : mirrors) mirror_ambient.push_back(ambient(m));

    auto eng = make_engine(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<ModelPoint> out;
    out.reserve(count);
    const double sn_cap = (params.k == Curvature::Spherical)
                              ? std::min(radius, kPi / 2)
                              : radius;
    const double envelope = sn(params.k, sn_cap);
    long guard = 0;
    while (static_cast<int>(out.size()) < count) {
        if (++guard > 200000L * (count + 16))
            throw NumericalError("ball sampling acceptance rate too low",
                                 static_cast<double>(out.size()));
        std::size_t which = (mirrors.size() == 2 && unif(eng) < 0.5) ? 1 : 0;
        // radius with sn^{n-1} density
        double s;
        while (true) {
            s = radius * unif(eng);
            double acc = std::pow(sn(params.k, s) / envelope, params.n - 1);
            if (unif(eng) <= acc) break;
        }
        Vec coeff = random_unit_vector(params.n, eng);
        Vec v(params.n + 1, 0.0);
        for (int i = 0; i < params.n; ++i) axpy(coeff[i], frames[which][i], v);
        GeodesicState step{mirror_ambient[which], v};
        GeodesicState res = flow_within_sheet(params.k, step, s);
        double tz = distance(space_form_point(params.k,
                                              sheet_center(params, mirrors[which].sheet)),
                             res.p);
        if (tz > params.r) continue; // left the disk
        ModelPoint z = from_ambient(params, res.p, mirrors[which].sheet);
        if (mirrors.size() == 2) {
            if (kind == ModelKind::Purse) {
                // density correction on the overlap of the two mirror balls
                int mult = 0;
                for (std::size_t j = 0; j < mirrors.size(); ++j) {
                    double g = angle_between(mirrors[j].u, z.u);
                    if (z.t == 0.0 || mirrors[j].t == 0.0) g = 0.0;
                    if (sheet_distance(params.k, mirrors[j].t, z.t, g) <=
                        radius + 1e-14)
                        ++mult;
                }
                if (mult == 2 && unif(eng) >= 0.5) continue;
            }
            if (which == 1 &&
                model_distance(kind, center, z, opts) > radius + 1e-12)
                continue;
        }
        out.push_back(canonicalize(kind, std::move(z)));
    }
    return out;
}

double model_volume(ModelKind kind, const ModelParams& params) {
    double v = ball_volume(params.n, params.k, params.r);
    return (kind == ModelKind::DoubleDisk) ? 2.0 * v : v;
}

std::string format_model_point(ModelKind kind, const ModelPoint& x) {
    char buf[64];
    std::ostringstream os;
    os << model_kind_name(kind) << ' ' << curvature_value(x.params.k) << ' '
       << x.params.n;
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, " %.17g", v);
        os << buf;
    };
    put(x.params.r);
    put(x.t);
    for (double c : x.u) put(c);
    os << ' ' << (x.sheet == Sheet::Plus ? '+' : '-');
    return os.str();
}

std::pair<ModelKind, ModelPoint> parse_model_point(const std::string& line) {
    std::istringstream is(line);
    std::string kind_name;
    int k_int = 0, n = 0;
    double r = 0, t = 0;
    if (!(is >> kind_name >> k_int >> n >> r >> t))
        throw DomainError("malformed model point record");
    ModelKind kind = model_kind_from_name(kind_name);
    ModelParams params = model_params(n, curvature_from_int(k_int), r);
    Vec u(n);
    for (auto& c : u)
        if (!(is >> c)) throw DomainError("malformed model point record");
    char sheet_ch = 0;
    if (!(is >> sheet_ch) || (sheet_ch != '+' && sheet_ch != '-'))
        throw DomainError("malformed model point record");
    Sheet sheet = (sheet_ch == '+') ? Sheet::Plus : Sheet::Minus;
    return {kind, model_point(params, t, std::move(u), sheet)};
}

} // namespace maxvol
