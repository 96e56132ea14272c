#include "fekete/quad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fekete/eval.hpp"
#include "fekete/util/gauss_legendre.hpp"
#include "fekete/util/parallel.hpp"

namespace fekete {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLogFloor = 1e-300;

double safe_log_abs(double v) { return std::log(std::max(std::abs(v), kLogFloor)); }

// Antiderivative of log|x|: Phi(x) = x log|x| - x, Phi(0) = 0.
double phi_log(double x) {
    if (x == 0.0) return 0.0;
    return x * std::log(std::abs(x)) - x;
}

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

ZeroBracket refine_bracket(const RealFn& f, const RealFn& deriv, double a, double b, double lo,
                           double hi, double flo, double fhi, double degenerate_ratio,
                           int64_t* evals) {
    // Secant scale over the original bracket; reference for the degeneracy guard.
    const double scale = (std::abs(flo) + std::abs(fhi)) / std::max(hi - lo, 1e-300);
    int slo = sign_of(flo);
    for (int iter = 0; iter < 80 && hi - lo > 1e-13; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        ++*evals;
        if (sign_of(fm) == slo) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    ZeroBracket z;
    z.lo = lo;
    z.hi = hi;
    z.root = 0.5 * (lo + hi);
    if (deriv) {
        z.slope = deriv(z.root);
        ++*evals;
    } else {
        double h = std::max(1e-7, 8.0 * (hi - lo));
        h = std::min({h, 0.25 * (z.root - a), 0.25 * (b - z.root)});
        if (h <= 0.0) h = 0.5 * (hi - lo) + 1e-15;
        z.slope = (f(z.root + h) - f(z.root - h)) / (2.0 * h);
        *evals += 2;
    }
    if (!std::isfinite(z.slope)) throw std::runtime_error("bracket refinement: non-finite slope");
    if (std::abs(z.slope) < degenerate_ratio * scale) {
        std::ostringstream msg;
        msg << "degenerate zero near t=" << z.root << " (slope " << z.slope << ", scale " << scale
            << ")";
        throw DegenerateZero(z.root, z.slope, msg.str());
    }
    return z;
}

std::vector<ZeroBracket> brackets_from_scan(const RealFn& f, const RealFn& deriv, double a, double b,
                                            const std::vector<double>& ts,
                                            const std::vector<double>& vs, double degenerate_ratio,
                                            int64_t* evals) {
    std::vector<ZeroBracket> out;
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        if (!std::isfinite(vs[i]) || !std::isfinite(vs[i + 1]))
            throw std::runtime_error("bracket scan: non-finite function value");
        const int s0 = sign_of(vs[i]);
        const int s1 = sign_of(vs[i + 1]);
        if (s0 == 0) {
            // Exact zero at a scan point: bracket it with the neighbours when
            // they straddle it (a simple zero); even-order contact has no
            // sign change and stays undetectable, as for any scan.
            if (i > 0) {
                const int sp = sign_of(vs[i - 1]);
                if (sp != 0 && s1 != 0 && sp != s1) {
                    out.push_back(refine_bracket(f, deriv, a, b, ts[i - 1], ts[i + 1], vs[i - 1],
                                                 vs[i + 1], degenerate_ratio, evals));
                }
            }
            continue;
        }
        if (s1 != 0 && s0 != s1) {
            out.push_back(refine_bracket(f, deriv, a, b, ts[i], ts[i + 1], vs[i], vs[i + 1],
                                         degenerate_ratio, evals));
        }
    }
    return out;
}

// Zero windows after clipping to the domain and splitting close pairs at
// their midpoint, so every window owns exactly one root.
struct Window {
    double lo, hi;
    ZeroBracket z;
};

std::vector<Window> make_windows(const std::vector<ZeroBracket>& zeros, double a, double b,
                                 double radius) {
    std::vector<ZeroBracket> zs(zeros);
    std::sort(zs.begin(), zs.end(),
              [](const ZeroBracket& x, const ZeroBracket& y) { return x.root < y.root; });
    std::vector<Window> w;
    for (const ZeroBracket& z : zs) {
        if (z.root <= a || z.root >= b) continue;
        w.push_back(Window{std::max(a, z.root - radius), std::min(b, z.root + radius), z});
    }
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        if (w[i].hi > w[i + 1].lo) {
            const double mid = 0.5 * (w[i].z.root + w[i + 1].z.root);
            w[i].hi = mid;
            w[i + 1].lo = mid;
        }
    }
    return w;
}

// The integrator works on the transformed integrand
//     L(t) = log|f(t)| - nuL log(t - a0) - nuR log(b0 - t),
// which is smooth at a flagged endpoint; the removed logs are integrated in
// closed form segment by segment. A zero window applies the same idea to the
// local model log|slope_g| + log|t - root| of the transformed function.
class LogIntegrator {
  public:
    LogIntegrator(const LogIntegrand& fn, double a, double b, const QuadConfig& cfg)
        : fn_(fn), cfg_(cfg), a0_(a), b0_(b) {
        nuL_ = fn.left == EndpointKind::none ? 0 : (fn.left == EndpointKind::pole ? -1 : 1);
        nuR_ = fn.right == EndpointKind::none ? 0 : (fn.right == EndpointKind::pole ? -1 : 1);
    }

    double raw(double t) {
        ++evals;
        return fn_.f(t);
    }

    double L_from_raw(double t, double v) const {
        double r = safe_log_abs(v);
        if (nuL_ != 0) r -= nuL_ * std::log(t - a0_);
        if (nuR_ != 0) r -= nuR_ * std::log(b0_ - t);
        return r;
    }

    double L(double t) { return L_from_raw(t, raw(t)); }

    // Closed-form part removed from L, restored over [u,v].
    double transform_cf(double u, double v) const {
        double r = 0.0;
        if (nuL_ != 0) r += nuL_ * (phi_log(v - a0_) - phi_log(u - a0_));
        if (nuR_ != 0) r += nuR_ * (phi_log(b0_ - u) - phi_log(b0_ - v));
        return r;
    }

    double slope_g(const ZeroBracket& z) const {
        double s = z.slope;
        if (nuL_ != 0) s *= std::pow(z.root - a0_, static_cast<double>(-nuL_));
        if (nuR_ != 0) s *= std::pow(b0_ - z.root, static_cast<double>(-nuR_));
        return s;
    }

    template <class G>
    double gl(G&& g, double u, double v, int n) {
        const GaussLegendreRule& rule = gauss_legendre(static_cast<std::size_t>(n));
        const double mid = 0.5 * (u + v), half = 0.5 * (v - u);
        double s = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * g(mid + half * rule.nodes[i]);
        return s * half;
    }

    template <class G>
    double adaptive(G&& g, double u, double v, double tol, int depth, double* est) {
        const double whole = gl(g, u, v, cfg_.local_nodes);
        const double m = 0.5 * (u + v);
        const double split = gl(g, u, m, cfg_.local_nodes) + gl(g, m, v, cfg_.local_nodes);
        const double diff = std::abs(whole - split);
        if (diff <= tol || depth <= 0) {
            *est += diff;
            return split;
        }
        return adaptive(g, u, m, 0.5 * tol, depth - 1, est) + adaptive(g, m, v, 0.5 * tol, depth - 1, est);
    }

    // Smooth piece of L whose nearest singular points sit dist_u / dist_v
    // beyond its ends: grade panels geometrically toward the close ends.
    double graded_piece(double u, double v, double dist_u, double dist_v, double* est) {
        auto Lf = [this](double t) { return L(t); };
        std::vector<double> cuts;
        cuts.push_back(u);
        const double len = v - u;
        double x = dist_u;
        while (x < 0.45 * len) {
            cuts.push_back(u + 3.0 * x);
            x *= 4.0;
        }
        std::vector<double> right;
        x = dist_v;
        while (x < 0.45 * len) {
            right.push_back(v - 3.0 * x);
            x *= 4.0;
        }
        for (auto it = right.rbegin(); it != right.rend(); ++it) {
            if (*it > cuts.back() + 1e-15) cuts.push_back(*it);
        }
        cuts.push_back(v);
        double total = 0.0;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const double fine = gl(Lf, cuts[i], cuts[i + 1], cfg_.local_nodes);
            const double coarse = gl(Lf, cuts[i], cuts[i + 1], std::max(2, cfg_.local_nodes / 2));
            const double diff = std::abs(fine - coarse);
            if (diff > cfg_.panel_tol) {
                total += adaptive(Lf, cuts[i], cuts[i + 1], cfg_.panel_tol, cfg_.max_depth, est);
            } else {
                total += fine;
                *est += diff;
            }
        }
        return total;
    }

    // Window piece [u,v] owning one bracketed zero (the root can sit outside
    // [u,v] when a close pair was split): exact model integral plus the
    // quadrature-corrected remainder.
    double window_piece(double u, double v, const ZeroBracket& z, double* est) {
        const double sg = slope_g(z);
        const double model =
            (v - u) * std::log(std::abs(sg)) + phi_log(v - z.root) - phi_log(u - z.root);
        auto remainder = [&](double t) {
            const double d = t - z.root;
            if (std::abs(d) < 1e-15) return 0.0;  // removable: log|g/(sg d)| -> 0
            return L(t) - std::log(std::abs(sg * d));
        };
        const double s1 = gl(remainder, u, v, cfg_.local_nodes);
        const double s2 = gl(remainder, u, v, 2 * cfg_.local_nodes);
        const double diff = std::abs(s2 - s1);
        if (diff > std::max(cfg_.panel_tol, 1e-11)) {
            return model + adaptive(remainder, u, v, cfg_.panel_tol, cfg_.max_depth, est);
        }
        *est += diff;
        return model + s2;
    }

    double run_range(double A, double B, const std::vector<Window>& wins,
                     const std::vector<double>& edges, int rescan_depth, double* est,
                     std::vector<ZeroBracket>* found);

    int64_t evals = 0;
    const UnitMesh* mesh = nullptr;               // optional cached mesh
    const std::vector<double>* mesh_vals = nullptr;  // raw f at mesh nodes

    const LogIntegrand& fn_;
    QuadConfig cfg_;
    double a0_, b0_;
    int nuL_ = 0, nuR_ = 0;
};

double LogIntegrator::run_range(double A, double B, const std::vector<Window>& wins,
                                const std::vector<double>& edges, int rescan_depth, double* est,
                                std::vector<ZeroBracket>* found) {
    std::vector<double> bounds;
    bounds.push_back(A);
    for (double e : edges)
        if (e > A + 1e-14 && e < B - 1e-14) bounds.push_back(e);
    for (const Window& w : wins) {
        if (w.lo > A + 1e-14 && w.lo < B - 1e-14) bounds.push_back(w.lo);
        if (w.hi > A + 1e-14 && w.hi < B - 1e-14) bounds.push_back(w.hi);
    }
    bounds.push_back(B);
    std::sort(bounds.begin(), bounds.end());
    bounds.erase(std::unique(bounds.begin(), bounds.end(),
                             [](double x, double y) { return y - x < 1e-14; }),
                 bounds.end());
    if (bounds.back() != B) bounds.back() = B;

    auto window_at = [&](double t) -> const Window* {
        for (const Window& w : wins)
            if (t >= w.lo && t <= w.hi) return &w;
        return nullptr;
    };
    auto nearest_root_dist = [&](double t) {
        double d = std::numeric_limits<double>::infinity();
        for (const Window& w : wins) d = std::min(d, std::abs(t - w.z.root));
        return d;
    };

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
        const double u = bounds[i], v = bounds[i + 1];
        if (v - u < 1e-14) continue;
        total += transform_cf(u, v);

        const Window* w = window_at(0.5 * (u + v));
        if (w != nullptr) {
            total += window_piece(u, v, w->z, est);
            continue;
        }

        // Cached full-panel fast path.
        bool done = false;
        bool cache_failed = false;
        if (mesh != nullptr && mesh_vals != nullptr) {
            for (std::size_t pnl = 0; pnl + 1 < mesh->edges.size(); ++pnl) {
                if (std::abs(mesh->edges[pnl] - u) < 1e-14 &&
                    std::abs(mesh->edges[pnl + 1] - v) < 1e-14) {
                    const auto [beg, end] = mesh->panel_node_range[pnl];
                    double fine = 0.0, coarse = 0.0;
                    for (int j = beg; j < end; ++j) {
                        const double Lj = L_from_raw(mesh->nodes[j], (*mesh_vals)[j]);
                        fine += mesh->weight_fine[j] * Lj;
                        coarse += mesh->weight_coarse[j] * Lj;
                    }
                    const double diff = std::abs(fine - coarse);
                    if (diff <= cfg_.panel_tol) {
                        total += fine;
                        *est += diff;
                        done = true;
                    } else {
                        cache_failed = true;
                    }
                    break;
                }
            }
        }
        if (done) continue;

        // A segment hugging a carved window fails any whole-segment estimate
        // because of the adjacent singularity, not a missed zero; skip both
        // the flat attempt and the rescan and grade it directly.
        const double du0 = nearest_root_dist(u);
        const double dv0 = nearest_root_dist(v);
        const bool window_adjacent = std::min(du0, dv0) <= 2.0 * cfg_.zero_window;

        auto Lf = [this](double t) { return L(t); };
        if (!cache_failed && !window_adjacent) {
            const double fine = gl(Lf, u, v, cfg_.nodes);
            const double coarse = gl(Lf, u, v, std::max(2, cfg_.nodes / 2));
            const double diff = std::abs(fine - coarse);
            if (diff <= cfg_.panel_tol) {
                total += fine;
                *est += diff;
                continue;
            }
        }

        if (rescan_depth > 0 && !window_adjacent) {
            // The estimate failed: re-bracket on a dense local scan in case a
            // zero (or close pair) slipped past the original scan.
            const int ns = std::max(33, cfg_.nodes + 1);
            std::vector<double> ts(ns), vsv(ns);
            for (int j = 0; j < ns; ++j) {
                ts[j] = u + (v - u) * (j + 0.5) / ns;
                vsv[j] = raw(ts[j]);
            }
            std::vector<ZeroBracket> extra = brackets_from_scan(
                fn_.f, fn_.df, a0_, b0_, ts, vsv, cfg_.degenerate_ratio, &evals);
            std::vector<ZeroBracket> fresh;
            for (const ZeroBracket& z : extra) {
                if (nearest_root_dist(z.root) > cfg_.zero_window) fresh.push_back(z);
            }
            if (!fresh.empty()) {
                if (found != nullptr) found->insert(found->end(), fresh.begin(), fresh.end());
                std::vector<Window> sub = make_windows(fresh, u, v, cfg_.zero_window);
                // The recursion restores its own closed forms over [u,v].
                total += run_range(u, v, sub, {}, rescan_depth - 1, est, found) - transform_cf(u, v);
                continue;
            }
        }

        const double du = std::max(du0, 1e-6 * (v - u));
        const double dv = std::max(dv0, 1e-6 * (v - u));
        total += graded_piece(u, v, du, dv, est);
    }
    return total;
}

LogIntegral integrate_with(LogIntegrator& ig, double a, double b,
                           const std::vector<ZeroBracket>& zeros, const std::vector<double>& edges,
                           const QuadConfig& cfg) {
    LogIntegral out;
    out.zeros = zeros;
    std::vector<Window> wins = make_windows(out.zeros, a, b, cfg.zero_window);
    double est = 0.0;
    std::vector<ZeroBracket> found;
    out.value = ig.run_range(a, b, wins, edges, 2, &est, &found);
    out.zeros.insert(out.zeros.end(), found.begin(), found.end());
    std::sort(out.zeros.begin(), out.zeros.end(),
              [](const ZeroBracket& x, const ZeroBracket& y) { return x.root < y.root; });
    out.error_estimate = est;
    out.nodes_used = ig.evals;
    return out;
}

std::vector<double> geometric_edges(double a, double b, bool grade_left, bool grade_right,
                                    const QuadConfig& cfg) {
    const double len = b - a;
    const double w = std::min(cfg.endpoint_window, 0.25 * len);
    std::vector<double> edges;
    if (grade_left) {
        double x = w;
        while (x < 0.3 * len) {
            edges.push_back(a + x);
            x *= 2.0;
        }
    }
    edges.push_back(a + 0.5 * len);
    if (grade_right) {
        double x = w;
        std::vector<double> r;
        while (x < 0.3 * len) {
            r.push_back(b - x);
            x *= 2.0;
        }
        for (auto it = r.rbegin(); it != r.rend(); ++it) edges.push_back(*it);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return edges;
}

}  // namespace

std::vector<ZeroBracket> bracket_zeros(const RealFn& f, double a, double b, int scan_points,
                                       const RealFn& deriv) {
    if (scan_points < 16) throw std::domain_error("bracket_zeros: scan_points must be >= 16");
    if (!(a < b)) throw std::domain_error("bracket_zeros: need a < b");
    std::vector<double> ts(scan_points), vs(scan_points);
    for (int i = 0; i < scan_points; ++i) {
        ts[i] = a + (b - a) * static_cast<double>(i) / (scan_points - 1);
        vs[i] = f(ts[i]);
    }
    int64_t evals = scan_points;
    return brackets_from_scan(f, deriv, a, b, ts, vs, 1e-8, &evals);
}

LogIntegral integrate_log_abs(const LogIntegrand& fn, double a, double b,
                              const std::vector<ZeroBracket>& zeros, const QuadConfig& cfg) {
    if (!(a < b)) throw std::domain_error("integrate_log_abs: need a < b");
    LogIntegrator ig(fn, a, b, cfg);
    const std::vector<double> edges =
        geometric_edges(a, b, fn.left != EndpointKind::none, fn.right != EndpointKind::none, cfg);
    return integrate_with(ig, a, b, zeros, edges, cfg);
}

UnitMesh build_unit_mesh(const QuadConfig& cfg) {
    UnitMesh mesh;
    const double w = std::min(std::max(cfg.endpoint_window, 1e-4), 0.125);
    std::vector<double> left = {0.0, w};
    double e = w;
    while (2.0 * e <= 0.25 + 1e-12) {
        e *= 2.0;
        left.push_back(e);
    }
    if (left.back() < 0.25 - 1e-12) left.push_back(0.25);
    std::vector<double> edges(left);
    edges.push_back(0.375);
    edges.push_back(0.5);
    edges.push_back(0.625);
    for (auto it = left.rbegin(); it != left.rend(); ++it) {
        const double m = 1.0 - *it;
        if (m > edges.back() + 1e-12) edges.push_back(m);
    }
    if (edges.back() < 1.0) edges.push_back(1.0);
    mesh.edges = edges;

    const int nf = std::max(4, cfg.nodes);
    const int nc = std::max(2, nf / 2);
    const GaussLegendreRule& rf = gauss_legendre(static_cast<std::size_t>(nf));
    const GaussLegendreRule& rc = gauss_legendre(static_cast<std::size_t>(nc));
    std::vector<double> x, ww;
    for (std::size_t pnl = 0; pnl + 1 < edges.size(); ++pnl) {
        const int begin = static_cast<int>(mesh.nodes.size());
        std::vector<std::pair<double, std::pair<double, double>>> pts;  // (t, (wf, wc))
        rf.map(edges[pnl], edges[pnl + 1], x, ww);
        for (std::size_t i = 0; i < x.size(); ++i) pts.push_back({x[i], {ww[i], 0.0}});
        rc.map(edges[pnl], edges[pnl + 1], x, ww);
        for (std::size_t i = 0; i < x.size(); ++i) pts.push_back({x[i], {0.0, ww[i]}});
        std::sort(pts.begin(), pts.end());
        for (const auto& pt : pts) {
            mesh.nodes.push_back(pt.first);
            mesh.weight_fine.push_back(pt.second.first);
            mesh.weight_coarse.push_back(pt.second.second);
        }
        mesh.panel_node_range.push_back({begin, static_cast<int>(mesh.nodes.size())});
    }
    return mesh;
}

LogIntegral integrate_log_unit(const LogIntegrand& fn, const UnitMesh& mesh,
                               const std::vector<double>& values, const QuadConfig& cfg) {
    LogIntegrator ig(fn, 0.0, 1.0, cfg);

    std::vector<double> vals;
    const std::vector<double>* vptr = &values;
    if (values.empty()) {
        vals.resize(mesh.nodes.size());
        for (std::size_t i = 0; i < mesh.nodes.size(); ++i) vals[i] = ig.raw(mesh.nodes[i]);
        vptr = &vals;
    } else if (values.size() != mesh.nodes.size()) {
        throw std::invalid_argument("integrate_log_unit: values/mesh size mismatch");
    }
    ig.mesh = &mesh;
    ig.mesh_vals = vptr;

    std::vector<ZeroBracket> zeros = brackets_from_scan(fn.f, fn.df, 0.0, 1.0, mesh.nodes, *vptr,
                                                        cfg.degenerate_ratio, &ig.evals);
    const std::vector<double> edges(mesh.edges.begin() + 1, mesh.edges.end() - 1);
    return integrate_with(ig, 0.0, 1.0, zeros, edges, cfg);
}

// ---------------------------------------------------------------------------
// Drivers
// ---------------------------------------------------------------------------

namespace {

EndpointKind left_kind(const LegendreTable& table, uint64_t k) {
    if (k != 0) return EndpointKind::pole;
    // Arc 0 starts at z = 1 where F_p vanishes; for p = 1 (mod 4) that zero is
    // double (F_p'(1) = 0), so H(0,t) ~ c t there, else H is regular.
    return table.p % 4 == 1 ? EndpointKind::zero : EndpointKind::none;
}

EndpointKind right_kind(const LegendreTable& table, uint64_t k) {
    if (k != table.p - 1) return EndpointKind::pole;
    return table.p % 4 == 1 ? EndpointKind::zero : EndpointKind::none;
}

// H values for every arc at every mesh node via one grid call per node.
// Layout: values[node * p + k].
std::vector<double> arc_h_values(const LegendreTable& table, const FeketeGridPlan& plan,
                                 const std::vector<double>& ts, int threads) {
    const uint64_t p = table.p;
    const std::complex<double> g = gauss_sum(table);
    std::vector<double> out(ts.size() * p);
    parallel_for(ts.size(), threads, [&](std::size_t i) {
        thread_local ChirpZPlan::Workspace ws;
        std::vector<std::complex<double>> row(p);
        plan.eval(ts[i], row.data(), ws);
        const std::complex<double> factor =
            std::complex<double>(0.0, 2.0 * kPi) / (g * (unit_e(ts[i]) - 1.0));
        double* dst = out.data() + i * p;
        for (uint64_t k = 0; k < p; ++k) dst[k] = (factor * row[k]).real();
    });
    return out;
}

}  // namespace

MahlerResult mahler_fekete(const LegendreTable& table, const QuadConfig& cfg, int threads) {
    const uint64_t p = table.p;
    const UnitMesh mesh = build_unit_mesh(cfg);
    const FeketeGridPlan plan(table);
    const std::vector<double> hvals = arc_h_values(table, plan, mesh.nodes, threads);

    std::vector<double> integrals(p), errors(p);
    parallel_for(p, threads, [&](std::size_t k) {
        const ArcFunction arc(table, k);
        LogIntegrand fn;
        fn.f = [&arc](double t) { return arc.H(t); };
        fn.df = [&arc](double t) { return arc.H_deriv(t, 1); };
        fn.left = left_kind(table, k);
        fn.right = right_kind(table, k);
        std::vector<double> vals(mesh.nodes.size());
        for (std::size_t i = 0; i < mesh.nodes.size(); ++i) vals[i] = hvals[i * p + k];
        LogIntegral li;
        try {
            li = integrate_log_unit(fn, mesh, vals, cfg);
        } catch (const DegenerateZero&) {
            // Re-integrate the whole arc from a 4x refined scan before giving up.
            try {
                const int ns = std::max(4 * static_cast<int>(mesh.nodes.size()), 4 * cfg.scan_points);
                std::vector<ZeroBracket> zeros = bracket_zeros(fn.f, 1e-9, 1.0 - 1e-9, ns, fn.df);
                li = integrate_log_abs(fn, 0.0, 1.0, zeros, cfg);
            } catch (const DegenerateZero& e) {
                throw DegenerateZero(e.location, e.slope,
                                     "arc " + std::to_string(k) + ": " + e.what());
            }
        }
        integrals[k] = li.value;
        errors[k] = li.error_estimate;
    });

    MahlerResult res;
    res.log_mean = pairwise_sum(integrals) / static_cast<double>(p);
    const double value = std::exp(res.log_mean - std::log(2.0 * kPi));
    res.error_estimate = value * pairwise_sum(errors) / static_cast<double>(p);
    res.estimate.value = value;
    res.estimate.std_error = 0.0;
    res.estimate.n_samples = p;
    res.estimate.seed = 0;
    res.estimate.mode = Estimate::Mode::exact;
    return res;
}

LqResult lq_norm_fekete(const LegendreTable& table, double q, const QuadConfig& cfg, int threads) {
    if (!(q > 0.0)) throw std::domain_error("lq_norm_fekete: q must be positive");
    const uint64_t p = table.p;
    const UnitMesh mesh = build_unit_mesh(cfg);
    const FeketeGridPlan plan(table);
    const double pnorm = std::pow(static_cast<double>(p), 0.5 * q);

    // phi(t) = (1/p) sum_k |G_p(k,t)|^q, one grid call per node.
    auto phi_at = [&](double t, ChirpZPlan::Workspace& ws) {
        std::vector<std::complex<double>> row(p);
        plan.eval(t, row.data(), ws);
        std::vector<double> terms(p);
        for (uint64_t k = 0; k < p; ++k) terms[k] = std::pow(std::abs(row[k]), q);
        return pairwise_sum(terms) / (static_cast<double>(p) * pnorm);
    };

    std::vector<double> phi(mesh.nodes.size());
    parallel_for(mesh.nodes.size(), threads, [&](std::size_t i) {
        thread_local ChirpZPlan::Workspace ws;
        phi[i] = phi_at(mesh.nodes[i], ws);
    });

    double integral = 0.0, est = 0.0;
    ChirpZPlan::Workspace ws_seq = plan.make_workspace();
    auto gl_phi = [&](double a, double b) {
        const GaussLegendreRule& rule = gauss_legendre(static_cast<std::size_t>(cfg.nodes));
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        double s = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            s += rule.weights[i] * phi_at(mid + half * rule.nodes[i], ws_seq);
        return s * half;
    };
    for (std::size_t pnl = 0; pnl + 1 < mesh.edges.size(); ++pnl) {
        const auto [beg, end] = mesh.panel_node_range[pnl];
        double fine = 0.0, coarse = 0.0;
        for (int j = beg; j < end; ++j) {
            fine += mesh.weight_fine[j] * phi[j];
            coarse += mesh.weight_coarse[j] * phi[j];
        }
        const double diff = std::abs(fine - coarse);
        if (diff <= std::max(cfg.panel_tol, 1e-12 * std::abs(fine))) {
            integral += fine;
            est += diff;
            continue;
        }
        // Rare: a panel crossed by low-|G| cusps; refine with fresh grid calls.
        struct Rec {
            double a, b, whole;
            int depth;
        };
        std::vector<Rec> stack{{mesh.edges[pnl], mesh.edges[pnl + 1], fine, cfg.max_depth}};
        while (!stack.empty()) {
            Rec r = stack.back();
            stack.pop_back();
            const double m = 0.5 * (r.a + r.b);
            const double lo = gl_phi(r.a, m), hi = gl_phi(m, r.b);
            const double d = std::abs(r.whole - lo - hi);
            if (d <= cfg.panel_tol || r.depth <= 0) {
                integral += lo + hi;
                est += d;
            } else {
                stack.push_back({r.a, m, lo, r.depth - 1});
                stack.push_back({m, r.b, hi, r.depth - 1});
            }
        }
    }

    LqResult res;
    const double value = std::pow(integral, 1.0 / q);
    res.estimate.value = value;
    res.estimate.std_error = 0.0;
    res.estimate.n_samples = p;
    res.estimate.seed = 0;
    res.estimate.mode = Estimate::Mode::exact;
    res.error_estimate = integral > 0.0 ? value / q * est / integral : est;
    return res;
}

ZeroCountResult circle_zero_count(const LegendreTable& table, const QuadConfig& cfg, int threads) {
    const uint64_t p = table.p;
    const FeketeGridPlan plan(table);
    const std::complex<double> g = gauss_sum(table);
    const int scan = std::max(cfg.scan_points, 384);

    ZeroCountResult res;

    // Zeros among the arc endpoints e(k/p), z = 1 always included (F_p(1) = 0).
    {
        const std::vector<std::complex<double>> row = plan.eval(0.0);
        const double tol = 1e-8 * std::sqrt(static_cast<double>(p));
        for (uint64_t k = 0; k < p; ++k) {
            if (std::abs(row[k]) <= tol) ++res.endpoint_zeros;
        }
    }

    // Stream sign changes of H(k,.) over a uniform interior scan, batching
    // grid calls so memory stays O(p) per batch row.
    std::vector<int8_t> prev_sign(p, 0);
    std::vector<int64_t> changes(p, 0);
    const int batch = std::max(2 * threads, 4);
    std::vector<std::vector<double>> hrows(batch);
    for (int start = 0; start < scan; start += batch) {
        const int nb = std::min(batch, scan - start);
        parallel_for(nb, threads, [&](std::size_t j) {
            thread_local ChirpZPlan::Workspace ws;
            const double t = (static_cast<double>(start + static_cast<int>(j)) + 0.5) /
                             static_cast<double>(scan);
            std::vector<std::complex<double>> row(p);
            plan.eval(t, row.data(), ws);
            const std::complex<double> factor =
                std::complex<double>(0.0, 2.0 * kPi) / (g * (unit_e(t) - 1.0));
            hrows[j].resize(p);
            for (uint64_t k = 0; k < p; ++k) hrows[j][k] = (factor * row[k]).real();
        });
        for (int j = 0; j < nb; ++j) {
            const std::vector<double>& row = hrows[j];
            for (uint64_t k = 0; k < p; ++k) {
                const int8_t s = static_cast<int8_t>(sign_of(row[k]));
                if (s != 0 && prev_sign[k] != 0 && s != prev_sign[k]) ++changes[k];
                if (s != 0) prev_sign[k] = s;
            }
        }
    }
    int64_t sign_changes = 0;
    for (uint64_t k = 0; k < p; ++k) sign_changes += changes[k];

    res.count = sign_changes + res.endpoint_zeros;
    res.ratio = static_cast<double>(res.count) / static_cast<double>(p);
    return res;
}

}  // namespace fekete
