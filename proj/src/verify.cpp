#include "fekete/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "fekete/eval.hpp"
#include "fekete/process.hpp"
#include "fekete/util/parallel.hpp"
#include "fekete/util/rng.hpp"

namespace fekete {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr uint64_t kThetaStream = 0x7468657461ULL;   // "theta"
constexpr uint64_t kPairStream = 0x7061697273ULL;    // "pairs"

double uniform_open(uint64_t seed, uint64_t stream, uint64_t counter) {
    // strictly inside (0,1)
    return (static_cast<double>(counter_word(seed, stream, counter) >> 11) + 0.5) * 0x1.0p-53;
}

// Least squares slope of y against x.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}
}  // namespace

int MomentSpec::total_degree() const {
    int d = 0;
    for (int v : r) d += v;
    for (int v : s) d += v;
    return d;
}

void MomentSpec::validate() const {
    if (nodes.size() != r.size() || nodes.size() != s.size())
        throw std::domain_error("MomentSpec: nodes, r, s must have equal length");
    double prev = -1.0;
    for (double t : nodes) {
        if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("MomentSpec: nodes must lie in [0,1]");
        if (!(t > prev)) throw std::domain_error("MomentSpec: nodes must be strictly increasing");
        prev = t;
    }
    for (int v : r)
        if (v < 0) throw std::domain_error("MomentSpec: exponents must be non-negative");
    for (int v : s)
        if (v < 0) throw std::domain_error("MomentSpec: exponents must be non-negative");
}

std::vector<Rectangle> default_rectangles() {
    return {
        {-0.5, 0.5, -0.5, 0.5},    // center
        {-1.0, 1.0, -1.0, 1.0},    // wide center
        {0.25, 1.25, -0.5, 0.5},   // right of the real axis
        {-1.25, -0.25, -0.5, 0.5},
        {-0.5, 0.5, 0.25, 1.25},   // above the imaginary axis
        {-0.5, 0.5, -1.25, -0.25},
        {0.25, 1.5, 0.25, 1.5},    // quadrants
        {-1.5, -0.25, 0.25, 1.5},
        {1.0, 10.0, -10.0, 10.0},  // tails
        {-10.0, -1.0, -10.0, 10.0},
        {-10.0, 10.0, 1.5, 10.0},
        {-10.0, 10.0, -10.0, 10.0},
    };
}

std::complex<double> moment_lhs(const LegendreTable& table, const MomentSpec& spec, int threads) {
    spec.validate();
    const uint64_t p = table.p;
    const FeketeGridPlan plan(table);
    const std::complex<double> g = gauss_sum(table);

    std::vector<std::vector<std::complex<double>>> rows(spec.nodes.size());
    parallel_for(spec.nodes.size(), threads, [&](std::size_t j) {
        thread_local ChirpZPlan::Workspace ws;
        rows[j].resize(p);
        plan.eval(spec.nodes[j], rows[j].data(), ws);
        for (uint64_t k = 0; k < p; ++k) rows[j][k] /= g;
    });

    std::vector<std::complex<double>> terms(p);
    parallel_for(p, threads, [&](std::size_t k) {
        std::complex<double> prod(1.0, 0.0);
        for (std::size_t j = 0; j < spec.nodes.size(); ++j) {
            const std::complex<double> G = rows[j][k];
            for (int i = 0; i < spec.r[j]; ++i) prod *= G;
            const std::complex<double> Gc = std::conj(G);
            for (int i = 0; i < spec.s[j]; ++i) prod *= Gc;
        }
        terms[k] = prod;
    });
    return pairwise_sum(terms) / static_cast<double>(p);
}

std::complex<double> moment_rhs_exact(int J, const MomentSpec& spec) {
    spec.validate();
    if (J < 1) throw std::domain_error("moment_rhs_exact: J must be >= 1");
    const int d = spec.total_degree();
    if (d > 4) throw std::domain_error("moment_rhs_exact: total degree must be <= 4");
    if (d == 0) return {1.0, 0.0};
    if (d % 2 == 1) return {0.0, 0.0};

    struct Coef {
        double t;
        bool conj;
    };
    std::vector<Coef> cs;
    for (std::size_t j = 0; j < spec.nodes.size(); ++j) {
        for (int i = 0; i < spec.r[j]; ++i) cs.push_back({spec.nodes[j], false});
        for (int i = 0; i < spec.s[j]; ++i) cs.push_back({spec.nodes[j], true});
    }

    auto coef = [&](const Coef& c, int64_t m) {
        const std::complex<double> v = process_coefficient(m, c.t);
        return c.conj ? std::conj(v) : v;
    };

    if (d == 2) {
        std::complex<double> a(0.0, 0.0);
        for (int64_t m = -J; m <= J; ++m) a += coef(cs[0], m) * coef(cs[1], m);
        return a;
    }

    // Degree 4: E[X1 X2 X3 X4] splits into the three pairings; the all-equal
    // diagonal is counted three times, hence the -2 correction.
    std::complex<double> a01(0), a23(0), a02(0), a13(0), a03(0), a12(0), quad(0);
    for (int64_t m = -J; m <= J; ++m) {
        const std::complex<double> c0 = coef(cs[0], m);
        const std::complex<double> c1 = coef(cs[1], m);
        const std::complex<double> c2 = coef(cs[2], m);
        const std::complex<double> c3 = coef(cs[3], m);
        a01 += c0 * c1;
        a23 += c2 * c3;
        a02 += c0 * c2;
        a13 += c1 * c3;
        a03 += c0 * c3;
        a12 += c1 * c2;
        quad += c0 * c1 * c2 * c3;
    }
    return a01 * a23 + a02 * a13 + a03 * a12 - 2.0 * quad;
}

MomentConvergence moment_convergence_report(const std::vector<uint64_t>& p_list, int J,
                                            const MomentSpec& spec, int threads) {
    spec.validate();
    for (std::size_t i = 0; i + 1 < p_list.size(); ++i)
        if (p_list[i] >= p_list[i + 1])
            throw std::domain_error("moment_convergence_report: p_list must be increasing");

    MomentConvergence out;
    out.p_list = p_list;
    const std::complex<double> rhs = moment_rhs_exact(J, spec);
    for (uint64_t p : p_list) {
        const LegendreTable table = legendre_table(p);
        out.delta.push_back(std::abs(moment_lhs(table, spec, threads) - rhs));
    }

    const int rs = spec.total_degree();
    bool all_tiny = true;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < p_list.size(); ++i) {
        if (out.delta[i] > 1e-14) all_tiny = false;
        const double lp = std::log(static_cast<double>(p_list[i]));
        xs.push_back(lp);
        ys.push_back(std::log(std::max(out.delta[i], 1e-300)) - rs * std::log(lp));
    }
    if (all_tiny) {
        out.beta = std::numeric_limits<double>::infinity();
        out.pass = true;
        return out;
    }
    out.beta = -ls_slope(xs, ys);
    out.pass = out.beta >= 0.4;
    return out;
}

ApproxGapReport approximation_gap(uint64_t p, const std::vector<double>& t_list) {
    if (!is_prime(p) || p % 2 == 0) throw std::domain_error("approximation_gap: p must be an odd prime");
    const int64_t half = static_cast<int64_t>((p - 1) / 2);
    constexpr int64_t kTail = 1000000;
    ApproxGapReport rep;
    for (double t : t_list) {
        if (t <= 0.0 || t >= 1.0) {
            // e(t)-1 vanishes, so every coefficient does: the gap is exactly 0.
            rep.p_gap.push_back(0.0);
            continue;
        }
        const std::complex<double> num = unit_e(t) - 1.0;
        double gap = 0.0;
        for (int64_t m = -half; m <= half; ++m) {
            const std::complex<double> alpha =
                num / (static_cast<double>(p) * (unit_e((static_cast<double>(m) - t) / static_cast<double>(p)) - 1.0));
            gap += std::norm(process_coefficient(m, t) - alpha);
        }
        // Tail sum_{|m| > (p-1)/2} |g_m|^2 up to |m| = 1e6, then the integral bound.
        const double s2 = std::norm(num) / (4.0 * kPi * kPi);
        double tail = 0.0;
        for (int64_t m = half + 1; m <= kTail; ++m) {
            const double fm = static_cast<double>(m);
            tail += 1.0 / ((fm - t) * (fm - t)) + 1.0 / ((fm + t) * (fm + t));
        }
        tail += 2.0 / static_cast<double>(kTail);
        gap += s2 * tail;
        rep.p_gap.push_back(static_cast<double>(p) * gap);
    }
    for (double v : rep.p_gap) rep.max_p_gap = std::max(rep.max_p_gap, v);
    return rep;
}

TightnessReport tightness_ratio(const LegendreTable& table, int pair_count, uint64_t seed,
                                int threads) {
    if (pair_count < 100) throw std::domain_error("tightness_ratio: pair_count must be >= 100");
    const uint64_t p = table.p;
    const FeketeGridPlan plan(table);

    std::vector<double> ratio(pair_count, 0.0), e2(pair_count, 0.0), dt2(pair_count, 0.0);
    parallel_for(pair_count, threads, [&](std::size_t i) {
        thread_local ChirpZPlan::Workspace ws;
        double s = uniform_open(seed ^ kPairStream, i, 0);
        double t = uniform_open(seed ^ kPairStream, i, 1);
        if (s > t) std::swap(s, t);
        if (t - s < 1e-12) return;  // ratio contribution 0
        std::vector<std::complex<double>> rs(p), rt(p);
        plan.eval(s, rs.data(), ws);
        plan.eval(t, rt.data(), ws);
        std::vector<double> sq(p);
        for (uint64_t k = 0; k < p; ++k) sq[k] = std::norm(rt[k] - rs[k]);
        const double mean = pairwise_sum(sq) / (static_cast<double>(p) * static_cast<double>(p));
        e2[i] = mean;
        dt2[i] = (t - s) * (t - s);
        ratio[i] = mean / std::pow(t - s, 1.5);
    });

    TightnessReport rep;
    for (double v : ratio) rep.max_ratio = std::max(rep.max_ratio, v);
    // least squares E = C1 dt^2 + C2/p  (intercept c = C2/p)
    const double slope = ls_slope(dt2, e2);
    double sx = 0, sy = 0;
    for (int i = 0; i < pair_count; ++i) {
        sx += dt2[i];
        sy += e2[i];
    }
    const double intercept = (sy - slope * sx) / pair_count;
    rep.c1 = slope;
    rep.c2 = intercept * static_cast<double>(p);
    return rep;
}

double deriv_gap(const LegendreTable& table, int order, int threads) {
    if (order != 1 && order != 2) throw std::domain_error("deriv_gap: order must be 1 or 2");
    const uint64_t p = table.p;
    const int karcs = static_cast<int>(std::min<uint64_t>(p, 64));
    const int nt = 17;

    std::vector<double> gaps(karcs, 0.0);
    parallel_for(karcs, threads, [&](std::size_t i) {
        const uint64_t k = p * static_cast<uint64_t>(i) / karcs;
        const ArcFunction arc(table, k);
        const auto& w = arc.weights();
        const int64_t half = static_cast<int64_t>((p - 1) / 2);
        double worst = 0.0;
        for (int j = 0; j < nt; ++j) {
            const double t = (j + 0.5) / nt;
            double trunc = 0.0;
            for (int64_t m = -half; m <= half; ++m) {
                const int wm = w[static_cast<std::size_t>(m + half)];
                if (wm == 0) continue;
                const double d = static_cast<double>(m) - t;
                trunc += order == 1 ? wm / (d * d) : 2.0 * wm / (d * d * d);
            }
            const double gap = std::abs(arc.H_deriv(t, order) - trunc);
            worst = std::max(worst, gap);
        }
        gaps[i] = worst;
    });

    double worst = 0.0;
    for (double v : gaps) worst = std::max(worst, v);
    const double scale = order == 1 ? static_cast<double>(p)
                                    : static_cast<double>(p) * static_cast<double>(p);
    return worst * scale;
}

// ---------------------------------------------------------------------------
// Truncated log masses
// ---------------------------------------------------------------------------

namespace {

struct FnSpec {
    RealFn f;
    RealFn df;
    EndpointKind left;
    EndpointKind right;
};

double bisect_to(const RealFn& g, double lo, double hi, double glo) {
    // g changes sign on [lo,hi]; refine to ~1e-12.
    int slo = glo > 0.0 ? 1 : -1;
    for (int i = 0; i < 60 && hi - lo > 1e-13; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        ((g(mid) > 0.0 ? 1 : -1) == slo ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// All solutions of |f| = eps: sign changes of f-eps and f+eps on the scan,
// plus the pair of crossings hugging each bracketed zero (the scan can step
// over those when eps is small).
std::vector<double> level_crossings(const FnSpec& fn, const std::vector<double>& ts,
                                    const std::vector<double>& vs,
                                    const std::vector<ZeroBracket>& zeros, double eps) {
    std::vector<double> cross;
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        for (double lvl : {eps, -eps}) {
            const double a = vs[i] - lvl, b = vs[i + 1] - lvl;
            if (a == 0.0 || b == 0.0) continue;
            if ((a > 0.0) != (b > 0.0)) {
                cross.push_back(bisect_to([&](double t) { return fn.f(t) - lvl; }, ts[i], ts[i + 1], a));
            }
        }
    }
    for (const ZeroBracket& z : zeros) {
        const double guess = std::min(0.02, eps / std::max(std::abs(z.slope), 1e-8));
        for (int dir : {-1, +1}) {
            double h = guess;
            double edge = dir < 0 ? std::max(1e-9, z.root - 0.1) : std::min(1.0 - 1e-9, z.root + 0.1);
            double x = z.root + dir * h;
            int iter = 0;
            while ((dir < 0 ? x > edge : x < edge) && std::abs(fn.f(x)) < eps && iter++ < 40) {
                h *= 2.0;
                x = z.root + dir * h;
            }
            if ((dir < 0 && x <= edge) || (dir > 0 && x >= edge)) continue;
            if (std::abs(fn.f(x)) < eps) continue;
            // |f| = eps somewhere between x (where |f| >= eps) and the root
            // (where |f| = 0); bisect |f| - eps over that span.
            auto g = [&](double t) { return std::abs(fn.f(t)) - eps; };
            const double lo = dir < 0 ? x : z.root;
            const double hi = dir < 0 ? z.root : x;
            cross.push_back(bisect_to(g, lo, hi, g(lo)));
        }
    }
    std::sort(cross.begin(), cross.end());
    cross.erase(std::unique(cross.begin(), cross.end(),
                            [](double a, double b) { return b - a < 1e-11; }),
                cross.end());
    return cross;
}

double integrate_cells(const FnSpec& fn, const std::vector<double>& bounds,
                       const std::vector<ZeroBracket>& zeros, double eps, bool want_small,
                       const QuadConfig& cfg) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
        const double a = bounds[i], b = bounds[i + 1];
        if (b - a < 1e-12) continue;
        const double mid = 0.5 * (a + b);
        const double fm = std::abs(fn.f(mid));
        if (want_small ? fm > eps : fm < eps) continue;
        std::vector<ZeroBracket> inside;
        for (const ZeroBracket& z : zeros)
            if (z.root > a && z.root < b) inside.push_back(z);
        LogIntegrand li;
        li.f = fn.f;
        li.df = fn.df;
        li.left = a < 1e-12 ? fn.left : EndpointKind::none;
        li.right = b > 1.0 - 1e-12 ? fn.right : EndpointKind::none;
        total += integrate_log_abs(li, a, b, inside, cfg).value;
    }
    return total;
}

// Per-function contributions for every eps at once (scan and zeros shared).
void truncation_contrib(const FnSpec& fn, const std::vector<double>& eps_list,
                        const QuadConfig& cfg, double* interior, double* boundary) {
    const int ns = std::max(cfg.scan_points, 193);
    std::vector<double> ts(ns), vs(ns);
    for (int i = 0; i < ns; ++i) {
        ts[i] = (i + 0.5) / ns;
        vs[i] = fn.f(ts[i]);
    }
    std::vector<ZeroBracket> zeros;
    {
        // reuse the scan for brackets
        for (int i = 0; i + 1 < ns; ++i) {
            if ((vs[i] > 0.0) != (vs[i + 1] > 0.0)) {
                const double root = bisect_to(fn.f, ts[i], ts[i + 1], vs[i]);
                ZeroBracket z;
                z.root = root;
                z.lo = root - 5e-13;
                z.hi = root + 5e-13;
                z.slope = fn.df ? fn.df(root)
                                : (fn.f(root + 1e-7) - fn.f(root - 1e-7)) / 2e-7;
                zeros.push_back(z);
            }
        }
    }

    for (std::size_t e = 0; e < eps_list.size(); ++e) {
        const double eps = eps_list[e];
        const std::vector<double> cross = level_crossings(fn, ts, vs, zeros, eps);

        std::vector<double> bounds{0.0};
        for (double c : cross) bounds.push_back(c);
        bounds.push_back(1.0);
        interior[e] = integrate_cells(fn, bounds, zeros, eps, /*want_small=*/true, cfg);

        double bmass = 0.0;
        for (int side = 0; side < 2; ++side) {
            const double lo = side == 0 ? 0.0 : 1.0 - eps;
            const double hi = side == 0 ? eps : 1.0;
            std::vector<double> bb{lo};
            for (double c : cross)
                if (c > lo + 1e-12 && c < hi - 1e-12) bb.push_back(c);
            bb.push_back(hi);
            bmass += integrate_cells(fn, bb, zeros, eps, /*want_small=*/false, cfg);
        }
        boundary[e] = bmass;
    }
}

TruncationReport assemble_truncation(const std::vector<double>& eps_list,
                                     const std::vector<double>& interior_sum,
                                     const std::vector<double>& boundary_sum, double count) {
    TruncationReport rep;
    rep.eps = eps_list;
    std::vector<double> lx, ly;
    for (std::size_t e = 0; e < eps_list.size(); ++e) {
        const double im = std::abs(interior_sum[e]) / count;
        const double bm = std::abs(boundary_sum[e]) / count;
        rep.interior_mass.push_back(im);
        rep.boundary_mass.push_back(bm);
        rep.boundary_constant.push_back(bm / (eps_list[e] * std::log(1.0 / eps_list[e])));
        lx.push_back(std::log(eps_list[e]));
        ly.push_back(std::log(std::max(im, 1e-300)));
    }
    rep.interior_exponent = ls_slope(lx, ly);
    return rep;
}

}  // namespace

TruncationReport log_truncation_fekete(const LegendreTable& table,
                                       const std::vector<double>& eps_list, const QuadConfig& cfg,
                                       int threads) {
    const uint64_t p = table.p;
    const std::size_t ne = eps_list.size();
    std::vector<double> interior(p * ne), boundary(p * ne);
    parallel_for(p, threads, [&](std::size_t k) {
        const ArcFunction arc(table, k);
        FnSpec fn;
        fn.f = [&arc](double t) { return arc.H(t); };
        fn.df = [&arc](double t) { return arc.H_deriv(t, 1); };
        fn.left = k != 0 ? EndpointKind::pole
                         : (p % 4 == 1 ? EndpointKind::zero : EndpointKind::none);
        fn.right = k != p - 1 ? EndpointKind::pole
                              : (p % 4 == 1 ? EndpointKind::zero : EndpointKind::none);
        truncation_contrib(fn, eps_list, cfg, &interior[k * ne], &boundary[k * ne]);
    });
    std::vector<double> isum(ne, 0.0), bsum(ne, 0.0);
    for (std::size_t e = 0; e < ne; ++e) {
        std::vector<double> col(p);
        for (uint64_t k = 0; k < p; ++k) col[k] = interior[k * ne + e];
        isum[e] = pairwise_sum(col);
        for (uint64_t k = 0; k < p; ++k) col[k] = boundary[k * ne + e];
        bsum[e] = pairwise_sum(col);
    }
    return assemble_truncation(eps_list, isum, bsum, static_cast<double>(p));
}

TruncationReport log_truncation_process(int J, int n_patterns, uint64_t seed,
                                        const std::vector<double>& eps_list, const QuadConfig& cfg,
                                        int threads) {
    const std::size_t ne = eps_list.size();
    std::vector<double> interior(static_cast<std::size_t>(n_patterns) * ne);
    std::vector<double> boundary(static_cast<std::size_t>(n_patterns) * ne);
    parallel_for(n_patterns, threads, [&](std::size_t i) {
        const SignPattern pat = sample_pattern(J, seed, i);
        const TruncatedH h(pat);
        FnSpec fn;
        fn.f = [&h](double t) { return h.value(t); };
        fn.df = [&h](double t) { return h.deriv1(t); };
        fn.left = EndpointKind::pole;
        fn.right = EndpointKind::pole;
        truncation_contrib(fn, eps_list, cfg, &interior[i * ne], &boundary[i * ne]);
    });
    std::vector<double> isum(ne, 0.0), bsum(ne, 0.0);
    for (std::size_t e = 0; e < ne; ++e) {
        std::vector<double> col(n_patterns);
        for (int i = 0; i < n_patterns; ++i) col[i] = interior[i * ne + e];
        isum[e] = pairwise_sum(col);
        for (int i = 0; i < n_patterns; ++i) col[i] = boundary[i * ne + e];
        bsum[e] = pairwise_sum(col);
    }
    return assemble_truncation(eps_list, isum, bsum, static_cast<double>(n_patterns));
}

SupNormReport sup_norm_report(const LegendreTable& table, int threads) {
    const uint64_t p = table.p;
    const FeketeGridPlan plan_f(table);
    std::vector<double> dcoef(p);
    for (uint64_t n = 0; n < p; ++n) dcoef[n] = static_cast<double>(n) * table.symbols[n];
    const FeketeGridPlan plan_df(p, std::move(dcoef));  // |F'| on the grid: |sum n chi(n) z^n|

    const int offsets = 16;
    std::vector<double> sup_f(offsets, 0.0), sup_df(offsets, 0.0);
    parallel_for(offsets, threads, [&](std::size_t r) {
        thread_local ChirpZPlan::Workspace ws;
        const double t = static_cast<double>(r) / offsets;
        std::vector<std::complex<double>> row(p);
        plan_f.eval(t, row.data(), ws);
        double mf = 0.0;
        for (uint64_t k = 0; k < p; ++k) mf = std::max(mf, std::abs(row[k]));
        plan_df.eval(t, row.data(), ws);
        double md = 0.0;
        for (uint64_t k = 0; k < p; ++k) md = std::max(md, std::abs(row[k]));
        sup_f[r] = mf;
        sup_df[r] = md;
    });
    SupNormReport rep;
    for (int r = 0; r < offsets; ++r) {
        rep.sup_F = std::max(rep.sup_F, sup_f[r]);
        rep.sup_dF = std::max(rep.sup_dF, sup_df[r]);
    }
    return rep;
}

DistReport distribution_compare(const LegendreTable& table, const std::vector<Rectangle>& rects,
                                int J, uint64_t n_samples, int grid_per_arc, uint64_t seed,
                                int threads) {
    if (rects.empty() || rects.size() > 16)
        throw std::domain_error("distribution_compare: need 1..16 rectangles");
    if (grid_per_arc < 1) throw std::domain_error("distribution_compare: grid_per_arc must be >= 1");
    const uint64_t p = table.p;
    const std::size_t R = rects.size();
    DistReport rep;
    rep.rects = rects;

    // Fekete side: fraction of (k, t_grid) points with G_p(k,t) in U.
    const FeketeGridPlan plan(table);
    const std::complex<double> g = gauss_sum(table);
    std::vector<std::vector<int64_t>> counts(grid_per_arc, std::vector<int64_t>(R, 0));
    parallel_for(grid_per_arc, threads, [&](std::size_t j) {
        thread_local ChirpZPlan::Workspace ws;
        const double t = (static_cast<double>(j) + 0.5) / grid_per_arc;
        std::vector<std::complex<double>> row(p);
        plan.eval(t, row.data(), ws);
        for (uint64_t k = 0; k < p; ++k) {
            const std::complex<double> G = row[k] / g;
            for (std::size_t rix = 0; rix < R; ++rix)
                if (rects[rix].contains(G)) ++counts[j][rix];
        }
    });
    const double emp_total = static_cast<double>(p) * grid_per_arc;
    rep.empirical.assign(R, 0.0);
    for (int j = 0; j < grid_per_arc; ++j)
        for (std::size_t rix = 0; rix < R; ++rix) rep.empirical[rix] += counts[j][rix];
    for (std::size_t rix = 0; rix < R; ++rix) rep.empirical[rix] /= emp_total;

    // Process side: (pattern, theta) draws.
    std::vector<uint16_t> masks(n_samples, 0);
    parallel_for(n_samples, threads, [&](std::size_t i) {
        const SignPattern pat = sample_pattern(J, seed, i);
        const TruncatedH h(pat);
        const double theta = uniform_open(seed ^ kThetaStream, i, 0);
        const std::complex<double> G = h.G(theta);
        uint16_t mask = 0;
        for (std::size_t rix = 0; rix < R; ++rix)
            if (rects[rix].contains(G)) mask |= static_cast<uint16_t>(1u << rix);
        masks[i] = mask;
    });
    rep.process.assign(R, 0.0);
    for (uint64_t i = 0; i < n_samples; ++i)
        for (std::size_t rix = 0; rix < R; ++rix)
            if (masks[i] & (1u << rix)) rep.process[rix] += 1.0;
    for (std::size_t rix = 0; rix < R; ++rix) rep.process[rix] /= static_cast<double>(n_samples);

    rep.gap.resize(R);
    for (std::size_t rix = 0; rix < R; ++rix) {
        rep.gap[rix] = std::abs(rep.empirical[rix] - rep.process[rix]);
        rep.max_gap = std::max(rep.max_gap, rep.gap[rix]);
    }
    return rep;
}

}  // namespace fekete
