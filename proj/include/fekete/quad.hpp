#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fekete/arith.hpp"
#include "fekete/estimate.hpp"

namespace fekete {

using RealFn = std::function<double(double)>;

// Raised when a bracketed zero has |slope| below the degeneracy threshold.
// Never swallowed: callers either re-scan (Fekete arcs), resample (Monte
// Carlo patterns) or abort (exact enumeration).
class DegenerateZero : public std::runtime_error {
  public:
    DegenerateZero(double location, double slope, const std::string& what)
        : std::runtime_error(what), location(location), slope(slope) {}
    double location;
    double slope;
};

struct ZeroBracket {
    double lo = 0.0;
    double hi = 0.0;
    double root = 0.0;
    double slope = 0.0;
};

struct LogIntegral {
    double value = 0.0;
    std::vector<ZeroBracket> zeros;
    double error_estimate = 0.0;
    int64_t nodes_used = 0;
};

// How log|f| behaves at a domain endpoint: regular, simple pole (f ~ c/dist)
// or simple zero (f ~ c*dist). Poles and zeros are removed analytically by
// integrating log(dist) in closed form.
enum class EndpointKind { none, pole, zero };

struct LogIntegrand {
    RealFn f;
    RealFn df;  // optional; used for zero slopes when present
    EndpointKind left = EndpointKind::none;
    EndpointKind right = EndpointKind::none;
};

struct QuadConfig {
    int nodes = 32;              // Gauss-Legendre nodes per mesh panel
    int local_nodes = 16;        // nodes for graded pieces near carved zeros
    int scan_points = 96;        // default scan resolution for bracket_zeros
    double zero_window = 1e-3;   // radius of the analytic window around a zero
    double endpoint_window = 1.0 / 64.0;
    double panel_tol = 1e-9;     // absolute tolerance per panel before fallback
    int max_depth = 22;          // adaptive bisection depth limit
    double degenerate_ratio = 1e-8;
};

// Refine every sign change of f on a uniform scan of [a,b] by bisection to
// width <= 1e-12 (relative to the interval scale). Slopes come from deriv
// when given, otherwise from a central difference.
std::vector<ZeroBracket> bracket_zeros(const RealFn& f, double a, double b, int scan_points,
                                       const RealFn& deriv = RealFn());

// Integral of log|f| over [a,b]. Away from the listed zeros the integrand is
// handled by per-panel Gauss-Legendre with graded subdivision toward the
// carved windows; on a radius-delta window around each zero the model
// log|slope| + log|t - root| is integrated exactly and the smooth remainder
// by quadrature. Flagged endpoint poles/zeros are removed by the log(dist)
// substitution. Panels whose coarse/fine estimates disagree are re-scanned,
// so zeros missing from `zeros` are still caught.
LogIntegral integrate_log_abs(const LogIntegrand& fn, double a, double b,
                              const std::vector<ZeroBracket>& zeros, const QuadConfig& cfg);

// Fixed quadrature mesh on [0,1]: geometric panels toward both endpoints,
// each panel carrying an n-point rule and an n/2-point companion used for
// error estimation. `nodes` merges both rules in ascending order so the same
// evaluations double as the zero-bracketing scan.
struct UnitMesh {
    std::vector<double> edges;          // panel edges, edges.front()=0, back()=1
    std::vector<double> nodes;          // ascending, strictly inside (0,1)
    std::vector<double> weight_fine;    // quadrature weight in the fine rule (0 if companion-only)
    std::vector<double> weight_coarse;  // weight in the companion rule (0 if fine-only)
    std::vector<std::pair<int, int>> panel_node_range;  // [begin,end) into nodes

    std::size_t panel_count() const { return edges.size() - 1; }
};

UnitMesh build_unit_mesh(const QuadConfig& cfg);

// integrate_log_abs over [0,1] driven by the shared mesh. `values` holds
// f(nodes[i]); pass an empty vector to have the integrator evaluate f itself.
// Zeros are bracketed from the mesh scan internally.
LogIntegral integrate_log_unit(const LogIntegrand& fn, const UnitMesh& mesh,
                               const std::vector<double>& values, const QuadConfig& cfg);

// ---- drivers ----

struct MahlerResult {
    Estimate estimate;        // M_0(F_p)/sqrt(p); mode exact, n_samples = p
    double error_estimate = 0.0;  // propagated deterministic quadrature bound
    double log_mean = 0.0;        // (1/p) sum_k int_0^1 log|H_p(k,t)| dt
};

// M_0(F_p)/sqrt(p) = exp( (1/p) sum_k int_0^1 log|H_p(k,t)| dt - log(2 pi) ),
// using int_0^1 log|e(t)-1| dt = 0. Bulk node values come from one
// fekete_grid call per mesh offset; only zero refinement is arc-local.
MahlerResult mahler_fekete(const LegendreTable& table, const QuadConfig& cfg, int threads);

struct LqResult {
    Estimate estimate;  // M_q(F_p)/sqrt(p)
    double error_estimate = 0.0;
};

// M_q(F_p)/sqrt(p) = ( (1/p) sum_k int_0^1 |G_p(k,t)|^q dt )^{1/q}; the
// integrand is continuous for q > 0 so no singularity handling is needed.
LqResult lq_norm_fekete(const LegendreTable& table, double q, const QuadConfig& cfg, int threads);

struct ZeroCountResult {
    int64_t count = 0;
    double ratio = 0.0;
    int64_t endpoint_zeros = 0;  // zeros among the arc endpoints e(k/p), z=1 included
};

// Sign changes of H_p(k,.) over (0,1) summed over arcs, plus endpoint zeros
// detected by |F_p(e(k/p))| <= 1e-8 sqrt(p).
ZeroCountResult circle_zero_count(const LegendreTable& table, const QuadConfig& cfg, int threads);

}  // namespace fekete
