#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "fekete/arith.hpp"
#include "fekete/quad.hpp"

namespace fekete {

// Joint moment specification: nodes t_j with exponents r_j (plain) and s_j
// (conjugated). The exact process-side evaluator supports total degree <= 4.
struct MomentSpec {
    std::vector<double> nodes;
    std::vector<int> r;
    std::vector<int> s;

    int total_degree() const;
    void validate() const;
};

struct Rectangle {
    double re_lo = 0.0, re_hi = 0.0, im_lo = 0.0, im_hi = 0.0;

    bool contains(std::complex<double> z) const {
        return z.real() >= re_lo && z.real() < re_hi && z.imag() >= im_lo && z.imag() < im_hi;
    }
};

// The versioned 12-rectangle family (center, axes, quadrants, tails) used by
// the distribution comparison; mirrors config/rectangles.json.
std::vector<Rectangle> default_rectangles();

// (1/p) sum_k prod_j G_p(k,t_j)^{r_j} conj(G_p(k,t_j))^{s_j}, arcs evaluated
// gridwise.
std::complex<double> moment_lhs(const LegendreTable& table, const MomentSpec& spec, int threads);

// E prod_j G_X^J(t_j)^{r_j} conj(...)^{s_j} by the even-multiplicity rule:
// degree 2 reduces to one coefficient pair sum, degree 4 to the three
// pairings with a diagonal correction.
std::complex<double> moment_rhs_exact(int J, const MomentSpec& spec);

struct MomentConvergence {
    std::vector<uint64_t> p_list;
    std::vector<double> delta;
    double beta = 0.0;  // fitted exponent in delta ~ C p^-beta (log p)^{r+s}
    bool pass = false;  // beta >= 0.4
};

MomentConvergence moment_convergence_report(const std::vector<uint64_t>& p_list, int J,
                                            const MomentSpec& spec, int threads);

// Approximation gap E|G_X(t) - G~_{X,p}(t)|^2 as an exact coefficient sum
// (truncated tail summed to |m| <= 1e6 plus an integral bound), scaled by p.
struct ApproxGapReport {
    double max_p_gap = 0.0;
    std::vector<double> p_gap;  // per node
};

ApproxGapReport approximation_gap(uint64_t p, const std::vector<double>& t_list);

// Equicontinuity check: max over random (s,t) pairs of
// E_k|G_p(k,t)-G_p(k,s)|^2 / |t-s|^{3/2}, plus the refined two-parameter fit
// E|dG|^2 ~ C1 |t-s|^2 + C2/p.
struct TightnessReport {
    double max_ratio = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
};

TightnessReport tightness_ratio(const LegendreTable& table, int pair_count, uint64_t seed,
                                int threads);

// Gap between the H derivatives and their 1/(m-t) truncations,
// scaled by p (order 1) or p^2 (order 2); max over a (k,t) sample grid.
double deriv_gap(const LegendreTable& table, int order, int threads);

// Interior truncated log-mass and boundary log-mass scalings.
struct TruncationReport {
    std::vector<double> eps;
    std::vector<double> interior_mass;       // |avg int log|H| 1_{|H|<=eps}|
    std::vector<double> boundary_mass;       // |avg (int_0^eps + int_{1-eps}^1) log|H| 1_{|H|>=eps}|
    double interior_exponent = 0.0;          // fitted slope of log mass vs log eps
    std::vector<double> boundary_constant;   // mass / (eps log(1/eps))
};

TruncationReport log_truncation_fekete(const LegendreTable& table,
                                       const std::vector<double>& eps_list, const QuadConfig& cfg,
                                       int threads);
TruncationReport log_truncation_process(int J, int n_patterns, uint64_t seed,
                                        const std::vector<double>& eps_list, const QuadConfig& cfg,
                                        int threads);

// Grid sup of |F_p| and |F_p'| over 16p points.
struct SupNormReport {
    double sup_F = 0.0;
    double sup_dF = 0.0;
};

SupNormReport sup_norm_report(const LegendreTable& table, int threads);

// Value-distribution comparison: rectangle probabilities of G_p(k, t_grid) against
// G_X^J(theta) over Monte Carlo draws.
struct DistReport {
    std::vector<Rectangle> rects;
    std::vector<double> empirical;  // Fekete side
    std::vector<double> process;    // process side
    std::vector<double> gap;
    double max_gap = 0.0;
};

DistReport distribution_compare(const LegendreTable& table, const std::vector<Rectangle>& rects,
                                int J, uint64_t n_samples, int grid_per_arc, uint64_t seed,
                                int threads);

}  // namespace fekete
