#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include "fekete/arith.hpp"
#include "fekete/util/fft.hpp"

namespace fekete {

// e(t) = exp(2*pi*i*t).
std::complex<double> unit_e(double t);

// Quadrature/scan offsets shared by all p arcs.
struct PhaseGrid {
    uint64_t p = 0;
    std::vector<double> offsets;  // strictly increasing, within [0,1]

    void validate() const;
};

// F_p(z) = sum_{n=1}^{p-1} (n/p) z^n by direct accumulation. Oracle for the
// fast paths; requires |z| = 1 within 1e-12.
std::complex<double> fekete_horner(const LegendreTable& table, std::complex<double> z);

// Batch evaluation of sum_n c_n e(n(k+t)/p) over all k = 0..p-1 as a single
// prime-length DFT (chirp-z). With c_n = (n/p) this is F_p on the arc points
// e((k+t)/p). The plan is immutable; eval() is safe to call concurrently.
class FeketeGridPlan {
  public:
    explicit FeketeGridPlan(const LegendreTable& table);
    // Custom real coefficients c_0..c_{p-1} (e.g. n*(n/p) for F').
    FeketeGridPlan(uint64_t p, std::vector<double> coefficients);

    uint64_t p() const { return p_; }
    std::vector<std::complex<double>> eval(double t) const;
    void eval(double t, std::complex<double>* out, ChirpZPlan::Workspace& ws) const;
    ChirpZPlan::Workspace make_workspace() const { return chirp_->make_workspace(); }

  private:
    uint64_t p_;
    std::vector<double> coeff_;
    std::shared_ptr<const ChirpZPlan> chirp_;
};

// Convenience single-shot grid: entry k equals F_p(e((k+t)/p)).
std::vector<std::complex<double>> fekete_grid(const LegendreTable& table, double t);

// One arc of the normalized Fekete polynomial. With
//     w_m = -((k+m)/p),   |m| <= (p-1)/2,
// the arc functions are
//     G(t)   = sum_m w_m (e(t)-1) / (p (e((m-t)/p) - 1)),
//     H(t)   = (pi/p)     sum_m w_m cot(pi (m-t)/p)          (real-valued),
//     H'(t)  = (pi/p)^2   sum_m w_m / sin^2(pi (m-t)/p),
//     H''(t) = 2 (pi/p)^3 sum_m w_m cos(..) / sin^3(pi (m-t)/p),
// and G(t) = F_p(e((k+t)/p)) / F_p(zeta_p) exactly, H = 2*pi*i*G/(e(t)-1).
class ArcFunction {
  public:
    ArcFunction(const LegendreTable& table, uint64_t k);

    uint64_t p() const { return p_; }
    uint64_t k() const { return k_; }

    std::complex<double> G(double t) const;   // t in [0,1]
    double H(double t) const;                 // t in (0,1)
    double H_deriv(double t, int order) const;  // order 1 or 2

    // H ~ -w0/t at 0 and ~ w1/(1-t) at 1; a zero weight means no pole there.
    int left_residue_weight() const { return -weight(0); }
    int right_residue_weight() const { return weight(1); }

    // w_m at index m + (p-1)/2.
    const std::vector<int8_t>& weights() const { return weights_; }
    int64_t half() const { return half_; }

  private:
    int weight(int64_t m) const { return weights_[static_cast<std::size_t>(m + half_)]; }

    uint64_t p_;
    uint64_t k_;
    int64_t half_;               // (p-1)/2
    std::vector<int8_t> weights_;  // index m + half
};

}  // namespace fekete
