#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "fekete/estimate.hpp"
#include "fekete/quad.hpp"

namespace fekete {

// One Rademacher realization (eps_m)_{|m|<=J} of the limiting process.
struct SignPattern {
    int J = 0;
    std::vector<int8_t> signs;  // index m + J, values in {-1,+1}

    int sign(int m) const { return signs[static_cast<std::size_t>(m + J)]; }
};

// Counter-based draw: the pattern is a pure function of (seed, index), and a
// nonzero variant gives the deterministic resample used when an integration
// incident forces a redraw.
SignPattern sample_pattern(int J, uint64_t seed, uint64_t index, uint32_t variant = 0);

// Coefficient of the limiting process, g_m(t) = (e(t)-1) / (2 pi i (m-t)).
std::complex<double> process_coefficient(int64_t m, double t);

// H_X^J(t) = sum_{|m|<=J} eps_m / (m-t) with exact first and second
// derivatives. The +/-m terms are paired so one reciprocal serves both.
class TruncatedH {
  public:
    explicit TruncatedH(const SignPattern& pattern);

    int J() const { return J_; }
    double value(double t) const;
    double deriv1(double t) const;  // sum eps_m / (m-t)^2
    double deriv2(double t) const;  // 2 sum eps_m / (m-t)^3

    // G_X^J(t) = (e(t)-1) H(t) / (2 pi i).
    std::complex<double> G(double t) const;

    int sign0() const { return eps0_; }
    int sign_at(int m) const;

  private:
    void check_pole(double t) const;

    int J_;
    int eps0_;
    std::vector<double> sum_;   // eps_m + eps_{-m}, m = 1..J
    std::vector<double> diff_;  // eps_m - eps_{-m}
};

// E |G_X^J(t)|^2 = sum_{|m|<=J} |g_m(t)|^2; J absent means the full process,
// where sum_m 1/(m-t)^2 = pi^2/sin^2(pi t) forces the value 1 exactly.
double second_moment_exact(double t, std::optional<int> J = std::nullopt);

// E |G_X^J(t)|^4 = 2 (sum |a|^2)^2 + |sum a^2|^2 - 2 sum |a|^4 by the
// even-multiplicity pairing rule for Rademacher signs.
double fourth_moment_exact(double t, int J);

struct K0Result {
    Estimate k0;          // exp(A - log 2 pi)
    Estimate log_integral;  // A = E int_0^1 log|H_X^J(t)| dt
    uint64_t resample_incidents = 0;
};

// Exact mode enumerates all 2^{2J+1} patterns (halved by the global sign
// flip, which leaves |H| unchanged); requires 2J+1 <= 21. Monte Carlo mode
// averages over sampled patterns with a deterministic per-index stream.
K0Result k0_estimate(int J, uint64_t n_samples, Estimate::Mode mode, uint64_t seed,
                     const QuadConfig& cfg, int threads);

// k_q = ( E int_0^1 |G_X^J(t)|^q dt )^{1/q} by Monte Carlo over patterns with
// the fixed unit-mesh Gauss-Legendre t-nodes.
Estimate kq_estimate(double q, int J, uint64_t n_samples, uint64_t seed, const QuadConfig& cfg,
                     int threads);

}  // namespace fekete
