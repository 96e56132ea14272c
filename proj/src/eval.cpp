#include "fekete/eval.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fekete {

namespace {
constexpr double kPi = std::numbers::pi;

// Far-field terms advance the angle by pi/p per step with a plane rotation,
// re-synchronized against libm every kResync steps to stop drift. Terms with
// |m - t| <= kNearRadius sit close to the kernel singularity and are computed
// with direct trig calls instead.
constexpr int kResync = 128;
constexpr int64_t kNearRadius = 4;

template <class Kernel>
double arc_kernel_sum(const std::vector<int8_t>& weights, int64_t half, uint64_t p, double t,
                      Kernel kernel) {
    const double step = kPi / static_cast<double>(p);
    const int64_t near_lo = std::max<int64_t>(-half, -kNearRadius);
    const int64_t near_hi = std::min<int64_t>(half, kNearRadius + 1);
    double acc = 0.0;

    auto run_far = [&](int64_t lo, int64_t hi) {
        if (lo > hi) return;
        double c = 0.0, s = 0.0;
        const double cd = std::cos(step), sd = std::sin(step);
        int since_sync = kResync;
        for (int64_t m = lo; m <= hi; ++m) {
            if (since_sync == kResync) {
                const double u = step * (static_cast<double>(m) - t);
                c = std::cos(u);
                s = std::sin(u);
                since_sync = 0;
            }
            const int w = weights[static_cast<std::size_t>(m + half)];
            if (w != 0) acc += w * kernel(c, s);
            const double cn = c * cd - s * sd;
            s = s * cd + c * sd;
            c = cn;
            ++since_sync;
        }
    };

    run_far(-half, near_lo - 1);
    for (int64_t m = near_lo; m <= near_hi; ++m) {
        const int w = weights[static_cast<std::size_t>(m + half)];
        if (w == 0) continue;
        const double u = step * (static_cast<double>(m) - t);
        acc += w * kernel(std::cos(u), std::sin(u));
    }
    run_far(near_hi + 1, half);
    return acc;
}

}  // namespace

std::complex<double> unit_e(double t) {
    const double ang = 2.0 * kPi * t;
    return {std::cos(ang), std::sin(ang)};
}

void PhaseGrid::validate() const {
    if (p < 3) throw std::domain_error("PhaseGrid: p must be >= 3");
    double prev = -1.0;
    for (double t : offsets) {
        if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("PhaseGrid: offsets must lie in [0,1]");
        if (!(t > prev)) throw std::domain_error("PhaseGrid: offsets must be strictly increasing");
        prev = t;
    }
}

std::complex<double> fekete_horner(const LegendreTable& table, std::complex<double> z) {
    if (std::abs(std::abs(z) - 1.0) > 1e-12) throw std::domain_error("fekete_horner: |z| must be 1");
    std::complex<double> acc(0.0, 0.0);
    for (uint64_t n = table.p - 1; n >= 1; --n) {
        acc = acc * z + static_cast<double>(table.symbols[n]);
    }
    return acc * z;
}

FeketeGridPlan::FeketeGridPlan(const LegendreTable& table) : p_(table.p) {
    coeff_.resize(p_);
    for (uint64_t n = 0; n < p_; ++n) coeff_[n] = static_cast<double>(table.symbols[n]);
    chirp_ = std::make_shared<ChirpZPlan>(p_);
}

FeketeGridPlan::FeketeGridPlan(uint64_t p, std::vector<double> coefficients)
    : p_(p), coeff_(std::move(coefficients)) {
    if (coeff_.size() != p_) throw std::invalid_argument("FeketeGridPlan: coefficient length must equal p");
    chirp_ = std::make_shared<ChirpZPlan>(p_);
}

void FeketeGridPlan::eval(double t, std::complex<double>* out, ChirpZPlan::Workspace& ws) const {
    // x_n = c_n e(n t / p); the chirp-z then yields sum_n x_n e(n k / p).
    std::vector<std::complex<double>> x(p_);
    const double step = 2.0 * kPi * t / static_cast<double>(p_);
    double c = 1.0, s = 0.0;
    const double cd = std::cos(step), sd = std::sin(step);
    int since_sync = 0;
    for (uint64_t n = 0; n < p_; ++n) {
        if (since_sync == kResync) {
            const double u = step * static_cast<double>(n);
            c = std::cos(u);
            s = std::sin(u);
            since_sync = 0;
        }
        x[n] = coeff_[n] * std::complex<double>(c, s);
        const double cn = c * cd - s * sd;
        s = s * cd + c * sd;
        c = cn;
        ++since_sync;
    }
    chirp_->apply(x.data(), out, ws);
}

std::vector<std::complex<double>> FeketeGridPlan::eval(double t) const {
    std::vector<std::complex<double>> out(p_);
    auto ws = chirp_->make_workspace();
    eval(t, out.data(), ws);
    return out;
}

std::vector<std::complex<double>> fekete_grid(const LegendreTable& table, double t) {
    return FeketeGridPlan(table).eval(t);
}

ArcFunction::ArcFunction(const LegendreTable& table, uint64_t k) : p_(table.p), k_(k) {
    if (k >= p_) throw std::domain_error("ArcFunction: arc index must satisfy 0 <= k < p");
    half_ = static_cast<int64_t>((p_ - 1) / 2);
    weights_.resize(p_);
    for (int64_t m = -half_; m <= half_; ++m) {
        int64_t r = (static_cast<int64_t>(k_) + m) % static_cast<int64_t>(p_);
        if (r < 0) r += static_cast<int64_t>(p_);
        weights_[static_cast<std::size_t>(m + half_)] =
            static_cast<int8_t>(-table.symbols[static_cast<std::size_t>(r)]);
    }
}

std::complex<double> ArcFunction::G(double t) const {
    if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("ArcFunction::G: t must lie in [0,1]");
    // At the arc endpoints only one coefficient survives (with limit -1):
    // G(0) = -w_0 = (k/p),  G(1) = -w_1 = ((k+1)/p).
    if (t == 0.0) return {-static_cast<double>(weight(0)), 0.0};
    if (t == 1.0) return {-static_cast<double>(weight(1)), 0.0};
    const std::complex<double> num = unit_e(t) - 1.0;
    const double invp = 1.0 / static_cast<double>(p_);
    std::complex<double> acc(0.0, 0.0);
    for (int64_t m = -half_; m <= half_; ++m) {
        const int w = weights_[static_cast<std::size_t>(m + half_)];
        if (w == 0) continue;
        const std::complex<double> den = unit_e((static_cast<double>(m) - t) * invp) - 1.0;
        acc += static_cast<double>(w) / den;
    }
    return num * acc * invp;
}

double ArcFunction::H(double t) const {
    if (!(t > 0.0 && t < 1.0)) throw std::domain_error("ArcFunction::H: pole at t in {0,1}");
    const double sum = arc_kernel_sum(weights_, half_, p_, t,
                                      [](double c, double s) { return c / s; });
    return kPi / static_cast<double>(p_) * sum;
}

double ArcFunction::H_deriv(double t, int order) const {
    if (!(t > 0.0 && t < 1.0)) throw std::domain_error("ArcFunction::H_deriv: pole at t in {0,1}");
    const double q = kPi / static_cast<double>(p_);
    if (order == 1) {
        const double sum = arc_kernel_sum(weights_, half_, p_, t,
                                          [](double, double s) { return 1.0 / (s * s); });
        return q * q * sum;
    }
    if (order == 2) {
        const double sum = arc_kernel_sum(weights_, half_, p_, t,
                                          [](double c, double s) { return c / (s * s * s); });
        return 2.0 * q * q * q * sum;
    }
    throw std::domain_error("ArcFunction::H_deriv: order must be 1 or 2");
}

}  // namespace fekete
