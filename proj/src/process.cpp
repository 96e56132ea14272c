#include "fekete/process.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fekete/eval.hpp"
#include "fekete/util/parallel.hpp"
#include "fekete/util/rng.hpp"

namespace fekete {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr uint64_t kPatternStream = 0x7061747465726e73ULL;  // "patterns"

double mean_and_stderr(const std::vector<double>& xs, double* std_error) {
    const double n = static_cast<double>(xs.size());
    const double mean = pairwise_sum(xs) / n;
    if (xs.size() < 2) {
        *std_error = 0.0;
        return mean;
    }
    std::vector<double> sq(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double d = xs[i] - mean;
        sq[i] = d * d;
    }
    const double var = pairwise_sum(sq) / (n - 1.0);
    *std_error = std::sqrt(var / n);
    return mean;
}
}  // namespace

SignPattern sample_pattern(int J, uint64_t seed, uint64_t index, uint32_t variant) {
    if (J < 1) throw std::domain_error("sample_pattern: J must be >= 1");
    SignPattern pat;
    pat.J = J;
    const std::size_t n = static_cast<std::size_t>(2 * J + 1);
    pat.signs.resize(n);
    const uint64_t base = static_cast<uint64_t>(variant) << 32;
    uint64_t word = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t b = i % 64;
        if (b == 0) word = counter_word(seed ^ kPatternStream, index, base + i / 64);
        pat.signs[i] = (word >> b) & 1 ? int8_t{1} : int8_t{-1};
    }
    return pat;
}

std::complex<double> process_coefficient(int64_t m, double t) {
    return (unit_e(t) - 1.0) / (std::complex<double>(0.0, 2.0 * kPi) * (static_cast<double>(m) - t));
}

TruncatedH::TruncatedH(const SignPattern& pattern) : J_(pattern.J) {
    if (static_cast<int>(pattern.signs.size()) != 2 * J_ + 1)
        throw std::invalid_argument("TruncatedH: pattern length must be 2J+1");
    eps0_ = pattern.sign(0);
    sum_.resize(J_ + 1);
    diff_.resize(J_ + 1);
    for (int m = 1; m <= J_; ++m) {
        const int a = pattern.sign(m), b = pattern.sign(-m);
        sum_[m] = static_cast<double>(a + b);
        diff_[m] = static_cast<double>(a - b);
    }
}

int TruncatedH::sign_at(int m) const {
    if (m == 0) return eps0_;
    const int am = m < 0 ? -m : m;
    return static_cast<int>((sum_[am] + (m > 0 ? diff_[am] : -diff_[am])) * 0.5);
}

void TruncatedH::check_pole(double t) const {
    if (t == std::nearbyint(t) && std::abs(t) <= static_cast<double>(J_))
        throw std::domain_error("TruncatedH: pole at integer t");
}

double TruncatedH::value(double t) const {
    check_pole(t);
    const double t2 = t * t;
    const double* ds = diff_.data();
    const double* ss = sum_.data();
    double acc = -eps0_ / t;
#pragma omp simd reduction(+ : acc)
    for (int m = 1; m <= J_; ++m) {
        const double fm = static_cast<double>(m);
        acc += (fm * ds[m] + t * ss[m]) / (fm * fm - t2);
    }
    return acc;
}

double TruncatedH::deriv1(double t) const {
    check_pole(t);
    const double t2 = t * t;
    const double* ds = diff_.data();
    const double* ss = sum_.data();
    double acc = eps0_ / t2;
#pragma omp simd reduction(+ : acc)
    for (int m = 1; m <= J_; ++m) {
        const double fm = static_cast<double>(m);
        const double inv = 1.0 / (fm * fm - t2);
        acc += ((fm * fm + t2) * ss[m] + 2.0 * fm * t * ds[m]) * inv * inv;
    }
    return acc;
}

double TruncatedH::deriv2(double t) const {
    check_pole(t);
    const double t2 = t * t;
    const double* ds = diff_.data();
    const double* ss = sum_.data();
    double acc = -2.0 * eps0_ / (t * t2);
#pragma omp simd reduction(+ : acc)
    for (int m = 1; m <= J_; ++m) {
        const double fm = static_cast<double>(m);
        const double m2 = fm * fm;
        const double inv = 1.0 / (m2 - t2);
        acc += 2.0 * (ss[m] * (3.0 * m2 * t + t * t2) + ds[m] * (fm * m2 + 3.0 * fm * t2)) * inv *
               inv * inv;
    }
    return acc;
}

std::complex<double> TruncatedH::G(double t) const {
    // (e(t)-1)/(2 pi i) = (sin(2 pi t) + i (1 - cos(2 pi t))) / (2 pi)
    const double ang = 2.0 * kPi * t;
    const std::complex<double> factor(std::sin(ang) / (2.0 * kPi), (1.0 - std::cos(ang)) / (2.0 * kPi));
    return factor * value(t);
}

double second_moment_exact(double t, std::optional<int> J) {
    if (!(t > 0.0 && t < 1.0)) throw std::domain_error("second_moment_exact: t must lie in (0,1)");
    if (!J.has_value()) return 1.0;  // sum_m 1/(m-t)^2 = pi^2/sin^2(pi t) exactly
    const int j = *J;
    if (j < 0) throw std::domain_error("second_moment_exact: J must be >= 0");
    const double s = std::sin(kPi * t);
    double sum = 1.0 / (t * t);
    for (int m = 1; m <= j; ++m) {
        const double fm = static_cast<double>(m);
        const double inv = 1.0 / (fm * fm - t * t);
        sum += 2.0 * (fm * fm + t * t) * inv * inv;
    }
    return s * s / (kPi * kPi) * sum;
}

double fourth_moment_exact(double t, int J) {
    if (!(t > 0.0 && t < 1.0)) throw std::domain_error("fourth_moment_exact: t must lie in (0,1)");
    if (J < 1) throw std::domain_error("fourth_moment_exact: J must be >= 1");
    double s2 = 0.0, s4 = 0.0;
    std::complex<double> sq(0.0, 0.0);
    for (int m = -J; m <= J; ++m) {
        const std::complex<double> a = process_coefficient(m, t);
        const double a2 = std::norm(a);
        s2 += a2;
        s4 += a2 * a2;
        sq += a * a;
    }
    return 2.0 * s2 * s2 + std::norm(sq) - 2.0 * s4;
}

namespace {

// Per-pattern integral int_0^1 log|H_X^J| dt with both endpoint poles removed
// analytically; shares the quadrature code path with the Fekete side.
double pattern_log_integral(const TruncatedH& h, const UnitMesh& mesh, const QuadConfig& cfg) {
    LogIntegrand fn;
    fn.f = [&h](double t) { return h.value(t); };
    fn.df = [&h](double t) { return h.deriv1(t); };
    fn.left = EndpointKind::pole;
    fn.right = EndpointKind::pole;
    return integrate_log_unit(fn, mesh, {}, cfg).value;
}

}  // namespace

K0Result k0_estimate(int J, uint64_t n_samples, Estimate::Mode mode, uint64_t seed,
                     const QuadConfig& cfg, int threads) {
    if (J < 1) throw std::domain_error("k0_estimate: J must be >= 1");
    const UnitMesh mesh = build_unit_mesh(cfg);
    K0Result res;

    std::vector<double> integrals;
    uint64_t incidents = 0;

    if (mode == Estimate::Mode::exact) {
        if (2 * J + 1 > 21)
            throw std::domain_error("k0_estimate: exact mode requires 2J+1 <= 21");
        // Global sign flip leaves |H| invariant, so fixing eps_{-J} = +1
        // halves the enumeration without changing the mean.
        const uint64_t half_count = uint64_t{1} << (2 * J);
        integrals.resize(half_count);
        parallel_for(half_count, threads, [&](std::size_t idx) {
            SignPattern pat;
            pat.J = J;
            pat.signs.resize(2 * J + 1);
            pat.signs[0] = 1;
            for (int b = 0; b < 2 * J; ++b)
                pat.signs[b + 1] = (idx >> b) & 1 ? int8_t{1} : int8_t{-1};
            const TruncatedH h(pat);
            integrals[idx] = pattern_log_integral(h, mesh, cfg);  // degenerate zero aborts
        });
        res.log_integral.n_samples = uint64_t{1} << (2 * J + 1);
        res.log_integral.mode = Estimate::Mode::exact;
    } else {
        if (n_samples < 1) throw std::domain_error("k0_estimate: n_samples must be >= 1");
        integrals.resize(n_samples);
        std::vector<uint32_t> retries(n_samples, 0);
        parallel_for(n_samples, threads, [&](std::size_t i) {
            for (uint32_t variant = 0;; ++variant) {
                if (variant > 32) throw std::runtime_error("k0_estimate: persistent degenerate pattern");
                try {
                    const SignPattern pat = sample_pattern(J, seed, i, variant);
                    const TruncatedH h(pat);
                    integrals[i] = pattern_log_integral(h, mesh, cfg);
                    retries[i] = variant;
                    return;
                } catch (const DegenerateZero&) {
                    continue;  // resample deterministically; incident logged below
                }
            }
        });
        for (uint32_t r : retries) incidents += r;
        res.log_integral.n_samples = n_samples;
        res.log_integral.mode = Estimate::Mode::monte_carlo;
    }

    double std_error = 0.0;
    const double A = mean_and_stderr(integrals, &std_error);
    if (mode == Estimate::Mode::exact) std_error = 0.0;

    res.log_integral.value = A;
    res.log_integral.std_error = std_error;
    res.log_integral.seed = seed;

    res.k0 = res.log_integral;
    res.k0.value = std::exp(A - std::log(2.0 * kPi));
    res.k0.std_error = res.k0.value * std_error;
    res.resample_incidents = incidents;
    return res;
}

Estimate kq_estimate(double q, int J, uint64_t n_samples, uint64_t seed, const QuadConfig& cfg,
                     int threads) {
    if (!(q > 0.0)) throw std::domain_error("kq_estimate: q must be positive");
    if (J < 1) throw std::domain_error("kq_estimate: J must be >= 1");
    if (n_samples < 2) throw std::domain_error("kq_estimate: n_samples must be >= 2");
    const UnitMesh mesh = build_unit_mesh(cfg);

    // |G|^q = (sin(pi t)/pi)^q |H|^q; the node factors are pattern-independent.
    std::vector<double> factor(mesh.nodes.size());
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i)
        factor[i] = std::pow(std::sin(kPi * mesh.nodes[i]) / kPi, q);

    std::vector<double> integrals(n_samples);
    parallel_for(n_samples, threads, [&](std::size_t i) {
        const SignPattern pat = sample_pattern(J, seed, i);
        const TruncatedH h(pat);
        std::vector<double> vals(mesh.nodes.size());
        for (std::size_t j = 0; j < mesh.nodes.size(); ++j)
            vals[j] = mesh.weight_fine[j] == 0.0
                          ? 0.0
                          : mesh.weight_fine[j] * factor[j] *
                                std::pow(std::abs(h.value(mesh.nodes[j])), q);
        integrals[i] = pairwise_sum(vals);
    });

    double std_error = 0.0;
    const double mean = mean_and_stderr(integrals, &std_error);

    Estimate est;
    est.value = std::pow(mean, 1.0 / q);
    est.std_error = mean > 0.0 ? est.value / q * std_error / mean : std_error;
    est.n_samples = n_samples;
    est.seed = seed;
    est.mode = Estimate::Mode::monte_carlo;
    return est;
}

}  // namespace fekete
