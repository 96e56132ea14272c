#include "fekete/util/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fekete {

namespace {
constexpr double kPi = std::numbers::pi;
}

Radix2Fft::Radix2Fft(std::size_t m) : m_(m) {
    if (m == 0 || (m & (m - 1)) != 0) throw std::invalid_argument("fft size must be a power of two");
    twiddle_.resize(m / 2);
    for (std::size_t j = 0; j < m / 2; ++j) {
        const double ang = -2.0 * kPi * static_cast<double>(j) / static_cast<double>(m);
        twiddle_[j] = cplx(std::cos(ang), std::sin(ang));
    }
    bitrev_.resize(m);
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < m) ++bits;
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t r = 0;
        for (std::size_t b = 0; b < bits; ++b) r |= ((i >> b) & 1u) << (bits - 1 - b);
        bitrev_[i] = static_cast<uint32_t>(r);
    }
}

void Radix2Fft::transform(cplx* data, bool inv) const {
    for (std::size_t i = 0; i < m_; ++i) {
        const std::size_t j = bitrev_[i];
        if (i < j) std::swap(data[i], data[j]);
    }
    for (std::size_t len = 2; len <= m_; len <<= 1) {
        const std::size_t half = len >> 1;
        const std::size_t step = m_ / len;
        for (std::size_t base = 0; base < m_; base += len) {
            for (std::size_t j = 0; j < half; ++j) {
                cplx w = twiddle_[j * step];
                if (inv) w = std::conj(w);
                const cplx u = data[base + j];
                const cplx v = data[base + j + half] * w;
                data[base + j] = u + v;
                data[base + j + half] = u - v;
            }
        }
    }
}

void Radix2Fft::forward(cplx* data) const { transform(data, false); }

void Radix2Fft::inverse(cplx* data) const {
    transform(data, true);
    const double s = 1.0 / static_cast<double>(m_);
    for (std::size_t i = 0; i < m_; ++i) data[i] *= s;
}

namespace {
std::size_t bluestein_size(std::size_t p) {
    std::size_t m = 1;
    while (m < 2 * p - 1) m <<= 1;
    return m;
}
}  // namespace

ChirpZPlan::ChirpZPlan(std::size_t p) : p_(p), fft_(bluestein_size(p)) {
    if (p < 1) throw std::invalid_argument("chirp-z length must be positive");
    chirp_.resize(p);
    // n*k = (n^2 + k^2 - (n-k)^2)/2, so the chirp exponent is pi*n^2/p.
    // n^2 is reduced mod 2p before the trig call to keep the argument small.
    const std::size_t twop = 2 * p;
    for (std::size_t n = 0; n < p; ++n) {
        const std::size_t q = (n * n) % twop;
        const double ang = kPi * static_cast<double>(q) / static_cast<double>(p);
        chirp_[n] = cplx(std::cos(ang), std::sin(ang));
    }
    const std::size_t m = fft_.size();
    bhat_.assign(m, cplx(0.0, 0.0));
    for (std::size_t n = 0; n < p; ++n) {
        const cplx c = std::conj(chirp_[n]);
        bhat_[n] = c;
        if (n > 0) bhat_[m - n] = c;
    }
    fft_.forward(bhat_.data());
}

void ChirpZPlan::apply(const cplx* x, cplx* out, Workspace& ws) const {
    const std::size_t m = fft_.size();
    if (ws.a.size() != m) ws.a.assign(m, cplx());
    cplx* a = ws.a.data();
    for (std::size_t n = 0; n < p_; ++n) a[n] = x[n] * chirp_[n];
    for (std::size_t n = p_; n < m; ++n) a[n] = cplx(0.0, 0.0);
    fft_.forward(a);
    for (std::size_t n = 0; n < m; ++n) a[n] *= bhat_[n];
    fft_.inverse(a);
    for (std::size_t k = 0; k < p_; ++k) out[k] = a[k] * chirp_[k];
}

}  // namespace fekete
