#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace fekete {

using cplx = std::complex<double>;

// Iterative radix-2 FFT with precomputed twiddles and bit-reversal table.
// forward() computes X_k = sum_n x_n exp(-2*pi*i*n*k/m); inverse() undoes it
// including the 1/m scaling.
class Radix2Fft {
  public:
    explicit Radix2Fft(std::size_t m);

    std::size_t size() const { return m_; }
    void forward(cplx* data) const;
    void inverse(cplx* data) const;

  private:
    void transform(cplx* data, bool inv) const;

    std::size_t m_;
    std::vector<cplx> twiddle_;     // exp(-2*pi*i*j/m), j < m/2
    std::vector<uint32_t> bitrev_;
};

// DFT of arbitrary (here: prime) length via Bluestein's chirp factorization,
// evaluation convention X_k = sum_n x_n exp(+2*pi*i*n*k/p). The chirp tables
// and the transformed mirror chirp depend only on p, so one plan serves any
// number of inputs; apply() is const and takes caller-owned scratch, which
// makes concurrent use from several threads safe.
class ChirpZPlan {
  public:
    explicit ChirpZPlan(std::size_t p);

    std::size_t length() const { return p_; }
    std::size_t fft_size() const { return fft_.size(); }

    struct Workspace {
        std::vector<cplx> a;
    };
    Workspace make_workspace() const { return Workspace{std::vector<cplx>(fft_.size())}; }

    // out[k] = sum_{n<p} x[n] exp(+2*pi*i*n*k/p), k = 0..p-1.
    void apply(const cplx* x, cplx* out, Workspace& ws) const;

  private:
    std::size_t p_;
    Radix2Fft fft_;
    std::vector<cplx> chirp_;   // exp(+i*pi*n^2/p), n < p
    std::vector<cplx> bhat_;    // forward FFT of the mirrored conjugate chirp
};

}  // namespace fekete
