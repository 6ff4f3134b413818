#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace sawtooth {

/// Unitary discrete Fourier transform between the position and momentum
/// bases with centered integer labels p, q in [-N/2, N/2):
///
///   <p|psi> = (1/sqrt N) sum_q exp(-2 pi i p q / N) <q|psi>
///
/// Realized as a radix-2 FFT over storage indices 0..N-1 with (-1)^index
/// pre/post twiddles absorbing the index shift (plus a global sign when
/// N == 2 mod 4, i.e. a single qubit).
class FourierPlan {
public:
    explicit FourierPlan(std::size_t n) : n_(n) {
        if (n < 2 || (n & (n - 1)) != 0)
            throw std::invalid_argument("FourierPlan: size must be a power of two >= 2");
        bitrev_.resize(n);
        for (std::size_t i = 1, j = 0; i < n; ++i) {
            std::size_t bit = n >> 1;
            for (; j & bit; bit >>= 1) j ^= bit;
            j ^= bit;
            bitrev_[i] = j;
        }
        roots_.resize(n / 2);
        for (std::size_t j = 0; j < n / 2; ++j) {
            const double a = -2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
            roots_[j] = {std::cos(a), std::sin(a)};
        }
        inv_sqrt_n_ = 1.0 / std::sqrt(static_cast<double>(n));
    }

    std::size_t size() const { return n_; }

    void position_to_momentum(std::vector<std::complex<double>>& a) const {
        centered_transform(a, /*inverse=*/false);
    }

    void momentum_to_position(std::vector<std::complex<double>>& a) const {
        centered_transform(a, /*inverse=*/true);
    }

private:
    void centered_transform(std::vector<std::complex<double>>& a, bool inverse) const {
        if (a.size() != n_) throw std::invalid_argument("FourierPlan: state size mismatch");
        for (std::size_t i = 1; i < n_; i += 2) a[i] = -a[i];
        fft(a, inverse);
        const double scale = (n_ % 4 == 2) ? -inv_sqrt_n_ : inv_sqrt_n_;
        for (std::size_t i = 0; i < n_; ++i) a[i] *= (i & 1) ? -scale : scale;
    }

    void fft(std::vector<std::complex<double>>& a, bool inverse) const {
        for (std::size_t i = 0; i < n_; ++i)
            if (i < bitrev_[i]) std::swap(a[i], a[bitrev_[i]]);
        for (std::size_t len = 2; len <= n_; len <<= 1) {
            const std::size_t half = len >> 1;
            const std::size_t step = n_ / len;
            for (std::size_t base = 0; base < n_; base += len) {
                for (std::size_t j = 0; j < half; ++j) {
                    const std::complex<double> w =
                        inverse ? std::conj(roots_[j * step]) : roots_[j * step];
                    const std::complex<double> t = a[base + j + half] * w;
                    a[base + j + half] = a[base + j] - t;
                    a[base + j] += t;
                }
            }
        }
    }

    std::size_t n_;
    double inv_sqrt_n_;
    std::vector<std::size_t> bitrev_;
    std::vector<std::complex<double>> roots_;
};

}  // namespace sawtooth
