#pragma once

#include <cstdint>
#include <random>

#include "rayq/types.hpp"

namespace rayq {

/// Deterministic random stream. mt19937_64 supplies the raw bits; the
/// uniform/normal transforms are spelled out here (instead of the
/// implementation-defined std:: distributions) so that a given seed produces
/// the same draws on every platform and toolchain.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 1e-300) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    Complex complex_normal() {
        const double re = normal();
        const double im = normal();
        return {re, im};
    }

    std::uint64_t bits() { return engine_(); }

  private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

namespace detail {
/// splitmix64 step, used to decorrelate derived stream seeds.
inline std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d2a035f58c7e6dULL;
    return z ^ (z >> 31);
}
}  // namespace detail

/// Independent substream for (seed, index); multistart runs draw from their
/// own stream so the merged result does not depend on evaluation order.
inline Rng derive_stream(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed;
    std::uint64_t a = detail::splitmix64(s);
    s ^= index * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL;
    std::uint64_t b = detail::splitmix64(s);
    return Rng(a ^ (b + 0x9e3779b97f4a7c15ULL * (index + 1)));
}

inline Matrix random_complex_matrix(Index rows, Index cols, Rng& rng) {
    Matrix a(rows, cols);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) a(i, j) = rng.complex_normal();
    return a;
}

inline Matrix random_hermitian(Index n, Rng& rng) {
    Matrix a = random_complex_matrix(n, n, rng);
    return 0.5 * (a + a.adjoint()).eval();
}

inline Matrix random_symmetric(Index n, Rng& rng) {
    Matrix a = random_complex_matrix(n, n, rng);
    return 0.5 * (a + a.transpose()).eval();
}

inline Matrix random_skew_symmetric(Index n, Rng& rng) {
    Matrix a = random_complex_matrix(n, n, rng);
    return 0.5 * (a - a.transpose()).eval();
}

/// Uniform direction on the unit sphere of R^d.
inline RealVector random_unit_vector(Index d, Rng& rng) {
    RealVector v(d);
    double nrm = 0.0;
    do {
        for (Index i = 0; i < d; ++i) v[i] = rng.normal();
        nrm = v.norm();
    } while (nrm < 1e-12);
    return v / nrm;
}

/// Uniform point in the closed ball of radius r in R^d.
inline RealVector random_in_ball(Index d, double r, Rng& rng) {
    RealVector dir = random_unit_vector(d, rng);
    const double u = rng.uniform();
    return r * std::pow(u, 1.0 / static_cast<double>(d)) * dir;
}

inline Vector random_complex_unit_vector(Index n, Rng& rng) {
    Vector v(n);
    double nrm = 0.0;
    do {
        for (Index i = 0; i < n; ++i) v[i] = rng.complex_normal();
        nrm = v.norm();
    } while (nrm < 1e-12);
    return v / nrm;
}

}  // namespace rayq
