#pragma once

#include <cstdint>
#include <random>

#include "wiretap/types.hpp"

namespace wiretap {

/// splitmix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) {
    return mix_seed(mix_seed(parent) ^ mix_seed(index + 0x632be59bd9b4e019ULL));
}

/// Named sub-streams of one trial. Every scheme evaluated on a trial draws
/// from the same streams, which pairs the comparisons.
enum class Stream : std::uint64_t { channel = 1, csi_error = 2, ecsi = 3 };

constexpr std::uint64_t stream_seed(std::uint64_t trial_seed, Stream s) {
    return derive_seed(trial_seed, static_cast<std::uint64_t>(s));
}

/// Circularly-symmetric complex Gaussian source, CN(0, 1) per draw.
class ComplexGaussian {
  public:
    explicit ComplexGaussian(std::uint64_t seed) : engine_(seed), normal_(0.0, M_SQRT1_2) {}

    cplx operator()() {
        const double re = normal_(engine_);
        const double im = normal_(engine_);
        return {re, im};
    }

    CMatrix matrix(Eigen::Index rows, Eigen::Index cols) {
        CMatrix m(rows, cols);
        // column-major fill so vec(m) is the draw order
        for (Eigen::Index j = 0; j < cols; ++j)
            for (Eigen::Index i = 0; i < rows; ++i)
                m(i, j) = (*this)();
        return m;
    }

    CVector vector(Eigen::Index n) {
        CVector v(n);
        for (Eigen::Index i = 0; i < n; ++i)
            v(i) = (*this)();
        return v;
    }

  private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_;
};

} // namespace wiretap
