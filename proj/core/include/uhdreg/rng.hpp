#ifndef UHDREG_RNG_HPP
#define UHDREG_RNG_HPP

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace uhdreg {

/// Engine for the stream keyed by (seed, stream). Replicate r of an
/// experiment uses stream(seed, r), so replicates are independent and
/// reproducible no matter how they are scheduled across workers.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream = 0) {
  std::seed_seq seq{
      static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
      0x9e3779b9u};
  return std::mt19937_64(seq);
}

/// Uniform draw on the open interval (0,1).
inline double uniform01(std::mt19937_64& eng) {
  // 53 random mantissa bits; offset by half an ulp so 0 is excluded.
  return (static_cast<double>(eng() >> 11) + 0.5) * 0x1.0p-53;
}

/// Standard normal sampler (Box-Muller with a cached spare), so the
/// stream of variates is fully pinned by the engine state.
class GaussianSampler {
 public:
  explicit GaussianSampler(std::mt19937_64 engine) : eng_(std::move(engine)) {}
  GaussianSampler(std::uint64_t seed, std::uint64_t stream)
      : eng_(make_stream(seed, stream)) {}

  double operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform01(eng_);
    double u2 = uniform01(eng_);
    double radius = std::sqrt(-2.0 * std::log(u1));
    double angle = 6.283185307179586476925286766559 * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Fills column-major, so a matrix fill equals per-column vector fills.
  template <typename Derived>
  void fill(Eigen::MatrixBase<Derived>& out) {
    for (Eigen::Index j = 0; j < out.cols(); ++j)
      for (Eigen::Index i = 0; i < out.rows(); ++i) out(i, j) = (*this)();
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace uhdreg

#endif
