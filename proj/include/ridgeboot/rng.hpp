#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <vector>

namespace ridgeboot {

/// Identifies one random stream: a master seed plus a stream id (replicate
/// index, fold, ...). Equal specs give bit-identical sequences on every
/// platform; nothing here depends on std:: distribution implementations.
struct StreamSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;
};

/// Mixes a seed with a tag into a new 64-bit seed (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag);

/// xoshiro256** seeded from a StreamSpec through splitmix64.
///
/// Gaussian draws use the Marsaglia polar method with the spare value
/// cached, Laplace draws use inversion and bounded integers use Lemire's
/// multiply-and-reject method. These choices are part of the
/// reproducibility contract: changing any of them changes every report.
class Stream {
 public:
  using result_type = std::uint64_t;

  explicit Stream(StreamSpec spec);
  Stream(std::uint64_t master_seed, std::uint64_t stream_id)
      : Stream(StreamSpec{master_seed, stream_id}) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1).
  double uniform_open();
  double standard_normal();
  /// Uniform on {0, ..., bound - 1}; bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  const StreamSpec& spec() const { return spec_; }

 private:
  StreamSpec spec_;
  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// `count` i.i.d. N(mean, sd^2) draws; sd = 0 yields a constant vector.
Eigen::VectorXd normal(Stream& stream, double mean, double sd, Eigen::Index count);

/// Mean-zero Laplace draws with the given scale (variance 2 * scale^2).
Eigen::VectorXd laplace(Stream& stream, double scale, Eigen::Index count);

/// Laplace quantile function, mean zero.
double laplace_quantile(double u, double scale);

/// `count` i.i.d. uniform indices in {0, ..., n - 1}.
std::vector<Eigen::Index> resample_indices(Stream& stream, Eigen::Index n, Eigen::Index count);

}  // namespace ridgeboot
