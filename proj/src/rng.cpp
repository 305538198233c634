#include "ridgeboot/rng.hpp"

#include "ridgeboot/error.hpp"

#include <cmath>

namespace ridgeboot {
namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag) {
  std::uint64_t state = master;
  std::uint64_t h = splitmix64(state);
  state = h ^ tag;
  return splitmix64(state);
}

Stream::Stream(StreamSpec spec) : spec_(spec) {
  std::uint64_t state = derive_seed(spec.master_seed, spec.stream_id);
  for (auto& word : s_) word = splitmix64(state);
}

Stream::result_type Stream::operator()() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Stream::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

double Stream::uniform_open() {
  // (k + 0.5) / 2^53 never hits 0 or 1
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

double Stream::standard_normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

std::uint64_t Stream::below(std::uint64_t bound) {
  if (bound == 0) throw InvalidArgument("below: bound must be positive");
  // Lemire, "Fast random integer generation in an interval" (2019)
  unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t floor = (0 - bound) % bound;
    while (low < floor) {
      m = static_cast<unsigned __int128>((*this)()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

Eigen::VectorXd normal(Stream& stream, double mean, double sd, Eigen::Index count) {
  if (!(sd >= 0.0)) throw InvalidArgument("normal: standard deviation must be nonnegative");
  if (count < 0) throw InvalidArgument("normal: negative count");
  Eigen::VectorXd out(count);
  if (sd == 0.0) {
    out.setConstant(mean);
    return out;
  }
  for (Eigen::Index i = 0; i < count; ++i) out(i) = mean + sd * stream.standard_normal();
  return out;
}

double laplace_quantile(double u, double scale) {
  const double c = u - 0.5;
  if (c == 0.0) return 0.0;
  return -scale * std::copysign(1.0, c) * std::log1p(-2.0 * std::abs(c));
}

Eigen::VectorXd laplace(Stream& stream, double scale, Eigen::Index count) {
  if (!(scale > 0.0)) throw InvalidArgument("laplace: scale must be positive");
  if (count < 0) throw InvalidArgument("laplace: negative count");
  Eigen::VectorXd out(count);
  for (Eigen::Index i = 0; i < count; ++i) out(i) = laplace_quantile(stream.uniform_open(), scale);
  return out;
}

std::vector<Eigen::Index> resample_indices(Stream& stream, Eigen::Index n, Eigen::Index count) {
  if (n < 1) throw InvalidArgument("resample_indices: population must be nonempty");
  if (count < 0) throw InvalidArgument("resample_indices: negative count");
  std::vector<Eigen::Index> out(static_cast<std::size_t>(count));
  for (auto& idx : out) idx = static_cast<Eigen::Index>(stream.below(static_cast<std::uint64_t>(n)));
  return out;
}

}  // namespace ridgeboot
