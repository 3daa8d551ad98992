#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace curselab {

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z);

/// Counter-based stream: the k-th draw is mix64(key + (k+1) * golden), with
/// the key derived from (master seed, stream index). Any stream can be
/// rebuilt from those two numbers alone, independent of scheduling.
class CounterStream {
 public:
  CounterStream(std::uint64_t master_seed, std::uint64_t stream_index);

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lower, double upper);
  /// Standard normal via Box-Muller; both variates of a pair are used.
  double normal();

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

Eigen::MatrixXd normal_matrix(Eigen::Index rows, Eigen::Index cols, CounterStream& stream);
Eigen::VectorXd normal_vector(Eigen::Index n, CounterStream& stream);

/// Haar-distributed orthogonal matrix (QR of a Gaussian matrix with sign fix).
Eigen::MatrixXd random_orthogonal(Eigen::Index n, CounterStream& stream);

}  // namespace curselab
