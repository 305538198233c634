#pragma once

#include "ridgeboot/model.hpp"
#include "ridgeboot/rng.hpp"

#include <filesystem>
#include <fstream>
#include <string>

#include <unistd.h>

namespace testing {

using ridgeboot::Matrix;
using ridgeboot::Vector;

inline Matrix gaussian_matrix(ridgeboot::Stream& s, Eigen::Index rows, Eigen::Index cols) {
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = s.standard_normal();
  }
  return m;
}

inline Vector gaussian_vector(ridgeboot::Stream& s, Eigen::Index n) {
  return gaussian_matrix(s, n, 1).col(0);
}

// Product of two Gaussian factors: exact rank `rank` almost surely.
inline Matrix low_rank_matrix(ridgeboot::Stream& s, Eigen::Index rows, Eigen::Index cols,
                              Eigen::Index rank) {
  return gaussian_matrix(s, rows, rank) * gaussian_matrix(s, rank, cols);
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("ridgeboot_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name, const std::string& content) const {
    const auto p = path_ / name;
    std::ofstream(p) << content;
    return p.string();
  }
  std::string path(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace testing
