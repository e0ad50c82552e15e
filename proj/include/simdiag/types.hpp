#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "simdiag/config.hpp"

namespace simdiag {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

enum class Verdict { Yes, No, Unknown };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    default: return "unknown";
  }
}

// An ordered set of L real symmetric m x m matrices; the universal input.
struct SymMatrixSet {
  int dim = 0;
  std::vector<Mat> mats;

  SymMatrixSet() = default;
  SymMatrixSet(int m, std::vector<Mat> ms, const Config& cfg = {})
      : dim(m), mats(std::move(ms)) {
    if (m < 1 || mats.empty())
      throw std::invalid_argument("SymMatrixSet: need m >= 1 and L >= 1");
    for (std::size_t i = 0; i < mats.size(); ++i) {
      const Mat& A = mats[i];
      if (A.rows() != m || A.cols() != m)
        throw std::invalid_argument("SymMatrixSet: matrix " + std::to_string(i) +
                                    " is not " + std::to_string(m) + "x" +
                                    std::to_string(m));
      double asym = (A - A.transpose()).cwiseAbs().maxCoeff();
      if (asym > cfg.sym_rel * std::max(1.0, A.norm()))
        throw std::invalid_argument("SymMatrixSet: matrix " + std::to_string(i) +
                                    " is not symmetric (|A-A^T|_max = " +
                                    std::to_string(asym) + ")");
    }
  }

  int size() const { return static_cast<int>(mats.size()); }
};

inline Mat offdiag(const Mat& M) {
  Mat R = M;
  R.diagonal().setZero();
  return R;
}

inline Mat diagpart(const Mat& M) {
  return M.diagonal().asDiagonal();
}

}  // namespace simdiag
