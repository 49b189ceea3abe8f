#include "qprecode/precoding.hpp"

#include <algorithm>

namespace qprecode {

PrecodingMatrix quantize_matrix(const MatC& W, const QuantCodebook& cb) {
  PrecodingMatrix out;
  out.entries.resize(W.rows(), W.cols());
  for (Eigen::Index j = 0; j < W.cols(); ++j) {
    for (Eigen::Index i = 0; i < W.rows(); ++i) {
      out.entries(i, j) = quantize_scalar(W(i, j), cb);
    }
  }
  out.constrained = true;
  out.codebook = cb;
  return out;
}

bool in_codebook(const MatC& P, const QuantCodebook& cb) {
  const auto is_label = [&cb](double v) {
    return std::find(cb.labels.begin(), cb.labels.end(), v) != cb.labels.end();
  };
  for (Eigen::Index j = 0; j < P.cols(); ++j) {
    for (Eigen::Index i = 0; i < P.rows(); ++i) {
      if (!is_label(P(i, j).real()) || !is_label(P(i, j).imag())) return false;
    }
  }
  return true;
}

}  // namespace qprecode
