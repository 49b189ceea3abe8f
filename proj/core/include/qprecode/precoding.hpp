#pragma once

#include <optional>

#include "qprecode/quantizer.hpp"
#include "qprecode/types.hpp"

namespace qprecode {

// M x K precoder; column k serves UE k. When constrained, every entry lies in
// the complex alphabet of the attached codebook.
struct PrecodingMatrix {
  MatC entries;
  bool constrained = false;
  std::optional<QuantCodebook> codebook;
};

// Elementwise quantization of an arbitrary finite complex matrix into the
// codebook alphabet; the result is flagged codebook-constrained.
PrecodingMatrix quantize_matrix(const MatC& W, const QuantCodebook& cb);

// True iff every entry of P is exactly a pair of codebook labels.
bool in_codebook(const MatC& P, const QuantCodebook& cb);

}  // namespace qprecode
