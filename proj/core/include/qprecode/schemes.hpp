#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qprecode/ils.hpp"
#include "qprecode/precoding.hpp"
#include "qprecode/quantizer.hpp"
#include "qprecode/types.hpp"

namespace qprecode {

enum class SchemeId { infinite_res, unaware, proposed_sd, half_aware, heuristic };

SchemeId scheme_from_string(std::string_view name);
std::string_view to_string(SchemeId id);
const std::vector<SchemeId>& all_schemes();

struct SchemeConfig {
  double q = 1.0;
  double N0 = 1.0;
  int iterations = 10;
  QuantCodebook codebook;
  SdOptions sd;
  // Refinement sweeps of the heuristic; 0 = repeat until a sweep changes
  // nothing. Each sweep after the first recomputes the GI ordering from the
  // current matrix.
  int heuristic_passes = 1;
};

// UE update order for the heuristic: descending generated interference
// GI_k = sum_{i != k} |[H P_hat]_{i,k}|^2, where P_hat is the power-normalized
// quantized precoder. Stable, so ties keep the lower UE index first.
struct GiOrdering {
  std::vector<int> ue_order;
  VecR gi_values;
};

GiOrdering gi_ordering(const MatC& H, const MatC& P_hat);

// Full-resolution iterative precoder (no fronthaul constraint).
PrecodingMatrix infinite_res_precoder(const MatC& H, const SchemeConfig& cfg);

// infinite_res_precoder followed by elementwise quantization.
PrecodingMatrix unaware_precoder(const MatC& H, const SchemeConfig& cfg);

// Every iteration's P-update restricted to the codebook via the sphere-decoder
// subproblem; returns the best-objective iterate.
PrecodingMatrix proposed_sd_precoder(const MatC& H, const SchemeConfig& cfg);

// N-1 full-resolution iterations, one final gain/weight update, one quantized
// subproblem solve.
PrecodingMatrix half_aware_precoder(const MatC& H, const SchemeConfig& cfg);

// Coordinate search over the quantized matrix: UEs in descending-GI order,
// antennas in natural order, four candidates per entry built from the nearest
// and second-nearest real/imaginary labels of the unquantized value; keeps a
// candidate only on a strict sum-rate improvement, so the unaware matrix is
// never beaten downward.
PrecodingMatrix heuristic_precoder(const MatC& H, const SchemeConfig& cfg);

PrecodingMatrix run_scheme(SchemeId id, const MatC& H, const SchemeConfig& cfg);

}  // namespace qprecode
