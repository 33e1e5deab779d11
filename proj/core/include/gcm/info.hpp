#pragma once

// Bipartite and tripartite mutual information of the (A, B, C) state.

#include <vector>

#include "gcm/evolve.hpp"
#include "gcm/gstate.hpp"

namespace gcm {

/// Entropies and mutual informations (nats) at one collision step.
/// I3 = I2_AB + I2_AC - I2_ABC holds exactly; all values come from one
/// shared set of reduced entropies.
struct InfoRecord {
  int L = 0;
  double I2_AB = 0.0;
  double I2_AC = 0.0;
  double I2_ABC = 0.0;
  double I3 = 0.0;
  double S_A = 0.0;
  double S_B = 0.0;
  double S_C = 0.0;
  double S_AB = 0.0;
  double S_AC = 0.0;
  double S_ABC = 0.0;
  double S_BC = 0.0;
};

enum class Partner { kB, kC, kBC };

/// I2(A:X) = S(A) + S(X) - S(AX) for sigma over [A, B, C].
double bmi(const CovMatrix& sigma_abc, Partner partner);

/// I3(A:B:C) = I2(A:B) + I2(A:C) - I2(A:BC). Negative values signal scrambling.
double tmi(const CovMatrix& sigma_abc);

/// All entropies for one step. Throws UnphysicalStateError on unphysical input.
InfoRecord info_record(const CovMatrix& sigma_abc, int step);

/// One record per L = 1 .. cfg.L_max, ordered by L. Steps are evaluated on
/// up to `workers` threads (0 = worker_count()).
std::vector<InfoRecord> info_series(const ScenarioConfig& cfg, unsigned workers = 1);

}  // namespace gcm
