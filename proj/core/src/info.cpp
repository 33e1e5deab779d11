#include "gcm/info.hpp"

#include <stdexcept>

#include "gcm/parallel.hpp"

namespace gcm {

namespace {

double sub_entropy(const CovMatrix& sigma, const std::vector<int>& modes) {
  return entropy(permute_modes(sigma, modes));
}

void require_three_modes(const CovMatrix& sigma) {
  if (sigma.modes() != 3) throw std::invalid_argument("expected an (A, B, C) covariance with 3 modes");
}

}  // namespace

double bmi(const CovMatrix& sigma_abc, Partner partner) {
  require_three_modes(sigma_abc);
  sigma_abc.require_physical();
  const double s_a = sub_entropy(sigma_abc, {0});
  switch (partner) {
    case Partner::kB: return s_a + sub_entropy(sigma_abc, {1}) - sub_entropy(sigma_abc, {0, 1});
    case Partner::kC: return s_a + sub_entropy(sigma_abc, {2}) - sub_entropy(sigma_abc, {0, 2});
    case Partner::kBC: return s_a + sub_entropy(sigma_abc, {1, 2}) - entropy(sigma_abc);
  }
  throw std::invalid_argument("bmi: unknown partner");
}

double tmi(const CovMatrix& sigma_abc) { return info_record(sigma_abc, 0).I3; }

InfoRecord info_record(const CovMatrix& sigma_abc, int step) {
  require_three_modes(sigma_abc);
  sigma_abc.require_physical();

  InfoRecord rec;
  rec.L = step;
  rec.S_A = sub_entropy(sigma_abc, {0});
  rec.S_B = sub_entropy(sigma_abc, {1});
  rec.S_C = sub_entropy(sigma_abc, {2});
  rec.S_AB = sub_entropy(sigma_abc, {0, 1});
  rec.S_AC = sub_entropy(sigma_abc, {0, 2});
  rec.S_BC = sub_entropy(sigma_abc, {1, 2});
  rec.S_ABC = entropy(sigma_abc);

  rec.I2_AB = rec.S_A + rec.S_B - rec.S_AB;
  rec.I2_AC = rec.S_A + rec.S_C - rec.S_AC;
  rec.I2_ABC = rec.S_A + rec.S_BC - rec.S_ABC;
  rec.I3 = rec.I2_AB + rec.I2_AC - rec.I2_ABC;
  return rec;
}

std::vector<InfoRecord> info_series(const ScenarioConfig& cfg, unsigned workers) {
  cfg.validate();
  std::vector<InfoRecord> out(cfg.L_max);
  parallel_for(out.size(), workers == 0 ? worker_count() : workers, [&](std::size_t i) {
    const int step = static_cast<int>(i) + 1;
    out[i] = info_record(system_cov(cfg, step), step);
  });
  return out;
}

}  // namespace gcm
