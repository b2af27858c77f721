#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "cso/cut_engine.hpp"
#include "cso/oracle.hpp"

namespace cso::cutplane {

struct VaidyaOptions {
  EngineKind engine = EngineKind::kVaidya;
  double cv = 5.0;               // T_max = ceil(cv * d * ln(8 d L N / eps))
  double so_relax_factor = 1.0;  // separation oracles run at so_relax_factor * eps / 8
  bool early_stop = false;       // stop when three straight query values fail to improve
  std::uint64_t seed = 0;        // hit-and-run stream for the random-walk engine
};

struct VaidyaTrace {
  int iterations = 0;
  int cuts = 0;
  int removals = 0;
  int box_repairs = 0;
  bool zero_gradient_exit = false;
  bool early_stopped = false;
  bool numeric_stop = false;  // centering broke down on a vanishing polytope
  bool fell_back = false;
  std::vector<Eigen::VectorXd> queries;
  std::vector<double> query_values;
  std::vector<Polytope> polytopes;  // snapshot after each iteration when keep_polytopes is set
  bool keep_polytopes = false;
};

std::int64_t vaidya_iterations(int d, double lipschitz, double n, double epsilon, double cv = 5.0);

/// Cutting planes on the Lovasz extension with stochastic separation oracles, then
/// a finalist stage over the query points and rounding.
GridPoint stochastic_vaidya(Sampler& sampler, const Guarantee& guarantee, double lipschitz,
                            const VaidyaOptions& options = {}, VaidyaTrace* trace = nullptr);

/// Best of S under the extension: every chain point sampled to half-width eps / 2 at
/// level delta / (number of distinct chain points). Ties go to the earliest entry of S.
Eigen::VectorXd finalist_pgs(Sampler& sampler, const std::vector<Eigen::VectorXd>& s, const Guarantee& guarantee,
                             SampleBook* book = nullptr);

struct AcceleratedTrace {
  std::vector<GridPoint> box_lo;
  std::vector<GridPoint> box_hi;
  std::vector<GridPoint> epoch_solutions;
  std::vector<double> epoch_epsilons;
};

/// Epochs of stochastic Vaidya on shrinking boxes around the previous epoch's answer.
GridPoint accelerated_vaidya_iz(Sampler& sampler, const Guarantee& guarantee, double lipschitz,
                                const VaidyaOptions& options = {}, AcceleratedTrace* trace = nullptr);

}  // namespace cso::cutplane
