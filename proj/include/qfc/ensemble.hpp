#pragma once

#include <cstddef>
#include <vector>

#include "qfc/tensor.hpp"

namespace qfc {

inline constexpr double kProbabilityTolerance = 1e-10;

// Probabilities p_i with one branch state per message index i. All branches
// share one SubsystemSpec.
class LabeledEnsemble {
 public:
  LabeledEnsemble(std::vector<double> probabilities,
                  std::vector<MultipartiteState> branches);

  std::size_t size() const { return probabilities_.size(); }
  const std::vector<double>& probabilities() const { return probabilities_; }
  const std::vector<MultipartiteState>& branches() const { return branches_; }
  const SubsystemSpec& spec() const { return branches_.front().spec(); }

  // sum_i p_i rho_i
  MultipartiteState average() const;
  // Same probabilities, branches reduced to `keep`.
  LabeledEnsemble marginal(const Labels& keep) const;

 private:
  std::vector<double> probabilities_;
  std::vector<MultipartiteState> branches_;
};

}  // namespace qfc
