#pragma once

// n-round quantum feedback protocols and the single-use conditional mutual
// information that bounds them.
//
// Round k of a protocol, with the message index i fixed per branch:
//   1. Alice applies V^i_k to Q_k X_1..X_{k-1} Z_1..Z_k.
//   2. Q_k goes through the channel (its Stinespring environment E_k is kept
//      so every branch stays pure).
//   3. Bob applies U_k to Q_1..Q_k X_k Y_1..Y_k.
//   4. X_k is handed to Alice over the noiseless feedback line.
// The initial message-independent state lives on Q_1 Z_1 Y_1, so Bob may
// hold prior entanglement in Y_1. Later Q_k, Z_k, Y_k and every X_k start
// in |0>.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qfc/channels.hpp"
#include "qfc/ensemble.hpp"
#include "qfc/tensor.hpp"

namespace qfc {

inline constexpr double kChainTolerance = 1e-9;

// Block-diagonal sum_i p_i |i><i|_M (x) rho^i with M first.
MultipartiteState assemble_cq_state(const LabeledEnsemble& ensemble,
                                    const std::string& message_label = "M");

// S(M:A|B) of sum_i p_i |i><i| (x) (L_A x I_B) rho^i_AB. Branch states carry
// subsystem "A" of dimension d_in and optionally "B".
double delta_conditional_mi(const QuantumChannel& channel, const LabeledEnsemble& ensemble);

// Uniform ensemble of the d^2 Weyl-encoded halves of a maximally entangled
// A:B pair, with B of dimension d_b >= d embedding the partner.
LabeledEnsemble dense_coding_ensemble(std::size_t d, std::size_t d_b);

// 2 to 4 messages with random probabilities; each branch on {A: d_in,
// B: d_b} is pure or of random rank with equal odds.
LabeledEnsemble random_ab_ensemble(std::size_t d_in, std::size_t d_b, std::uint64_t seed);

struct DeltaSearchResult {
  double best = 0.0;
  LabeledEnsemble best_ensemble;
  double best_random = 0.0;
  std::optional<double> dense_coding;  // absent when d_b < d_in
  std::size_t trials = 0;
};

// Best S(M:A|B) over `trials` random ensembles and the dense-coding ansatz.
DeltaSearchResult max_delta_search(const QuantumChannel& channel, std::size_t trials,
                                   std::uint64_t seed, std::optional<std::size_t> d_b = {});

struct MonotonicityCheck {
  bool holds = true;
  double slack = 0.0;  // S(M:before) - S(M:after)
};

// `after` must carry a subset of the subsystems of `before`, including the
// message label.
MonotonicityCheck verify_monotonicity_step(const MultipartiteState& before,
                                           const MultipartiteState& after,
                                           const std::string& message_label = "M",
                                           double tolerance = kChainTolerance);
// Same check on per-branch storage: the ensembles' Holevo quantities.
MonotonicityCheck verify_monotonicity_step(const LabeledEnsemble& before,
                                           const LabeledEnsemble& after,
                                           double tolerance = kChainTolerance);

struct RegisterDims {
  std::size_t x = 2;  // feedback register sent Bob -> Alice each round
  std::size_t y = 2;  // Bob's per-round ancilla
  std::size_t z = 2;  // Alice's per-round ancilla
};

struct FeedbackProtocol {
  std::size_t rounds = 0;
  QuantumChannel channel = identity_channel(2);
  RegisterDims dims;
  std::vector<double> probabilities;
  // On {Q1: d_in, Z1: dims.z, Y1: dims.y}; carries no message index.
  PureState initial_shared = PureState::basis_state(SubsystemSpec{{"Q1", 2}, {"Z1", 2}, {"Y1", 2}}, 0);
  // U_k on Q_1..Q_k X_k Y_1..Y_k, one per round.
  std::vector<ComplexMatrix> bob_unitaries;
  // V^i_k on Q_k X_1..X_{k-1} Z_1..Z_k, indexed [round][message].
  std::vector<std::vector<ComplexMatrix>> alice_unitaries;
};

std::size_t bob_unitary_dim(const FeedbackProtocol& protocol, std::size_t round);
std::size_t alice_unitary_dim(const FeedbackProtocol& protocol, std::size_t round);
// Product of every Q, X, Y, Z register over all rounds, with Q counted at
// the channel input dimension.
std::size_t tracked_dimension(const QuantumChannel& channel, const RegisterDims& dims,
                              std::size_t rounds);
// Throws on malformed shapes, non-unitary operators or a blown budget.
void validate(const FeedbackProtocol& protocol);

struct ProtocolTrajectory {
  std::size_t rounds = 0;
  std::vector<double> mi_per_round;        // S(M:Q^(k) Y^(k)) after round k
  std::vector<double> conditional_terms;   // S(M:Q_k | Q^(k-1) Y^(k-1))
  std::vector<double> bound_slack;         // sum_{j<=k} terms - mi_k
  std::vector<double> monotonicity_slack;  // S(M:Bob with X_k) - S(M:Bob without)
  std::vector<double> entanglement_per_round;  // sum_i p_i S(rho^i_Bob)
  std::vector<std::vector<double>> message_marginals;
  double total_mi = 0.0;

  bool lemma_bound_holds(double tolerance = kChainTolerance) const;
};

ProtocolTrajectory simulate_feedback_protocol(const FeedbackProtocol& protocol);

nlohmann::json trajectory_to_json(const ProtocolTrajectory& trajectory);

// Haar-random Bob and Alice unitaries with per-round sub-seeds, random
// message distribution, random initial shared state.
FeedbackProtocol random_protocol(const QuantumChannel& channel, std::size_t rounds,
                                 RegisterDims dims, std::size_t messages, std::uint64_t seed);

// One round, no feedback registers: Bob holds half of a maximally entangled
// pair in Y1 and Alice Weyl-encodes one of d^2 messages on Q1.
FeedbackProtocol dense_coding_protocol(const QuantumChannel& channel);

// Qubit identity channel. Round 1 encodes one bit; every round Bob sends
// Alice half of a fresh Bell pair, so Bob-Alice entanglement grows while
// the message correlation stays fixed.
FeedbackProtocol entanglement_sharing_witness(std::size_t rounds);

}  // namespace qfc
