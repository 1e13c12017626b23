#include "qfc/feedback.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "qfc/entropy.hpp"
#include "qfc/error.hpp"
#include "qfc/random.hpp"

namespace qfc {

namespace {

std::string reg(char kind, std::size_t round) { return std::string(1, kind) + std::to_string(round); }

Labels registers(char kind, std::size_t from, std::size_t to) {
  Labels out;
  for (std::size_t k = from; k <= to; ++k) out.push_back(reg(kind, k));
  return out;
}

Labels concat(std::initializer_list<Labels> parts) {
  Labels out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

std::size_t saturating_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a) {
    return std::numeric_limits<std::size_t>::max();
  }
  return a * b;
}

ComplexMatrix weyl_operator(std::size_t d, std::size_t shift, std::size_t phase) {
  const auto n = static_cast<Eigen::Index>(d);
  ComplexMatrix w = ComplexMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(phase * static_cast<std::size_t>(j)) /
                         static_cast<double>(d);
    w((j + static_cast<Eigen::Index>(shift)) % n, j) = std::polar(1.0, angle);
  }
  return w;
}

std::vector<Subsystem> subsystems_of(const PureState& psi, const Labels& labels) {
  std::vector<Subsystem> out;
  for (const auto& l : labels) out.push_back({l, psi.spec().dim(l)});
  return out;
}

double bob_holevo(const std::vector<double>& p, const std::vector<PureState>& branches,
                  const Labels& bob) {
  std::vector<MultipartiteState> reduced;
  reduced.reserve(branches.size());
  for (const auto& b : branches) reduced.push_back(reduced_density(b, bob));
  return holevo_chi(LabeledEnsemble(p, std::move(reduced)));
}

double holevo_of(const LabeledEnsemble& e, const Labels& keep) {
  if (keep.empty()) return 0.0;
  return holevo_chi(e.marginal(keep));
}

}  // namespace

MultipartiteState assemble_cq_state(const LabeledEnsemble& ensemble,
                                    const std::string& message_label) {
  const auto m = static_cast<Eigen::Index>(ensemble.size());
  const auto d = static_cast<Eigen::Index>(ensemble.spec().total_dim());
  SubsystemSpec spec = SubsystemSpec{{message_label, ensemble.size()}}.concat(ensemble.spec());
  if (spec.total_dim() > dimension_budget()) {
    throw DimensionBudgetExceeded(spec.total_dim(), dimension_budget());
  }
  ComplexMatrix rho = ComplexMatrix::Zero(m * d, m * d);
  for (Eigen::Index i = 0; i < m; ++i) {
    rho.block(i * d, i * d, d, d) =
        ensemble.probabilities()[static_cast<std::size_t>(i)] *
        ensemble.branches()[static_cast<std::size_t>(i)].matrix();
  }
  return MultipartiteState::unchecked(std::move(spec), std::move(rho));
}

double delta_conditional_mi(const QuantumChannel& channel, const LabeledEnsemble& ensemble) {
  const auto& spec = ensemble.spec();
  const bool has_b = spec.contains("B");
  if (!spec.contains("A") || spec.size() != (has_b ? 2u : 1u)) {
    throw InvalidArgument("branch states must live on {A} or {A, B}");
  }
  if (spec.dim("A") != channel.d_in()) {
    throw InvalidArgument("subsystem A has dimension " + std::to_string(spec.dim("A")) +
                          ", channel expects " + std::to_string(channel.d_in()));
  }
  std::vector<MultipartiteState> sent;
  sent.reserve(ensemble.size());
  for (const auto& b : ensemble.branches()) sent.push_back(apply_to_subsystem(channel, b, "A"));
  LabeledEnsemble output(ensemble.probabilities(), std::move(sent));

  const Labels b_labels = has_b ? Labels{"B"} : Labels{};
  auto cq = assemble_cq_state(output);
  const double delta = conditional_mutual_information(cq, {"M"}, {"A"}, b_labels);

  // S(M:AB) - S(M:B) from the per-branch Holevo quantities.
  const double chained = holevo_chi(output) - holevo_of(output, b_labels);
  if (std::abs(delta - chained) > kIdentityTolerance) {
    throw Error("S(M:A|B) forms disagree by " + std::to_string(std::abs(delta - chained)));
  }
  return delta;
}

LabeledEnsemble dense_coding_ensemble(std::size_t d, std::size_t d_b) {
  if (d == 0 || d_b < d) throw InvalidArgument("dense coding needs d_b >= d >= 1");
  const auto n = static_cast<Eigen::Index>(d);
  const auto nb = static_cast<Eigen::Index>(d_b);
  ComplexVector phi = ComplexVector::Zero(n * nb);
  for (Eigen::Index j = 0; j < n; ++j) phi(j * nb + j) = 1.0 / std::sqrt(static_cast<double>(d));
  SubsystemSpec spec{{"A", d}, {"B", d_b}};

  std::vector<double> p;
  std::vector<MultipartiteState> branches;
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) {
      ComplexMatrix op = kron(weyl_operator(d, a, b), identity_matrix(d_b));
      ComplexVector v = op * phi;
      branches.push_back(PureState(spec, std::move(v)).density());
      p.push_back(1.0 / static_cast<double>(d * d));
    }
  }
  return LabeledEnsemble(std::move(p), std::move(branches));
}

LabeledEnsemble random_ab_ensemble(std::size_t d_in, std::size_t d_b, std::uint64_t seed) {
  const SubsystemSpec spec{{"A", d_in}, {"B", d_b}};
  Rng rng(seed);
  std::uniform_int_distribution<std::size_t> count(2, 4);
  std::exponential_distribution<double> weight(1.0);
  std::uniform_int_distribution<std::size_t> rank_pick(1, spec.total_dim());
  std::bernoulli_distribution pure(0.5);

  const std::size_t m = count(rng);
  std::vector<double> p(m);
  double total = 0.0;
  for (auto& x : p) total += (x = weight(rng));
  for (auto& x : p) x /= total;

  std::vector<MultipartiteState> branches;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t rank = pure(rng) ? 1 : rank_pick(rng);
    branches.push_back(random_density_matrix(spec, rank, rng()));
  }
  return LabeledEnsemble(std::move(p), std::move(branches));
}

DeltaSearchResult max_delta_search(const QuantumChannel& channel, std::size_t trials,
                                   std::uint64_t seed, std::optional<std::size_t> d_b) {
  if (trials == 0) throw InvalidArgument("max_delta_search needs at least one trial");
  const std::size_t d_in = channel.d_in();
  const std::size_t bdim = d_b.value_or(d_in);
  if (bdim == 0) throw InvalidArgument("side system dimension must be positive");
  std::optional<LabeledEnsemble> best;
  double best_value = -std::numeric_limits<double>::infinity();
  double best_random = -std::numeric_limits<double>::infinity();

  for (std::size_t t = 0; t < trials; ++t) {
    auto ensemble = random_ab_ensemble(d_in, bdim, derive_seed(seed, t));
    const double delta = delta_conditional_mi(channel, ensemble);
    best_random = std::max(best_random, delta);
    if (delta > best_value) {
      best_value = delta;
      best = std::move(ensemble);
    }
  }

  std::optional<double> dense;
  if (bdim >= d_in) {
    auto ensemble = dense_coding_ensemble(d_in, bdim);
    dense = delta_conditional_mi(channel, ensemble);
    if (*dense > best_value) {
      best_value = *dense;
      best = std::move(ensemble);
    }
  }
  return DeltaSearchResult{best_value, std::move(*best), best_random, dense, trials};
}

MonotonicityCheck verify_monotonicity_step(const MultipartiteState& before,
                                           const MultipartiteState& after,
                                           const std::string& message_label, double tolerance) {
  if (!before.spec().contains(message_label) || !after.spec().contains(message_label)) {
    throw InvalidArgument("both states must carry the message label " + message_label);
  }
  for (const auto& part : after.spec().parts()) {
    auto i = before.spec().find(part.label);
    if (!i || before.spec()[*i].dim != part.dim) {
      throw InvalidArgument("subsystem '" + part.label + "' of the later state is not in the earlier one");
    }
  }
  auto rest = [&](const MultipartiteState& s) {
    Labels out;
    for (const auto& l : s.spec().labels()) {
      if (l != message_label) out.push_back(l);
    }
    return out;
  };
  const double s_before = mutual_information(before, {message_label}, rest(before));
  const double s_after = mutual_information(after, {message_label}, rest(after));
  MonotonicityCheck check;
  check.slack = s_before - s_after;
  check.holds = check.slack >= -tolerance;
  return check;
}

MonotonicityCheck verify_monotonicity_step(const LabeledEnsemble& before,
                                           const LabeledEnsemble& after, double tolerance) {
  if (before.probabilities() != after.probabilities()) {
    throw InvalidArgument("ensembles carry different message distributions");
  }
  for (const auto& part : after.spec().parts()) {
    auto i = before.spec().find(part.label);
    if (!i || before.spec()[*i].dim != part.dim) {
      throw InvalidArgument("subsystem '" + part.label + "' of the later ensemble is not in the earlier one");
    }
  }
  MonotonicityCheck check;
  check.slack = holevo_chi(before) - holevo_chi(after);
  check.holds = check.slack >= -tolerance;
  return check;
}

std::size_t bob_unitary_dim(const FeedbackProtocol& protocol, std::size_t round) {
  std::size_t d = protocol.dims.x;
  for (std::size_t k = 0; k < round; ++k) {
    d = saturating_mul(d, saturating_mul(protocol.channel.d_out(), protocol.dims.y));
  }
  return d;
}

std::size_t alice_unitary_dim(const FeedbackProtocol& protocol, std::size_t round) {
  std::size_t d = protocol.channel.d_in();
  for (std::size_t k = 1; k < round; ++k) d = saturating_mul(d, protocol.dims.x);
  for (std::size_t k = 0; k < round; ++k) d = saturating_mul(d, protocol.dims.z);
  return d;
}

std::size_t tracked_dimension(const QuantumChannel& channel, const RegisterDims& dims,
                              std::size_t rounds) {
  const std::size_t per_round =
      saturating_mul(saturating_mul(channel.d_in(), dims.x), saturating_mul(dims.y, dims.z));
  std::size_t d = 1;
  for (std::size_t k = 0; k < rounds; ++k) d = saturating_mul(d, per_round);
  return d;
}

void validate(const FeedbackProtocol& p) {
  if (p.dims.x == 0 || p.dims.y == 0 || p.dims.z == 0) {
    throw InvalidArgument("register dimensions must be positive");
  }
  const std::size_t tracked = tracked_dimension(p.channel, p.dims, p.rounds);
  if (tracked > dimension_budget()) throw DimensionBudgetExceeded(tracked, dimension_budget());

  // Constructing the ensemble checks the distribution.
  std::vector<MultipartiteState> dummy(p.probabilities.size(),
                                       MultipartiteState::maximally_mixed(SubsystemSpec{{"M", 1}}));
  LabeledEnsemble(p.probabilities, std::move(dummy));

  const SubsystemSpec expected{{"Q1", p.channel.d_in()}, {"Z1", p.dims.z}, {"Y1", p.dims.y}};
  if (!(p.initial_shared.spec() == expected)) {
    throw InvalidArgument("initial shared state must live on {Q1, Z1, Y1} with dimensions (" +
                          std::to_string(p.channel.d_in()) + ", " + std::to_string(p.dims.z) +
                          ", " + std::to_string(p.dims.y) + ")");
  }
  if (p.bob_unitaries.size() != p.rounds || p.alice_unitaries.size() != p.rounds) {
    throw InvalidArgument("need exactly one Bob unitary and one Alice unitary set per round");
  }
  for (std::size_t k = 1; k <= p.rounds; ++k) {
    const auto& u = p.bob_unitaries[k - 1];
    const auto du = static_cast<Eigen::Index>(bob_unitary_dim(p, k));
    if (u.rows() != du || u.cols() != du) {
      throw InvalidArgument("Bob's round-" + std::to_string(k) + " unitary must be " +
                            std::to_string(du) + "x" + std::to_string(du));
    }
    if (unitarity_error(u) > kHermitianTolerance) {
      throw InvalidState("Bob's round-" + std::to_string(k) + " operator is not unitary");
    }
    const auto& vs = p.alice_unitaries[k - 1];
    if (vs.size() != p.probabilities.size()) {
      throw InvalidArgument("round " + std::to_string(k) + " needs one Alice unitary per message");
    }
    const auto dv = static_cast<Eigen::Index>(alice_unitary_dim(p, k));
    for (const auto& v : vs) {
      if (v.rows() != dv || v.cols() != dv) {
        throw InvalidArgument("Alice's round-" + std::to_string(k) + " unitaries must be " +
                              std::to_string(dv) + "x" + std::to_string(dv));
      }
      if (unitarity_error(v) > kHermitianTolerance) {
        throw InvalidState("Alice's round-" + std::to_string(k) + " operator is not unitary");
      }
    }
  }
}

bool ProtocolTrajectory::lemma_bound_holds(double tolerance) const {
  for (double s : bound_slack) {
    if (s < -tolerance) return false;
  }
  for (double s : monotonicity_slack) {
    if (s < -tolerance) return false;
  }
  return true;
}

ProtocolTrajectory simulate_feedback_protocol(const FeedbackProtocol& protocol) {
  validate(protocol);
  ProtocolTrajectory traj;
  traj.rounds = protocol.rounds;
  if (protocol.rounds == 0) return traj;

  const auto& p = protocol.probabilities;
  const auto isometry = stinespring(protocol.channel);
  std::vector<PureState> branches(p.size(), protocol.initial_shared);
  double running = 0.0;

  for (std::size_t k = 1; k <= protocol.rounds; ++k) {
    for (auto& b : branches) {
      if (k >= 2) {
        b = append_register(b, {reg('Q', k), protocol.channel.d_in()});
        b = append_register(b, {reg('Z', k), protocol.dims.z});
        b = append_register(b, {reg('Y', k), protocol.dims.y});
      }
      b = append_register(b, {reg('X', k), protocol.dims.x});
    }

    const Labels alice = concat({{reg('Q', k)}, registers('X', 1, k - 1), registers('Z', 1, k)});
    for (std::size_t i = 0; i < branches.size(); ++i) {
      auto outputs = subsystems_of(branches[i], alice);
      branches[i] = apply_local_operator(branches[i], alice, protocol.alice_unitaries[k - 1][i], outputs);
    }

    for (auto& b : branches) {
      b = apply_local_operator(b, {reg('Q', k)}, isometry.matrix,
                               {{reg('Q', k), isometry.d_out}, {reg('E', k), isometry.d_env}});
    }

    const Labels held_before = concat({registers('Q', 1, k - 1), registers('Y', 1, k)});
    const Labels held_with_new = concat({registers('Q', 1, k), registers('Y', 1, k)});
    const double term = bob_holevo(p, branches, held_with_new) - bob_holevo(p, branches, held_before);

    const Labels bob = concat({registers('Q', 1, k), {reg('X', k)}, registers('Y', 1, k)});
    for (auto& b : branches) {
      auto outputs = subsystems_of(b, bob);
      b = apply_local_operator(b, bob, protocol.bob_unitaries[k - 1], outputs);
    }

    // X_k leaves for Alice.
    std::vector<MultipartiteState> with_x;
    std::vector<MultipartiteState> without_x;
    for (const auto& b : branches) {
      with_x.push_back(reduced_density(b, bob));
      without_x.push_back(reduced_density(b, held_with_new));
    }
    LabeledEnsemble before(p, std::move(with_x));
    LabeledEnsemble after(p, std::move(without_x));
    const auto step = verify_monotonicity_step(before, after);
    const double mi = holevo_chi(after);

    double entanglement = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      entanglement += p[i] * matrix_entropy(after.branches()[i].matrix());
    }

    running += term;
    traj.conditional_terms.push_back(term);
    traj.mi_per_round.push_back(mi);
    traj.bound_slack.push_back(running - mi);
    traj.monotonicity_slack.push_back(step.slack);
    traj.entanglement_per_round.push_back(entanglement);
    traj.message_marginals.push_back(after.probabilities());
  }
  traj.total_mi = traj.mi_per_round.back();
  return traj;
}

nlohmann::json trajectory_to_json(const ProtocolTrajectory& t) {
  return {{"rounds", t.rounds},
          {"mi_per_round", t.mi_per_round},
          {"conditional_terms", t.conditional_terms},
          {"bound_slack", t.bound_slack},
          {"total_mi", t.total_mi}};
}

FeedbackProtocol random_protocol(const QuantumChannel& channel, std::size_t rounds,
                                 RegisterDims dims, std::size_t messages, std::uint64_t seed) {
  if (messages == 0) throw InvalidArgument("protocol needs at least one message");
  FeedbackProtocol protocol;
  protocol.rounds = rounds;
  protocol.channel = channel;
  protocol.dims = dims;

  const std::size_t tracked = tracked_dimension(channel, dims, rounds);
  if (tracked > dimension_budget()) throw DimensionBudgetExceeded(tracked, dimension_budget());

  Rng rng(derive_seed(seed, 0));
  std::exponential_distribution<double> weight(1.0);
  protocol.probabilities.resize(messages);
  double total = 0.0;
  for (auto& x : protocol.probabilities) total += (x = weight(rng));
  for (auto& x : protocol.probabilities) x /= total;

  protocol.initial_shared = random_pure_state(
      SubsystemSpec{{"Q1", channel.d_in()}, {"Z1", dims.z}, {"Y1", dims.y}}, derive_seed(seed, 1));

  for (std::size_t k = 1; k <= rounds; ++k) {
    Rng round_rng(derive_seed(seed, 100 + k));
    protocol.bob_unitaries.push_back(random_haar_unitary(bob_unitary_dim(protocol, k), round_rng));
    std::vector<ComplexMatrix> vs;
    for (std::size_t i = 0; i < messages; ++i) {
      vs.push_back(random_haar_unitary(alice_unitary_dim(protocol, k), round_rng));
    }
    protocol.alice_unitaries.push_back(std::move(vs));
  }
  return protocol;
}

FeedbackProtocol dense_coding_protocol(const QuantumChannel& channel) {
  const std::size_t d = channel.d_in();
  FeedbackProtocol protocol;
  protocol.rounds = 1;
  protocol.channel = channel;
  protocol.dims = RegisterDims{1, d, 1};

  const auto n = static_cast<Eigen::Index>(d);
  ComplexVector phi = ComplexVector::Zero(n * n);
  for (Eigen::Index j = 0; j < n; ++j) phi(j * n + j) = 1.0 / std::sqrt(static_cast<double>(d));
  protocol.initial_shared = PureState(SubsystemSpec{{"Q1", d}, {"Z1", 1}, {"Y1", d}}, std::move(phi));

  std::vector<ComplexMatrix> encodings;
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = 0; b < d; ++b) {
      encodings.push_back(weyl_operator(d, a, b));
      protocol.probabilities.push_back(1.0 / static_cast<double>(d * d));
    }
  }
  protocol.alice_unitaries.push_back(std::move(encodings));
  protocol.bob_unitaries.push_back(identity_matrix(bob_unitary_dim(protocol, 1)));
  return protocol;
}

FeedbackProtocol entanglement_sharing_witness(std::size_t rounds) {
  FeedbackProtocol protocol;
  protocol.rounds = rounds;
  protocol.channel = identity_channel(2);
  protocol.dims = RegisterDims{2, 2, 1};
  protocol.probabilities = {0.5, 0.5};
  protocol.initial_shared = PureState::basis_state(SubsystemSpec{{"Q1", 2}, {"Z1", 1}, {"Y1", 2}}, 0);

  const double s = 1.0 / std::sqrt(2.0);
  ComplexMatrix hadamard(2, 2);
  hadamard << s, s, s, -s;
  ComplexMatrix cnot = ComplexMatrix::Zero(4, 4);
  cnot(0, 0) = 1.0;
  cnot(1, 1) = 1.0;
  cnot(2, 3) = 1.0;
  cnot(3, 2) = 1.0;
  const ComplexMatrix bell_maker = cnot * kron(hadamard, identity_matrix(2));

  for (std::size_t k = 1; k <= rounds; ++k) {
    std::vector<Subsystem> parts;
    for (std::size_t j = 1; j <= k; ++j) parts.push_back({reg('Q', j), 2});
    parts.push_back({reg('X', k), 2});
    for (std::size_t j = 1; j <= k; ++j) parts.push_back({reg('Y', j), 2});
    protocol.bob_unitaries.push_back(
        embed_operator(SubsystemSpec(std::move(parts)), {reg('X', k), reg('Y', k)}, bell_maker));

    const std::size_t dv = alice_unitary_dim(protocol, k);
    ComplexMatrix flip = identity_matrix(dv);
    if (k == 1) flip = weyl_operator(2, 1, 0);
    protocol.alice_unitaries.push_back({identity_matrix(dv), flip});
  }
  return protocol;
}

}  // namespace qfc
