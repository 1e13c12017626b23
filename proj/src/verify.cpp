#include "qfc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "qfc/capacity.hpp"
#include "qfc/channels.hpp"
#include "qfc/entropy.hpp"
#include "qfc/error.hpp"
#include "qfc/feedback.hpp"
#include "qfc/random.hpp"

namespace qfc {

namespace {

constexpr std::size_t kSampledBases = 200;

class Recorder {
 public:
  Recorder(VerifyReport& report, std::string suite) : report_(report), suite_(std::move(suite)) {}

  void set_trial(std::size_t trial) { trial_ = trial; }

  // lhs <= rhs + tol
  void at_most(const std::string& property, double lhs, double rhs, double tol) {
    const double excess = lhs - rhs;
    report_.max_slack_violation = std::max(report_.max_slack_violation, excess);
    if (!(excess <= tol)) fail(property, excess, "");
  }

  // |a - b| <= tol
  void close(const std::string& property, double a, double b, double tol) {
    at_most(property, std::abs(a - b), 0.0, tol);
  }

  void require(const std::string& property, bool ok, const std::string& detail) {
    if (!ok) fail(property, 0.0, detail);
  }

  void fail(const std::string& property, double excess, const std::string& detail) {
    report_.failures.push_back({suite_, property, trial_, excess, detail});
  }

  // Runs one trial body; library errors count as failures.
  void trial(std::size_t t, const std::function<void()>& body) {
    set_trial(t);
    try {
      body();
    } catch (const Error& e) {
      fail("no exception", 0.0, e.what());
    }
  }

 private:
  VerifyReport& report_;
  std::string suite_;
  std::size_t trial_ = 0;
};

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

MultipartiteState random_state(const SubsystemSpec& spec, Rng& rng) {
  return random_density_matrix(spec, pick(rng, 1, spec.total_dim()), rng());
}

LabeledEnsemble random_ensemble(const SubsystemSpec& spec, std::size_t count, Rng& rng) {
  std::exponential_distribution<double> weight(1.0);
  std::vector<double> p(count);
  double total = 0.0;
  for (auto& x : p) total += (x = weight(rng));
  for (auto& x : p) x /= total;
  std::vector<MultipartiteState> branches;
  for (std::size_t i = 0; i < count; ++i) branches.push_back(random_state(spec, rng));
  return LabeledEnsemble(std::move(p), std::move(branches));
}

QuantumChannel random_small_channel(std::size_t d_in, Rng& rng) {
  const std::size_t d_out = pick(rng, 2, 3);
  const std::size_t min_kraus = (d_in + d_out - 1) / d_out;
  const std::size_t count = pick(rng, min_kraus, d_in * d_out);
  return random_channel(d_in, d_out, count, rng());
}

void entropic_suite(const VerifyOptions& o, Recorder& rec) {
  const double tol = o.tolerance;
  for (std::size_t t = 0; t < o.trials; ++t) {
    rec.trial(t, [&] {
      Rng rng(derive_seed(o.seed, t));

      const SubsystemSpec ab{{"A", pick(rng, 2, 3)}, {"B", pick(rng, 2, 3)}};
      const auto rho = random_state(ab, rng);
      rec.at_most("subadditivity", von_neumann_entropy(rho),
                  von_neumann_entropy(marginal(rho, {"A"})) + von_neumann_entropy(marginal(rho, {"B"})),
                  tol);

      const SubsystemSpec abc{{"A", 2}, {"B", 2}, {"C", 2}};
      const auto tri = random_state(abc, rng);
      const double cmi = conditional_mutual_information(tri, {"A"}, {"B"}, {"C"});
      rec.at_most("strong subadditivity", -cmi, 0.0, tol);
      rec.close("conditional mutual information chain", cmi,
                mutual_information(tri, {"A"}, {"B", "C"}) - mutual_information(tri, {"A"}, {"C"}),
                kIdentityTolerance);

      const auto ens = random_ensemble(SubsystemSpec{{"A", 2}, {"B", 2}}, pick(rng, 2, 4), rng);
      double averaged = 0.0;
      for (std::size_t i = 0; i < ens.size(); ++i) {
        averaged += ens.probabilities()[i] * conditional_entropy(ens.branches()[i], {"A"}, {"B"});
      }
      rec.at_most("concavity of conditional entropy", averaged,
                  conditional_entropy(ens.average(), {"A"}, {"B"}), tol);

      const SubsystemSpec abe{{"A", 2}, {"B", 2}, {"E", 2}};
      const auto ext = random_state(abe, rng);
      rec.at_most("conditional entropy monotonicity", -conditional_entropy(ext, {"A"}, {"B"}),
                  -conditional_entropy(ext, {"A"}, {"B", "E"}), tol);

      const auto qubits = random_ensemble(SubsystemSpec{{"Q", 2}}, pick(rng, 2, 4), rng);
      const double chi = holevo_chi(qubits);
      double best = 0.0;
      for (std::size_t k = 0; k < kSampledBases; ++k) {
        best = std::max(best, sampled_accessible_information(qubits, random_haar_unitary(2, rng)));
      }
      rec.at_most("Holevo bound", best, chi, tol);
    });
  }
}

void channel_suite(const VerifyOptions& o, Recorder& rec) {
  for (std::size_t t = 0; t < o.trials; ++t) {
    rec.trial(t, [&] {
      Rng rng(derive_seed(o.seed, t));
      const std::size_t d_in = pick(rng, 2, 3);
      const auto ch = random_small_channel(d_in, rng);
      const SubsystemSpec a{{"A", d_in}};
      const auto rho = random_state(a, rng);

      const auto out = apply(ch, rho);
      rec.close("trace preservation", out.matrix().trace().real(), 1.0, kTraceTolerance);

      const auto sigma = random_state(SubsystemSpec{{"B", 2}}, rng);
      const auto lhs = apply_to_subsystem(ch, tensor_product(rho, sigma), "A");
      const auto rhs = tensor_product(out, sigma);
      rec.at_most("product factorization", max_abs(lhs.matrix() - rhs.matrix()), 0.0, 1e-12);

      const auto v = stinespring(ch);
      const ComplexMatrix big = v.matrix * rho.matrix() * v.matrix.adjoint();
      const auto joint = MultipartiteState::unchecked(
          SubsystemSpec{{"A", v.d_out}, {"E", v.d_env}}, big);
      rec.at_most("Stinespring composition",
                  max_abs(partial_trace(joint, {"E"}).matrix() - out.matrix()), 0.0,
                  kTraceTolerance);

      const auto rho_ab = random_state(SubsystemSpec{{"A", d_in}, {"B", 2}}, rng);
      rec.at_most("mutual information monotonicity",
                  mutual_information(apply_to_subsystem(ch, rho_ab, "A"), {"A"}, {"B"}),
                  mutual_information(rho_ab, {"A"}, {"B"}), o.tolerance);

      rec.close("objective two-path identity", ea_objective(ch, rho),
                ea_objective_via_purification(ch, rho), o.identity_tolerance);
    });
  }
}

ComplexMatrix random_traceless_direction(std::size_t d, Rng& rng) {
  ComplexMatrix h = random_hermitian(d, rng());
  h -= (h.trace() / static_cast<double>(d)) * identity_matrix(d);
  return h / h.norm();
}

void capacity_suite(const VerifyOptions& o, Recorder& rec) {
  for (std::size_t t = 0; t < o.trials; ++t) {
    rec.trial(t, [&] {
      Rng rng(derive_seed(o.seed, t));
      const auto ch = random_small_channel(2, rng);
      const SubsystemSpec a{{"A", 2}};

      const auto r1 = random_state(a, rng);
      const auto r2 = random_state(a, rng);
      const double s = std::uniform_real_distribution<double>(0.05, 0.95)(rng);
      const auto mix =
          MultipartiteState::unchecked(a, s * r1.matrix() + (1.0 - s) * r2.matrix());
      rec.at_most("objective concavity", s * ea_objective(ch, r1) + (1.0 - s) * ea_objective(ch, r2),
                  ea_objective(ch, mix), o.tolerance);

      const auto base = random_density_matrix(2, 2, rng());
      const ComplexMatrix interior = 0.8 * base.matrix() + 0.1 * identity_matrix(2);
      const auto rho = MultipartiteState::unchecked(a, interior);
      const ComplexMatrix g = ea_gradient(ch, rho);
      const double h = 1e-5;
      for (int k = 0; k < 3; ++k) {
        const ComplexMatrix dir = random_traceless_direction(2, rng);
        const double fp = ea_objective(ch, MultipartiteState::unchecked(a, interior + h * dir));
        const double fm = ea_objective(ch, MultipartiteState::unchecked(a, interior - h * dir));
        const double analytic = g.cwiseProduct(dir.transpose()).sum().real();
        rec.close("gradient vs central differences", analytic, (fp - fm) / (2.0 * h),
                  o.gradient_tolerance);
      }

      CapacityOptions copts;
      copts.seed = derive_seed(o.seed, t);
      const auto cap = entanglement_assisted_capacity(ch, copts);
      rec.require("optimizer convergence", cap.converged,
                  "stationarity gap " + std::to_string(cap.stationarity_gap));
      rec.at_most("capacity upper range", cap.value,
                  std::log2(static_cast<double>(ch.d_in() * ch.d_out())), o.tolerance);
      rec.at_most("capacity lower range", -cap.value, 0.0, o.tolerance);
      rec.close("objective at argmax", ea_objective(ch, cap.argmax), cap.value,
                o.identity_tolerance);
      const auto coh = max_coherent_information(ch, copts);
      rec.at_most("capacity dominates coherent information", coh.value, cap.value, o.tolerance);
      if (t == 0) {
        const auto again = entanglement_assisted_capacity(ch, copts);
        rec.require("optimizer determinism",
                    again.value == cap.value && again.iterations == cap.iterations &&
                        again.argmax.matrix() == cap.argmax.matrix(),
                    "repeated run differs");
      }
    });
  }
}

struct ZooEntry {
  QuantumChannel channel;
  double c_e = 0.0;
  double dense = 0.0;
};

std::vector<ZooEntry> feedback_zoo(const VerifyOptions& o) {
  std::vector<QuantumChannel> channels = {identity_channel(2), qubit_erasure(0.25),
                                          qubit_erasure(0.5),   depolarizing(0.5),
                                          depolarizing(0.75),   dephasing(0.2),
                                          amplitude_damping(0.3)};
  std::vector<ZooEntry> zoo;
  CapacityOptions copts;
  copts.seed = o.seed;
  for (auto& ch : channels) {
    const double c_e = entanglement_assisted_capacity(ch, copts).value;
    const double dense = delta_conditional_mi(ch, dense_coding_ensemble(2, 2));
    zoo.push_back({std::move(ch), c_e, dense});
  }
  return zoo;
}

void feedback_suite(const VerifyOptions& o, Recorder& rec, VerifyReport& report) {
  if (o.trials == 0) return;
  const auto zoo = feedback_zoo(o);
  for (std::size_t t = 0; t < o.trials; ++t) {
    const auto& entry = zoo[t % zoo.size()];
    rec.trial(t, [&] {
      Rng rng(derive_seed(o.seed, t));
      const double delta = delta_conditional_mi(entry.channel, random_ab_ensemble(2, 2, rng()));
      const double worst = std::max(delta, t < zoo.size() ? entry.dense : delta) - entry.c_e;
      if (!report.has_converse_slack || worst > report.worst_converse_slack) {
        report.worst_converse_slack = worst;
        report.has_converse_slack = true;
      }
      rec.at_most("single-use converse", delta, entry.c_e, o.converse_tolerance);
      if (t < zoo.size()) {
        rec.at_most("single-use converse (dense coding)", entry.dense, entry.c_e,
                    o.converse_tolerance);
      }

      const std::size_t rounds = 2;
      const auto protocol =
          random_protocol(entry.channel, rounds, RegisterDims{}, pick(rng, 2, 4), rng());
      const auto traj = simulate_feedback_protocol(protocol);
      double terms = 0.0;
      for (std::size_t k = 0; k < traj.rounds; ++k) {
        terms += traj.conditional_terms[k];
        rec.at_most("recursive bound", traj.mi_per_round[k], terms, o.tolerance);
        rec.at_most("feedback monotonicity", -traj.monotonicity_slack[k], 0.0, o.tolerance);
        rec.require("message invariance", traj.message_marginals[k] == protocol.probabilities,
                    "message marginal changed in round " + std::to_string(k + 1));
      }
      // Dense coding saturates the converse on covariant channels.
      const double per_use = entry.dense >= entry.c_e - 1e-6 ? entry.dense : entry.c_e;
      rec.at_most("n-use bound", traj.total_mi, static_cast<double>(rounds) * per_use, o.tolerance);

      if (t == 0) {
        const auto witness = simulate_feedback_protocol(entanglement_sharing_witness(3));
        bool ok = true;
        for (std::size_t k = 1; k < witness.rounds; ++k) {
          ok = ok && std::abs(witness.mi_per_round[k] - witness.mi_per_round[0]) <= o.tolerance &&
               witness.entanglement_per_round[k] > witness.entanglement_per_round[k - 1] + 0.5;
        }
        rec.require("correlation versus entanglement witness", ok,
                    "message correlation moved or entanglement did not grow");
      }
    });
  }
}

void run_named(const std::string& suite, const VerifyOptions& o, VerifyReport& report) {
  Recorder rec(report, suite);
  if (suite == "entropic") {
    entropic_suite(o, rec);
  } else if (suite == "channel") {
    channel_suite(o, rec);
  } else if (suite == "capacity") {
    capacity_suite(o, rec);
  } else if (suite == "feedback") {
    feedback_suite(o, rec, report);
  }
}

}  // namespace

const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names = {"entropic", "channel", "capacity", "feedback",
                                                 "all"};
  return names;
}

VerifyReport run_verify_suite(const std::string& suite, const VerifyOptions& options) {
  const auto& names = verify_suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end()) {
    throw InvalidArgument("unknown suite '" + suite +
                          "' (expected entropic, channel, capacity, feedback or all)");
  }
  VerifyReport report;
  report.suite = suite;
  report.trials = options.trials;
  report.max_slack_violation = options.trials == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  if (options.trials == 0) {
    report.warnings.push_back("no trials requested; the suite passes vacuously");
    return report;
  }
  if (suite == "all") {
    for (std::size_t i = 0; i + 1 < names.size(); ++i) run_named(names[i], options, report);
  } else {
    run_named(suite, options, report);
  }
  return report;
}

nlohmann::json verify_report_to_json(const VerifyReport& report) {
  nlohmann::json failures = nlohmann::json::array();
  for (const auto& f : report.failures) {
    failures.push_back({{"suite", f.suite},
                        {"property", f.property},
                        {"trial", f.trial},
                        {"excess", f.excess},
                        {"detail", f.detail}});
  }
  nlohmann::json out = {{"suite", report.suite},
                        {"trials", report.trials},
                        {"failures", failures},
                        {"max_slack_violation", report.max_slack_violation}};
  if (report.has_converse_slack) out["worst_converse_slack"] = report.worst_converse_slack;
  return out;
}

}  // namespace qfc
