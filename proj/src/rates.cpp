#include "qfc/rates.hpp"

#include <algorithm>
#include <cmath>

#include "qfc/error.hpp"

namespace qfc {

namespace {

void require_probability(double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) {
    throw InvalidArgument("erasure probability must lie in [0, 1], got " + std::to_string(eps));
  }
}

struct Named {
  const char* name;
  const std::optional<double>& value;
};

}  // namespace

std::size_t RateSet::present() const {
  std::size_t n = 0;
  for (const auto* v : {&C, &C_FB, &C_QFB, &C_E, &Q, &Q_E, &Q_FB_star}) n += v->has_value();
  return n;
}

double feedback_assisted_quantum_rate(double r_fb, double ebits_per_use, double q_e) {
  if (!(r_fb > 0.0)) throw InvalidArgument("feedback rate must be positive");
  if (!(ebits_per_use >= 0.0)) throw InvalidArgument("entanglement cost must be nonnegative");
  if (!(q_e >= 0.0)) throw InvalidArgument("Q_E must be nonnegative");
  return r_fb / (r_fb + ebits_per_use) * q_e;
}

double erasure_feedback_rate(double eps) {
  require_probability(eps);
  return (1.0 - eps) * (1.0 - eps);
}

double erasure_unassisted_q(double eps) { return std::max(erasure_unassisted_q_affine(eps), 0.0); }

double erasure_unassisted_q_affine(double eps) {
  require_probability(eps);
  return 1.0 - 2.0 * eps;
}

double erasure_Q_E(double eps) {
  require_probability(eps);
  return 1.0 - eps;
}

std::vector<std::string> check_capacity_ordering(const RateSet& r, double tol) {
  if (r.present() < 2) throw InvalidArgument("ordering check needs at least two rates");
  std::vector<std::string> out;

  const Named all[] = {{"C", r.C},     {"C_FB", r.C_FB}, {"C_QFB", r.C_QFB},        {"C_E", r.C_E},
                       {"Q", r.Q},     {"Q_E", r.Q_E},   {"Q_FB_star", r.Q_FB_star}};
  for (const auto& n : all) {
    if (n.value && (!std::isfinite(*n.value) || *n.value < kRateFloor)) {
      out.push_back(std::string(n.name) + " = " + std::to_string(*n.value) + " is negative");
    }
  }

  auto le = [&](const Named& a, const Named& b) {
    if (a.value && b.value && *a.value > *b.value + tol) {
      out.push_back(std::string(a.name) + " = " + std::to_string(*a.value) + " exceeds " + b.name +
                    " = " + std::to_string(*b.value));
    }
  };
  auto eq = [&](const Named& a, const Named& b, double scale) {
    if (a.value && b.value && std::abs(*a.value - scale * *b.value) > tol) {
      out.push_back(std::string(a.name) + " = " + std::to_string(*a.value) + " differs from " +
                    (scale == 1.0 ? "" : "half of ") + b.name + " = " + std::to_string(*b.value));
    }
  };
  const Named c{"C", r.C}, c_fb{"C_FB", r.C_FB}, c_qfb{"C_QFB", r.C_QFB}, c_e{"C_E", r.C_E};
  const Named q{"Q", r.Q}, q_e{"Q_E", r.Q_E}, q_fb{"Q_FB_star", r.Q_FB_star};

  le(c, c_fb);
  le(c_fb, c_qfb);
  le(c, c_qfb);
  le(c, c_e);
  le(c_fb, c_e);
  eq(c_qfb, c_e, 1.0);
  eq(q_e, c_e, 0.5);
  le(q, q_e);
  le(q_fb, q_e);
  return out;
}

}  // namespace qfc
