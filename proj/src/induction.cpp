#include "permmoments/induction.hpp"

#include <cmath>

namespace pm {

std::string to_string(Method m) {
  switch (m) {
    case Method::Induction: return "induction";
    case Method::ClosedForm: return "closed-form";
    case Method::BruteForce: return "brute-force";
    case Method::MonteCarlo: return "monte-carlo";
  }
  return "unknown";
}

namespace {

std::vector<double> scaled_power_sums(const std::vector<double>& standardized_moments, double n) {
  // u = z / sqrt(n)  =>  S_j(u) = n <z^j> n^{-j/2}
  std::vector<double> sums(standardized_moments.size());
  const double root_n = std::sqrt(n);
  double scale = n;
  for (std::size_t j = 0; j < sums.size(); ++j) {
    sums[j] = standardized_moments[j] * scale;
    scale /= root_n;
  }
  return sums;
}

}  // namespace

InductionSession::InductionSession(const Dataset<double>& d, int k_max, int order_cap)
    : n_(d.size()),
      k_max_(k_max),
      order_cap_(order_cap),
      sigma_x_(0),
      sigma_y_(0),
      x_(std::vector<double>{0, 0}),
      y_(std::vector<double>{0, 0}) {
  if (k_max > order_cap)
    throw KTooLarge("order " + std::to_string(k_max) + " exceeds cap " + std::to_string(order_cap));
  const CenteredData<double> c = center(d, true);
  sigma_x_ = c.sigma_x();
  sigma_y_ = c.sigma_y();
  const MomentTable<double> t = central_moments(c, std::max(k_max, 1));
  x_ = ZTermEvaluator<double>(scaled_power_sums(t.chi, double(n_)));
  y_ = ZTermEvaluator<double>(scaled_power_sums(t.nu, double(n_)));
}

MomentResult InductionSession::moment(int k, bool with_breakdown) {
  if (k > order_cap_)
    throw KTooLarge("order " + std::to_string(k) + " exceeds cap " + std::to_string(order_cap_));
  if (k > k_max_)
    throw std::out_of_range("order " + std::to_string(k) + " exceeds session k_max");
  MomentResult r;
  r.k = k;
  r.method = Method::Induction;
  r.value = permutation_power_mean(x_, y_, k, order_cap_, with_breakdown ? &r.breakdown : nullptr);
  return r;
}

MomentResult moment(const Dataset<double>& d, int k, bool with_breakdown, int order_cap) {
  InductionSession s(d, k, order_cap);
  return s.moment(k, with_breakdown);
}

std::vector<MomentResult> moments(const Dataset<double>& d, int k_max, int order_cap) {
  InductionSession s(d, k_max, order_cap);
  std::vector<MomentResult> out;
  for (int k = 1; k <= k_max; ++k) out.push_back(s.moment(k));
  return out;
}

std::optional<Rational> ExactMoment::exact_value() const {
  if (k % 2 != 0) return std::nullopt;
  return numerator / ipow(sxx_syy, k / 2);
}

double ExactMoment::value() const {
  if (auto v = exact_value()) return to_double(*v);
  const Rational partial = numerator / ipow(sxx_syy, k / 2);
  return to_double(partial) / std::sqrt(to_double(sxx_syy));
}

std::vector<ExactMoment> moments_exact(const Dataset<Rational>& d, int k_max, int order_cap) {
  if (k_max > order_cap)
    throw KTooLarge("order " + std::to_string(k_max) + " exceeds cap " + std::to_string(order_cap));
  const CenteredData<Rational> c = center(d, false);
  if (c.var_x == 0) throw ZeroVariance("x column has zero variance");
  if (c.var_y == 0) throw ZeroVariance("y column has zero variance");
  const Rational n(static_cast<long long>(c.size()));
  const Rational d2 = (c.var_x * n) * (c.var_y * n);
  auto x = ZTermEvaluator<Rational>::from_values(c.x_hat, k_max);
  auto y = ZTermEvaluator<Rational>::from_values(c.y_hat, k_max);
  std::vector<ExactMoment> out;
  for (int k = 1; k <= k_max; ++k)
    out.push_back({k, permutation_power_mean(x, y, k, order_cap), d2});
  return out;
}

}  // namespace pm
