#include "permmoments/closed_form.hpp"

#include <cmath>

#include "permmoments/partition.hpp"

namespace pm {

ClosedFormInputs ClosedFormInputs::from_dataset(const Dataset<double>& d) {
  const CenteredData<double> c = center(d, false);
  const MomentTable<double> t = central_moments(c, 5);
  ClosedFormInputs in;
  in.n = c.size();
  for (std::size_t j = 0; j < 6; ++j) {
    in.chi[j] = t.chi[j];
    in.nu[j] = t.nu[j];
  }
  in.sigma_x = c.sigma_x();
  in.sigma_y = c.sigma_y();
  return in;
}

namespace {

void check(const ClosedFormInputs& in, int k) {
  if (k < 1 || k > 5)
    throw UnsupportedOrder("closed forms exist for k = 1..5, got " + std::to_string(k));
  if (in.sigma_x == 0) throw ZeroVariance("x column has zero variance");
  if (in.sigma_y == 0) throw ZeroVariance("y column has zero variance");
}

// (n-1)(n-2)...(n-j+1): the falling factorial with its leading n removed.
// Only called when h_{n,j} = 1.
double tail(double n, int j) {
  double f = 1;
  for (int i = 1; i < j; ++i) f *= n - i;
  return f;
}

std::vector<ClosedFormTerm> terms3(const ClosedFormInputs& in) {
  const double n = double(in.n);
  const double pre = 1.0 / std::pow(in.sigma_x * in.sigma_y, 3);
  const double mu33 = in.chi[3] * in.nu[3];
  const double n2 = n * n;
  std::vector<ClosedFormTerm> t;
  t.push_back({"(3)", pre * mu33 / n2 * h_indicator(in.n, 1)});
  if (h_indicator(in.n, 2)) t.push_back({"(2,1)", pre * 3 * mu33 / (n2 * tail(n, 2))});
  if (h_indicator(in.n, 3)) t.push_back({"(1,1,1)", pre * 4 * mu33 / (n2 * tail(n, 3))});
  return t;
}

std::vector<ClosedFormTerm> terms4(const ClosedFormInputs& in) {
  const double n = double(in.n);
  const double pre = 1.0 / std::pow(in.sigma_x * in.sigma_y, 4);
  const double n2 = n * n, n3 = n2 * n, n5 = n3 * n2;
  const double sx4 = std::pow(in.sigma_x, 4), sy4 = std::pow(in.sigma_y, 4);
  const double chi4 = in.chi[4], nu4 = in.nu[4];

  // [n^2 sigma^4 - n chi_4]
  const double pair_x = n2 * sx4 - n * chi4;
  const double pair_y = n2 * sy4 - n * nu4;
  // [2 n chi_4 - n^2 sigma^4]
  const double spread_x = 2 * n * chi4 - n2 * sx4;
  const double spread_y = 2 * n * nu4 - n2 * sy4;

  std::vector<ClosedFormTerm> t;
  t.push_back({"(4)", pre * chi4 * nu4 / n3});
  if (h_indicator(in.n, 2)) {
    t.push_back({"(3,1)", pre * 4 * chi4 * nu4 / (n3 * tail(n, 2))});
    t.push_back({"(2,2)", pre * 3 * pair_x * pair_y / (n5 * tail(n, 2))});
  }
  if (h_indicator(in.n, 3))
    t.push_back({"(2,1,1)", pre * 6 * spread_x * spread_y / (n5 * tail(n, 3))});
  if (h_indicator(in.n, 4))
    t.push_back({"(1,1,1,1)", pre * 9 * spread_x * spread_y / (n5 * tail(n, 4))});
  return t;
}

std::vector<ClosedFormTerm> terms5(const ClosedFormInputs& in) {
  const double n = double(in.n);
  const double pre = 1.0 / std::pow(in.sigma_x * in.sigma_y, 5);
  const double n2 = n * n, n4 = n2 * n2, n6 = n4 * n2;
  const double mu55 = in.chi[5] * in.nu[5];
  const double cx = in.chi[3] * in.chi[2], cy = in.nu[3] * in.nu[2];
  const double chi5 = in.chi[5], nu5 = in.nu[5];

  // [n^2 chi_3 chi_2 - n chi_5]
  const double a_x = n2 * cx - n * chi5, a_y = n2 * cy - n * nu5;
  // [2 n chi_5 - n^2 chi_3 chi_2]
  const double b_x = 2 * n * chi5 - n2 * cx, b_y = 2 * n * nu5 - n2 * cy;
  // [n chi_5 - n^2 chi_3 chi_2]
  const double c_x = n * chi5 - n2 * cx, c_y = n * nu5 - n2 * cy;
  // [6 n chi_5 - 5 n^2 chi_3 chi_2]
  const double d_x = 6 * n * chi5 - 5 * n2 * cx, d_y = 6 * n * nu5 - 5 * n2 * cy;

  std::vector<ClosedFormTerm> t;
  t.push_back({"(5)", pre * mu55 / n4});
  if (h_indicator(in.n, 2)) {
    t.push_back({"(4,1)", pre * 5 * mu55 / (n4 * tail(n, 2))});
    t.push_back({"(3,2)", pre * 10 * a_x * a_y / (n6 * tail(n, 2))});
  }
  if (h_indicator(in.n, 3)) {
    t.push_back({"(3,1,1)", pre * 10 * b_x * b_y / (n6 * tail(n, 3))});
    t.push_back({"(2,2,1)", pre * 60 * c_x * c_y / (n6 * tail(n, 3))});
  }
  if (h_indicator(in.n, 4)) t.push_back({"(2,1,1,1)", pre * 10 * d_x * d_y / (n6 * tail(n, 4))});
  if (h_indicator(in.n, 5)) t.push_back({"(1,1,1,1,1)", pre * 16 * d_x * d_y / (n6 * tail(n, 5))});
  return t;
}

}  // namespace

std::vector<ClosedFormTerm> closed_form_terms(const ClosedFormInputs& in, int k) {
  check(in, k);
  switch (k) {
    case 3: return terms3(in);
    case 4: return terms4(in);
    case 5: return terms5(in);
    default: return {};
  }
}

double moment_closed_form(const ClosedFormInputs& in, int k) {
  check(in, k);
  if (k == 1) return 0.0;
  if (k == 2) return 1.0 / double(in.n - 1);
  double sum = 0;
  for (const auto& term : closed_form_terms(in, k)) sum += term.value;
  return sum;
}

}  // namespace pm
