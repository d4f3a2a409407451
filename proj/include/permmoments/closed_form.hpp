#pragma once

#include <array>
#include <string>
#include <vector>

#include "permmoments/core_stats.hpp"

namespace pm {

/// Raw (unstandardized) central moments in the chi/nu notation of the
/// low-order closed forms. chi[j] = <x_hat^j>, j = 0..5.
struct ClosedFormInputs {
  long long n = 0;
  std::array<double, 6> chi{};
  std::array<double, 6> nu{};
  double sigma_x = 0;
  double sigma_y = 0;

  static ClosedFormInputs from_dataset(const Dataset<double>& d);
};

/// One printed additive term of a closed form, labelled with the partition
/// of k it comes from, e.g. "(2,2,1)". `value` already includes the
/// 1/(sigma_x sigma_y)^k prefactor and its h_{n,m} factor.
struct ClosedFormTerm {
  std::string partition;
  double value = 0;
};

/// Term-by-term evaluation for k in 3..5 (k = 1, 2 have no terms).
std::vector<ClosedFormTerm> closed_form_terms(const ClosedFormInputs& in, int k);

/// <r_pi^k> for k in 1..5. k = 1 is exactly 0, k = 2 is exactly 1/(n-1).
/// Throws UnsupportedOrder outside 1..5 and ZeroVariance for a constant column.
double moment_closed_form(const ClosedFormInputs& in, int k);

}  // namespace pm
