#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "dimerlab/matchings.hpp"

namespace dimerlab {

// One addend of a signed-logarithm sum: exponent * ln(num / den),
// kept unevaluated so signs can be decided in integer arithmetic.
struct LogRatioTerm {
  mpz_class num = 1;
  mpz_class den = 1;
  long long exp = 0;
};

using TermList = std::vector<LogRatioTerm>;

// Exact sign of sum(exp * ln(num/den)). Terms are merged by (num, den),
// then a floating interval bound may settle the sign; if the interval
// straddles zero the cross-multiplied integer products decide.
int delta_sign(const TermList& terms);

// d(i) = ln(m_i / r^i) - ln(mbar_i / (v-1)^i), v = 2n.
TermList d_terms(const MatchingVector& m, int r, int i);

// u(i) = -ln(i! * m_i).
TermList u_terms(const MatchingVector& m, int i);

// Terms of the k-th finite difference sum_j (-1)^(k-j) C(k,j) f(i+j).
TermList finite_difference(const std::function<TermList(int)>& f, int k, int i);

// Smallest difference order included in a graph-positivity scan. Census
// reconciliation against published counts needs both conventions.
enum class KRange { FromZero, FromTwo };

enum class PositivityTest { GraphPositivity, VirialPositivity };

struct PositivityReport {
  std::string graph_id;
  PositivityTest test = PositivityTest::GraphPositivity;
  int k_min = 0, k_max = 0;  // orders tested, together with i + k <= n
  int i_min = 0, i_max = 0;
  KRange convention = KRange::FromZero;
  std::vector<std::pair<int, int>> violations;  // (k, i) with negative sign

  bool satisfied() const { return violations.empty(); }
};

// Tests Delta^k d(i) >= 0 for k >= k_min(convention), i >= 0, i + k <= n.
PositivityReport test_graph_positivity(const MatchingVector& m, int r,
                                       KRange convention = KRange::FromZero,
                                       std::string graph_id = "");

// Tests Delta^k u(i) >= 0 for k >= 2, i >= 0, i + k <= n.
PositivityReport test_virial_positivity(const MatchingVector& m,
                                        std::string graph_id = "");

const char* positivity_test_name(PositivityTest test);

}  // namespace dimerlab
