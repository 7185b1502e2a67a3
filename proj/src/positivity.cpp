#include "dimerlab/positivity.hpp"

#include <cmath>
#include <map>
#include <optional>

namespace dimerlab {

namespace {

// ln of a positive big integer as (value, conservative absolute error).
std::pair<double, double> log_mpz(const mpz_class& z) {
  signed long e = 0;
  const double mant = mpz_get_d_2exp(&e, z.get_mpz_t());
  const double val = std::log(mant) + static_cast<double>(e) * M_LN2;
  return {val, (std::fabs(val) + 1.0) * 1e-14};
}

struct FloatSum {
  double value = 0.0;
  double error = 0.0;
};

FloatSum float_eval(const TermList& terms) {
  FloatSum out;
  for (const auto& t : terms) {
    const auto [ln_num, err_num] = log_mpz(t.num);
    const auto [ln_den, err_den] = log_mpz(t.den);
    const double l = ln_num - ln_den;
    const double e = static_cast<double>(t.exp);
    out.value += e * l;
    out.error += std::fabs(e) * (err_num + err_den + (std::fabs(l) + 1.0) * 1e-14);
  }
  return out;
}

}  // namespace

int delta_sign(const TermList& terms) {
  std::map<std::pair<mpz_class, mpz_class>, long long> merged;
  for (const auto& t : terms) {
    if (t.num < 1 || t.den < 1)
      fail(ErrorCode::InvalidArgument, "log ratio parts must be positive");
    if (t.exp == 0 || t.num == t.den) continue;
    merged[{t.num, t.den}] += t.exp;
  }

  TermList reduced;
  reduced.reserve(merged.size());
  for (const auto& [key, e] : merged)
    if (e != 0) reduced.push_back({key.first, key.second, e});
  if (reduced.empty()) return 0;

  const FloatSum f = float_eval(reduced);
  if (std::fabs(f.value) > f.error) return f.value > 0 ? 1 : -1;

  mpz_class lhs = 1, rhs = 1, pw;
  for (const auto& t : reduced) {
    const unsigned long e = static_cast<unsigned long>(t.exp > 0 ? t.exp : -t.exp);
    if (t.exp > 0) {
      mpz_pow_ui(pw.get_mpz_t(), t.num.get_mpz_t(), e);
      lhs *= pw;
      mpz_pow_ui(pw.get_mpz_t(), t.den.get_mpz_t(), e);
      rhs *= pw;
    } else {
      mpz_pow_ui(pw.get_mpz_t(), t.den.get_mpz_t(), e);
      lhs *= pw;
      mpz_pow_ui(pw.get_mpz_t(), t.num.get_mpz_t(), e);
      rhs *= pw;
    }
  }
  return cmp(lhs, rhs) > 0 ? 1 : (cmp(lhs, rhs) < 0 ? -1 : 0);
}

TermList d_terms(const MatchingVector& m, int r, int i) {
  if (i < 0 || i > m.n) fail(ErrorCode::IndexOutOfRange, "matching index " + std::to_string(i));
  const int v = 2 * m.n;
  if (m.counts[i] < 1)
    fail(ErrorCode::InvalidArgument, "zero matching count at index " + std::to_string(i));
  TermList out;
  out.push_back({m.counts[i], 1, 1});
  if (i > 0) {
    out.push_back({mpz_class(r), 1, -i});
    out.push_back({mpz_class(v - 1), 1, i});
  }
  out.push_back({complete_graph_matchings(v, i), 1, -1});
  return out;
}

TermList u_terms(const MatchingVector& m, int i) {
  if (i < 0 || i > m.n) fail(ErrorCode::IndexOutOfRange, "matching index " + std::to_string(i));
  if (m.counts[i] < 1)
    fail(ErrorCode::InvalidArgument, "zero matching count at index " + std::to_string(i));
  mpz_class fac;
  mpz_fac_ui(fac.get_mpz_t(), i);
  TermList out;
  out.push_back({fac, 1, -1});
  out.push_back({m.counts[i], 1, -1});
  return out;
}

TermList finite_difference(const std::function<TermList(int)>& f, int k, int i) {
  if (k < 0 || i < 0) fail(ErrorCode::IndexOutOfRange, "negative difference index");
  if (k > 40) fail(ErrorCode::TooLarge, "difference order exceeds 40");
  TermList out;
  mpz_class binom;
  for (int j = 0; j <= k; ++j) {
    mpz_bin_uiui(binom.get_mpz_t(), k, j);
    const long long c = ((k - j) % 2 == 0 ? 1 : -1) * binom.get_si();
    for (LogRatioTerm t : f(i + j)) {
      t.exp *= c;
      if (t.exp != 0) out.push_back(std::move(t));
    }
  }
  return out;
}

namespace {

// Shared sweep over all (k, i) pairs: a per-pair floating interval from the
// precomputed per-index values settles most signs, the rest go through
// delta_sign on assembled term lists.
std::vector<std::pair<int, int>> scan_differences(
    int n, int k_min, const std::function<TermList(int)>& family) {
  std::vector<double> val(n + 1), errb(n + 1);
  for (int i = 0; i <= n; ++i) {
    const FloatSum f = float_eval(family(i));
    val[i] = f.value;
    errb[i] = f.error;
  }

  std::vector<std::vector<double>> binom(n + 1, std::vector<double>(n + 1, 0.0));
  for (int k = 0; k <= n; ++k) {
    binom[k][0] = 1.0;
    for (int j = 1; j <= k; ++j)
      binom[k][j] = binom[k - 1][j - 1] + (j <= k - 1 ? binom[k - 1][j] : 0.0);
  }

  std::vector<std::pair<int, int>> violations;
  for (int k = k_min; k <= n; ++k) {
    for (int i = 0; i + k <= n; ++i) {
      double s = 0.0, e = 0.0;
      for (int j = 0; j <= k; ++j) {
        const double c = binom[k][j];
        s += ((k - j) % 2 == 0 ? c : -c) * val[i + j];
        e += c * (errb[i + j] + std::fabs(val[i + j]) * 1e-14);
      }
      int sign;
      if (std::fabs(s) > e)
        sign = s > 0 ? 1 : -1;
      else
        sign = delta_sign(finite_difference(family, k, i));
      if (sign < 0) violations.emplace_back(k, i);
    }
  }
  return violations;
}

}  // namespace

PositivityReport test_graph_positivity(const MatchingVector& m, int r,
                                       KRange convention, std::string graph_id) {
  const int n = m.n;
  std::vector<std::optional<TermList>> cache(n + 1);
  auto family = [&](int i) -> TermList {
    if (i < 0 || i > n) fail(ErrorCode::IndexOutOfRange, "difference reaches past m_n");
    if (!cache[i]) cache[i] = d_terms(m, r, i);
    return *cache[i];
  };

  PositivityReport report;
  report.graph_id = std::move(graph_id);
  report.test = PositivityTest::GraphPositivity;
  report.convention = convention;
  report.k_min = convention == KRange::FromZero ? 0 : 2;
  report.k_max = n;
  report.i_min = 0;
  report.i_max = n - report.k_min;
  report.violations = scan_differences(n, report.k_min, family);
  return report;
}

PositivityReport test_virial_positivity(const MatchingVector& m, std::string graph_id) {
  const int n = m.n;
  std::vector<std::optional<TermList>> cache(n + 1);
  auto family = [&](int i) -> TermList {
    if (i < 0 || i > n) fail(ErrorCode::IndexOutOfRange, "difference reaches past m_n");
    if (!cache[i]) cache[i] = u_terms(m, i);
    return *cache[i];
  };

  PositivityReport report;
  report.graph_id = std::move(graph_id);
  report.test = PositivityTest::VirialPositivity;
  report.convention = KRange::FromTwo;
  report.k_min = 2;
  report.k_max = n;
  report.i_min = 0;
  report.i_max = n - 2;
  report.violations = scan_differences(n, 2, family);
  return report;
}

const char* positivity_test_name(PositivityTest test) {
  return test == PositivityTest::GraphPositivity ? "graph-positivity" : "virial-positivity";
}

}  // namespace dimerlab
