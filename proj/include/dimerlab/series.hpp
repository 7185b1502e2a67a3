#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "dimerlab/error.hpp"

namespace dimerlab {

// Truncated formal power series with exact rational coefficients.
// c[k] is the coefficient of z^k; the truncation order is c.size() - 1.
struct RationalSeries {
  std::vector<mpq_class> c;

  RationalSeries() = default;
  explicit RationalSeries(int order) : c(order + 1) {}

  int order() const { return static_cast<int>(c.size()) - 1; }
  const mpq_class& operator[](int k) const {
    if (k < 0 || k > order()) fail(ErrorCode::IndexOutOfRange, "series index " + std::to_string(k));
    return c[k];
  }
  friend bool operator==(const RationalSeries&, const RationalSeries&) = default;
};

RationalSeries truncate(const RationalSeries& s, int order);
RationalSeries add(const RationalSeries& a, const RationalSeries& b);
RationalSeries sub(const RationalSeries& a, const RationalSeries& b);
RationalSeries mul(const RationalSeries& a, const RationalSeries& b);
RationalSeries scale(const RationalSeries& s, const mpq_class& factor);

// z * d/dz, which keeps the truncation order.
RationalSeries zderivative(const RationalSeries& s);

RationalSeries inverse(const RationalSeries& s);     // requires c[0] != 0
RationalSeries log_series(const RationalSeries& s);  // requires c[0] == 1
RationalSeries exp_series(const RationalSeries& s);  // requires c[0] == 0
RationalSeries compose(const RationalSeries& f, const RationalSeries& g);  // g(0) == 0
RationalSeries revert(const RationalSeries& s);  // s(0) == 0, s'(0) != 0

enum class LatticeFamily { Chain, SquareTorus };

struct LatticeSpec {
  LatticeFamily family = LatticeFamily::Chain;
  int length = 0;  // L: sites of the cycle, or linear size of the L x L torus

  int coordination() const { return family == LatticeFamily::Chain ? 2 : 4; }
  long long sites() const {
    return family == LatticeFamily::Chain ? length : static_cast<long long>(length) * length;
  }
};

// Matching generating polynomial of the L-periodic torus: coefficient of
// z^i is m_i. max_order < 0 computes the full polynomial (square tori only
// up to L = 8; larger sizes need a truncation order).
std::vector<mpz_class> torus_partition_polynomial(const LatticeSpec& spec, int max_order = -1);

// ln(polynomial)/sites from two sizes; coefficients are kept while the two
// sizes agree exactly. Returns the truncated series and the agreeing order.
std::pair<RationalSeries, int> stabilized_free_energy(const std::vector<mpz_class>& poly_a,
                                                      long long sites_a,
                                                      const std::vector<mpz_class>& poly_b,
                                                      long long sites_b, int max_order);

// Free energy per site f(z) of the infinite lattice through order K,
// via two-size agreement. Chain: K <= 24. Square torus: K <= 8.
RationalSeries free_energy_series(LatticeFamily family, int max_order);

struct EntropyExpansion {
  int r = 0;
  int order = 0;
  std::vector<mpq_class> a;  // a_k for k = 2..order, stored at index k - 2
};

// Entropy series remainder coefficients a_k of the lattice with free
// energy f and coordination r.
EntropyExpansion entropy_coefficients(const RationalSeries& f, int r);

// Virial coefficients B_2..B_K of the dimer gas with free energy f,
// in the density variable rho = dimers per site.
std::vector<mpq_class> virial_coefficients(const RationalSeries& f);

struct DimensionFit {
  int s = 0;
  std::vector<mpq_class> c;  // c_{s,j} for j = 1..s-1, stored at index j - 1
  int j_min = 0;             // ceil(s/2)
  bool low_orders_vanish = false;   // c_{s,j} == 0 for all j < j_min
  bool extra_rows_consistent = true;
};

// Fits a_s(d) = sum_j c_{s,j} / d^j from exact samples (d, a_s(d)).
DimensionFit inverse_dimension_fit(int s, const std::vector<std::pair<mpq_class, mpq_class>>& table);

// CSV with header "<key>,numerator,denominator", one exact rational per row.
void write_rational_csv(std::ostream& out, const std::string& key,
                        const std::vector<std::pair<long long, mpq_class>>& rows);
std::vector<std::pair<long long, mpq_class>> read_rational_csv(std::istream& in);

}  // namespace dimerlab
