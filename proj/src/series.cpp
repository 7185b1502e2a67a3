#include "dimerlab/series.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>

namespace dimerlab {

namespace {

void check_nonneg_order(int order) {
  if (order < 0) fail(ErrorCode::InvalidArgument, "series order must be nonnegative");
}

mpz_class u128_to_mpz(unsigned __int128 x) {
  mpz_class hi(static_cast<unsigned long>(x >> 64));
  hi <<= 64;
  return hi + mpz_class(static_cast<unsigned long>(x));
}

}  // namespace

RationalSeries truncate(const RationalSeries& s, int order) {
  check_nonneg_order(order);
  RationalSeries r(order);
  const int keep = std::min(order, s.order());
  for (int k = 0; k <= keep; ++k) r.c[k] = s.c[k];
  return r;
}

RationalSeries add(const RationalSeries& a, const RationalSeries& b) {
  RationalSeries r(std::min(a.order(), b.order()));
  for (int k = 0; k <= r.order(); ++k) r.c[k] = a.c[k] + b.c[k];
  return r;
}

RationalSeries sub(const RationalSeries& a, const RationalSeries& b) {
  RationalSeries r(std::min(a.order(), b.order()));
  for (int k = 0; k <= r.order(); ++k) r.c[k] = a.c[k] - b.c[k];
  return r;
}

RationalSeries mul(const RationalSeries& a, const RationalSeries& b) {
  RationalSeries r(std::min(a.order(), b.order()));
  for (int k = 0; k <= r.order(); ++k)
    for (int j = 0; j <= k; ++j) r.c[k] += a.c[j] * b.c[k - j];
  return r;
}

RationalSeries scale(const RationalSeries& s, const mpq_class& factor) {
  RationalSeries r(s.order());
  for (int k = 0; k <= r.order(); ++k) r.c[k] = s.c[k] * factor;
  return r;
}

RationalSeries zderivative(const RationalSeries& s) {
  RationalSeries r(s.order());
  for (int k = 1; k <= r.order(); ++k) r.c[k] = k * s.c[k];
  return r;
}

RationalSeries inverse(const RationalSeries& s) {
  if (s.order() < 0 || s.c[0] == 0)
    fail(ErrorCode::InvalidArgument, "inverse needs a nonzero constant term");
  RationalSeries r(s.order());
  r.c[0] = 1 / s.c[0];
  for (int k = 1; k <= r.order(); ++k) {
    mpq_class acc;
    for (int j = 1; j <= k; ++j) acc += s.c[j] * r.c[k - j];
    r.c[k] = -acc * r.c[0];
  }
  return r;
}

RationalSeries log_series(const RationalSeries& s) {
  if (s.order() < 0 || s.c[0] != 1)
    fail(ErrorCode::InvalidArgument, "log needs constant term 1");
  const RationalSeries q = mul(zderivative(s), inverse(s));
  RationalSeries r(s.order());
  for (int k = 1; k <= r.order(); ++k) r.c[k] = q.c[k] / k;
  return r;
}

RationalSeries exp_series(const RationalSeries& s) {
  if (s.order() < 0 || s.c[0] != 0)
    fail(ErrorCode::InvalidArgument, "exp needs constant term 0");
  RationalSeries r(s.order());
  r.c[0] = 1;
  for (int k = 1; k <= r.order(); ++k) {
    mpq_class acc;
    for (int j = 1; j <= k; ++j) acc += mpq_class(j) * s.c[j] * r.c[k - j];
    r.c[k] = acc / k;
  }
  return r;
}

RationalSeries compose(const RationalSeries& f, const RationalSeries& g) {
  if (g.order() < 0 || g.c[0] != 0)
    fail(ErrorCode::InvalidArgument, "compose needs inner constant term 0");
  const int order = std::min(f.order(), g.order());
  RationalSeries r(order);
  if (order < 0) return r;
  r.c[0] = f.c[std::min(f.order(), order)];
  for (int j = std::min(f.order(), order) - 1; j >= 0; --j) {
    r = mul(r, truncate(g, order));
    r.c[0] += f.c[j];
  }
  return r;
}

RationalSeries revert(const RationalSeries& s) {
  if (s.order() < 1 || s.c[0] != 0 || s.c[1] == 0)
    fail(ErrorCode::InvalidArgument, "revert needs s(0) == 0 and s'(0) != 0");
  const int order = s.order();
  RationalSeries w(order);
  w.c[1] = 1 / s.c[1];
  for (int k = 2; k <= order; ++k) {
    const RationalSeries comp = compose(s, w);
    w.c[k] = -comp.c[k] / s.c[1];
  }
  return w;
}

namespace {

// Monomer-dimer generating polynomial of the cycle C_L. The wrap bond
// (L-1, 0) is declared up front; it occupies both end sites and is counted
// once at declaration.
std::vector<mpz_class> chain_polynomial(int L, int budget) {
  const int ncnt = budget + 1;
  // index (pend * 2 + wrap) * ncnt + cnt
  std::vector<mpz_class> cur(4 * ncnt), nxt(4 * ncnt);
  cur[0 * ncnt + 0] = 1;
  if (budget >= 1) cur[1 * ncnt + 1] = 1;  // wrap declared
  for (int site = 0; site < L; ++site) {
    for (auto& x : nxt) x = 0;
    for (int pend = 0; pend < 2; ++pend)
      for (int wrap = 0; wrap < 2; ++wrap)
        for (int cnt = 0; cnt < ncnt; ++cnt) {
          const mpz_class& v = cur[(pend * 2 + wrap) * ncnt + cnt];
          if (v == 0) continue;
          const int occ = pend + (wrap && (site == 0 || site == L - 1) ? 1 : 0);
          if (occ > 1) continue;
          nxt[(0 * 2 + wrap) * ncnt + cnt] += v;  // consumed or monomer
          if (occ == 0 && site < L - 1 && cnt + 1 <= budget)
            nxt[(1 * 2 + wrap) * ncnt + cnt + 1] += v;  // bond to the right
        }
    std::swap(cur, nxt);
  }
  std::vector<mpz_class> out(ncnt);
  for (int cnt = 0; cnt < ncnt; ++cnt) out[cnt] = cur[0 * ncnt + cnt] + cur[1 * ncnt + cnt];
  return out;
}

// One vertical-wrap sector of the L x L torus: "wrap" is the set of columns
// whose bond between row L-1 and row 0 is occupied. Cell-by-cell profile DP;
// mask bits at columns >= col are bonds hanging in from the row above, bits
// below col are bonds already sent down to the next row. The horizontal wrap
// bond of each row is declared at the row start (it occupies columns 0 and
// L-1 and is counted at declaration); vertical wrap bonds are counted when
// row L-1 places them, so the row-0 seeding of "wrap" adds no count.
void square_sector_counts(int L, int budget, uint32_t wrap,
                          std::vector<unsigned __int128>& cur,
                          std::vector<unsigned __int128>& nxt,
                          std::vector<unsigned __int128>& out) {
  const uint32_t nmask = 1u << L;
  const int ncnt = budget + 1;
  const int wrap_pop = std::popcount(wrap);
  const size_t dim = static_cast<size_t>(nmask) * ncnt * 4;
  cur.assign(dim, 0);
  nxt.resize(dim);
  auto idx = [ncnt](uint32_t mask, int cnt, int hpend, int hrow) {
    return ((static_cast<size_t>(mask) * ncnt + cnt) * 2 + hpend) * 2 + hrow;
  };
  cur[idx(wrap, 0, 0, 0)] = 1;
  for (int row = 0; row < L; ++row) {
    const bool last_row = (row == L - 1);
    const int cap = last_row ? budget : budget - wrap_pop;
    // declare this row's horizontal wrap bond
    for (uint32_t mask = 0; mask < nmask; ++mask)
      for (int cnt = 0; cnt < ncnt; ++cnt) {
        const unsigned __int128 v = cur[idx(mask, cnt, 0, 0)];
        if (v && cnt + 1 <= cap) cur[idx(mask, cnt + 1, 0, 1)] += v;
      }
    for (int col = 0; col < L; ++col) {
      std::fill(nxt.begin(), nxt.end(), 0);
      const uint32_t bit = 1u << col;
      for (size_t i = 0; i < dim; ++i) {
        const unsigned __int128 v = cur[i];
        if (!v) continue;
        const int hrow = static_cast<int>(i & 1);
        const int hpend = static_cast<int>((i >> 1) & 1);
        const int cnt = static_cast<int>((i >> 2) % ncnt);
        const uint32_t mask = static_cast<uint32_t>((i >> 2) / ncnt);
        const int occ = ((mask >> col) & 1) + hpend +
                        (hrow && (col == 0 || col == L - 1) ? 1 : 0);
        if (occ > 1) continue;
        const uint32_t base = mask & ~bit;
        nxt[idx(base, cnt, 0, hrow)] += v;  // consumed or monomer
        if (occ == 0 && cnt + 1 <= cap) {
          if (col < L - 1) nxt[idx(base, cnt + 1, 1, hrow)] += v;  // horizontal
          if (!last_row || ((wrap >> col) & 1))
            nxt[idx(base | bit, cnt + 1, 0, hrow)] += v;  // vertical down
        }
      }
      std::swap(cur, nxt);
    }
    // this row's wrap bond is fully consumed; fold the flag away
    for (uint32_t mask = 0; mask < nmask; ++mask)
      for (int cnt = 0; cnt < ncnt; ++cnt) {
        unsigned __int128& v = cur[idx(mask, cnt, 0, 1)];
        if (v) {
          cur[idx(mask, cnt, 0, 0)] += v;
          v = 0;
        }
      }
  }
  out.assign(ncnt, 0);
  for (int cnt = 0; cnt < ncnt; ++cnt) out[cnt] = cur[idx(wrap, cnt, 0, 0)];
}

std::vector<mpz_class> square_polynomial(int L, int budget) {
  const uint32_t nmask = 1u << L;
  const uint32_t lmask = nmask - 1;
  auto rotate1 = [&](uint32_t m) { return ((m << 1) | (m >> (L - 1))) & lmask; };
  auto reflect = [&](uint32_t m) {
    uint32_t r = 0;
    for (int i = 0; i < L; ++i)
      if ((m >> i) & 1) r |= 1u << (L - 1 - i);
    return r;
  };
  std::vector<mpz_class> total(budget + 1);
  std::vector<unsigned __int128> cur, nxt, counts;
  std::vector<uint32_t> images;
  // vertical-wrap sectors are equivalent under the dihedral action on columns
  for (uint32_t w = 0; w < nmask; ++w) {
    if (std::popcount(w) > budget) continue;
    images.clear();
    uint32_t m = w;
    for (int rep = 0; rep < 2; ++rep) {
      for (int rot = 0; rot < L; ++rot) {
        images.push_back(m);
        m = rotate1(m);
      }
      m = reflect(m);
    }
    const uint32_t canon = *std::min_element(images.begin(), images.end());
    if (canon != w) continue;
    std::sort(images.begin(), images.end());
    const long orbit =
        std::unique(images.begin(), images.end()) - images.begin();
    square_sector_counts(L, budget, w, cur, nxt, counts);
    for (int k = 0; k <= budget; ++k) {
      if (counts[k] == 0) continue;
      total[k] += orbit * u128_to_mpz(counts[k]);
    }
  }
  return total;
}

}  // namespace

std::vector<mpz_class> torus_partition_polynomial(const LatticeSpec& spec, int max_order) {
  if (spec.length < 3)
    fail(ErrorCode::InvalidArgument, "torus needs L >= 3");
  std::vector<mpz_class> poly;
  if (spec.family == LatticeFamily::Chain) {
    const int full = spec.length / 2;
    const int budget = max_order < 0 ? full : std::min(max_order, full);
    poly = chain_polynomial(spec.length, budget);
  } else {
    const int L = spec.length;
    if (L > 12) fail(ErrorCode::Infeasible, "square torus supported for L <= 12");
    const int full = L * L / 2;
    if (max_order < 0 && L > 10)
      fail(ErrorCode::Infeasible,
           "full square torus polynomial limited to L <= 10; pass a truncation order");
    const int budget = max_order < 0 ? full : std::min(max_order, full);
    if (L > 10 && budget > 26)
      fail(ErrorCode::Infeasible, "square torus truncation order limited to 26 for L > 10");
    poly = square_polynomial(L, budget);
  }
  // coefficients past the polynomial's natural degree are genuine zeros
  if (max_order >= 0 && static_cast<int>(poly.size()) <= max_order) poly.resize(max_order + 1);
  return poly;
}

std::pair<RationalSeries, int> stabilized_free_energy(const std::vector<mpz_class>& poly_a,
                                                      long long sites_a,
                                                      const std::vector<mpz_class>& poly_b,
                                                      long long sites_b, int max_order) {
  check_nonneg_order(max_order);
  if (sites_a < 1 || sites_b < 1)
    fail(ErrorCode::InvalidArgument, "site counts must be positive");
  if (static_cast<int>(poly_a.size()) <= max_order ||
      static_cast<int>(poly_b.size()) <= max_order)
    fail(ErrorCode::InvalidArgument, "polynomial shorter than the requested order");
  auto to_log = [max_order](const std::vector<mpz_class>& poly, long long sites) {
    RationalSeries s(max_order);
    for (int k = 0; k <= max_order; ++k) s.c[k] = mpq_class(poly[k]);
    return scale(log_series(s), mpq_class(1, static_cast<unsigned long>(sites)));
  };
  const RationalSeries fa = to_log(poly_a, sites_a);
  const RationalSeries fb = to_log(poly_b, sites_b);
  int agree = max_order;
  for (int k = 0; k <= max_order; ++k)
    if (fa.c[k] != fb.c[k]) {
      agree = k - 1;
      break;
    }
  return {truncate(fa, std::max(agree, 0)), agree};
}

RationalSeries free_energy_series(LatticeFamily family, int max_order) {
  if (max_order < 1) fail(ErrorCode::InvalidArgument, "series order must be at least 1");
  if (family == LatticeFamily::Chain && max_order > 24)
    fail(ErrorCode::Infeasible, "chain free energy supports order <= 24; achievable order is 24");
  if (family == LatticeFamily::SquareTorus && max_order > 8)
    fail(ErrorCode::Infeasible,
         "square torus free energy supports order <= 8; achievable order is 8");
  // finite-size corrections enter at order L, so both sizes exceed max_order
  const LatticeSpec small{family, max_order + 2};
  const LatticeSpec large{family, max_order + 4};
  const auto poly_a = torus_partition_polynomial(small, max_order);
  const auto poly_b = torus_partition_polynomial(large, max_order);
  auto [f, agree] = stabilized_free_energy(poly_a, small.sites(), poly_b, large.sites(), max_order);
  if (agree < max_order)
    fail(ErrorCode::Unstable, "two-size agreement stable only through order " +
                                  std::to_string(agree < 0 ? 0 : agree));
  return f;
}

EntropyExpansion entropy_coefficients(const RationalSeries& f, int r) {
  if (r < 1) fail(ErrorCode::InvalidArgument, "coordination must be positive");
  const int order = f.order();
  if (order < 2) fail(ErrorCode::InvalidArgument, "entropy extraction needs order >= 2");
  if (f.c[0] != 0)
    fail(ErrorCode::InconsistentLeadingTerm, "free energy must vanish at z = 0");
  const RationalSeries p = scale(zderivative(f), 2);  // dimer coverage 2*z*f'
  if (p.c[1] != r)
    fail(ErrorCode::InconsistentLeadingTerm,
         "leading coverage term does not match coordination " + std::to_string(r));
  const RationalSeries zofp = revert(p);
  // g(p) = r*z(p)/p has constant term 1
  RationalSeries g(order - 1);
  for (int k = 0; k < order; ++k) g.c[k] = r * zofp.c[k + 1];
  const RationalSeries lng = log_series(g);
  RationalSeries half_p_lng(order);  // (p/2) * ln g(p), all in the p variable
  for (int k = 1; k <= order; ++k) half_p_lng.c[k] = lng.c[k - 1] / 2;
  RationalSeries rest(order);  // (1-p)ln(1-p) + p, as a series in p
  for (int k = 2; k <= order; ++k)
    rest.c[k] = mpq_class(1, static_cast<unsigned long>(k) * (k - 1));
  RationalSeries half_p(order);
  half_p.c[1] = mpq_class(1, 2);
  const RationalSeries a = sub(add(sub(compose(f, zofp), half_p_lng), rest), half_p);
  if (a.c[0] != 0 || a.c[1] != 0)
    fail(ErrorCode::InconsistentLeadingTerm, "entropy remainder must start at order 2");
  EntropyExpansion out;
  out.r = r;
  out.order = order;
  out.a.assign(a.c.begin() + 2, a.c.end());
  return out;
}

std::vector<mpq_class> virial_coefficients(const RationalSeries& f) {
  const int order = f.order();
  if (order < 2) fail(ErrorCode::InvalidArgument, "virial extraction needs order >= 2");
  if (f.c[0] != 0)
    fail(ErrorCode::InconsistentLeadingTerm, "free energy must vanish at z = 0");
  const RationalSeries rho = zderivative(f);
  if (rho.c[1] == 0)
    fail(ErrorCode::InconsistentLeadingTerm, "density must have a nonzero leading term");
  const RationalSeries pressure = compose(f, revert(rho));
  if (pressure.c[0] != 0 || pressure.c[1] != 1)
    fail(ErrorCode::InconsistentLeadingTerm, "pressure must start as rho");
  return {pressure.c.begin() + 2, pressure.c.end()};
}

DimensionFit inverse_dimension_fit(int s,
                                   const std::vector<std::pair<mpq_class, mpq_class>>& table) {
  if (s < 2) fail(ErrorCode::InvalidArgument, "fit needs s >= 2");
  for (size_t i = 0; i < table.size(); ++i) {
    if (table[i].first == 0) fail(ErrorCode::InvalidArgument, "dimension must be nonzero");
    for (size_t j = i + 1; j < table.size(); ++j)
      if (table[i].first == table[j].first)
        fail(ErrorCode::SingularSystem,
             "repeated dimension d = " + table[i].first.get_str());
  }
  const int n = s - 1;
  if (static_cast<int>(table.size()) < n)
    fail(ErrorCode::InsufficientData,
         "need at least " + std::to_string(n) + " samples, got " + std::to_string(table.size()));
  // rows: sum_j c_j x^j = value, with x = 1/d
  std::vector<std::vector<mpq_class>> m(n, std::vector<mpq_class>(n + 1));
  for (int i = 0; i < n; ++i) {
    const mpq_class x = 1 / table[i].first;
    mpq_class pw = x;
    for (int j = 0; j < n; ++j) {
      m[i][j] = pw;
      pw *= x;
    }
    m[i][n] = table[i].second;
  }
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int row = col; row < n; ++row)
      if (m[row][col] != 0) {
        pivot = row;
        break;
      }
    if (pivot < 0) fail(ErrorCode::SingularSystem, "singular fit system");
    std::swap(m[col], m[pivot]);
    for (int row = 0; row < n; ++row) {
      if (row == col || m[row][col] == 0) continue;
      const mpq_class factor = m[row][col] / m[col][col];
      for (int j = col; j <= n; ++j) m[row][j] -= factor * m[col][j];
    }
  }
  DimensionFit fit;
  fit.s = s;
  fit.c.resize(n);
  for (int j = 0; j < n; ++j) fit.c[j] = m[j][n] / m[j][j];
  fit.j_min = (s + 1) / 2;
  fit.low_orders_vanish = true;
  for (int j = 1; j < fit.j_min; ++j)
    if (fit.c[j - 1] != 0) fit.low_orders_vanish = false;
  fit.extra_rows_consistent = true;
  for (size_t i = n; i < table.size(); ++i) {
    const mpq_class x = 1 / table[i].first;
    mpq_class acc;
    mpq_class pw = x;
    for (int j = 0; j < n; ++j) {
      acc += fit.c[j] * pw;
      pw *= x;
    }
    if (acc != table[i].second) fit.extra_rows_consistent = false;
  }
  return fit;
}

void write_rational_csv(std::ostream& out, const std::string& key,
                        const std::vector<std::pair<long long, mpq_class>>& rows) {
  out << key << ",numerator,denominator\n";
  for (const auto& [k, q] : rows)
    out << k << ',' << q.get_num().get_str() << ',' << q.get_den().get_str() << '\n';
}

std::vector<std::pair<long long, mpq_class>> read_rational_csv(std::istream& in) {
  std::vector<std::pair<long long, mpq_class>> rows;
  std::string line;
  bool first = true;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string f0, f1, f2;
    const bool shape = static_cast<bool>(std::getline(ls, f0, ',')) &&
                       static_cast<bool>(std::getline(ls, f1, ',')) &&
                       static_cast<bool>(std::getline(ls, f2));
    if (first) {
      first = false;
      // tolerate a header row
      if (f0.find_first_not_of("+-0123456789 \t") != std::string::npos) continue;
    }
    if (!shape) fail(ErrorCode::IoError, "line " + std::to_string(lineno) + ": expected 3 fields");
    try {
      const long long k = std::stoll(f0);
      const mpz_class num(f1);
      const mpz_class den(f2);
      if (den == 0)
        fail(ErrorCode::IoError, "line " + std::to_string(lineno) + ": zero denominator");
      mpq_class q(num, den);
      q.canonicalize();
      rows.emplace_back(k, q);
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      fail(ErrorCode::IoError, "line " + std::to_string(lineno) + ": malformed rational row");
    }
  }
  return rows;
}

}  // namespace dimerlab
