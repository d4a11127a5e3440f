#include "samplemine/schedule.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <boost/math/constants/constants.hpp>

#include "samplemine/errors.hpp"

namespace samplemine {

namespace {

using boost::multiprecision::ceil;
using boost::multiprecision::floor;
using boost::multiprecision::log;
using boost::multiprecision::pow;

std::uint64_t to_u64_size(const big_float& v, const char* what) {
  if (v > big_float(9'000'000'000'000'000'000.0)) {
    std::ostringstream msg;
    msg << what << " does not fit a 64-bit size (" << v << "); eps is too small for this tool";
    throw resource_error(msg.str());
  }
  return static_cast<std::uint64_t>(static_cast<big_int>(v));
}

big_float euler_e() { return boost::math::constants::e<big_float>(); }

}  // namespace

void ApproxParams::validate() const {
  if (k == 0) throw std::invalid_argument("k must be at least 1");
  if (w == 0) throw std::invalid_argument("w must be at least 1");
  if (!(eps > 0.0) || !(eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
  if (!(delta > 0.0) || !(delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
}

big_int universe_count(std::uint64_t n, std::uint32_t w) {
  if (n == 0) throw std::invalid_argument("universe must contain at least one item");
  if (w == 0 || w > n)
    throw std::invalid_argument("need 1 <= w <= n for the itemset universe to make sense");
  big_int total = 0;
  big_int c = 1;  // C(n, i), exact at every step
  for (std::uint64_t i = 1; i <= w; ++i) {
    c = c * (n - i + 1) / i;
    total += c;
  }
  return total;
}

double sufficient_sample_size_real(const ApproxParams& p, const big_int& m) {
  p.validate();
  if (big_int(p.k) > m) throw std::invalid_argument("k exceeds the itemset universe");
  const big_int a = 2 * m + big_int(p.k) * (m - big_int(p.k));
  const big_float t =
      (big_float(2) / (big_float(p.eps) * big_float(p.eps))) * log(big_float(a) / big_float(p.delta));
  return static_cast<double>(t);
}

std::uint64_t sufficient_sample_size(const ApproxParams& p, const big_int& m) {
  p.validate();
  if (big_int(p.k) > m) throw std::invalid_argument("k exceeds the itemset universe");
  const big_int a = 2 * m + big_int(p.k) * (m - big_int(p.k));
  const big_float t =
      (big_float(2) / (big_float(p.eps) * big_float(p.eps))) * log(big_float(a) / big_float(p.delta));
  return to_u64_size(ceil(t), "sample-size bound");
}

TailBounds tail_bounds(double eps, std::uint64_t t) {
  if (!(eps > 0.0) || !(eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
  if (t == 0) throw std::invalid_argument("t must be at least 1");
  const double x = std::exp(-eps * eps * static_cast<double>(t) / 2.0);
  return {std::min(1.0, x), std::min(1.0, 2.0 * x)};
}

bool frequency_gap_exceeds(std::uint64_t sup_hi, std::uint64_t sup_lo, std::uint64_t total,
                           std::uint64_t factor, double eps) {
  if (total == 0) throw std::invalid_argument("empty sample");
  if (sup_hi < sup_lo) return false;
  // conversion from double is exact, so ties resolve exactly
  const big_rational lhs(big_int(sup_hi - sup_lo), big_int(total));
  const big_rational rhs = big_rational(eps) * big_int(factor);
  return lhs > rhs;
}

std::uint64_t PhaseSchedule::phase_size(std::uint32_t j) const {
  const big_float inv = big_float(8) / (big_float(params.eps) * big_float(params.eps));
  const big_float base = log(big_float(8) * big_float(params.k) / big_float(params.delta));
  const std::uint64_t t_j = to_u64_size(ceil(inv * (base + big_float(j))), "phase size");
  if (geometric_factor <= 1.0) return t_j;
  const big_float geo = ceil(inv * base * pow(big_float(geometric_factor), big_float(j)));
  return std::max(t_j, to_u64_size(geo, "phase size"));
}

PhaseSchedule make_schedule(const ApproxParams& p, std::uint64_t universe_size,
                            std::uint64_t dataset_size, double geometric_factor) {
  p.validate();
  if (!(geometric_factor >= 1.0))
    throw std::invalid_argument("geometric factor must be >= 1");
  PhaseSchedule s;
  s.params = p;
  s.universe_size = universe_size;
  s.m = universe_count(universe_size, p.w);
  s.sufficient = sufficient_sample_size(p, s.m);
  s.dataset_size = dataset_size;
  s.bound = dataset_size == kNoDatasetSize ? s.sufficient
                                           : std::min(dataset_size, s.sufficient);
  s.geometric_factor = geometric_factor;
  std::uint32_t j = 0;
  while (s.phase_size(j) < s.bound) {
    ++j;
    if (j > 1'000'000) throw resource_error("phase schedule failed to reach its bound");
  }
  s.j_max = j;
  return s;
}

BucketWidths bucket_widths(const PhaseSchedule& sched, std::uint32_t j) {
  const ApproxParams& p = sched.params;
  const big_int& m = sched.m;

  BucketWidths bw;
  const big_float sigma = big_float(p.k) * pow(euler_e() / 2, big_float(j));
  bw.sigma = static_cast<double>(sigma);
  const big_float base = 2 * sigma;  // > 1 whenever k >= 1
  const big_float log10_base = log(base) / log(big_float(10));

  // Exact floors are available while the value stays well inside the float's
  // 100 decimal digits; past that the entry is certainly beyond any universe
  // this tool accepts, so it is clamped to m (only the final entry can hit
  // this, and only its min with m is ever consumed).
  big_int running = 0;  // S[i-1]
  for (std::uint32_t i = 0;; ++i) {
    if (running > m - 1) break;
    const big_float digits = big_float((i + 1)) * big_float((i + 1)) * log10_base;
    big_int s_i;
    if (digits > 90) {
      s_i = m;
    } else {
      s_i = static_cast<big_int>(floor(pow(base, big_float((i + 1) * (i + 1))) / 2));
    }
    running += s_i;
    bw.s.push_back(s_i);
    bw.S.push_back(running);
    bw.h = i;
    if (i > 10'000) throw resource_error("bucket layout failed to cover the universe");
  }
  return bw;
}

}  // namespace samplemine
