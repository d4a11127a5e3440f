#include "samplemine/miner.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "samplemine/errors.hpp"
#include "samplemine/schedule.hpp"

namespace samplemine {

bool canonical_less(const Itemset& a, std::uint64_t support_a, const Itemset& b,
                    std::uint64_t support_b) {
  if (support_a != support_b) return support_a > support_b;
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::uint64_t subset_count(std::uint64_t len, std::uint32_t w) {
  // sum_{i=1..min(w,len)} C(len, i), saturating
  const std::uint64_t kMax = ~0ULL;
  std::uint64_t total = 0;
  std::uint64_t c = 1;  // C(len, i), built incrementally
  const std::uint64_t top = std::min<std::uint64_t>(w, len);
  for (std::uint64_t i = 1; i <= top; ++i) {
    // c := c * (len - i + 1) / i, exact since C(len,i) is an integer
    std::uint64_t num = len - i + 1;
    if (c > kMax / num) return kMax;
    c = c * num / i;
    if (total > kMax - c) return kMax;
    total += c;
  }
  return total;
}

void for_each_itemset(const Transaction& t, std::uint32_t w,
                      const std::function<void(const Itemset&)>& sink) {
  const std::size_t n = t.size();
  const std::uint32_t top = static_cast<std::uint32_t>(std::min<std::size_t>(w, n));
  Itemset buf;
  std::vector<std::size_t> pos;
  for (std::uint32_t size = 1; size <= top; ++size) {
    // first combination: 0,1,...,size-1
    pos.assign(size, 0);
    for (std::uint32_t i = 0; i < size; ++i) pos[i] = i;
    buf.resize(size);
    while (true) {
      for (std::uint32_t i = 0; i < size; ++i) buf[i] = t[pos[i]];
      sink(buf);
      // next lexicographic combination
      std::uint32_t i = size;
      while (i > 0 && pos[i - 1] == n - size + (i - 1)) --i;
      if (i == 0) break;
      ++pos[i - 1];
      for (std::uint32_t j = i; j < size; ++j) pos[j] = pos[j - 1] + 1;
    }
  }
}

std::vector<Itemset> enumerate_itemsets(const Transaction& t, std::uint32_t w) {
  std::vector<Itemset> out;
  for_each_itemset(t, w, [&](const Itemset& x) { out.push_back(x); });
  return out;
}

namespace {

void count_range(CountTable& table, const TransactionDataset& d, std::uint64_t from,
                 std::uint64_t to, std::uint32_t w, const CountOptions& opts,
                 std::uint64_t already_enumerated) {
  if (w == 0) throw std::invalid_argument("w must be at least 1");
  std::uint64_t budget_used = already_enumerated;
  for (std::uint64_t i = from; i < to; ++i) {
    const Transaction& t = d.transactions[i];
    const std::uint64_t cost = subset_count(t.size(), w);
    if (cost > opts.max_enumerated - budget_used) {
      std::ostringstream msg;
      msg << "subset enumeration budget exceeded: transaction " << i << " (length " << t.size()
          << ", w=" << w << ") would pass " << opts.max_enumerated
          << " enumerated subsets; raise the limit or lower w";
      throw resource_error(msg.str());
    }
    budget_used += cost;
    for_each_itemset(t, w, [&](const Itemset& x) { ++table.support[x]; });
    ++table.total;
  }
}

}  // namespace

CountTable count_itemsets(const TransactionDataset& d, std::uint32_t w,
                          const CountOptions& opts) {
  CountTable table;
  count_range(table, d, 0, d.size(), w, opts, 0);
  return table;
}

void count_itemsets_into(CountTable& table, const TransactionDataset& d, std::uint64_t from,
                         std::uint64_t to, std::uint32_t w, const CountOptions& opts) {
  if (from > to || to > d.size()) throw std::invalid_argument("bad transaction range");
  count_range(table, d, from, to, w, opts, 0);
}

TopKResult top_k(const CountTable& table, std::uint64_t k, std::uint32_t w,
                 std::uint64_t universe_size) {
  if (k == 0) throw std::invalid_argument("k must be at least 1");
  const big_int m = universe_count(universe_size, w);
  if (big_int(k) > m) {
    std::ostringstream msg;
    msg << "k=" << k << " exceeds the number of itemsets of size <= " << w << " over "
        << universe_size << " items (" << m << ")";
    throw std::invalid_argument(msg.str());
  }

  std::vector<TopKResult::Entry> all;
  all.reserve(table.support.size());
  for (const auto& [items, support] : table.support) {
    all.push_back({items, support});
  }
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    return canonical_less(a.items, a.support, b.items, b.support);
  });

  TopKResult r;
  r.total = table.total;
  if (all.size() < k) {
    // the K-th itemset in canonical order is absent from the table, so the
    // frequency threshold degenerates to 0; report what occurs
    r.entries = std::move(all);
    r.threshold_support = 0;
    r.deficient = true;
    return r;
  }
  r.threshold_support = all[k - 1].support;
  std::size_t cut = k;
  while (cut < all.size() && all[cut].support >= r.threshold_support) ++cut;
  all.resize(cut);
  r.entries = std::move(all);
  return r;
}

RankView make_rank_view(const CountTable& table) {
  RankView v;
  v.total = table.total;
  v.sorted_supports.reserve(table.support.size());
  for (const auto& [items, support] : table.support) v.sorted_supports.push_back(support);
  std::sort(v.sorted_supports.begin(), v.sorted_supports.end(), std::greater<>());
  return v;
}

std::uint64_t RankView::support_at(const big_int& rank) const {
  if (rank < 1) throw std::invalid_argument("rank is 1-based");
  if (rank > big_int(sorted_supports.size())) return 0;
  return sorted_supports[static_cast<std::size_t>(rank - 1)];
}

double RankView::frequency_at(const big_int& rank) const {
  return total == 0 ? 0.0 : static_cast<double>(support_at(rank)) / static_cast<double>(total);
}

double rank_frequency(const CountTable& table, const big_int& rank, const big_int& m) {
  if (rank < 1 || rank > m) throw std::invalid_argument("rank must lie in [1, m]");
  return make_rank_view(table).frequency_at(rank);
}

}  // namespace samplemine
