#pragma once

#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

#include "samplemine/bigint.hpp"
#include "samplemine/dataset.hpp"

namespace samplemine {

// A non-empty sorted set of item ids, |x| <= w.
using Itemset = std::vector<item_id>;

struct ItemsetHash {
  std::size_t operator()(const Itemset& x) const noexcept {
    // FNV-1a over the id bytes; itemsets are short, quality is plenty.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (item_id v : x) {
      for (int i = 0; i < 4; ++i) {
        h ^= (v >> (8 * i)) & 0xff;
        h *= 0x100000001b3ULL;
      }
    }
    return static_cast<std::size_t>(h);
  }
};

// Exact support counts over one dataset (or sample).  frequency(x) is
// support[x] / total where total is the number of transactions counted.
struct CountTable {
  std::unordered_map<Itemset, std::uint64_t, ItemsetHash> support;
  std::uint64_t total = 0;

  std::uint64_t support_of(const Itemset& x) const {
    auto it = support.find(x);
    return it == support.end() ? 0 : it->second;
  }
  double frequency(const Itemset& x) const {
    return total == 0 ? 0.0 : static_cast<double>(support_of(x)) / static_cast<double>(total);
  }
};

struct CountOptions {
  // Hard ceiling on the number of subsets enumerated in one counting pass.
  // Exceeding it throws resource_error before the pass would blow up; there is
  // no silent truncation.
  std::uint64_t max_enumerated = 100'000'000;
};

// Canonical order: frequency descending, ties by lexicographic itemset
// ascending.  Itemsets absent from a table rank after all present ones with
// frequency 0.  Every ranked definition in this library refers to this order.
bool canonical_less(const Itemset& a, std::uint64_t support_a, const Itemset& b,
                    std::uint64_t support_b);

// Number of non-empty subsets of size <= w of a transaction with `len` items,
// saturated at 2^64-1.
std::uint64_t subset_count(std::uint64_t len, std::uint32_t w);

// Calls sink(x) for every non-empty subset x of t with |x| <= w, smallest
// sizes first, lexicographic within a size.
void for_each_itemset(const Transaction& t, std::uint32_t w,
                      const std::function<void(const Itemset&)>& sink);

// Materialized variant (test- and demo-friendly).
std::vector<Itemset> enumerate_itemsets(const Transaction& t, std::uint32_t w);

// One exact counting pass over the whole dataset.
CountTable count_itemsets(const TransactionDataset& d, std::uint32_t w,
                          const CountOptions& opts = {});

// Incremental variant used by the sample-extension mode: counts only
// d.transactions[from, to) into an existing table.
void count_itemsets_into(CountTable& table, const TransactionDataset& d, std::uint64_t from,
                         std::uint64_t to, std::uint32_t w, const CountOptions& opts = {});

struct TopKResult {
  struct Entry {
    Itemset items;
    std::uint64_t support = 0;
  };
  std::vector<Entry> entries;     // canonical order
  std::uint64_t total = 0;        // transactions behind the table
  std::uint64_t threshold_support = 0;
  bool deficient = false;         // fewer than K itemsets had nonzero frequency

  double threshold() const {
    return total == 0 ? 0.0
                      : static_cast<double>(threshold_support) / static_cast<double>(total);
  }
  double frequency(std::size_t i) const {
    return static_cast<double>(entries[i].support) / static_cast<double>(total);
  }
};

// All itemsets whose frequency reaches that of the K-th itemset in canonical
// order (so ties at the threshold are all included and |entries| >= K when at
// least K itemsets occur).  When fewer than K occur, returns exactly the
// occurring ones with threshold 0 and deficient=true.  Throws
// std::invalid_argument when K exceeds the universe count m.
TopKResult top_k(const CountTable& table, std::uint64_t k, std::uint32_t w,
                 std::uint64_t universe_size);

// Supports sorted descending; answers "frequency of the r-th itemset in
// canonical order" without materializing itemset identities.
struct RankView {
  std::vector<std::uint64_t> sorted_supports;
  std::uint64_t total = 0;

  std::uint64_t support_at(const big_int& rank) const;  // 1-based
  double frequency_at(const big_int& rank) const;
};

RankView make_rank_view(const CountTable& table);

// Frequency of the itemset at `rank` (1-based) in canonical order; 0 beyond
// the nonzero entries.  Throws std::invalid_argument unless 1 <= rank <= m.
double rank_frequency(const CountTable& table, const big_int& rank, const big_int& m);

}  // namespace samplemine
