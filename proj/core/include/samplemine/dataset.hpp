#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace samplemine {

using item_id = std::uint32_t;

// Items are kept sorted ascending with no duplicates; every constructor-side
// routine (parser, generators, samplers) establishes this invariant.
using Transaction = std::vector<item_id>;

struct TransactionDataset {
  std::vector<Transaction> transactions;
  // 1 + max item id (or declared universe for generated data).  Every item id
  // in `transactions` is < universe_size.
  std::uint64_t universe_size = 0;

  std::uint64_t size() const { return transactions.size(); }
};

// Parses the whitespace-separated ASCII transaction format: one transaction
// per line, items are decimal ids.  Blank lines are skipped, duplicate items
// within a line are dropped, items are sorted.  Throws data_error on a
// non-integer token (with line number) or if no transaction was found.
TransactionDataset parse_fimi(std::istream& in);
TransactionDataset load_fimi(const std::string& path);

// Inverse of parse_fimi for datasets without empty transactions (an empty
// transaction writes a blank line, which parse_fimi skips).
void write_fimi(const TransactionDataset& d, std::ostream& out);
void save_fimi(const TransactionDataset& d, const std::string& path);

// t independent uniform draws from [0, dataset_size).
std::vector<std::uint64_t> sample_indices(std::uint64_t dataset_size, std::uint64_t t,
                                          std::uint64_t seed);

// Uniform sample of t transactions, with replacement.  Deterministic for a
// fixed seed; the result keeps the draw order and declares the same universe.
TransactionDataset sample_with_replacement(const TransactionDataset& d, std::uint64_t t,
                                           std::uint64_t seed);

// Synthetic family for undersampling experiments: items 0..k-1 appear
// independently with probability p_k, items k..k+ell-1 with p_k - 2*eps.
// Requires p_k > 2*eps and p_k - p_k^2 > eps.  Transactions may come out
// empty; they are kept (they still count toward frequencies).
TransactionDataset gen_lowerbound_dataset(std::uint64_t k, std::uint64_t ell, double p_k,
                                          double eps, std::uint64_t n_transactions,
                                          std::uint64_t seed);

// Deterministic early-stop family: n_copies copies of {0..ell-1} followed by
// one singleton {i} for each i in [ell, n).  Requires 1 <= ell < n.
TransactionDataset gen_planted_dataset(std::uint64_t ell, std::uint64_t n,
                                       std::uint64_t n_copies);

}  // namespace samplemine
