#include "samplemine/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "samplemine/errors.hpp"
#include "samplemine/rng.hpp"

namespace samplemine {

TransactionDataset parse_fimi(std::istream& in) {
  TransactionDataset d;
  std::string line;
  std::uint64_t line_no = 0;
  std::uint64_t max_id = 0;
  bool any_item = false;
  while (std::getline(in, line)) {
    ++line_no;
    Transaction t;
    const char* p = line.data();
    const char* end = p + line.size();
    while (p != end) {
      if (*p == ' ' || *p == '\t' || *p == '\r') {
        ++p;
        continue;
      }
      item_id v = 0;
      auto [next, ec] = std::from_chars(p, end, v);
      if (ec != std::errc{} || (next != end && *next != ' ' && *next != '\t' && *next != '\r')) {
        std::ostringstream msg;
        msg << "line " << line_no << ": expected a non-negative integer item id, got '";
        while (p != end && *p != ' ' && *p != '\t' && *p != '\r') msg << *p++;
        msg << "'";
        throw data_error(msg.str());
      }
      t.push_back(v);
      p = next;
    }
    if (t.empty()) continue;  // blank (or whitespace-only) line
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    max_id = std::max<std::uint64_t>(max_id, t.back());
    any_item = true;
    d.transactions.push_back(std::move(t));
  }
  if (d.transactions.empty()) throw data_error("no transactions found in input");
  d.universe_size = any_item ? max_id + 1 : 0;
  return d;
}

TransactionDataset load_fimi(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open dataset file: " + path);
  try {
    return parse_fimi(in);
  } catch (const data_error& e) {
    throw data_error(path + ": " + e.what());
  }
}

void write_fimi(const TransactionDataset& d, std::ostream& out) {
  if (d.transactions.empty()) throw data_error("refusing to write an empty dataset");
  for (const auto& t : d.transactions) {
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (i) out << ' ';
      out << t[i];
    }
    out << '\n';
  }
  if (!out) throw data_error("write failed");
}

void save_fimi(const TransactionDataset& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot open output file: " + path);
  write_fimi(d, out);
}

std::vector<std::uint64_t> sample_indices(std::uint64_t dataset_size, std::uint64_t t,
                                          std::uint64_t seed) {
  if (dataset_size == 0) throw std::invalid_argument("cannot sample from an empty dataset");
  Rng rng(seed);
  std::vector<std::uint64_t> idx(t);
  for (auto& i : idx) i = rng.bounded(dataset_size);
  return idx;
}

TransactionDataset sample_with_replacement(const TransactionDataset& d, std::uint64_t t,
                                           std::uint64_t seed) {
  TransactionDataset s;
  s.universe_size = d.universe_size;
  s.transactions.reserve(t);
  for (std::uint64_t i : sample_indices(d.size(), t, seed)) {
    s.transactions.push_back(d.transactions[i]);
  }
  return s;
}

TransactionDataset gen_lowerbound_dataset(std::uint64_t k, std::uint64_t ell, double p_k,
                                          double eps, std::uint64_t n_transactions,
                                          std::uint64_t seed) {
  if (k == 0 || ell == 0) throw std::invalid_argument("k and ell must be positive");
  if (n_transactions == 0) throw std::invalid_argument("n_transactions must be positive");
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (!(p_k > 2.0 * eps))
    throw std::invalid_argument("need p_k > 2*eps so the planted gap stays positive");
  if (!(p_k - p_k * p_k > eps))
    throw std::invalid_argument("need p_k - p_k^2 > eps (pairs must fall below the tail band)");
  const double p_ell = p_k - 2.0 * eps;
  Rng rng(seed);
  TransactionDataset d;
  d.universe_size = k + ell;
  d.transactions.resize(n_transactions);
  for (auto& t : d.transactions) {
    for (std::uint64_t i = 0; i < k + ell; ++i) {
      const double p = i < k ? p_k : p_ell;
      if (rng.unit() < p) t.push_back(static_cast<item_id>(i));
    }
    // empty transactions are kept: they dilute every frequency, which is the
    // point of the construction
  }
  return d;
}

TransactionDataset gen_planted_dataset(std::uint64_t ell, std::uint64_t n,
                                       std::uint64_t n_copies) {
  if (ell == 0 || n <= ell) throw std::invalid_argument("need 1 <= ell < n");
  if (n_copies == 0) throw std::invalid_argument("n_copies must be positive");
  Transaction tau0(ell);
  for (std::uint64_t i = 0; i < ell; ++i) tau0[i] = static_cast<item_id>(i);
  TransactionDataset d;
  d.universe_size = n;
  d.transactions.reserve(n_copies + (n - ell));
  for (std::uint64_t i = 0; i < n_copies; ++i) d.transactions.push_back(tau0);
  for (std::uint64_t i = ell; i < n; ++i) d.transactions.push_back({static_cast<item_id>(i)});
  return d;
}

}  // namespace samplemine
