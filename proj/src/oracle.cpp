#include "unshred/oracle.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace unshred {

namespace {

bool has_adjacent_duplicate(const std::vector<BitVec>& lines) {
  for (size_t t = 1; t < lines.size(); ++t)
    if (lines[t] == lines[t - 1]) return true;
  return false;
}

}  // namespace

OracleVerdict oracle_classify(const ShreddedInstance& inst) {
  const uint32_t n = inst.n();
  if (n > kOracleMaxN)
    throw std::invalid_argument("oracle supports n <= 8 only");

  // Sorted d-bit column prefixes required after d rows are fixed, for every
  // depth d.  With n <= 8 a prefix fits one byte of word 0.
  std::vector<std::vector<uint8_t>> want(n + 1);
  for (uint32_t d = 0; d <= n; ++d) {
    want[d].reserve(n);
    for (const BitVec& c : inst.cols())
      want[d].push_back(static_cast<uint8_t>(c.word(0) & ((1u << d) - 1)));
    std::sort(want[d].begin(), want[d].end());
  }

  const auto& rows = inst.rows();
  std::vector<bool> used(n, false);
  std::vector<uint8_t> col_acc(n, 0);  // column prefixes of the fixed rows
  std::vector<uint32_t> order;
  order.reserve(n);
  // Distinct orderings cannot repeat a matrix, but counting the canonical
  // encodings keeps the count correct even if the enumeration ever yields
  // a duplicate.
  std::unordered_set<std::string> matrices;

  std::vector<uint8_t> probe(n);
  const auto prefixes_match = [&](uint32_t d) {
    probe.assign(col_acc.begin(), col_acc.end());
    std::sort(probe.begin(), probe.end());
    return probe == want[d];
  };

  const auto dfs = [&](auto&& self, uint32_t d) -> void {
    if (d == n) {
      std::string enc;
      enc.reserve(size_t{n} * n);
      for (uint32_t s : order) enc += rows[s].to_string();
      matrices.insert(std::move(enc));
      return;
    }
    for (uint32_t s = 0; s < n; ++s) {
      if (used[s]) continue;
      // Identical rows are adjacent in the sorted multiset; taking only the
      // first unused copy enumerates each distinct ordering once.
      if (s > 0 && rows[s] == rows[s - 1] && !used[s - 1]) continue;
      used[s] = true;
      order.push_back(s);
      rows[s].for_each_set(
          [&](uint32_t j) { col_acc[j] |= static_cast<uint8_t>(1u << d); });
      if (prefixes_match(d + 1)) self(self, d + 1);
      rows[s].for_each_set(
          [&](uint32_t j) { col_acc[j] &= static_cast<uint8_t>(~(1u << d)); });
      order.pop_back();
      used[s] = false;
    }
  };
  if (n == 0) {
    matrices.insert(std::string());
  } else {
    dfs(dfs, 0);
  }

  OracleVerdict v;
  v.completion_count = matrices.size();
  if (v.completion_count == 1) {
    v.weakly_reconstructible = true;
    v.strongly_reconstructible = !has_adjacent_duplicate(inst.rows()) &&
                                 !has_adjacent_duplicate(inst.cols());
  }
  return v;
}

}  // namespace unshred
