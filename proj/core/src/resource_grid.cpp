#include "spssim/resource_grid.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include "spssim/assets.hpp"
#include "spssim/errors.hpp"

namespace spssim {

namespace {

// sizeSubchannel-r14 and numSubchannel-r14 value sets of the RRC pool config.
constexpr std::array kAllowedSubchannelSizes = {4,  5,  6,  8,  9,  10, 12, 15, 16, 18,
                                                20, 25, 30, 48, 50, 72, 75, 96, 100};
constexpr std::array kAllowedSubchannelCounts = {1, 3, 5, 8, 10, 15, 20};

template <typename Array>
bool contains(const Array& values, int v) {
  return std::find(values.begin(), values.end(), v) != values.end();
}

}  // namespace

std::string_view to_string(PscchScheme scheme) {
  return scheme == PscchScheme::Adjacent ? "adjacent" : "non_adjacent";
}

PscchScheme pscch_scheme_from_string(std::string_view text) {
  if (text == "adjacent") return PscchScheme::Adjacent;
  if (text == "non_adjacent" || text == "nonadjacent") return PscchScheme::NonAdjacent;
  throw ConfigError("unknown pscch_scheme '" + std::string(text) + "' (adjacent|non_adjacent)");
}

int GridConfig::n_subch() const { return subchannel_count(bandwidth_rbs, subchannel_size); }

int GridConfig::csrs_per_subframe() const {
  return spssim::csrs_per_subframe(n_subch(), l_subch);
}

void GridConfig::validate(bool strict) const {
  if (bandwidth_rbs <= 0 || bandwidth_rbs > kMaxPrb)
    throw ConfigError("grid.bandwidth_rbs must be in [1, 110]");
  if (subchannel_size <= 0) throw ConfigError("grid.subchannel_size must be positive");
  const int n = n_subch();
  if (n < 1) throw ConfigError("grid.subchannel_size exceeds grid.bandwidth_rbs");
  if (l_subch < 1 || l_subch > n)
    throw ConfigError("grid.l_subch must be in [1, n_subch=" + std::to_string(n) + "]");
  if (mcs_index < 0 || mcs_index > kMaxMcsIndex)
    throw ConfigError("grid.mcs must be in [0, 20] (QPSK and 16-QAM only)");
  if (n_pssch_rb < 1) throw ConfigError("grid.n_pssch_rb must be positive");
  const int needed = n_pssch_rb + (pscch_scheme == PscchScheme::Adjacent ? kSciRbs : 0);
  if (needed > csr_rbs()) {
    std::ostringstream msg;
    msg << "grid.n_pssch_rb=" << n_pssch_rb
        << (pscch_scheme == PscchScheme::Adjacent ? " plus 2 SCI RBs" : "")
        << " does not fit in grid.l_subch=" << l_subch << " x grid.subchannel_size="
        << subchannel_size << " RBs";
    throw ConfigError(msg.str());
  }
  if (strict) {
    if (!contains(kAllowedSubchannelSizes, subchannel_size))
      throw ConfigError("grid.subchannel_size=" + std::to_string(subchannel_size) +
                        " is not a signalable sub-channel size (use strict=false to allow)");
    if (!contains(kAllowedSubchannelCounts, n))
      throw ConfigError("n_subch=" + std::to_string(n) +
                        " is not a signalable sub-channel count (use strict=false to allow)");
  }
}

int RbSpan::overlap(const RbSpan& other) const {
  return std::max(0, std::min(end(), other.end()) - std::max(first, other.first));
}

RbSpan tb_rbs(const GridConfig& grid, int start_subch) {
  const int base = start_subch * grid.subchannel_size;
  if (grid.pscch_scheme == PscchScheme::Adjacent) return {base + kSciRbs, grid.n_pssch_rb};
  return {base, grid.n_pssch_rb};
}

RbSpan sci_rbs(const GridConfig& grid, int start_subch) {
  if (grid.pscch_scheme == PscchScheme::Adjacent)
    return {start_subch * grid.subchannel_size, kSciRbs};
  return {grid.bandwidth_rbs + kSciRbs * start_subch, kSciRbs};
}

McsEntry mcs_entry(int mcs_index) {
  if (mcs_index < 0 || mcs_index > kMaxMcsIndex)
    throw LookupError("MCS index " + std::to_string(mcs_index) + " outside [0, 20]");
  if (mcs_index <= 10) return {mcs_index, 2, mcs_index};
  return {mcs_index, 4, mcs_index - 1};
}

TbsTable TbsTable::parse(std::string_view text) {
  TbsTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream row_in(line);
    std::vector<int> row;
    int value = 0;
    while (row_in >> value) row.push_back(value);
    if (!row_in.eof()) throw ConfigError("TBS table: non-numeric entry in row " +
                                         std::to_string(table.rows_.size()));
    if (!table.rows_.empty() && row.size() != table.rows_.front().size())
      throw ConfigError("TBS table: ragged row " + std::to_string(table.rows_.size()));
    table.rows_.push_back(std::move(row));
  }
  if (table.rows_.empty()) throw ConfigError("TBS table: no rows");
  return table;
}

const TbsTable& TbsTable::standard() {
  static const TbsTable table = parse(assets::tbs_table_text());
  return table;
}

int TbsTable::lookup(int tbs_index, int n_rb) const {
  if (tbs_index < 0 || tbs_index >= rows())
    throw LookupError("TBS index " + std::to_string(tbs_index) + " outside table");
  if (n_rb < 1 || n_rb > max_prb())
    throw LookupError("N_PRB " + std::to_string(n_rb) + " outside [1, " +
                      std::to_string(max_prb()) + "]");
  return rows_[static_cast<std::size_t>(tbs_index)][static_cast<std::size_t>(n_rb - 1)];
}

int subchannel_count(int bandwidth_rbs, int subchannel_size) {
  if (subchannel_size <= 0) throw ConfigError("sub-channel size must be positive");
  if (bandwidth_rbs <= 0) throw ConfigError("bandwidth must be positive");
  return bandwidth_rbs / subchannel_size;
}

int csrs_per_subframe(int n_subch, int l_subch) {
  if (l_subch <= 0 || l_subch > n_subch)
    throw ConfigError("l_subch must be in [1, n_subch]");
  return n_subch / l_subch;
}

int tb_size(int mcs_index, int n_rb) {
  return TbsTable::standard().lookup(mcs_entry(mcs_index).tbs_index, n_rb);
}

double effective_code_rate(int tb_size_bits, int q, int n_rb) {
  if (tb_size_bits <= 0 || q <= 0 || n_rb <= 0)
    throw DomainError("effective_code_rate needs positive inputs");
  return static_cast<double>(tb_size_bits) /
         (static_cast<double>(q) * kDataSymbolsPerSubcarrier * kSubcarriersPerRb * n_rb);
}

int min_rbs_for_payload(int mcs_index, int payload_bits, int max_rbs) {
  const auto entry = mcs_entry(mcs_index);
  const auto& table = TbsTable::standard();
  const int limit = std::min(max_rbs, table.max_prb());
  // Monotone in N_PRB, so a binary search finds the first fit.
  int lo = 1;
  int hi = limit;
  if (limit < 1 || table.lookup(entry.tbs_index, limit) < payload_bits)
    throw CapacityError("payload of " + std::to_string(payload_bits) +
                        " bits does not fit MCS " + std::to_string(mcs_index) + " within " +
                        std::to_string(max_rbs) + " RBs");
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    if (table.lookup(entry.tbs_index, mid) >= payload_bits)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

std::vector<int> csr_starts(const GridConfig& grid) {
  std::vector<int> starts;
  const int count = grid.csrs_per_subframe();
  starts.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) starts.push_back(i * grid.l_subch);
  return starts;
}

}  // namespace spssim
