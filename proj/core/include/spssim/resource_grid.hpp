#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <vector>

#include "spssim/units.hpp"

namespace spssim {

inline constexpr int kSciRbs = 2;
inline constexpr int kDataSymbolsPerSubcarrier = 9;
inline constexpr int kSubcarriersPerRb = 12;
inline constexpr int kMaxMcsIndex = 20;
inline constexpr int kMaxPrb = 110;

enum class PscchScheme { Adjacent, NonAdjacent };

std::string_view to_string(PscchScheme scheme);
PscchScheme pscch_scheme_from_string(std::string_view text);

/// Numerology of the sidelink channel shared by every UE in a run.
struct GridConfig {
  int bandwidth_rbs = 50;
  int subchannel_size = 10;
  int l_subch = 2;
  int mcs_index = 5;
  PscchScheme pscch_scheme = PscchScheme::Adjacent;
  /// RBs carrying the transport block. In the adjacent scheme the two SCI
  /// RBs sit in front of these inside the same sub-channels.
  int n_pssch_rb = 18;

  int n_subch() const;
  int csrs_per_subframe() const;
  /// RBs spanned by one CSR (l_subch whole sub-channels).
  int csr_rbs() const { return l_subch * subchannel_size; }

  /// Throws ConfigError on a broken invariant. With `strict`, sub-channel
  /// size and count must also be values the RRC configuration can signal.
  void validate(bool strict) const;

  bool operator==(const GridConfig&) const = default;
};

/// Candidate single-subframe resource: sub-channels
/// {start_subch, ..., start_subch + l_subch - 1} of one subframe.
struct Csr {
  Subframe subframe = 0;
  int start_subch = 0;
  int l_subch = 1;

  int end_subch() const { return start_subch + l_subch; }
  bool overlaps(const Csr& other) const {
    return start_subch < other.end_subch() && other.start_subch < end_subch();
  }

  auto operator<=>(const Csr&) const = default;
};

/// Contiguous RB range [first, first + count).
struct RbSpan {
  int first = 0;
  int count = 0;

  int end() const { return first + count; }
  int overlap(const RbSpan& other) const;
};

/// RBs of one transmission (TB plus SCI); transmit power spreads evenly over them.
inline int transmission_rbs(const GridConfig& grid) { return grid.n_pssch_rb + kSciRbs; }

RbSpan tb_rbs(const GridConfig& grid, int start_subch);
/// SCI RBs. In the non-adjacent scheme these index a separate PSCCH pool
/// placed after the PSSCH bandwidth, so they never overlap data RBs.
RbSpan sci_rbs(const GridConfig& grid, int start_subch);

struct McsEntry {
  int mcs_index = 0;
  int q = 2;          // bits per symbol
  int tbs_index = 0;  // row of the TBS table
};

/// PUSCH modulation / TBS index table reused for PSSCH. Indices above 20
/// would need 64-QAM, which the sidelink does not support.
McsEntry mcs_entry(int mcs_index);

/// Transport block sizes indexed by (TBS index, N_PRB), parsed from the
/// plain-text asset described in core/data/tbs_table.txt.
class TbsTable {
 public:
  static TbsTable parse(std::string_view text);
  /// The embedded standard table.
  static const TbsTable& standard();

  int rows() const { return static_cast<int>(rows_.size()); }
  int max_prb() const { return rows_.empty() ? 0 : static_cast<int>(rows_.front().size()); }
  int lookup(int tbs_index, int n_rb) const;

 private:
  std::vector<std::vector<int>> rows_;
};

int subchannel_count(int bandwidth_rbs, int subchannel_size);
int csrs_per_subframe(int n_subch, int l_subch);
int tb_size(int mcs_index, int n_rb);
double effective_code_rate(int tb_size_bits, int q, int n_rb);
/// Smallest n_rb with tb_size(mcs_index, n_rb) >= payload_bits, searching
/// up to max_rbs.
int min_rbs_for_payload(int mcs_index, int payload_bits, int max_rbs = kMaxPrb);

/// All CSR start sub-channels. Starts are multiples of l_subch so CSRs of
/// one subframe never partially overlap.
std::vector<int> csr_starts(const GridConfig& grid);

}  // namespace spssim
