#pragma once

#include <vector>

#include "lamcoal/rate_table.hpp"

namespace lamcoal {

/// Expectations of the block-counting chain started from b blocks, b = 0..bmax
/// (entries 0 and 1 are zero), by first-step analysis.
struct DpTable {
  int bmax = 1;
  std::vector<double> length;   // E[ℓ | b]
  std::vector<double> mergers;  // E[τ | b]
  std::vector<double> time;     // E[τ̃ | b]
};

/// Runs the three first-step recursions up to n. Merger-size rows are cut
/// where the remaining probability falls below `tail`.
DpTable expectation_dp(const RateTable& table, int n, double tail = 1e-14);

double expected_total_length_dp(const RateTable& table, int n);
double expected_merger_count_dp(const RateTable& table, int n);
double expected_absorption_time_dp(const RateTable& table, int n);

/// Exact order-a length expectations from the chain on block-size profiles.
struct EnumTable {
  int n = 0;
  std::vector<double> order;  // order[a - 1] = E[ℓ̂_{n,a}], a = 1..n-1
  double external = 0.0;
  double internal = 0.0;
  double total = 0.0;
  /// Number of distinct block-size profiles visited.
  int profiles = 0;
};

/// Forward pass over the profile DAG (block count decreases at every merger); n <= 8.
EnumTable exhaustive_expectations(const RateTable& table, int n);

}  // namespace lamcoal
