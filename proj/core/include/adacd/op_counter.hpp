#pragma once

#include <cstdint>

namespace adacd {

/// Column-operation tally for one solver run. One unit = one pass over the
/// nonzeros of a single column (dot or axpy). Channels are kept separate so
/// the per-epoch cost of coordinate updates, distribution refreshes and
/// monitoring can be audited independently.
struct OpCounter {
  std::uint64_t update_column_ops = 0;   // w maintenance inside iterations
  std::uint64_t refresh_column_ops = 0;  // distribution rebuild passes
  std::uint64_t monitor_column_ops = 0;  // checkpoint recomputation

  // Cost attributed to the algorithm itself (monitoring excluded).
  std::uint64_t vector_ops() const { return update_column_ops + refresh_column_ops; }
};

}  // namespace adacd
