#ifndef TRAJEX_PARTITIONS_HPP
#define TRAJEX_PARTITIONS_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "trajex/ast.hpp"

namespace trajex {

class StratificationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// One strongly connected component of the rule dependency graph.
/// `recursive` partitions are saturated with buffered passes until stable;
/// the rest need a single pass. `stratum` counts negation/aggregation
/// edges on the longest path into the partition.
struct Partition {
    std::vector<std::uint32_t> rules;
    int stratum = 0;
    bool recursive = false;
};

struct PartitionPlan {
    std::vector<Partition> partitions;
};

/// Builds the evaluation plan: the condensation of the rule dependency
/// graph in a deterministic topological order (ties broken by the smallest
/// rule index). Edges through consequents at T + 1 cross simulation time
/// instants and do not constrain the order within a sweep; they do count
/// when checking that no negation/aggregation edge lies inside a strongly
/// connected component, which raises StratificationError.
PartitionPlan buildPartitions(const Program &prog);

} // namespace trajex

#endif
