#pragma once

#include <span>
#include <string>
#include <vector>

#include "adabridge/data_batch.hpp"
#include "adabridge/reuse_planner.hpp"

namespace adabridge {

// Two-level memory model: an LRU cache of prefix-activation summaries in
// fast memory, transfer charges for misses against high-level memory.
// All io-cost operations read only (batch_id, sketch) from a DataBatch.
struct MemoryModel {
    int fast_capacity_slots = 8;          // C, cached activation entries
    double transfer_cost_mflopeq = 50.0;  // charged per miss
    double reuse_ratio = 0.5;             // rho: share of forward compute in the shared prefix
    double sim_threshold = 0.25;          // theta: W2 radius for "nearby" activations
};

struct CacheStats {
    double total_cost_mflopeq = 0.0;
    int hits = 0;
    int misses = 0;
};

// Greedy nearest-neighbor chain: start at the smallest batch_id, repeatedly
// append the unvisited batch closest (W2) to the last one, ties to the
// smaller id. Empty input throws.
std::vector<std::string> chain_order(const std::vector<const DataBatch*>& batches);

// chain_order with a fallback: if the chained order simulates to a higher
// cache cost than the input order, the input order is returned instead, so
// reordering never loses to no reorganization.
std::vector<std::string> reorder_batches(const std::vector<const DataBatch*>& batches,
                                         const MemoryModel& mm, double full_forward_mflop);

// Walk the order through an LRU cache of capacity C. A batch hits when some
// cached entry lies within theta (closest entry wins, ties to the more
// recently used); a hit refreshes that entry and does not insert the batch.
// A miss pays the transfer charge and inserts the batch's sketch.
CacheStats simulate_cache(const std::vector<const DataBatch*>& order, const MemoryModel& mm,
                          double full_forward_mflop);

struct JobCost {
    double gpu_seconds = 0.0;
    double mflopeq = 0.0;
    CacheStats cache;
};

// Demand estimate for one fused group: cache-simulated forward cost times
// epochs (max over members) times the active-task adapter margin
// 1 + 0.2*(k-1). `order` must cover exactly the union of member datasets.
JobCost job_cost(const FusionGroup& group, const std::vector<const RetrainJob*>& members,
                 const std::vector<const DataBatch*>& order, const MemoryModel& mm,
                 double throughput_mflops = 5000.0);

}  // namespace adabridge
