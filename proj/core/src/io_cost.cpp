#include "adabridge/io_cost.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace adabridge {

std::vector<std::string> chain_order(const std::vector<const DataBatch*>& batches) {
    if (batches.empty()) {
        throw std::invalid_argument("empty batch list");
    }
    std::vector<const DataBatch*> remaining(batches.begin(), batches.end());
    auto smallest = std::min_element(remaining.begin(), remaining.end(),
                                     [](const DataBatch* a, const DataBatch* b) {
                                         return a->batch_id < b->batch_id;
                                     });
    std::vector<std::string> order;
    order.reserve(batches.size());
    const DataBatch* last = *smallest;
    order.push_back(last->batch_id);
    remaining.erase(smallest);

    while (!remaining.empty()) {
        std::size_t best = 0;
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < remaining.size(); ++i) {
            const double d = w2_distance(remaining[i]->sketch, last->sketch);
            if (d < best_dist ||
                (d == best_dist && remaining[i]->batch_id < remaining[best]->batch_id)) {
                best_dist = d;
                best = i;
            }
        }
        last = remaining[best];
        order.push_back(last->batch_id);
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
    }
    return order;
}

namespace {

std::vector<const DataBatch*> permute(const std::vector<const DataBatch*>& batches,
                                      const std::vector<std::string>& order) {
    std::vector<const DataBatch*> out;
    out.reserve(order.size());
    for (const auto& id : order) {
        for (const auto* b : batches) {
            if (b->batch_id == id) {
                out.push_back(b);
                break;
            }
        }
    }
    return out;
}

}  // namespace

std::vector<std::string> reorder_batches(const std::vector<const DataBatch*>& batches,
                                         const MemoryModel& mm, double full_forward_mflop) {
    auto chained = chain_order(batches);
    const double chained_cost = simulate_cache(permute(batches, chained), mm, full_forward_mflop).total_cost_mflopeq;
    const double identity_cost = simulate_cache(batches, mm, full_forward_mflop).total_cost_mflopeq;
    if (chained_cost <= identity_cost) {
        return chained;
    }
    std::vector<std::string> identity;
    identity.reserve(batches.size());
    for (const auto* b : batches) identity.push_back(b->batch_id);
    return identity;
}

CacheStats simulate_cache(const std::vector<const DataBatch*>& order, const MemoryModel& mm,
                          double full_forward_mflop) {
    CacheStats stats;
    // Entries in MRU-to-LRU order; a scan from the front means distance ties
    // resolve to the more recently used entry.
    std::vector<const GaussianSketch*> cache;
    const std::size_t cap = mm.fast_capacity_slots < 0 ? 0 : static_cast<std::size_t>(mm.fast_capacity_slots);

    for (const auto* batch : order) {
        std::size_t best = cache.size();
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < cache.size(); ++i) {
            const double d = w2_distance(batch->sketch, *cache[i]);
            if (d <= mm.sim_threshold && d < best_dist) {
                best_dist = d;
                best = i;
            }
        }
        if (best < cache.size()) {
            ++stats.hits;
            stats.total_cost_mflopeq += (1.0 - mm.reuse_ratio) * full_forward_mflop;
            const GaussianSketch* entry = cache[best];
            cache.erase(cache.begin() + static_cast<std::ptrdiff_t>(best));
            cache.insert(cache.begin(), entry);
        } else {
            ++stats.misses;
            stats.total_cost_mflopeq += full_forward_mflop + mm.transfer_cost_mflopeq;
            if (cap > 0) {
                cache.insert(cache.begin(), &batch->sketch);
                if (cache.size() > cap) cache.pop_back();
            }
        }
    }
    return stats;
}

JobCost job_cost(const FusionGroup& group, const std::vector<const RetrainJob*>& members,
                 const std::vector<const DataBatch*>& order, const MemoryModel& mm,
                 double throughput_mflops) {
    if (throughput_mflops <= 0.0) {
        throw std::invalid_argument("throughput must be positive");
    }
    std::set<std::string> expected;
    for (const auto* j : members) {
        expected.insert(j->dataset.begin(), j->dataset.end());
    }
    std::set<std::string> got;
    for (const auto* b : order) got.insert(b->batch_id);
    if (expected != got || order.size() != got.size()) {
        throw std::invalid_argument("order does not cover the group dataset exactly");
    }

    double full_forward = 0.0;
    int epochs = 1;
    for (const auto* j : members) {
        double f = 0.0;
        for (double v : j->flops_per_block) f += v;
        full_forward = std::max(full_forward, f);
        epochs = std::max(epochs, j->epochs);
    }

    const std::size_t active = group.adapter_plan.active_tasks.size();
    const double multiplier = 1.0 + 0.2 * (active > 0 ? static_cast<double>(active - 1) : 0.0);

    JobCost out;
    out.cache = simulate_cache(order, mm, full_forward);
    out.mflopeq = out.cache.total_cost_mflopeq * static_cast<double>(epochs) * multiplier;
    out.gpu_seconds = out.mflopeq / throughput_mflops;
    return out;
}

}  // namespace adabridge
