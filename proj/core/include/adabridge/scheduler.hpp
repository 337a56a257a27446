#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "adabridge/client_agent.hpp"
#include "adabridge/io_cost.hpp"
#include "adabridge/reuse_planner.hpp"

namespace adabridge {

struct GpuState {
    int gpu_id = 0;
    double mem_mb = 0.0;
    double busy_until = 0.0;  // nondecreasing across dispatches
};

struct ResourcePool {
    std::vector<GpuState> gpus;
};

struct ScheduledJob {
    std::string sched_id;
    FusionGroup group;
    std::vector<EvolutionRequest> member_requests;
    std::vector<RetrainJob> member_jobs;
    std::vector<std::string> batch_order;
    JobCost cost;
    int gpu_id = 0;
    double t_start = 0.0;
    double t_end = 0.0;
    double priority_at_dispatch = 0.0;
};

// urgency / demand: urgency = delta_acc * (1 + staleness / T_norm).
// demand <= 0 throws.
double priority(const EvolutionRequest& req, double now, double demand_gpu_seconds, double t_norm);

struct DispatchConfig {
    PlannerParams planner;
    MemoryModel memory;
    double throughput_mflops = 5000.0;
    double t_norm_s = 60.0;
    bool fusion_enabled = true;  // independent mode runs every job alone
    std::function<RetrainJob(const EvolutionRequest&)> build_job;
    std::function<const DataBatch*(const std::string&)> find_batch;
};

struct DispatchResult {
    std::vector<ScheduledJob> dispatched;          // without sched ids or final bookkeeping
    std::vector<EvolutionRequest> deferred;        // no GPU memory fit this window
    std::vector<std::pair<std::string, std::string>> dropped;  // request_id, diagnostic
    double fusion_savings_mflop = 0.0;             // accepted-merge savings this window
};

// One batching-window pass: build jobs from pending requests, fuse them,
// order groups by descending max member priority (ties by smallest
// request_id), and assign each group to the earliest-available fitting GPU
// (ties by smallest memory, then gpu_id). Non-preemptive; t_start =
// max(now, busy_until). Groups fitting no GPU stay pending; a singleton that
// can never fit is dropped with a diagnostic.
DispatchResult dispatch_window(const std::vector<EvolutionRequest>& pending, ResourcePool& pool,
                               double now, const DispatchConfig& cfg);

// Stateful wrapper serialized by the simulation clock: queue of pending
// requests, outstanding jobs, and completion bookkeeping.
class EdgeScheduler {
public:
    EdgeScheduler(ResourcePool pool, DispatchConfig cfg)
        : pool_(std::move(pool)), cfg_(std::move(cfg)) {}

    void enqueue(EvolutionRequest req) { pending_.push_back(std::move(req)); }

    std::vector<ScheduledJob> on_window(double now);

    // Double completion throws std::logic_error.
    ScheduledJob on_complete(const std::string& sched_id, double now);

    const ResourcePool& pool() const { return pool_; }
    std::size_t pending_count() const { return pending_.size(); }
    std::size_t outstanding_count() const { return outstanding_.size(); }
    const std::vector<std::string>& diagnostics() const { return diagnostics_; }
    double fusion_savings_mflop() const { return fusion_savings_; }

private:
    ResourcePool pool_;
    DispatchConfig cfg_;
    std::vector<EvolutionRequest> pending_;
    std::map<std::string, ScheduledJob> outstanding_;
    std::vector<std::string> diagnostics_;
    std::uint64_t seq_ = 0;
    double fusion_savings_ = 0.0;
};

}  // namespace adabridge
