#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "adabridge/client_agent.hpp"

namespace adabridge {

// One pending retraining job derived from an evolution request.
struct RetrainJob {
    std::string job_id;
    EvolutionRequest request;
    std::string backbone_family;
    int n_blocks = 1;                     // L
    std::vector<double> flops_per_block;  // MFLOP per batch per block, size L
    std::vector<int> block_dims;          // feature width per block, size L
    int epochs = 1;
    std::vector<std::string> dataset;     // batch ids, nonempty
    double mem_model_mb = 0.0;
    double mem_act_mb = 0.0;
};

// Adapter configuration for a fused group: a frozen shared prefix plus one
// bottleneck adapter per (task, insertion point). Only adapters train;
// the backbone contributes zero trainable parameters.
struct AdapterPlan {
    int frozen_prefix = 0;
    std::vector<int> insertion_points;  // 1-based block indices
    int adapter_dim = 8;                // r
    std::map<std::string, std::vector<std::int64_t>> per_task_adapters;
    std::set<std::string> active_tasks;  // dynamic switching mask
};

struct FusionGroup {
    std::set<std::string> jobs;
    int shared_prefix = 0;  // blocks; 0 for singleton groups
    std::set<std::string> shared_batches;
    AdapterPlan adapter_plan;
    double est_cost_mflop = 0.0;
    double mem_mb = 0.0;
};

struct PlannerParams {
    double overhead_mflop = 500.0;     // per-merge synchronization/collation cost
    int adapter_dim = 8;
    std::vector<int> insertion_points; // empty = every block of the shared backbone
};

struct ReuseGraph {
    struct Edge {
        std::size_t a = 0;
        std::size_t b = 0;
        double weight = 0.0;
        bool fusable = false;  // weight > 0
    };
    std::size_t node_count = 0;
    std::vector<Edge> edges;
};

// Raised by greedy_fuse when a singleton job cannot fit GPU memory.
class InfeasibleJobError : public std::runtime_error {
public:
    InfeasibleJobError(std::string job_id, std::string message)
        : std::runtime_error(std::move(message)), job_id_(std::move(job_id)) {}
    const std::string& job_id() const { return job_id_; }

private:
    std::string job_id_;
};

// Compute saved by fusing two jobs, minus the merge overhead. Shared-data
// forward passes over the shared backbone prefix are counted; per-task
// backward passes are not.
double pairwise_benefit(const RetrainJob& a, const RetrainJob& b, double overhead_mflop);

// pairwise_benefit without the overhead term, floored at zero.
double pairwise_savings(const RetrainJob& a, const RetrainJob& b);

// Complete weighted graph over jobs; edge weight = pairwise_benefit.
ReuseGraph build_reuse_graph(const std::vector<RetrainJob>& jobs, double overhead_mflop);

// Trainable parameters of one (task, insertion point) adapter at width d: a
// bottleneck pair plus biases, 2*d*r + r + d.
std::int64_t adapter_param_count(int d_block, int adapter_dim);

// Per-task adapter memory of a job under the given planner parameters, MB
// (float32 parameters).
double adapter_mem_mb(const RetrainJob& job, const PlannerParams& params);

// Standalone cost of a job: batches x full forward x epochs, MFLOP.
double solo_cost_mflop(const RetrainJob& job);

// Resident memory of a fused set: max member model + all adapters + max
// activation footprint.
double group_mem_mb(const std::vector<const RetrainJob*>& members, const PlannerParams& params);

// Planner cost of a fused set under pairwise-additive savings accounting.
double group_cost_mflop(const std::vector<const RetrainJob*>& members, const PlannerParams& params);

AdapterPlan make_adapter_plan(const std::vector<const RetrainJob*>& members, int adapter_dim,
                              const std::vector<int>& insertion_points);

std::int64_t trainable_params(const AdapterPlan& plan);

AdapterPlan toggle_task(const AdapterPlan& plan, const std::string& task_id, bool active);

// Greedy agglomeration: start from singletons, repeatedly merge the pair of
// groups with the largest positive benefit that fits gpu_mem_mb, ties to the
// smallest (min job_id, min job_id) pair. Each accepted merge strictly
// lowers the partition's estimated cost.
std::vector<FusionGroup> greedy_fuse(const std::vector<RetrainJob>& jobs, double gpu_mem_mb,
                                     const PlannerParams& params);

}  // namespace adabridge
