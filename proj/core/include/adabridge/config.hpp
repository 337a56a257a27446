#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "adabridge/client_agent.hpp"
#include "adabridge/sketch.hpp"

namespace adabridge {

// Schema violations carry a path-like locator, e.g. "clients[1].window".
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string locator, const std::string& message)
        : std::runtime_error(locator.empty() ? message : locator + ": " + message),
          locator_(std::move(locator)) {}
    const std::string& locator() const { return locator_; }

private:
    std::string locator_;
};

struct LabelerSpec {
    std::vector<double> weights;
    double bias = 0.0;
};

struct DriftEventSpec {
    double t = 0.0;
    std::optional<GaussianSketch> sketch;   // new input distribution
    std::optional<LabelerSpec> labeler;     // new ground-truth labeler
    double acc_drop = 0.0;                  // accuracy lost at the drift instant
};

struct DomainConfig {
    std::string task_id;
    GaussianSketch sketch;
    LabelerSpec labeler;
    std::vector<DriftEventSpec> drift_schedule;  // ascending t
};

struct JobTemplate {
    std::string backbone_family;
    std::vector<double> flops_per_block;  // MFLOP per batch per block
    std::vector<int> block_dims;
    int epochs = 1;
    double mem_model_mb = 0.0;
    double mem_act_mb = 0.0;
};

struct ClientConfig {
    std::string id;
    std::string task;
    std::size_t feature_dim = 1;
    std::size_t window = 100;
    DriftThresholds thresholds;
    std::int64_t upload_budget_bytes = 0;
    double arrival_period_s = 0.0;  // 0 disables data arrivals
    std::size_t batch_samples = 16;
    std::int64_t batch_bytes = 1;
    std::size_t pool_batches = 16;
    std::size_t recent_batches = 3;
    double slice_factor = 0.3;  // per-batch spread relative to domain spread
    std::size_t init_samples = 256;
    JobTemplate job;
};

struct GpuConfig {
    int id = 0;
    double mem_mb = 0.0;
};

struct NetworkConfig {
    double bandwidth_bytes_per_s = 1.0;
    double rtt_s = 0.0;
};

struct PlannerConfig {
    double overhead_mflop = 500.0;
    int adapter_dim = 8;
    std::vector<int> insertion_points;  // empty = every block
    double relevance_radius = 2.0;      // edge-side dataset filter, W2 units
};

struct IoConfig {
    int cache_slots = 8;
    double sim_threshold = 0.25;
    double reuse_ratio = 0.5;
    double transfer_cost_mflopeq = 50.0;
    double throughput_mflops = 5000.0;
};

struct SchedulerConfig {
    double window_s = 5.0;
    double t_norm_s = 60.0;
};

struct CurveConfig {
    double eta = 0.1;
    double s = 1.0;
    double a_ceiling = 0.9;
};

struct SimConfig {
    std::uint64_t seed = 1;
    double duration_s = 0.0;
    std::vector<ClientConfig> clients;
    std::vector<DomainConfig> domains;
    std::vector<GpuConfig> gpus;
    NetworkConfig network;
    PlannerConfig planner;
    IoConfig io;
    SchedulerConfig scheduler;
    CurveConfig curve;

    // Index of the domain serving a task; throws if unknown.
    std::size_t domain_index(const std::string& task_id) const;
    std::size_t client_index(const std::string& client_id) const;
};

// Parse + fully validate. Violations throw ConfigError with a locator;
// unknown fields are rejected.
SimConfig parse_config(const std::string& path);
SimConfig parse_config_text(const std::string& text);

// Canonical serialization: sorted keys, defaults materialized, shortest
// round-trip floats. parse(canonical(x)) == x byte-for-byte on re-canonicalization.
std::string canonical_config_json(const SimConfig& cfg);

}  // namespace adabridge
