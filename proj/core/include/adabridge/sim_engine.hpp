#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "adabridge/config.hpp"
#include "adabridge/data_batch.hpp"
#include "adabridge/report.hpp"
#include "adabridge/workload.hpp"

namespace adabridge {

enum class SimMode { Coevolve, Independent };

SimMode parse_mode(const std::string& name);  // "coevolve" | "independent"
const char* to_string(SimMode mode);

// Ground truth of one task's environment at a simulated instant.
struct DomainState {
    std::string task_id;
    GaussianSketch domain_sketch;
    LabelerSpec labeler;
    double last_event_t = 0.0;
};

// The accuracy-dynamics model: a saturating recovery curve between the
// post-drift floor a_base and the attainable ceiling.
struct AccuracyState {
    double current_acc = 0.0;
    double a_base = 0.0;
    double a_ceiling = 0.9;
    double eta = 0.1;
};

struct NetworkModel {
    double bandwidth_bytes_per_s = 1.0;
    double rtt_s = 0.0;
};

// Applies a drift event: replaces the domain sketch and/or labeler and drops
// accuracy to max(0, current - acc_drop). Out-of-order events throw.
void inject_drift(DomainState& domain, AccuracyState& acc, const DriftEventSpec& event, double now);

// Dataset size discounted by distributional distance: sum of
// count * exp(-W2(batch, domain)/s). Empty dataset yields 0.
double effective_samples(const std::vector<const DataBatch*>& dataset, const DomainState& domain,
                         double s);

// Attainable post-retraining accuracy: a_base + (a_ceiling - a_base) * cov
// with cov = exp(-W2(merged dataset sketch, domain)/s). Pooled data that
// covers the drifted domain moves the merged sketch toward it and raises the
// ceiling. Empty dataset yields a_base.
double coverage_ceiling(const std::vector<const DataBatch*>& dataset, const DomainState& domain,
                        const AccuracyState& acc, double s);

// current += (a_max - current) * (1 - exp(-eta * n_eff)), clamped to
// [current, a_max]; never decreases. a_max below current is a no-op.
void apply_retraining(AccuracyState& acc, double n_eff, double a_max);

// bytes / bandwidth + rtt.
double transfer_time(std::int64_t bytes, const NetworkModel& net);

// Runs the full discrete-event simulation. When `trace` is non-null it
// replaces the generated workload stream (seed still drives the remaining
// streams, e.g. initial proxy fits). Identical (config, mode, seed, trace)
// yields byte-identical results.
SimResult run_simulation(const SimConfig& cfg, SimMode mode, std::uint64_t seed,
                         const std::vector<WorkloadEvent>* trace = nullptr);

}  // namespace adabridge
