#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adabridge/data_batch.hpp"
#include "adabridge/mapping_proxy.hpp"
#include "adabridge/sketch.hpp"

namespace adabridge {

enum class ShiftClass {
    NoDrift,
    CovariateShift,
    LabelShift,
    HybridShift,
    ConceptDrift,
};

const char* to_string(ShiftClass c);

struct DriftThresholds {
    double tau_a = 0.05;  // accuracy-drop trigger
    double tau_f = 0.5;   // feature-distance (W2) threshold
    double tau_l = 0.2;   // label-distance (TV) threshold
};

struct DriftReport {
    double delta_acc = 0.0;   // reference accuracy - windowed accuracy
    double feat_dist = 0.0;   // W2 between recent data and training distribution
    double label_dist = 0.0;  // TV between recent and training label histograms
    ShiftClass shift_class = ShiftClass::NoDrift;
};

// A client's asynchronous retraining request.
struct EvolutionRequest {
    std::string request_id;
    std::string client_id;
    std::string task_id;
    double t_arrival = 0.0;  // edge receipt time, set when the transfer completes
    DriftReport drift;
    std::vector<std::string> manifest;  // batch ids selected for upload, sorted
    std::int64_t bytes_total = 0;
};

// Mean of per-sample correctness flags. Empty window throws.
double profile_accuracy(std::span<const std::uint8_t> window);

// Threshold decision table. Total and deterministic on finite inputs:
//   delta_acc <= tau_a                          -> NoDrift
//   feat > tau_f, label <= tau_l                -> CovariateShift
//   label > tau_l, feat <= tau_f                -> LabelShift
//   both exceed                                 -> HybridShift
//   accuracy fell, neither distribution moved   -> ConceptDrift
ShiftClass classify_shift(double delta_acc, double feat_dist, double label_dist,
                          const DriftThresholds& thresholds);

// 0.5 * novelty + 0.5 * uncertainty where novelty = w/(1+w) for
// w = W2(batch, train distribution) and uncertainty is the own-proxy
// disagreement on the batch.
double explicit_utility(const DataBatch& batch, const GaussianSketch& train_sketch,
                        const MappingProxy& own_proxy);

// 0.5 * coverage + 0.5 * disagreement against a remote task's published
// sketch and proxy; high for data the remote task has not seen and cannot
// predict.
double implicit_complementarity(const DataBatch& batch, const GaussianSketch& remote_sketch,
                                const MappingProxy& remote_proxy);

struct ScoredBatch {
    const DataBatch* batch = nullptr;
    double score = 0.0;
};

// Exact 0/1 knapsack over byte costs quantized to 1 KB units
// (cost = ceil(bytes/1024), capacity = floor(budget_bytes/1024)).
// Ties resolve to the lexicographically smallest batch_id set; the returned
// manifest is sorted by batch_id.
std::vector<std::string> resample_budget(const std::vector<ScoredBatch>& batches,
                                         std::int64_t budget_bytes);

// A remote task's published artifacts, as seen by a client.
struct Publication {
    std::string task_id;
    GaussianSketch sketch;
    MappingProxy proxy;
};

struct ClientParams {
    std::string client_id;
    std::string task_id;
    std::size_t feature_dim = 1;
    std::size_t window = 100;          // sliding accuracy window, in samples
    DriftThresholds thresholds;
    std::int64_t upload_budget_bytes = 0;
    std::size_t pool_batches = 16;     // local retention of recent batches
    std::size_t recent_batches = 3;    // batches merged into the "recent" sketch
};

// Outcome of one profiling tick.
struct ProfileTick {
    double windowed_acc = 0.0;
    DriftReport report;
    std::optional<EvolutionRequest> request;
};

// Per-client state machine: accuracy profiling over a sliding window,
// shift-type classification, and budgeted resampling of the local batch pool.
// One agent per client; no shared state between agents.
class ClientAgent {
public:
    ClientAgent(ClientParams params, GaussianSketch train_sketch, LabelHistogram train_hist,
                MappingProxy own_proxy);

    // Ingest one sensed batch at time t. `correct_flags` are the deployed
    // model's per-sample correctness outcomes for this batch. Emits an
    // EvolutionRequest when drift is detected, uploading is possible, and no
    // request of this client is already in flight. In independent mode the
    // implicit term is forced to zero.
    ProfileTick on_batch(const DataBatch& batch, double t, std::span<const std::uint8_t> correct_flags,
                         std::span<const Publication> remote_publications, bool use_implicit);

    // Evolution completed for this client's task: adopt the new training
    // distribution and proxy, and allow the next request.
    void on_evolution_complete(GaussianSketch train_sketch, LabelHistogram train_hist,
                               MappingProxy own_proxy);

    // Merged sketch over the most recent batches; the client's current
    // estimate of its own data distribution (published alongside requests).
    GaussianSketch recent_sketch() const;

    const MappingProxy& proxy() const { return proxy_; }
    const GaussianSketch& train_sketch() const { return train_sketch_; }
    const std::string& client_id() const { return params_.client_id; }
    const std::string& task_id() const { return params_.task_id; }
    bool awaiting_evolution() const { return awaiting_; }
    int requests_emitted() const { return request_seq_; }

private:
    LabelHistogram recent_hist() const;

    ClientParams params_;
    GaussianSketch train_sketch_;
    LabelHistogram train_hist_;
    MappingProxy proxy_;
    std::deque<DataBatch> pool_;
    std::deque<std::uint8_t> window_;
    double reference_acc_ = 0.0;  // best windowed accuracy observed so far
    bool have_reference_ = false;
    bool awaiting_ = false;
    int request_seq_ = 0;
};

}  // namespace adabridge
