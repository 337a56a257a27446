#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "adabridge/config.hpp"
#include "adabridge/data_batch.hpp"

namespace adabridge {

// Exogenous simulation input: sensed data arrivals and domain drift events.
// A trace file is exactly this stream, so replaying a generated trace drives
// the engine through identical states.
struct WorkloadEvent {
    enum class Kind { Arrival, Drift };
    Kind kind = Kind::Arrival;
    double t = 0.0;
    std::size_t index = 0;  // Arrival: client index; Drift: domain index
    DataBatch batch;        // Arrival only
    DriftEventSpec drift;   // Drift only
};

// Deterministic in (config, seed). Batches are narrow trajectory slices of
// the wide client domain: a per-batch center drawn from the domain, samples
// spread around it by slice_factor, labels from the domain's labeler at t.
// Events are sorted by (t, drift-before-arrival, index).
std::vector<WorkloadEvent> generate_workload(const SimConfig& cfg, std::uint64_t seed);

// JSONL, one event per line, replayable by `simulate --trace`.
void write_trace(const std::vector<WorkloadEvent>& events, const SimConfig& cfg, std::ostream& out);
std::string trace_to_string(const std::vector<WorkloadEvent>& events, const SimConfig& cfg);

// Parses and validates a trace against the config (ids, dimensions,
// ascending time). Malformed lines throw std::runtime_error.
std::vector<WorkloadEvent> read_trace(std::istream& in, const SimConfig& cfg);
std::vector<WorkloadEvent> read_trace_file(const std::string& path, const SimConfig& cfg);

}  // namespace adabridge
