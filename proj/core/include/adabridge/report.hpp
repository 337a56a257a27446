#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace adabridge {

struct TaskMetrics {
    double lowest_acc = 0.0;
    double mean_acc = 0.0;
    double final_acc = 0.0;
    std::size_t ticks = 0;
};

struct MetricsReport {
    std::map<std::string, TaskMetrics> tasks;
    double lowest_acc = 0.0;  // min over tasks
    double mean_acc = 0.0;    // mean of per-task means
    double gpu_seconds = 0.0;
    std::int64_t bytes_uploaded = 0;
    double cache_hit_ratio = 0.0;
    double fusion_savings_mflop = 0.0;
    int request_count = 0;
};

struct TimelinePoint {
    double t = 0.0;
    std::string task_id;
    double accuracy = 0.0;
};

struct SimResult {
    MetricsReport report;
    std::vector<TimelinePoint> timeline;
    std::vector<std::string> events_jsonl;  // serialized lines, emission order
};

// Canonical JSON: sorted keys, shortest round-trip floats, trailing newline.
std::string report_to_json(const MetricsReport& report);
MetricsReport report_from_json(const std::string& text);

// Header "t,task_id,accuracy" plus one row per profiling tick.
std::string timeline_to_csv(const std::vector<TimelinePoint>& timeline);

// Writes report.json, timeline.csv, events.jsonl into dir (created if
// missing). I/O failures throw std::runtime_error naming the path.
void write_report(const SimResult& result, const std::string& dir);

}  // namespace adabridge
