#include "adabridge/report.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace adabridge {

using nlohmann::json;

namespace {

std::string fmt_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) return "0";
    return std::string(buf, ptr);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path);
    }
    out << content;
    if (!out) {
        throw std::runtime_error("write failed: " + path);
    }
}

}  // namespace

std::string report_to_json(const MetricsReport& report) {
    json tasks;
    for (const auto& [task, m] : report.tasks) {
        tasks[task] = json{{"lowest_acc", m.lowest_acc},
                           {"mean_acc", m.mean_acc},
                           {"final_acc", m.final_acc},
                           {"ticks", m.ticks}};
    }
    json root{{"tasks", std::move(tasks)},
              {"lowest_acc", report.lowest_acc},
              {"mean_acc", report.mean_acc},
              {"gpu_seconds", report.gpu_seconds},
              {"bytes_uploaded", report.bytes_uploaded},
              {"cache_hit_ratio", report.cache_hit_ratio},
              {"fusion_savings_mflop", report.fusion_savings_mflop},
              {"request_count", report.request_count}};
    return root.dump(2) + "\n";
}

MetricsReport report_from_json(const std::string& text) {
    const json root = json::parse(text);
    MetricsReport r;
    for (auto it = root.at("tasks").begin(); it != root.at("tasks").end(); ++it) {
        TaskMetrics m;
        m.lowest_acc = it.value().at("lowest_acc").get<double>();
        m.mean_acc = it.value().at("mean_acc").get<double>();
        m.final_acc = it.value().at("final_acc").get<double>();
        m.ticks = it.value().at("ticks").get<std::size_t>();
        r.tasks[it.key()] = m;
    }
    r.lowest_acc = root.at("lowest_acc").get<double>();
    r.mean_acc = root.at("mean_acc").get<double>();
    r.gpu_seconds = root.at("gpu_seconds").get<double>();
    r.bytes_uploaded = root.at("bytes_uploaded").get<std::int64_t>();
    r.cache_hit_ratio = root.at("cache_hit_ratio").get<double>();
    r.fusion_savings_mflop = root.at("fusion_savings_mflop").get<double>();
    r.request_count = root.at("request_count").get<int>();
    return r;
}

std::string timeline_to_csv(const std::vector<TimelinePoint>& timeline) {
    std::string out = "t,task_id,accuracy\n";
    for (const auto& p : timeline) {
        out += fmt_double(p.t);
        out += ',';
        out += p.task_id;
        out += ',';
        out += fmt_double(p.accuracy);
        out += '\n';
    }
    return out;
}

void write_report(const SimResult& result, const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create directory " + dir + ": " + ec.message());
    }
    write_file(dir + "/report.json", report_to_json(result.report));
    write_file(dir + "/timeline.csv", timeline_to_csv(result.timeline));
    std::string events;
    for (const auto& line : result.events_jsonl) {
        events += line;
        events += '\n';
    }
    write_file(dir + "/events.jsonl", events);
}

}  // namespace adabridge
