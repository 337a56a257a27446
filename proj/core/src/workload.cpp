#include "adabridge/workload.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "adabridge/rng.hpp"

namespace adabridge {

using nlohmann::json;

namespace {

int label_of(const LabelerSpec& labeler, const double* x, std::size_t d) {
    double acc = labeler.bias;
    for (std::size_t i = 0; i < d; ++i) acc += labeler.weights[i] * x[i];
    return acc >= 0.0 ? +1 : -1;
}

std::string batch_name(const std::string& client, int seq) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "-b%04d", seq);
    return client + buf;
}

json sketch_json(const GaussianSketch& s) {
    return json{{"mean", s.mean}, {"std", s.std_dev}, {"count", s.count}};
}

GaussianSketch sketch_from_json(const json& v) {
    GaussianSketch s;
    s.mean = v.at("mean").get<std::vector<double>>();
    s.std_dev = v.at("std").get<std::vector<double>>();
    s.count = v.at("count").get<std::int64_t>();
    return s;
}

}  // namespace

std::vector<WorkloadEvent> generate_workload(const SimConfig& cfg, std::uint64_t seed) {
    std::vector<WorkloadEvent> events;

    for (std::size_t di = 0; di < cfg.domains.size(); ++di) {
        for (const auto& ev : cfg.domains[di].drift_schedule) {
            if (ev.t > cfg.duration_s) continue;
            WorkloadEvent we;
            we.kind = WorkloadEvent::Kind::Drift;
            we.t = ev.t;
            we.index = di;
            we.drift = ev;
            events.push_back(std::move(we));
        }
    }

    for (std::size_t ci = 0; ci < cfg.clients.size(); ++ci) {
        const auto& c = cfg.clients[ci];
        if (c.arrival_period_s <= 0.0) continue;
        const auto& domain = cfg.domains[cfg.domain_index(c.task)];

        StreamRng rng(seed, "data/" + c.id);
        const double slice = c.slice_factor;
        const double center_spread = std::sqrt(std::max(0.0, 1.0 - slice * slice));

        // The domain's sketch/labeler at time t is the initial one patched by
        // all drift events with ev.t <= t.
        GaussianSketch sketch = domain.sketch;
        LabelerSpec labeler = domain.labeler;
        std::size_t next_drift = 0;

        int seq = 0;
        for (double t = c.arrival_period_s; t <= cfg.duration_s; t += c.arrival_period_s) {
            while (next_drift < domain.drift_schedule.size() &&
                   domain.drift_schedule[next_drift].t <= t) {
                const auto& ev = domain.drift_schedule[next_drift];
                if (ev.sketch) sketch = *ev.sketch;
                if (ev.labeler) labeler = *ev.labeler;
                ++next_drift;
            }

            const std::size_t d = c.feature_dim;
            std::vector<double> center(d);
            for (std::size_t k = 0; k < d; ++k) {
                center[k] = sketch.mean[k] + center_spread * sketch.std_dev[k] * rng.normal();
            }
            SampleMatrix samples(c.batch_samples, d);
            for (std::size_t r = 0; r < c.batch_samples; ++r) {
                for (std::size_t k = 0; k < d; ++k) {
                    samples.at(r, k) = center[k] + slice * sketch.std_dev[k] * rng.normal();
                }
            }
            std::vector<int> labels(c.batch_samples);
            for (std::size_t r = 0; r < c.batch_samples; ++r) {
                labels[r] = label_of(labeler, samples.row(r), d);
            }

            WorkloadEvent we;
            we.kind = WorkloadEvent::Kind::Arrival;
            we.t = t;
            we.index = ci;
            we.batch = make_batch(batch_name(c.id, ++seq), std::move(samples), std::move(labels),
                                  c.batch_bytes, c.id);
            events.push_back(std::move(we));
        }
    }

    std::sort(events.begin(), events.end(), [](const WorkloadEvent& a, const WorkloadEvent& b) {
        if (a.t != b.t) return a.t < b.t;
        if (a.kind != b.kind) return a.kind == WorkloadEvent::Kind::Drift;  // drift first
        return a.index < b.index;
    });
    return events;
}

void write_trace(const std::vector<WorkloadEvent>& events, const SimConfig& cfg, std::ostream& out) {
    for (const auto& ev : events) {
        json line;
        line["t"] = ev.t;
        if (ev.kind == WorkloadEvent::Kind::Drift) {
            line["type"] = "drift";
            line["task"] = cfg.domains[ev.index].task_id;
            line["acc_drop"] = ev.drift.acc_drop;
            line["sketch"] = ev.drift.sketch ? sketch_json(*ev.drift.sketch) : json(nullptr);
            line["labeler"] = ev.drift.labeler
                                  ? json{{"weights", ev.drift.labeler->weights}, {"bias", ev.drift.labeler->bias}}
                                  : json(nullptr);
        } else {
            line["type"] = "arrival";
            line["client"] = cfg.clients[ev.index].id;
            json rows = json::array();
            for (std::size_t r = 0; r < ev.batch.samples.rows; ++r) {
                json row = json::array();
                for (std::size_t k = 0; k < ev.batch.samples.cols; ++k) {
                    row.push_back(ev.batch.samples.at(r, k));
                }
                rows.push_back(std::move(row));
            }
            line["batch"] = json{{"batch_id", ev.batch.batch_id},
                                 {"bytes", ev.batch.bytes},
                                 {"labels", ev.batch.labels},
                                 {"samples", std::move(rows)}};
        }
        out << line.dump() << "\n";
    }
}

std::string trace_to_string(const std::vector<WorkloadEvent>& events, const SimConfig& cfg) {
    std::ostringstream ss;
    write_trace(events, cfg, ss);
    return ss.str();
}

std::vector<WorkloadEvent> read_trace(std::istream& in, const SimConfig& cfg) {
    std::vector<WorkloadEvent> events;
    std::string linebuf;
    std::size_t lineno = 0;
    double prev_t = -1.0;
    while (std::getline(in, linebuf)) {
        ++lineno;
        if (linebuf.empty()) continue;
        json line;
        try {
            line = json::parse(linebuf);
        } catch (const json::exception& e) {
            throw std::runtime_error("trace line " + std::to_string(lineno) + ": " + e.what());
        }
        try {
            WorkloadEvent ev;
            ev.t = line.at("t").get<double>();
            if (ev.t < prev_t) {
                throw std::runtime_error("events out of time order");
            }
            prev_t = ev.t;
            const std::string type = line.at("type").get<std::string>();
            if (type == "drift") {
                ev.kind = WorkloadEvent::Kind::Drift;
                ev.index = cfg.domain_index(line.at("task").get<std::string>());
                ev.drift.t = ev.t;
                ev.drift.acc_drop = line.at("acc_drop").get<double>();
                if (line.contains("sketch") && !line["sketch"].is_null()) {
                    ev.drift.sketch = sketch_from_json(line["sketch"]);
                }
                if (line.contains("labeler") && !line["labeler"].is_null()) {
                    LabelerSpec l;
                    l.weights = line["labeler"].at("weights").get<std::vector<double>>();
                    l.bias = line["labeler"].at("bias").get<double>();
                    ev.drift.labeler = std::move(l);
                }
            } else if (type == "arrival") {
                ev.kind = WorkloadEvent::Kind::Arrival;
                ev.index = cfg.client_index(line.at("client").get<std::string>());
                const auto& jb = line.at("batch");
                const auto& rows = jb.at("samples");
                if (!rows.is_array() || rows.empty()) {
                    throw std::runtime_error("batch.samples must be a nonempty array");
                }
                SampleMatrix m(rows.size(), rows[0].size());
                for (std::size_t r = 0; r < rows.size(); ++r) {
                    if (rows[r].size() != m.cols) {
                        throw std::runtime_error("ragged batch.samples");
                    }
                    for (std::size_t k = 0; k < m.cols; ++k) {
                        m.at(r, k) = rows[r][k].get<double>();
                    }
                }
                if (m.cols != cfg.clients[ev.index].feature_dim) {
                    throw std::runtime_error("batch dimension does not match client feature_dim");
                }
                ev.batch = make_batch(jb.at("batch_id").get<std::string>(), std::move(m),
                                      jb.at("labels").get<std::vector<int>>(),
                                      jb.at("bytes").get<std::int64_t>(),
                                      cfg.clients[ev.index].id);
            } else {
                throw std::runtime_error("unknown event type: " + type);
            }
            events.push_back(std::move(ev));
        } catch (const json::exception& e) {
            throw std::runtime_error("trace line " + std::to_string(lineno) + ": " + e.what());
        } catch (const std::runtime_error& e) {
            throw std::runtime_error("trace line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return events;
}

std::vector<WorkloadEvent> read_trace_file(const std::string& path, const SimConfig& cfg) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open trace file: " + path);
    }
    return read_trace(in, cfg);
}

}  // namespace adabridge
