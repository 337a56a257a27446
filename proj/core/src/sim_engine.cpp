#include "adabridge/sim_engine.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "adabridge/client_agent.hpp"
#include "adabridge/io_cost.hpp"
#include "adabridge/mapping_proxy.hpp"
#include "adabridge/rng.hpp"
#include "adabridge/scheduler.hpp"

namespace adabridge {

using nlohmann::json;

SimMode parse_mode(const std::string& name) {
    if (name == "coevolve") return SimMode::Coevolve;
    if (name == "independent") return SimMode::Independent;
    throw std::invalid_argument("unknown mode: " + name + " (expected coevolve|independent)");
}

const char* to_string(SimMode mode) {
    return mode == SimMode::Coevolve ? "coevolve" : "independent";
}

void inject_drift(DomainState& domain, AccuracyState& acc, const DriftEventSpec& event, double now) {
    if (event.t < now || event.t < domain.last_event_t) {
        throw std::runtime_error("out-of-order drift event for task " + domain.task_id);
    }
    domain.last_event_t = event.t;
    if (event.sketch) domain.domain_sketch = *event.sketch;
    if (event.labeler) domain.labeler = *event.labeler;
    acc.a_base = std::max(0.0, acc.current_acc - event.acc_drop);
    acc.current_acc = acc.a_base;
}

double effective_samples(const std::vector<const DataBatch*>& dataset, const DomainState& domain,
                         double s) {
    double n_eff = 0.0;
    for (const auto* b : dataset) {
        const double w = w2_distance(b->sketch, domain.domain_sketch);
        n_eff += static_cast<double>(b->sketch.count) * std::exp(-w / s);
    }
    return n_eff;
}

double coverage_ceiling(const std::vector<const DataBatch*>& dataset, const DomainState& domain,
                        const AccuracyState& acc, double s) {
    if (dataset.empty()) return acc.a_base;
    GaussianSketch merged = dataset.front()->sketch;
    for (std::size_t i = 1; i < dataset.size(); ++i) {
        merged = merge_sketches(merged, dataset[i]->sketch);
    }
    const double cov = std::exp(-w2_distance(merged, domain.domain_sketch) / s);
    return acc.a_base + (acc.a_ceiling - acc.a_base) * cov;
}

void apply_retraining(AccuracyState& acc, double n_eff, double a_max) {
    if (a_max < acc.current_acc) return;
    const double gain = (a_max - acc.current_acc) * (1.0 - std::exp(-acc.eta * n_eff));
    acc.current_acc = std::min(a_max, acc.current_acc + gain);
}

double transfer_time(std::int64_t bytes, const NetworkModel& net) {
    if (bytes < 0) {
        throw std::invalid_argument("negative byte count");
    }
    return static_cast<double>(bytes) / net.bandwidth_bytes_per_s + net.rtt_s;
}

namespace {

json sketch_json(const GaussianSketch& s) {
    return json{{"mean", s.mean}, {"std", s.std_dev}, {"count", s.count}};
}

json drift_report_json(const DriftReport& r) {
    return json{{"delta_acc", r.delta_acc},
                {"feat_dist", r.feat_dist},
                {"label_dist", r.label_dist},
                {"shift_class", to_string(r.shift_class)}};
}

json proxy_json(const MappingProxy& p) {
    return json{{"task_id", p.task_id}, {"version", p.version}, {"weights", p.weights}, {"bias", p.bias}};
}

struct EngineEvent {
    double t = 0.0;
    std::uint64_t seq = 0;
    enum class Kind { Workload, Window, TransferDone, JobDone } kind = Kind::Workload;
    std::size_t payload = 0;
};

struct EventOrder {
    bool operator()(const EngineEvent& a, const EngineEvent& b) const {
        if (a.t != b.t) return a.t > b.t;  // min-heap
        return a.seq > b.seq;
    }
};

// One uploaded batch retained at the edge.
struct UploadRecord {
    std::string batch_id;
    std::string origin_client;
};

}  // namespace

SimResult run_simulation(const SimConfig& cfg, SimMode mode, std::uint64_t seed,
                         const std::vector<WorkloadEvent>* trace) {
    std::vector<WorkloadEvent> generated;
    if (trace == nullptr) {
        generated = generate_workload(cfg, seed);
        trace = &generated;
    }
    const std::vector<WorkloadEvent>& workload = *trace;

    SimResult result;
    auto log_line = [&](const json& j) { result.events_jsonl.push_back(j.dump()); };

    // Domain ground truth and accuracy model per task.
    std::vector<DomainState> domains(cfg.domains.size());
    std::vector<AccuracyState> accs(cfg.domains.size());
    for (std::size_t i = 0; i < cfg.domains.size(); ++i) {
        domains[i].task_id = cfg.domains[i].task_id;
        domains[i].domain_sketch = cfg.domains[i].sketch;
        domains[i].labeler = cfg.domains[i].labeler;
        accs[i].a_ceiling = cfg.curve.a_ceiling;
        accs[i].eta = cfg.curve.eta;
        accs[i].current_acc = cfg.curve.a_ceiling;  // deployed models start converged
        accs[i].a_base = 0.0;
    }

    const NetworkModel net{cfg.network.bandwidth_bytes_per_s, cfg.network.rtt_s};

    // Clients: initial proxies are fit on a seed-derived draw from the
    // initial domain, and the initial training distribution is the domain
    // sketch itself.
    std::vector<ClientAgent> agents;
    std::map<std::string, Publication> publications;  // by task
    agents.reserve(cfg.clients.size());
    for (const auto& cc : cfg.clients) {
        const auto& dom = cfg.domains[cfg.domain_index(cc.task)];
        StreamRng rng(seed, "init/" + cc.task);
        SampleMatrix init(cc.init_samples, cc.feature_dim);
        for (std::size_t r = 0; r < cc.init_samples; ++r) {
            for (std::size_t k = 0; k < cc.feature_dim; ++k) {
                init.at(r, k) = dom.sketch.mean[k] + dom.sketch.std_dev[k] * rng.normal();
            }
        }
        std::vector<int> labels(cc.init_samples);
        for (std::size_t r = 0; r < cc.init_samples; ++r) {
            double acc = dom.labeler.bias;
            for (std::size_t k = 0; k < cc.feature_dim; ++k) {
                acc += dom.labeler.weights[k] * init.at(r, k);
            }
            labels[r] = acc >= 0.0 ? +1 : -1;
        }
        MappingProxy proxy = fit_proxy(init, labels, 50, cc.task, 0);

        ClientParams params;
        params.client_id = cc.id;
        params.task_id = cc.task;
        params.feature_dim = cc.feature_dim;
        params.window = cc.window;
        params.thresholds = cc.thresholds;
        params.upload_budget_bytes = cc.upload_budget_bytes;
        params.pool_batches = cc.pool_batches;
        params.recent_batches = cc.recent_batches;
        agents.emplace_back(params, dom.sketch, histogram_from_labels(labels), proxy);

        publications[cc.task] = Publication{cc.task, dom.sketch, proxy};
        log_line(json{{"type", "publish"},
                      {"t", 0.0},
                      {"task", cc.task},
                      {"proxy", proxy_json(proxy)},
                      {"sketch", sketch_json(dom.sketch)}});
    }

    // Edge-side state: every batch seen by the run (workload is stable
    // storage), the uploaded store, and the upload history per client.
    std::map<std::string, const DataBatch*> batch_by_id;
    for (const auto& ev : workload) {
        if (ev.kind == WorkloadEvent::Kind::Arrival) {
            batch_by_id[ev.batch.batch_id] = &ev.batch;
        }
    }
    std::map<std::string, DataBatch> edge_store;
    std::vector<UploadRecord> uploads;  // in edge-arrival order

    // Edge job construction: the retraining dataset is the request manifest
    // plus, in coevolve mode, batches other clients uploaded; candidates are
    // kept only within the relevance radius of the task's latest published
    // distribution estimate, falling back to the raw manifest if the filter
    // empties the set.
    DispatchConfig dispatch_cfg;
    dispatch_cfg.planner.overhead_mflop = cfg.planner.overhead_mflop;
    dispatch_cfg.planner.adapter_dim = cfg.planner.adapter_dim;
    dispatch_cfg.planner.insertion_points = cfg.planner.insertion_points;
    dispatch_cfg.memory.fast_capacity_slots = cfg.io.cache_slots;
    dispatch_cfg.memory.sim_threshold = cfg.io.sim_threshold;
    dispatch_cfg.memory.reuse_ratio = cfg.io.reuse_ratio;
    dispatch_cfg.memory.transfer_cost_mflopeq = cfg.io.transfer_cost_mflopeq;
    dispatch_cfg.throughput_mflops = cfg.io.throughput_mflops;
    dispatch_cfg.t_norm_s = cfg.scheduler.t_norm_s;
    dispatch_cfg.fusion_enabled = (mode == SimMode::Coevolve);
    dispatch_cfg.find_batch = [&edge_store](const std::string& id) -> const DataBatch* {
        auto it = edge_store.find(id);
        return it == edge_store.end() ? nullptr : &it->second;
    };
    dispatch_cfg.build_job = [&](const EvolutionRequest& req) {
        const auto& cc = cfg.clients[cfg.client_index(req.client_id)];
        RetrainJob job;
        job.job_id = "J-" + req.request_id;
        job.request = req;
        job.backbone_family = cc.job.backbone_family;
        job.n_blocks = static_cast<int>(cc.job.flops_per_block.size());
        job.flops_per_block = cc.job.flops_per_block;
        job.block_dims = cc.job.block_dims;
        job.epochs = cc.job.epochs;
        job.mem_model_mb = cc.job.mem_model_mb;
        job.mem_act_mb = cc.job.mem_act_mb;

        std::set<std::string> candidate_ids(req.manifest.begin(), req.manifest.end());
        if (mode == SimMode::Coevolve) {
            for (const auto& up : uploads) {
                if (up.origin_client != req.client_id) candidate_ids.insert(up.batch_id);
            }
        }
        const GaussianSketch& ref = publications.at(req.task_id).sketch;
        for (const auto& id : candidate_ids) {
            auto it = edge_store.find(id);
            if (it == edge_store.end()) continue;
            if (w2_distance(it->second.sketch, ref) <= cfg.planner.relevance_radius) {
                job.dataset.push_back(id);
            }
        }
        if (job.dataset.empty()) {
            job.dataset = req.manifest;
        }
        std::sort(job.dataset.begin(), job.dataset.end());
        return job;
    };

    ResourcePool pool;
    for (const auto& g : cfg.gpus) {
        pool.gpus.push_back({g.id, g.mem_mb, 0.0});
    }
    EdgeScheduler scheduler(pool, dispatch_cfg);

    // Event queue. Workload events are enqueued first so that at equal
    // timestamps they precede windows and dynamic events.
    std::priority_queue<EngineEvent, std::vector<EngineEvent>, EventOrder> queue;
    std::uint64_t seq = 0;
    for (std::size_t i = 0; i < workload.size(); ++i) {
        queue.push({workload[i].t, seq++, EngineEvent::Kind::Workload, i});
    }
    std::vector<EvolutionRequest> transfers;
    std::vector<std::string> done_ids;
    int inflight_transfers = 0;
    double cache_hits = 0.0, cache_misses = 0.0;

    if (cfg.scheduler.window_s <= cfg.duration_s) {
        queue.push({cfg.scheduler.window_s, seq++, EngineEvent::Kind::Window, 0});
    }

    MetricsReport& report = result.report;

    auto handle_completion_for = [&](const ScheduledJob& job, const EvolutionRequest& req, double now,
                                     json& outcomes) {
        const std::size_t di = cfg.domain_index(req.task_id);
        const std::size_t ci = cfg.client_index(req.client_id);

        // Data reuse at completion: each member task trains on the union of
        // the group's datasets, relevance-filtered against its own published
        // distribution estimate.
        std::set<std::string> union_ids;
        for (const auto& mj : job.member_jobs) {
            union_ids.insert(mj.dataset.begin(), mj.dataset.end());
        }
        const GaussianSketch& ref = publications.at(req.task_id).sketch;
        std::vector<const DataBatch*> dataset;
        for (const auto& id : union_ids) {
            auto it = edge_store.find(id);
            if (it == edge_store.end()) continue;
            if (w2_distance(it->second.sketch, ref) <= cfg.planner.relevance_radius) {
                dataset.push_back(&it->second);
            }
        }
        if (dataset.empty()) {
            for (const auto& mj : job.member_jobs) {
                if (mj.request.request_id != req.request_id) continue;
                for (const auto& id : mj.dataset) {
                    auto it = edge_store.find(id);
                    if (it != edge_store.end()) dataset.push_back(&it->second);
                }
            }
        }

        const double n_eff = effective_samples(dataset, domains[di], cfg.curve.s);
        const double a_max = coverage_ceiling(dataset, domains[di], accs[di], cfg.curve.s);
        apply_retraining(accs[di], n_eff, a_max);

        // Refit and republish the task's mapping proxy on the retrain data.
        GaussianSketch train_sketch = publications.at(req.task_id).sketch;
        LabelHistogram train_hist{{0.5, 0.5}};
        MappingProxy proxy = agents[ci].proxy();
        if (!dataset.empty()) {
            std::size_t total_rows = 0;
            for (const auto* b : dataset) total_rows += b->samples.rows;
            SampleMatrix all(total_rows, dataset.front()->samples.cols);
            std::vector<int> labels;
            labels.reserve(total_rows);
            std::size_t row = 0;
            for (const auto* b : dataset) {
                for (std::size_t r = 0; r < b->samples.rows; ++r, ++row) {
                    for (std::size_t k = 0; k < all.cols; ++k) {
                        all.at(row, k) = b->samples.at(r, k);
                    }
                    labels.push_back(b->labels[r]);
                }
            }
            proxy = fit_proxy(all, labels, 20, req.task_id, agents[ci].proxy().version);
            train_sketch = dataset.front()->sketch;
            for (std::size_t i = 1; i < dataset.size(); ++i) {
                train_sketch = merge_sketches(train_sketch, dataset[i]->sketch);
            }
            train_hist = histogram_from_labels(labels);
        }
        publications[req.task_id] = Publication{req.task_id, train_sketch, proxy};
        agents[ci].on_evolution_complete(train_sketch, train_hist, proxy);
        log_line(json{{"type", "publish"},
                      {"t", now},
                      {"task", req.task_id},
                      {"proxy", proxy_json(proxy)},
                      {"sketch", sketch_json(train_sketch)}});

        outcomes.push_back(json{{"task", req.task_id},
                                {"request_id", req.request_id},
                                {"n_eff", n_eff},
                                {"a_max", a_max},
                                {"accuracy", accs[di].current_acc}});
    };

    while (!queue.empty()) {
        const EngineEvent ev = queue.top();
        queue.pop();
        const double now = ev.t;

        switch (ev.kind) {
            case EngineEvent::Kind::Workload: {
                const WorkloadEvent& we = workload[ev.payload];
                if (we.kind == WorkloadEvent::Kind::Drift) {
                    const std::size_t di = we.index;
                    inject_drift(domains[di], accs[di], we.drift, now);
                    log_line(json{{"type", "drift"},
                                  {"t", now},
                                  {"task", domains[di].task_id},
                                  {"acc_drop", we.drift.acc_drop},
                                  {"accuracy", accs[di].current_acc}});
                    break;
                }

                const std::size_t ci = we.index;
                const auto& cc = cfg.clients[ci];
                const std::size_t di = cfg.domain_index(cc.task);

                // Correctness flags for this batch at the model's current
                // accuracy; exact-rate profiling keeps detection noise-free.
                const std::size_t n = we.batch.sample_count();
                const auto correct = static_cast<std::size_t>(
                    std::llround(accs[di].current_acc * static_cast<double>(n)));
                std::vector<std::uint8_t> flags(n, 0);
                for (std::size_t k = 0; k < std::min(correct, n); ++k) flags[k] = 1;

                std::vector<Publication> remotes;
                for (const auto& [task, pub] : publications) {
                    if (task != cc.task) remotes.push_back(pub);
                }

                ProfileTick tick = agents[ci].on_batch(we.batch, now, flags, remotes,
                                                       mode == SimMode::Coevolve);
                result.timeline.push_back({now, cc.task, accs[di].current_acc});

                if (tick.request) {
                    EvolutionRequest req = *tick.request;
                    publications[cc.task] =
                        Publication{cc.task, agents[ci].recent_sketch(), agents[ci].proxy()};
                    log_line(json{{"type", "publish"},
                                  {"t", now},
                                  {"task", cc.task},
                                  {"proxy", proxy_json(agents[ci].proxy())},
                                  {"sketch", sketch_json(publications[cc.task].sketch)}});
                    log_line(json{{"type", "request"},
                                  {"t", now},
                                  {"client", req.client_id},
                                  {"task", req.task_id},
                                  {"request_id", req.request_id},
                                  {"drift", drift_report_json(req.drift)},
                                  {"manifest", req.manifest},
                                  {"bytes", req.bytes_total}});
                    report.bytes_uploaded += req.bytes_total;
                    ++report.request_count;
                    const double tt = transfer_time(req.bytes_total, net);
                    transfers.push_back(std::move(req));
                    ++inflight_transfers;
                    queue.push({now + tt, seq++, EngineEvent::Kind::TransferDone, transfers.size() - 1});
                }
                break;
            }

            case EngineEvent::Kind::TransferDone: {
                EvolutionRequest req = transfers[ev.payload];
                req.t_arrival = now;
                --inflight_transfers;
                for (const auto& id : req.manifest) {
                    auto it = batch_by_id.find(id);
                    if (it == batch_by_id.end()) {
                        throw std::runtime_error("manifest references unknown batch: " + id);
                    }
                    if (!edge_store.count(id)) {
                        edge_store.emplace(id, *it->second);
                        uploads.push_back({id, req.client_id});
                    }
                }
                scheduler.enqueue(std::move(req));
                break;
            }

            case EngineEvent::Kind::Window: {
                auto jobs = scheduler.on_window(now);
                for (auto& job : jobs) {
                    json job_ids = json::array();
                    for (const auto& j : job.group.jobs) job_ids.push_back(j);
                    log_line(json{{"type", "dispatch"},
                                  {"t", now},
                                  {"gpu", job.gpu_id},
                                  {"jobs", job_ids},
                                  {"priority", job.priority_at_dispatch},
                                  {"sched_id", job.sched_id},
                                  {"t_start", job.t_start},
                                  {"t_end", job.t_end},
                                  {"mem_mb", job.group.mem_mb},
                                  {"order", job.batch_order}});
                    report.gpu_seconds += job.cost.gpu_seconds;
                    cache_hits += job.cost.cache.hits;
                    cache_misses += job.cost.cache.misses;
                    done_ids.push_back(job.sched_id);
                    queue.push({job.t_end, seq++, EngineEvent::Kind::JobDone, done_ids.size() - 1});
                }
                const double next = now + cfg.scheduler.window_s;
                const bool work_left = scheduler.pending_count() > 0 ||
                                       scheduler.outstanding_count() > 0 || inflight_transfers > 0;
                if (next <= cfg.duration_s || work_left) {
                    queue.push({next, seq++, EngineEvent::Kind::Window, 0});
                }
                break;
            }

            case EngineEvent::Kind::JobDone: {
                const ScheduledJob job = scheduler.on_complete(done_ids[ev.payload], now);
                json outcomes = json::array();
                for (const auto& req : job.member_requests) {
                    handle_completion_for(job, req, now, outcomes);
                }
                log_line(json{{"type", "complete"},
                              {"t", now},
                              {"sched_id", job.sched_id},
                              {"gpu", job.gpu_id},
                              {"outcomes", std::move(outcomes)}});
                break;
            }
        }
    }

    for (const auto& diag : scheduler.diagnostics()) {
        log_line(json{{"type", "diagnostic"}, {"message", diag}});
    }

    // Aggregate metrics.
    for (std::size_t di = 0; di < domains.size(); ++di) {
        TaskMetrics m;
        m.final_acc = accs[di].current_acc;
        m.lowest_acc = accs[di].current_acc;
        m.mean_acc = accs[di].current_acc;
        report.tasks[domains[di].task_id] = m;
    }
    for (const auto& p : result.timeline) {
        auto& m = report.tasks[p.task_id];
        if (m.ticks == 0) {
            m.lowest_acc = p.accuracy;
            m.mean_acc = 0.0;
        }
        m.lowest_acc = std::min(m.lowest_acc, p.accuracy);
        m.mean_acc += p.accuracy;
        ++m.ticks;
    }
    double mean_sum = 0.0;
    double lowest = 1.0;
    for (auto& [task, m] : report.tasks) {
        if (m.ticks > 0) m.mean_acc /= static_cast<double>(m.ticks);
        mean_sum += m.mean_acc;
        lowest = std::min(lowest, m.lowest_acc);
    }
    report.lowest_acc = report.tasks.empty() ? 0.0 : lowest;
    report.mean_acc = report.tasks.empty() ? 0.0 : mean_sum / static_cast<double>(report.tasks.size());
    report.cache_hit_ratio =
        (cache_hits + cache_misses) > 0.0 ? cache_hits / (cache_hits + cache_misses) : 0.0;
    report.fusion_savings_mflop = scheduler.fusion_savings_mflop();
    return result;
}

}  // namespace adabridge
