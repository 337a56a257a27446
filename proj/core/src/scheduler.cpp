#include "adabridge/scheduler.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace adabridge {

double priority(const EvolutionRequest& req, double now, double demand_gpu_seconds, double t_norm) {
    if (demand_gpu_seconds <= 0.0) {
        throw std::invalid_argument("demand must be positive");
    }
    const double staleness = now - req.t_arrival;
    const double urgency = req.drift.delta_acc * (1.0 + staleness / t_norm);
    return urgency / demand_gpu_seconds;
}

namespace {

struct Candidate {
    FusionGroup group;
    std::vector<RetrainJob> jobs;          // members, sorted by job_id
    std::vector<EvolutionRequest> reqs;    // aligned with jobs
    std::vector<std::string> order;
    JobCost cost;
    double priority = 0.0;
    std::string min_request_id;
};

std::vector<const DataBatch*> resolve_dataset(const std::vector<RetrainJob>& jobs,
                                              const DispatchConfig& cfg) {
    std::set<std::string> ids;
    for (const auto& j : jobs) ids.insert(j.dataset.begin(), j.dataset.end());
    std::vector<const DataBatch*> out;
    out.reserve(ids.size());
    for (const auto& id : ids) {
        const DataBatch* b = cfg.find_batch(id);
        if (b == nullptr) {
            throw std::runtime_error("unknown batch in job dataset: " + id);
        }
        out.push_back(b);
    }
    return out;
}

}  // namespace

DispatchResult dispatch_window(const std::vector<EvolutionRequest>& pending, ResourcePool& pool,
                               double now, const DispatchConfig& cfg) {
    DispatchResult result;
    if (pending.empty()) return result;

    double max_gpu_mem = 0.0;
    for (const auto& g : pool.gpus) max_gpu_mem = std::max(max_gpu_mem, g.mem_mb);

    std::vector<EvolutionRequest> reqs = pending;
    std::sort(reqs.begin(), reqs.end(), [](const EvolutionRequest& a, const EvolutionRequest& b) {
        return a.request_id < b.request_id;
    });

    std::vector<RetrainJob> jobs;
    std::map<std::string, EvolutionRequest> req_by_job;
    for (const auto& r : reqs) {
        RetrainJob j = cfg.build_job(r);
        req_by_job[j.job_id] = r;
        jobs.push_back(std::move(j));
    }

    // A job too large for every GPU can never run; drop it once with a
    // diagnostic instead of re-queueing forever.
    std::vector<FusionGroup> groups;
    while (true) {
        try {
            if (cfg.fusion_enabled) {
                groups = greedy_fuse(jobs, max_gpu_mem, cfg.planner);
            } else {
                groups.clear();
                for (const auto& j : jobs) {
                    auto singles = greedy_fuse({j}, max_gpu_mem, cfg.planner);
                    groups.push_back(std::move(singles.front()));
                }
            }
            break;
        } catch (const InfeasibleJobError& e) {
            result.dropped.emplace_back(req_by_job.at(e.job_id()).request_id, e.what());
            jobs.erase(std::remove_if(jobs.begin(), jobs.end(),
                                      [&](const RetrainJob& j) { return j.job_id == e.job_id(); }),
                       jobs.end());
            if (jobs.empty()) return result;
        }
    }

    std::vector<Candidate> candidates;
    for (auto& g : groups) {
        Candidate c;
        for (const auto& j : jobs) {
            if (g.jobs.count(j.job_id)) {
                c.jobs.push_back(j);
                c.reqs.push_back(req_by_job.at(j.job_id));
            }
        }
        std::vector<const RetrainJob*> members;
        for (const auto& j : c.jobs) members.push_back(&j);

        const auto dataset = resolve_dataset(c.jobs, cfg);
        double full_forward = 0.0;
        for (const auto& j : c.jobs) {
            double f = 0.0;
            for (double v : j.flops_per_block) f += v;
            full_forward = std::max(full_forward, f);
        }
        c.order = reorder_batches(dataset, cfg.memory, full_forward);
        std::vector<const DataBatch*> ordered;
        for (const auto& id : c.order) {
            for (const auto* b : dataset) {
                if (b->batch_id == id) {
                    ordered.push_back(b);
                    break;
                }
            }
        }
        c.cost = job_cost(g, members, ordered, cfg.memory, cfg.throughput_mflops);

        c.priority = 0.0;
        c.min_request_id = c.reqs.front().request_id;
        for (const auto& r : c.reqs) {
            c.priority = std::max(c.priority, priority(r, now, c.cost.gpu_seconds, cfg.t_norm_s));
            c.min_request_id = std::min(c.min_request_id, r.request_id);
        }
        if (c.jobs.size() > 1) {
            double savings = 0.0;
            for (std::size_t i = 0; i < c.jobs.size(); ++i) {
                for (std::size_t k = i + 1; k < c.jobs.size(); ++k) {
                    savings += pairwise_savings(c.jobs[i], c.jobs[k]);
                }
            }
            savings -= cfg.planner.overhead_mflop * static_cast<double>(c.jobs.size() - 1);
            result.fusion_savings_mflop += savings;
        }
        c.group = std::move(g);
        candidates.push_back(std::move(c));
    }

    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.priority != b.priority) return a.priority > b.priority;
        return a.min_request_id < b.min_request_id;
    });

    for (auto& c : candidates) {
        // Earliest-available fitting GPU; ties by smallest memory (best fit),
        // then lowest gpu_id.
        GpuState* chosen = nullptr;
        for (auto& g : pool.gpus) {
            if (c.group.mem_mb > g.mem_mb) continue;
            if (chosen == nullptr) {
                chosen = &g;
                continue;
            }
            const double avail_g = std::max(now, g.busy_until);
            const double avail_c = std::max(now, chosen->busy_until);
            if (avail_g < avail_c ||
                (avail_g == avail_c && (g.mem_mb < chosen->mem_mb ||
                                        (g.mem_mb == chosen->mem_mb && g.gpu_id < chosen->gpu_id)))) {
                chosen = &g;
            }
        }
        if (chosen == nullptr) {
            for (auto& r : c.reqs) result.deferred.push_back(r);
            continue;
        }
        ScheduledJob job;
        job.group = std::move(c.group);
        job.member_requests = std::move(c.reqs);
        job.member_jobs = std::move(c.jobs);
        job.batch_order = std::move(c.order);
        job.cost = c.cost;
        job.gpu_id = chosen->gpu_id;
        job.t_start = std::max(now, chosen->busy_until);
        job.t_end = job.t_start + c.cost.gpu_seconds;
        job.priority_at_dispatch = c.priority;
        chosen->busy_until = job.t_end;
        result.dispatched.push_back(std::move(job));
    }
    return result;
}

std::vector<ScheduledJob> EdgeScheduler::on_window(double now) {
    DispatchResult r = dispatch_window(pending_, pool_, now, cfg_);
    pending_ = std::move(r.deferred);
    for (const auto& [req_id, diag] : r.dropped) {
        diagnostics_.push_back("dropped " + req_id + ": " + diag);
    }
    fusion_savings_ += r.fusion_savings_mflop;
    std::vector<ScheduledJob> out;
    for (auto& job : r.dispatched) {
        job.sched_id = "sched-" + std::to_string(++seq_) + "-" + job.member_requests.front().request_id;
        outstanding_.emplace(job.sched_id, job);
        out.push_back(std::move(job));
    }
    return out;
}

ScheduledJob EdgeScheduler::on_complete(const std::string& sched_id, double now) {
    auto it = outstanding_.find(sched_id);
    if (it == outstanding_.end()) {
        throw std::logic_error("job completed twice or never dispatched: " + sched_id);
    }
    (void)now;
    ScheduledJob job = std::move(it->second);
    outstanding_.erase(it);
    return job;
}

}  // namespace adabridge
