#include "adabridge/reuse_planner.hpp"

#include <algorithm>
#include <unordered_set>

namespace adabridge {

namespace {

std::size_t shared_batch_count(const RetrainJob& a, const RetrainJob& b) {
    std::unordered_set<std::string> set(a.dataset.begin(), a.dataset.end());
    std::size_t n = 0;
    for (const auto& id : b.dataset) {
        if (set.count(id)) ++n;
    }
    return n;
}

std::vector<int> resolved_insertion_points(const std::vector<int>& configured, int min_blocks) {
    std::vector<int> pts;
    if (configured.empty()) {
        for (int i = 1; i <= min_blocks; ++i) pts.push_back(i);
        return pts;
    }
    for (int p : configured) {
        if (p >= 1 && p <= min_blocks) pts.push_back(p);
    }
    return pts;
}

const std::string& min_job_id(const std::vector<const RetrainJob*>& members) {
    const std::string* best = &members.front()->job_id;
    for (const auto* j : members) {
        if (j->job_id < *best) best = &j->job_id;
    }
    return *best;
}

}  // namespace

double pairwise_savings(const RetrainJob& a, const RetrainJob& b) {
    if (a.backbone_family != b.backbone_family) return 0.0;
    const int p = std::min(a.n_blocks, b.n_blocks);
    const std::size_t n_sh = shared_batch_count(a, b);
    if (n_sh == 0) return 0.0;
    double prefix_flops = 0.0;
    for (int l = 0; l < p; ++l) prefix_flops += a.flops_per_block[static_cast<std::size_t>(l)];
    return static_cast<double>(n_sh) * prefix_flops * static_cast<double>(std::min(a.epochs, b.epochs));
}

double pairwise_benefit(const RetrainJob& a, const RetrainJob& b, double overhead_mflop) {
    if (a.backbone_family != b.backbone_family) return -overhead_mflop;
    return pairwise_savings(a, b) - overhead_mflop;
}

ReuseGraph build_reuse_graph(const std::vector<RetrainJob>& jobs, double overhead_mflop) {
    std::unordered_set<std::string> ids;
    for (const auto& j : jobs) {
        if (!ids.insert(j.job_id).second) {
            throw std::invalid_argument("duplicate job_id: " + j.job_id);
        }
    }
    ReuseGraph g;
    g.node_count = jobs.size();
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        for (std::size_t j = i + 1; j < jobs.size(); ++j) {
            const double w = pairwise_benefit(jobs[i], jobs[j], overhead_mflop);
            g.edges.push_back({i, j, w, w > 0.0});
        }
    }
    return g;
}

std::int64_t adapter_param_count(int d_block, int adapter_dim) {
    const std::int64_t d = d_block;
    const std::int64_t r = adapter_dim;
    return 2 * d * r + r + d;
}

double adapter_mem_mb(const RetrainJob& job, const PlannerParams& params) {
    const auto pts = resolved_insertion_points(params.insertion_points, job.n_blocks);
    std::int64_t total = 0;
    for (int p : pts) {
        total += adapter_param_count(job.block_dims[static_cast<std::size_t>(p - 1)], params.adapter_dim);
    }
    return static_cast<double>(total) * 4.0 / (1024.0 * 1024.0);
}

double solo_cost_mflop(const RetrainJob& job) {
    double full = 0.0;
    for (double f : job.flops_per_block) full += f;
    return static_cast<double>(job.dataset.size()) * full * static_cast<double>(job.epochs);
}

double group_mem_mb(const std::vector<const RetrainJob*>& members, const PlannerParams& params) {
    double model = 0.0, act = 0.0, adapters = 0.0;
    for (const auto* j : members) {
        model = std::max(model, j->mem_model_mb);
        act = std::max(act, j->mem_act_mb);
        adapters += adapter_mem_mb(*j, params);
    }
    return model + adapters + act;
}

double group_cost_mflop(const std::vector<const RetrainJob*>& members, const PlannerParams& params) {
    double cost = 0.0;
    for (const auto* j : members) cost += solo_cost_mflop(*j);
    for (std::size_t i = 0; i < members.size(); ++i) {
        for (std::size_t j = i + 1; j < members.size(); ++j) {
            cost -= pairwise_savings(*members[i], *members[j]);
        }
    }
    if (!members.empty()) {
        cost += params.overhead_mflop * static_cast<double>(members.size() - 1);
    }
    return cost;
}

AdapterPlan make_adapter_plan(const std::vector<const RetrainJob*>& members, int adapter_dim,
                              const std::vector<int>& insertion_points) {
    if (members.empty()) {
        throw std::invalid_argument("empty fusion group");
    }
    int min_blocks = members.front()->n_blocks;
    for (const auto* j : members) min_blocks = std::min(min_blocks, j->n_blocks);

    AdapterPlan plan;
    plan.adapter_dim = adapter_dim;
    plan.insertion_points = resolved_insertion_points(insertion_points, min_blocks);
    plan.frozen_prefix = members.size() > 1 ? min_blocks : 0;

    // Members of a fused group share a backbone family, so any member's
    // block widths describe the shared prefix.
    const auto& dims = members.front()->block_dims;
    for (const auto* j : members) {
        std::vector<std::int64_t> counts;
        counts.reserve(plan.insertion_points.size());
        for (int p : plan.insertion_points) {
            counts.push_back(adapter_param_count(dims[static_cast<std::size_t>(p - 1)], adapter_dim));
        }
        plan.per_task_adapters[j->request.task_id] = std::move(counts);
        plan.active_tasks.insert(j->request.task_id);
    }
    return plan;
}

std::int64_t trainable_params(const AdapterPlan& plan) {
    std::int64_t total = 0;
    for (const auto& [task, counts] : plan.per_task_adapters) {
        if (!plan.active_tasks.count(task)) continue;
        for (auto c : counts) total += c;
    }
    return total;
}

AdapterPlan toggle_task(const AdapterPlan& plan, const std::string& task_id, bool active) {
    if (!plan.per_task_adapters.count(task_id)) {
        throw std::invalid_argument("unknown task: " + task_id);
    }
    AdapterPlan out = plan;
    if (active) {
        out.active_tasks.insert(task_id);
    } else {
        out.active_tasks.erase(task_id);
    }
    return out;
}

std::vector<FusionGroup> greedy_fuse(const std::vector<RetrainJob>& jobs, double gpu_mem_mb,
                                     const PlannerParams& params) {
    std::unordered_set<std::string> ids;
    for (const auto& j : jobs) {
        if (!ids.insert(j.job_id).second) {
            throw std::invalid_argument("duplicate job_id: " + j.job_id);
        }
    }

    using Members = std::vector<const RetrainJob*>;
    std::vector<Members> groups;
    for (const auto& j : jobs) {
        const Members single{&j};
        if (group_mem_mb(single, params) > gpu_mem_mb) {
            throw InfeasibleJobError(j.job_id, "job " + j.job_id + " exceeds GPU memory even alone");
        }
        groups.push_back(single);
    }
    auto by_min_id = [](const Members& a, const Members& b) {
        return min_job_id(a) < min_job_id(b);
    };
    std::sort(groups.begin(), groups.end(), by_min_id);

    while (groups.size() > 1) {
        double best_benefit = 0.0;
        std::size_t best_i = 0, best_j = 0;
        bool found = false;
        // Pairs are visited in ascending (min job_id, min job_id) order, and a
        // candidate replaces the incumbent only if strictly better, so ties
        // resolve to the smallest pair.
        for (std::size_t i = 0; i < groups.size(); ++i) {
            for (std::size_t j = i + 1; j < groups.size(); ++j) {
                double benefit = -params.overhead_mflop;
                for (const auto* a : groups[i]) {
                    for (const auto* b : groups[j]) {
                        benefit += pairwise_savings(*a, *b);
                    }
                }
                if (benefit <= 0.0) continue;
                Members merged = groups[i];
                merged.insert(merged.end(), groups[j].begin(), groups[j].end());
                if (group_mem_mb(merged, params) > gpu_mem_mb) continue;
                if (!found || benefit > best_benefit) {
                    found = true;
                    best_benefit = benefit;
                    best_i = i;
                    best_j = j;
                }
            }
        }
        if (!found) break;
        groups[best_i].insert(groups[best_i].end(), groups[best_j].begin(), groups[best_j].end());
        groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(best_j));
        std::sort(groups.begin(), groups.end(), by_min_id);
    }

    std::vector<FusionGroup> out;
    out.reserve(groups.size());
    for (auto& members : groups) {
        std::sort(members.begin(), members.end(),
                  [](const RetrainJob* a, const RetrainJob* b) { return a->job_id < b->job_id; });
        FusionGroup g;
        for (const auto* j : members) g.jobs.insert(j->job_id);
        if (members.size() > 1) {
            int min_blocks = members.front()->n_blocks;
            for (const auto* j : members) min_blocks = std::min(min_blocks, j->n_blocks);
            g.shared_prefix = min_blocks;
            std::map<std::string, std::size_t> tally;
            for (const auto* j : members) {
                std::unordered_set<std::string> uniq(j->dataset.begin(), j->dataset.end());
                for (const auto& id : uniq) ++tally[id];
            }
            for (const auto& [id, n] : tally) {
                if (n == members.size()) g.shared_batches.insert(id);
            }
        }
        g.adapter_plan = make_adapter_plan(members, params.adapter_dim, params.insertion_points);
        g.est_cost_mflop = group_cost_mflop(members, params);
        g.mem_mb = group_mem_mb(members, params);
        out.push_back(std::move(g));
    }
    return out;
}

}  // namespace adabridge
