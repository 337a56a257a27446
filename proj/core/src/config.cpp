#include "adabridge/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace adabridge {

using nlohmann::json;

namespace {

// Typed-access helpers that convert json exceptions into ConfigError with a
// path-like locator.

[[noreturn]] void fail(const std::string& loc, const std::string& msg) {
    throw ConfigError(loc, msg);
}

const json& member(const json& obj, const std::string& loc, const std::string& key) {
    if (!obj.is_object()) fail(loc, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(loc + "." + key, "missing required field");
    return *it;
}

void reject_unknown(const json& obj, const std::string& loc, const std::set<std::string>& allowed) {
    if (!obj.is_object()) fail(loc, "expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key())) fail(loc + "." + it.key(), "unknown field");
    }
}

double get_number(const json& v, const std::string& loc) {
    if (!v.is_number()) fail(loc, "expected a number");
    return v.get<double>();
}

std::int64_t get_int(const json& v, const std::string& loc) {
    if (!v.is_number_integer()) fail(loc, "expected an integer");
    return v.get<std::int64_t>();
}

std::string get_string(const json& v, const std::string& loc) {
    if (!v.is_string()) fail(loc, "expected a string");
    return v.get<std::string>();
}

std::vector<double> get_number_array(const json& v, const std::string& loc) {
    if (!v.is_array()) fail(loc, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(get_number(v[i], loc + "[" + std::to_string(i) + "]"));
    }
    return out;
}

std::vector<int> get_int_array(const json& v, const std::string& loc) {
    if (!v.is_array()) fail(loc, "expected an array of integers");
    std::vector<int> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(static_cast<int>(get_int(v[i], loc + "[" + std::to_string(i) + "]")));
    }
    return out;
}

GaussianSketch parse_sketch(const json& v, const std::string& loc) {
    reject_unknown(v, loc, {"mean", "std", "count"});
    GaussianSketch s;
    s.mean = get_number_array(member(v, loc, "mean"), loc + ".mean");
    s.std_dev = get_number_array(member(v, loc, "std"), loc + ".std");
    s.count = get_int(member(v, loc, "count"), loc + ".count");
    if (s.mean.empty()) fail(loc + ".mean", "must be nonempty");
    if (s.mean.size() != s.std_dev.size()) fail(loc + ".std", "length must match mean");
    for (std::size_t i = 0; i < s.std_dev.size(); ++i) {
        if (s.std_dev[i] < 0.0) fail(loc + ".std[" + std::to_string(i) + "]", "must be >= 0");
    }
    if (s.count < 1) fail(loc + ".count", "must be >= 1");
    return s;
}

LabelerSpec parse_labeler(const json& v, const std::string& loc) {
    reject_unknown(v, loc, {"weights", "bias"});
    LabelerSpec l;
    l.weights = get_number_array(member(v, loc, "weights"), loc + ".weights");
    l.bias = get_number(member(v, loc, "bias"), loc + ".bias");
    if (l.weights.empty()) fail(loc + ".weights", "must be nonempty");
    return l;
}

JobTemplate parse_job(const json& v, const std::string& loc) {
    reject_unknown(v, loc, {"backbone_family", "flops_per_block", "block_dims", "epochs",
                            "mem_model_mb", "mem_act_mb"});
    JobTemplate t;
    t.backbone_family = get_string(member(v, loc, "backbone_family"), loc + ".backbone_family");
    t.flops_per_block = get_number_array(member(v, loc, "flops_per_block"), loc + ".flops_per_block");
    t.block_dims = get_int_array(member(v, loc, "block_dims"), loc + ".block_dims");
    t.epochs = static_cast<int>(get_int(member(v, loc, "epochs"), loc + ".epochs"));
    t.mem_model_mb = get_number(member(v, loc, "mem_model_mb"), loc + ".mem_model_mb");
    t.mem_act_mb = get_number(member(v, loc, "mem_act_mb"), loc + ".mem_act_mb");
    if (t.flops_per_block.empty()) fail(loc + ".flops_per_block", "must be nonempty");
    for (std::size_t i = 0; i < t.flops_per_block.size(); ++i) {
        if (t.flops_per_block[i] <= 0.0) {
            fail(loc + ".flops_per_block[" + std::to_string(i) + "]", "must be > 0");
        }
    }
    if (t.block_dims.size() != t.flops_per_block.size()) {
        fail(loc + ".block_dims", "length must match flops_per_block");
    }
    for (std::size_t i = 0; i < t.block_dims.size(); ++i) {
        if (t.block_dims[i] < 1) fail(loc + ".block_dims[" + std::to_string(i) + "]", "must be >= 1");
    }
    if (t.epochs < 1) fail(loc + ".epochs", "must be >= 1");
    if (t.mem_model_mb <= 0.0) fail(loc + ".mem_model_mb", "must be > 0");
    if (t.mem_act_mb < 0.0) fail(loc + ".mem_act_mb", "must be >= 0");
    return t;
}

ClientConfig parse_client(const json& v, const std::string& loc) {
    reject_unknown(v, loc,
                   {"id", "task", "feature_dim", "window", "thresholds", "upload_budget_bytes",
                    "arrival_period_s", "batch_samples", "batch_bytes", "pool_batches",
                    "recent_batches", "slice_factor", "init_samples", "job"});
    ClientConfig c;
    c.id = get_string(member(v, loc, "id"), loc + ".id");
    c.task = get_string(member(v, loc, "task"), loc + ".task");
    c.feature_dim = static_cast<std::size_t>(get_int(member(v, loc, "feature_dim"), loc + ".feature_dim"));
    if (v.contains("window")) {
        const auto w = get_int(v["window"], loc + ".window");
        if (w < 1) fail(loc + ".window", "must be >= 1");
        c.window = static_cast<std::size_t>(w);
    }
    if (v.contains("thresholds")) {
        const auto& th = v["thresholds"];
        const std::string tl = loc + ".thresholds";
        reject_unknown(th, tl, {"tau_a", "tau_f", "tau_l"});
        if (th.contains("tau_a")) c.thresholds.tau_a = get_number(th["tau_a"], tl + ".tau_a");
        if (th.contains("tau_f")) c.thresholds.tau_f = get_number(th["tau_f"], tl + ".tau_f");
        if (th.contains("tau_l")) c.thresholds.tau_l = get_number(th["tau_l"], tl + ".tau_l");
        if (c.thresholds.tau_f < 0.0) fail(tl + ".tau_f", "must be >= 0");
        if (c.thresholds.tau_l < 0.0) fail(tl + ".tau_l", "must be >= 0");
    }
    c.upload_budget_bytes = get_int(member(v, loc, "upload_budget_bytes"), loc + ".upload_budget_bytes");
    c.arrival_period_s = get_number(member(v, loc, "arrival_period_s"), loc + ".arrival_period_s");
    c.batch_samples = static_cast<std::size_t>(get_int(member(v, loc, "batch_samples"), loc + ".batch_samples"));
    c.batch_bytes = get_int(member(v, loc, "batch_bytes"), loc + ".batch_bytes");
    if (v.contains("pool_batches")) {
        c.pool_batches = static_cast<std::size_t>(get_int(v["pool_batches"], loc + ".pool_batches"));
    }
    if (v.contains("recent_batches")) {
        c.recent_batches = static_cast<std::size_t>(get_int(v["recent_batches"], loc + ".recent_batches"));
    }
    if (v.contains("slice_factor")) {
        c.slice_factor = get_number(v["slice_factor"], loc + ".slice_factor");
    }
    if (v.contains("init_samples")) {
        c.init_samples = static_cast<std::size_t>(get_int(v["init_samples"], loc + ".init_samples"));
    }
    c.job = parse_job(member(v, loc, "job"), loc + ".job");

    if (c.feature_dim < 1) fail(loc + ".feature_dim", "must be >= 1");
    if (c.upload_budget_bytes < 0) fail(loc + ".upload_budget_bytes", "must be >= 0");
    if (c.arrival_period_s < 0.0) fail(loc + ".arrival_period_s", "must be >= 0");
    if (c.batch_samples < 1) fail(loc + ".batch_samples", "must be >= 1");
    if (c.batch_bytes < 1) fail(loc + ".batch_bytes", "must be >= 1");
    if (c.pool_batches < 1) fail(loc + ".pool_batches", "must be >= 1");
    if (c.recent_batches < 1) fail(loc + ".recent_batches", "must be >= 1");
    if (c.slice_factor <= 0.0 || c.slice_factor > 1.0) fail(loc + ".slice_factor", "must be in (0, 1]");
    if (c.init_samples < 1) fail(loc + ".init_samples", "must be >= 1");
    return c;
}

DomainConfig parse_domain(const json& v, const std::string& loc) {
    reject_unknown(v, loc, {"task", "sketch", "labeler", "drift_schedule"});
    DomainConfig d;
    d.task_id = get_string(member(v, loc, "task"), loc + ".task");
    d.sketch = parse_sketch(member(v, loc, "sketch"), loc + ".sketch");
    d.labeler = parse_labeler(member(v, loc, "labeler"), loc + ".labeler");
    if (v.contains("drift_schedule")) {
        const auto& arr = v["drift_schedule"];
        if (!arr.is_array()) fail(loc + ".drift_schedule", "expected an array");
        double prev_t = -1.0;
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string el = loc + ".drift_schedule[" + std::to_string(i) + "]";
            reject_unknown(arr[i], el, {"t", "sketch", "labeler", "acc_drop"});
            DriftEventSpec ev;
            ev.t = get_number(member(arr[i], el, "t"), el + ".t");
            if (ev.t < 0.0) fail(el + ".t", "must be >= 0");
            if (ev.t < prev_t) fail(el + ".t", "drift events must be in ascending time order");
            prev_t = ev.t;
            if (arr[i].contains("sketch") && !arr[i]["sketch"].is_null()) {
                ev.sketch = parse_sketch(arr[i]["sketch"], el + ".sketch");
            }
            if (arr[i].contains("labeler") && !arr[i]["labeler"].is_null()) {
                ev.labeler = parse_labeler(arr[i]["labeler"], el + ".labeler");
            }
            if (arr[i].contains("acc_drop")) {
                ev.acc_drop = get_number(arr[i]["acc_drop"], el + ".acc_drop");
                if (ev.acc_drop < 0.0 || ev.acc_drop > 1.0) fail(el + ".acc_drop", "must be in [0, 1]");
            }
            d.drift_schedule.push_back(std::move(ev));
        }
    }
    return d;
}

json sketch_to_json(const GaussianSketch& s) {
    return json{{"mean", s.mean}, {"std", s.std_dev}, {"count", s.count}};
}

json labeler_to_json(const LabelerSpec& l) {
    return json{{"weights", l.weights}, {"bias", l.bias}};
}

}  // namespace

std::size_t SimConfig::domain_index(const std::string& task_id) const {
    for (std::size_t i = 0; i < domains.size(); ++i) {
        if (domains[i].task_id == task_id) return i;
    }
    throw ConfigError("domains", "no domain for task " + task_id);
}

std::size_t SimConfig::client_index(const std::string& client_id) const {
    for (std::size_t i = 0; i < clients.size(); ++i) {
        if (clients[i].id == client_id) return i;
    }
    throw ConfigError("clients", "no client " + client_id);
}

SimConfig parse_config_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("malformed JSON: ") + e.what());
    }

    reject_unknown(root, "", {"seed", "duration_s", "clients", "domains", "pool", "network",
                              "planner", "io", "scheduler", "curve"});

    SimConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(get_int(member(root, "", "seed"), "seed"));
    cfg.duration_s = get_number(member(root, "", "duration_s"), "duration_s");
    if (cfg.duration_s <= 0.0) fail("duration_s", "must be > 0");

    const auto& clients = member(root, "", "clients");
    if (!clients.is_array() || clients.empty()) fail("clients", "expected a nonempty array");
    for (std::size_t i = 0; i < clients.size(); ++i) {
        cfg.clients.push_back(parse_client(clients[i], "clients[" + std::to_string(i) + "]"));
    }

    const auto& domains = member(root, "", "domains");
    if (!domains.is_array() || domains.empty()) fail("domains", "expected a nonempty array");
    for (std::size_t i = 0; i < domains.size(); ++i) {
        cfg.domains.push_back(parse_domain(domains[i], "domains[" + std::to_string(i) + "]"));
    }

    {
        const auto& pool = member(root, "", "pool");
        reject_unknown(pool, "pool", {"gpus"});
        const auto& gpus = member(pool, "pool", "gpus");
        if (!gpus.is_array() || gpus.empty()) fail("pool.gpus", "expected a nonempty array");
        for (std::size_t i = 0; i < gpus.size(); ++i) {
            const std::string loc = "pool.gpus[" + std::to_string(i) + "]";
            reject_unknown(gpus[i], loc, {"id", "mem_mb"});
            GpuConfig g;
            g.id = static_cast<int>(get_int(member(gpus[i], loc, "id"), loc + ".id"));
            g.mem_mb = get_number(member(gpus[i], loc, "mem_mb"), loc + ".mem_mb");
            if (g.mem_mb <= 0.0) fail(loc + ".mem_mb", "must be > 0");
            cfg.gpus.push_back(g);
        }
    }

    {
        const auto& net = member(root, "", "network");
        reject_unknown(net, "network", {"bandwidth_bytes_per_s", "rtt_s"});
        cfg.network.bandwidth_bytes_per_s =
            get_number(member(net, "network", "bandwidth_bytes_per_s"), "network.bandwidth_bytes_per_s");
        cfg.network.rtt_s = get_number(member(net, "network", "rtt_s"), "network.rtt_s");
        if (cfg.network.bandwidth_bytes_per_s <= 0.0) fail("network.bandwidth_bytes_per_s", "must be > 0");
        if (cfg.network.rtt_s <= 0.0) fail("network.rtt_s", "must be > 0");
    }

    {
        const auto& pl = member(root, "", "planner");
        reject_unknown(pl, "planner", {"overhead_mflop", "adapter_dim", "insertion_points", "relevance_radius"});
        cfg.planner.overhead_mflop = get_number(member(pl, "planner", "overhead_mflop"), "planner.overhead_mflop");
        cfg.planner.adapter_dim =
            static_cast<int>(get_int(member(pl, "planner", "adapter_dim"), "planner.adapter_dim"));
        if (pl.contains("insertion_points")) {
            cfg.planner.insertion_points = get_int_array(pl["insertion_points"], "planner.insertion_points");
            for (std::size_t i = 0; i < cfg.planner.insertion_points.size(); ++i) {
                if (cfg.planner.insertion_points[i] < 1) {
                    fail("planner.insertion_points[" + std::to_string(i) + "]", "must be >= 1");
                }
            }
        }
        if (pl.contains("relevance_radius")) {
            cfg.planner.relevance_radius = get_number(pl["relevance_radius"], "planner.relevance_radius");
            if (cfg.planner.relevance_radius <= 0.0) fail("planner.relevance_radius", "must be > 0");
        }
        if (cfg.planner.overhead_mflop < 0.0) fail("planner.overhead_mflop", "must be >= 0");
        if (cfg.planner.adapter_dim < 1) fail("planner.adapter_dim", "must be >= 1");
    }

    {
        const auto& io = member(root, "", "io");
        reject_unknown(io, "io", {"cache_slots", "sim_threshold", "reuse_ratio",
                                  "transfer_cost_mflopeq", "throughput_mflops"});
        cfg.io.cache_slots = static_cast<int>(get_int(member(io, "io", "cache_slots"), "io.cache_slots"));
        cfg.io.sim_threshold = get_number(member(io, "io", "sim_threshold"), "io.sim_threshold");
        cfg.io.reuse_ratio = get_number(member(io, "io", "reuse_ratio"), "io.reuse_ratio");
        cfg.io.transfer_cost_mflopeq =
            get_number(member(io, "io", "transfer_cost_mflopeq"), "io.transfer_cost_mflopeq");
        cfg.io.throughput_mflops = get_number(member(io, "io", "throughput_mflops"), "io.throughput_mflops");
        if (cfg.io.cache_slots < 0) fail("io.cache_slots", "must be >= 0");
        if (cfg.io.sim_threshold < 0.0) fail("io.sim_threshold", "must be >= 0");
        if (cfg.io.reuse_ratio < 0.0 || cfg.io.reuse_ratio > 1.0) fail("io.reuse_ratio", "must be in [0, 1]");
        if (cfg.io.transfer_cost_mflopeq < 0.0) fail("io.transfer_cost_mflopeq", "must be >= 0");
        if (cfg.io.throughput_mflops <= 0.0) fail("io.throughput_mflops", "must be > 0");
    }

    {
        const auto& sc = member(root, "", "scheduler");
        reject_unknown(sc, "scheduler", {"window_s", "t_norm_s"});
        cfg.scheduler.window_s = get_number(member(sc, "scheduler", "window_s"), "scheduler.window_s");
        cfg.scheduler.t_norm_s = get_number(member(sc, "scheduler", "t_norm_s"), "scheduler.t_norm_s");
        if (cfg.scheduler.window_s <= 0.0) fail("scheduler.window_s", "must be > 0");
        if (cfg.scheduler.t_norm_s <= 0.0) fail("scheduler.t_norm_s", "must be > 0");
    }

    {
        const auto& cv = member(root, "", "curve");
        reject_unknown(cv, "curve", {"eta", "s", "a_ceiling"});
        cfg.curve.eta = get_number(member(cv, "curve", "eta"), "curve.eta");
        cfg.curve.s = get_number(member(cv, "curve", "s"), "curve.s");
        cfg.curve.a_ceiling = get_number(member(cv, "curve", "a_ceiling"), "curve.a_ceiling");
        if (cfg.curve.eta <= 0.0) fail("curve.eta", "must be > 0");
        if (cfg.curve.s <= 0.0) fail("curve.s", "must be > 0");
        if (cfg.curve.a_ceiling <= 0.0 || cfg.curve.a_ceiling > 1.0) fail("curve.a_ceiling", "must be in (0, 1]");
    }

    // Cross-references.
    {
        std::set<std::string> client_ids, task_ids;
        for (std::size_t i = 0; i < cfg.clients.size(); ++i) {
            if (!client_ids.insert(cfg.clients[i].id).second) {
                fail("clients[" + std::to_string(i) + "].id", "duplicate client id");
            }
            if (!task_ids.insert(cfg.clients[i].task).second) {
                fail("clients[" + std::to_string(i) + "].task", "duplicate task id");
            }
        }
        std::set<std::string> domain_tasks;
        for (std::size_t i = 0; i < cfg.domains.size(); ++i) {
            if (!domain_tasks.insert(cfg.domains[i].task_id).second) {
                fail("domains[" + std::to_string(i) + "].task", "duplicate domain task");
            }
        }
        for (std::size_t i = 0; i < cfg.clients.size(); ++i) {
            const auto& c = cfg.clients[i];
            if (!domain_tasks.count(c.task)) {
                fail("clients[" + std::to_string(i) + "].task", "no domain defines task " + c.task);
            }
            const auto& d = cfg.domains[cfg.domain_index(c.task)];
            const std::string dloc = "domains[" + std::to_string(cfg.domain_index(c.task)) + "]";
            if (d.sketch.dim() != c.feature_dim) {
                fail(dloc + ".sketch.mean", "dimension must match client feature_dim");
            }
            if (d.labeler.weights.size() != c.feature_dim) {
                fail(dloc + ".labeler.weights", "dimension must match client feature_dim");
            }
            for (std::size_t k = 0; k < d.drift_schedule.size(); ++k) {
                const auto& ev = d.drift_schedule[k];
                const std::string el = dloc + ".drift_schedule[" + std::to_string(k) + "]";
                if (ev.sketch && ev.sketch->dim() != c.feature_dim) {
                    fail(el + ".sketch.mean", "dimension must match client feature_dim");
                }
                if (ev.labeler && ev.labeler->weights.size() != c.feature_dim) {
                    fail(el + ".labeler.weights", "dimension must match client feature_dim");
                }
            }
        }
        for (std::size_t i = 0; i < cfg.domains.size(); ++i) {
            if (!task_ids.count(cfg.domains[i].task_id)) {
                fail("domains[" + std::to_string(i) + "].task", "no client serves this task");
            }
        }
        std::set<int> gpu_ids;
        for (std::size_t i = 0; i < cfg.gpus.size(); ++i) {
            if (!gpu_ids.insert(cfg.gpus[i].id).second) {
                fail("pool.gpus[" + std::to_string(i) + "].id", "duplicate gpu id");
            }
        }
    }
    return cfg;
}

SimConfig parse_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("", "cannot open config file: " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string canonical_config_json(const SimConfig& cfg) {
    json root;
    root["seed"] = cfg.seed;
    root["duration_s"] = cfg.duration_s;

    json clients = json::array();
    for (const auto& c : cfg.clients) {
        json jc;
        jc["id"] = c.id;
        jc["task"] = c.task;
        jc["feature_dim"] = c.feature_dim;
        jc["window"] = c.window;
        jc["thresholds"] = json{{"tau_a", c.thresholds.tau_a},
                                {"tau_f", c.thresholds.tau_f},
                                {"tau_l", c.thresholds.tau_l}};
        jc["upload_budget_bytes"] = c.upload_budget_bytes;
        jc["arrival_period_s"] = c.arrival_period_s;
        jc["batch_samples"] = c.batch_samples;
        jc["batch_bytes"] = c.batch_bytes;
        jc["pool_batches"] = c.pool_batches;
        jc["recent_batches"] = c.recent_batches;
        jc["slice_factor"] = c.slice_factor;
        jc["init_samples"] = c.init_samples;
        jc["job"] = json{{"backbone_family", c.job.backbone_family},
                         {"flops_per_block", c.job.flops_per_block},
                         {"block_dims", c.job.block_dims},
                         {"epochs", c.job.epochs},
                         {"mem_model_mb", c.job.mem_model_mb},
                         {"mem_act_mb", c.job.mem_act_mb}};
        clients.push_back(std::move(jc));
    }
    root["clients"] = std::move(clients);

    json domains = json::array();
    for (const auto& d : cfg.domains) {
        json jd;
        jd["task"] = d.task_id;
        jd["sketch"] = sketch_to_json(d.sketch);
        jd["labeler"] = labeler_to_json(d.labeler);
        json sched = json::array();
        for (const auto& ev : d.drift_schedule) {
            json je;
            je["t"] = ev.t;
            je["acc_drop"] = ev.acc_drop;
            je["sketch"] = ev.sketch ? sketch_to_json(*ev.sketch) : json(nullptr);
            je["labeler"] = ev.labeler ? labeler_to_json(*ev.labeler) : json(nullptr);
            sched.push_back(std::move(je));
        }
        jd["drift_schedule"] = std::move(sched);
        domains.push_back(std::move(jd));
    }
    root["domains"] = std::move(domains);

    json gpus = json::array();
    for (const auto& g : cfg.gpus) {
        gpus.push_back(json{{"id", g.id}, {"mem_mb", g.mem_mb}});
    }
    root["pool"] = json{{"gpus", std::move(gpus)}};

    root["network"] = json{{"bandwidth_bytes_per_s", cfg.network.bandwidth_bytes_per_s},
                           {"rtt_s", cfg.network.rtt_s}};
    root["planner"] = json{{"overhead_mflop", cfg.planner.overhead_mflop},
                           {"adapter_dim", cfg.planner.adapter_dim},
                           {"insertion_points", cfg.planner.insertion_points},
                           {"relevance_radius", cfg.planner.relevance_radius}};
    root["io"] = json{{"cache_slots", cfg.io.cache_slots},
                      {"sim_threshold", cfg.io.sim_threshold},
                      {"reuse_ratio", cfg.io.reuse_ratio},
                      {"transfer_cost_mflopeq", cfg.io.transfer_cost_mflopeq},
                      {"throughput_mflops", cfg.io.throughput_mflops}};
    root["scheduler"] = json{{"window_s", cfg.scheduler.window_s},
                             {"t_norm_s", cfg.scheduler.t_norm_s}};
    root["curve"] = json{{"eta", cfg.curve.eta}, {"s", cfg.curve.s}, {"a_ceiling", cfg.curve.a_ceiling}};

    return root.dump(2) + "\n";
}

}  // namespace adabridge
