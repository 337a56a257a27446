#include "adabridge/client_agent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "adabridge/data_batch.hpp"

namespace adabridge {

DataBatch make_batch(std::string batch_id, SampleMatrix samples, std::vector<int> labels,
                     std::int64_t bytes, std::string origin_client) {
    if (bytes < 1) {
        throw std::invalid_argument("batch bytes must be >= 1");
    }
    if (labels.size() != samples.rows) {
        throw std::invalid_argument("labels/samples size mismatch");
    }
    DataBatch b;
    b.batch_id = std::move(batch_id);
    b.sketch = sketch_from_samples(samples);
    b.label_hist = histogram_from_labels(labels);
    b.samples = std::move(samples);
    b.labels = std::move(labels);
    b.bytes = bytes;
    b.origin_client = std::move(origin_client);
    return b;
}

const char* to_string(ShiftClass c) {
    switch (c) {
        case ShiftClass::NoDrift: return "NoDrift";
        case ShiftClass::CovariateShift: return "CovariateShift";
        case ShiftClass::LabelShift: return "LabelShift";
        case ShiftClass::HybridShift: return "HybridShift";
        case ShiftClass::ConceptDrift: return "ConceptDrift";
    }
    return "NoDrift";
}

double profile_accuracy(std::span<const std::uint8_t> window) {
    if (window.empty()) {
        throw std::invalid_argument("empty window");
    }
    std::size_t correct = 0;
    for (auto f : window) {
        if (f) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(window.size());
}

ShiftClass classify_shift(double delta_acc, double feat_dist, double label_dist,
                          const DriftThresholds& th) {
    if (delta_acc <= th.tau_a) return ShiftClass::NoDrift;
    const bool feat = feat_dist > th.tau_f;
    const bool label = label_dist > th.tau_l;
    if (feat && !label) return ShiftClass::CovariateShift;
    if (label && !feat) return ShiftClass::LabelShift;
    if (feat && label) return ShiftClass::HybridShift;
    return ShiftClass::ConceptDrift;
}

double explicit_utility(const DataBatch& batch, const GaussianSketch& train_sketch,
                        const MappingProxy& own_proxy) {
    const double w = w2_distance(batch.sketch, train_sketch);
    const double novelty = w / (1.0 + w);
    const double uncertainty = proxy_disagreement(own_proxy, batch);
    return 0.5 * novelty + 0.5 * uncertainty;
}

double implicit_complementarity(const DataBatch& batch, const GaussianSketch& remote_sketch,
                                const MappingProxy& remote_proxy) {
    const double w = w2_distance(batch.sketch, remote_sketch);
    const double coverage = w / (1.0 + w);
    const double disagreement = proxy_disagreement(remote_proxy, batch);
    return 0.5 * coverage + 0.5 * disagreement;
}

std::vector<std::string> resample_budget(const std::vector<ScoredBatch>& batches,
                                         std::int64_t budget_bytes) {
    if (budget_bytes < 0) {
        throw std::invalid_argument("budget must be >= 0");
    }
    for (const auto& sb : batches) {
        if (sb.score < 0.0) throw std::invalid_argument("scores must be >= 0");
        if (sb.batch == nullptr) throw std::invalid_argument("null batch");
    }

    const std::size_t cap = static_cast<std::size_t>(budget_bytes / 1024);
    if (batches.empty() || cap == 0) return {};

    std::vector<std::size_t> order(batches.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return batches[a].batch->batch_id < batches[b].batch->batch_id;
    });

    const std::size_t n = order.size();
    std::vector<std::size_t> cost(n);
    std::vector<double> score(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& sb = batches[order[i]];
        cost[i] = static_cast<std::size_t>((sb.batch->bytes + 1023) / 1024);
        score[i] = sb.score;
    }

    // Suffix DP: dp[i][w] = best score over items i..n-1 with capacity w.
    std::vector<std::vector<double>> dp(n + 1, std::vector<double>(cap + 1, 0.0));
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t w = 0; w <= cap; ++w) {
            double best = dp[i + 1][w];
            if (cost[i] <= w) {
                best = std::max(best, score[i] + dp[i + 1][w - cost[i]]);
            }
            dp[i][w] = best;
        }
    }

    // Reconstruct the lexicographically smallest optimal id set: taking the
    // earliest id whenever it preserves the optimum is lex-minimal, except
    // that once the remaining optimum is zero the empty suffix wins.
    std::vector<std::string> manifest;
    std::size_t w = cap;
    for (std::size_t i = 0; i < n; ++i) {
        if (dp[i][w] == 0.0) break;
        if (cost[i] <= w && score[i] + dp[i + 1][w - cost[i]] == dp[i][w]) {
            manifest.push_back(batches[order[i]].batch->batch_id);
            w -= cost[i];
        }
    }
    return manifest;  // already sorted: items were visited in ascending id order
}

ClientAgent::ClientAgent(ClientParams params, GaussianSketch train_sketch,
                         LabelHistogram train_hist, MappingProxy own_proxy)
    : params_(std::move(params)),
      train_sketch_(std::move(train_sketch)),
      train_hist_(std::move(train_hist)),
      proxy_(std::move(own_proxy)) {}

GaussianSketch ClientAgent::recent_sketch() const {
    if (pool_.empty()) return train_sketch_;
    const std::size_t k = std::min(params_.recent_batches, pool_.size());
    GaussianSketch merged = pool_[pool_.size() - k].sketch;
    for (std::size_t i = pool_.size() - k + 1; i < pool_.size(); ++i) {
        merged = merge_sketches(merged, pool_[i].sketch);
    }
    return merged;
}

LabelHistogram ClientAgent::recent_hist() const {
    if (pool_.empty()) return train_hist_;
    const std::size_t k = std::min(params_.recent_batches, pool_.size());
    double total = 0.0;
    std::vector<double> acc(train_hist_.probs.size(), 0.0);
    for (std::size_t i = pool_.size() - k; i < pool_.size(); ++i) {
        const auto& b = pool_[i];
        const double n = static_cast<double>(b.sample_count());
        for (std::size_t c = 0; c < acc.size(); ++c) {
            acc[c] += n * b.label_hist.probs[c];
        }
        total += n;
    }
    LabelHistogram h;
    h.probs.resize(acc.size());
    for (std::size_t c = 0; c < acc.size(); ++c) h.probs[c] = acc[c] / total;
    return h;
}

ProfileTick ClientAgent::on_batch(const DataBatch& batch, double t,
                                  std::span<const std::uint8_t> correct_flags,
                                  std::span<const Publication> remote_publications,
                                  bool use_implicit) {
    pool_.push_back(batch);
    while (pool_.size() > params_.pool_batches) pool_.pop_front();

    for (auto f : correct_flags) {
        window_.push_back(f);
        if (window_.size() > params_.window) window_.pop_front();
    }

    ProfileTick tick;
    std::vector<std::uint8_t> flags(window_.begin(), window_.end());
    tick.windowed_acc = profile_accuracy(flags);

    if (!have_reference_ || tick.windowed_acc > reference_acc_) {
        reference_acc_ = tick.windowed_acc;
        have_reference_ = true;
    }

    tick.report.delta_acc = reference_acc_ - tick.windowed_acc;
    tick.report.feat_dist = w2_distance(recent_sketch(), train_sketch_);
    tick.report.label_dist = tv_distance(recent_hist(), train_hist_);
    tick.report.shift_class = classify_shift(tick.report.delta_acc, tick.report.feat_dist,
                                             tick.report.label_dist, params_.thresholds);

    if (tick.report.shift_class == ShiftClass::NoDrift || awaiting_) {
        return tick;
    }

    // Score the local pool: a batch is worth uploading if it helps the own
    // task or any remote task.
    std::vector<ScoredBatch> scored;
    scored.reserve(pool_.size());
    for (const auto& b : pool_) {
        double score = explicit_utility(b, train_sketch_, proxy_);
        if (use_implicit) {
            for (const auto& pub : remote_publications) {
                if (pub.task_id == params_.task_id) continue;
                score = std::max(score, implicit_complementarity(b, pub.sketch, pub.proxy));
            }
        }
        scored.push_back({&b, score});
    }

    auto manifest = resample_budget(scored, params_.upload_budget_bytes);
    if (manifest.empty()) {
        return tick;  // nothing worth uploading under the budget
    }

    EvolutionRequest req;
    ++request_seq_;
    req.request_id = params_.client_id + "-r" + std::to_string(1000 + request_seq_).substr(1);
    req.client_id = params_.client_id;
    req.task_id = params_.task_id;
    req.t_arrival = t;  // provisional; the edge stamps receipt time on arrival
    req.drift = tick.report;
    req.manifest = std::move(manifest);
    req.bytes_total = 0;
    for (const auto& id : req.manifest) {
        for (const auto& b : pool_) {
            if (b.batch_id == id) {
                req.bytes_total += b.bytes;
                break;
            }
        }
    }
    awaiting_ = true;
    tick.request = std::move(req);
    return tick;
}

void ClientAgent::on_evolution_complete(GaussianSketch train_sketch, LabelHistogram train_hist,
                                        MappingProxy own_proxy) {
    train_sketch_ = std::move(train_sketch);
    train_hist_ = std::move(train_hist);
    proxy_ = std::move(own_proxy);
    awaiting_ = false;
}

}  // namespace adabridge
