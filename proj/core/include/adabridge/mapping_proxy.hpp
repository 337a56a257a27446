#pragma once

#include <span>
#include <string>
#include <vector>

#include "adabridge/data_batch.hpp"
#include "adabridge/sketch.hpp"

namespace adabridge {

// Linear surrogate of a task's input-to-label behavior. Small enough to
// publish between clients (d+1 numbers), deterministic to fit, and exact for
// the linear ground-truth labelers the simulator uses.
struct MappingProxy {
    std::string task_id;
    int version = 0;  // strictly increases on each refit
    std::vector<double> weights;
    double bias = 0.0;

    std::size_t dim() const { return weights.size(); }
};

// Perceptron fit: learning rate 1, samples visited in index order, at most
// max_epochs full passes, early stop at zero training errors. The returned
// version is prev_version + 1. Empty input throws std::invalid_argument.
MappingProxy fit_proxy(const SampleMatrix& samples, const std::vector<int>& labels,
                       int max_epochs, std::string task_id = {}, int prev_version = 0);

// sign(weights . x + bias) with sign(0) = +1.
int predict_proxy(const MappingProxy& proxy, std::span<const double> x);

// Fraction of batch samples whose ground-truth label differs from the proxy
// prediction. Empty batch throws.
double proxy_disagreement(const MappingProxy& proxy, const DataBatch& batch);

}  // namespace adabridge
