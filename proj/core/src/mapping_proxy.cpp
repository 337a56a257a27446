#include "adabridge/mapping_proxy.hpp"

#include <stdexcept>

namespace adabridge {

namespace {

int sign_plus(double v) { return v >= 0.0 ? +1 : -1; }

double dot(std::span<const double> w, const double* x, std::size_t d) {
    double acc = 0.0;
    for (std::size_t i = 0; i < d; ++i) acc += w[i] * x[i];
    return acc;
}

}  // namespace

MappingProxy fit_proxy(const SampleMatrix& samples, const std::vector<int>& labels,
                       int max_epochs, std::string task_id, int prev_version) {
    if (samples.rows == 0) {
        throw std::invalid_argument("empty training set");
    }
    if (labels.size() != samples.rows) {
        throw std::invalid_argument("labels/samples size mismatch");
    }
    if (max_epochs < 1) {
        throw std::invalid_argument("max_epochs must be positive");
    }

    const std::size_t d = samples.cols;
    MappingProxy p;
    p.task_id = std::move(task_id);
    p.version = prev_version + 1;
    p.weights.assign(d, 0.0);
    p.bias = 0.0;

    for (int epoch = 0; epoch < max_epochs; ++epoch) {
        std::size_t errors = 0;
        for (std::size_t r = 0; r < samples.rows; ++r) {
            const double* x = samples.row(r);
            const int pred = sign_plus(dot(p.weights, x, d) + p.bias);
            if (pred != labels[r]) {
                ++errors;
                for (std::size_t c = 0; c < d; ++c) {
                    p.weights[c] += static_cast<double>(labels[r]) * x[c];
                }
                p.bias += static_cast<double>(labels[r]);
            }
        }
        if (errors == 0) break;
    }
    return p;
}

int predict_proxy(const MappingProxy& proxy, std::span<const double> x) {
    if (x.size() != proxy.dim()) {
        throw std::invalid_argument("proxy dimension mismatch");
    }
    return sign_plus(dot(proxy.weights, x.data(), x.size()) + proxy.bias);
}

double proxy_disagreement(const MappingProxy& proxy, const DataBatch& batch) {
    if (batch.sample_count() == 0) {
        throw std::invalid_argument("empty batch");
    }
    if (batch.samples.cols != proxy.dim()) {
        throw std::invalid_argument("proxy dimension mismatch");
    }
    std::size_t wrong = 0;
    for (std::size_t r = 0; r < batch.samples.rows; ++r) {
        const int pred = predict_proxy(proxy, std::span<const double>(batch.samples.row(r), batch.samples.cols));
        if (pred != batch.labels[r]) ++wrong;
    }
    return static_cast<double>(wrong) / static_cast<double>(batch.sample_count());
}

}  // namespace adabridge
