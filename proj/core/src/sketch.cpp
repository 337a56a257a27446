#include "adabridge/sketch.hpp"

#include <cmath>
#include <stdexcept>

namespace adabridge {

GaussianSketch sketch_from_samples(const SampleMatrix& samples) {
    if (samples.rows == 0 || samples.cols == 0) {
        throw std::invalid_argument("empty batch");
    }
    const std::size_t n = samples.rows;
    const std::size_t d = samples.cols;

    GaussianSketch s;
    s.mean.assign(d, 0.0);
    s.std_dev.assign(d, 0.0);
    s.count = static_cast<std::int64_t>(n);

    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            s.mean[c] += samples.at(r, c);
        }
    }
    for (std::size_t c = 0; c < d; ++c) {
        s.mean[c] /= static_cast<double>(n);
    }
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            const double dev = samples.at(r, c) - s.mean[c];
            s.std_dev[c] += dev * dev;
        }
    }
    for (std::size_t c = 0; c < d; ++c) {
        s.std_dev[c] = std::sqrt(s.std_dev[c] / static_cast<double>(n));
    }
    return s;
}

GaussianSketch merge_sketches(const GaussianSketch& a, const GaussianSketch& b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("sketch dimension mismatch");
    }
    const double na = static_cast<double>(a.count);
    const double nb = static_cast<double>(b.count);
    const double n = na + nb;

    GaussianSketch m;
    m.mean.resize(a.dim());
    m.std_dev.resize(a.dim());
    m.count = a.count + b.count;

    for (std::size_t c = 0; c < a.dim(); ++c) {
        const double sum = na * a.mean[c] + nb * b.mean[c];
        // E[x^2] per side from population variance: var + mean^2.
        const double sumsq = na * (a.std_dev[c] * a.std_dev[c] + a.mean[c] * a.mean[c]) +
                             nb * (b.std_dev[c] * b.std_dev[c] + b.mean[c] * b.mean[c]);
        const double mean = sum / n;
        double var = sumsq / n - mean * mean;
        if (var < 0.0) var = 0.0;  // FP cancellation guard
        m.mean[c] = mean;
        m.std_dev[c] = std::sqrt(var);
    }
    return m;
}

double w2_distance(const GaussianSketch& a, const GaussianSketch& b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("sketch dimension mismatch");
    }
    double acc = 0.0;
    for (std::size_t c = 0; c < a.dim(); ++c) {
        const double dm = a.mean[c] - b.mean[c];
        const double ds = a.std_dev[c] - b.std_dev[c];
        acc += dm * dm + ds * ds;
    }
    return std::sqrt(acc);
}

double tv_distance(const LabelHistogram& p, const LabelHistogram& q) {
    if (p.classes() != q.classes()) {
        throw std::invalid_argument("histogram class-count mismatch");
    }
    double acc = 0.0;
    for (std::size_t c = 0; c < p.classes(); ++c) {
        acc += std::abs(p.probs[c] - q.probs[c]);
    }
    return 0.5 * acc;
}

LabelHistogram histogram_from_labels(const std::vector<int>& labels) {
    if (labels.empty()) {
        throw std::invalid_argument("empty label set");
    }
    std::size_t neg = 0;
    for (int l : labels) {
        if (l < 0) ++neg;
    }
    const double n = static_cast<double>(labels.size());
    LabelHistogram h;
    h.probs = {static_cast<double>(neg) / n, static_cast<double>(labels.size() - neg) / n};
    return h;
}

}  // namespace adabridge
