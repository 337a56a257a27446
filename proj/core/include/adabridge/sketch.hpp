#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace adabridge {

// Row-major n x d sample matrix. Rows are samples, columns are features.
struct SampleMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;  // rows * cols values

    SampleMatrix() = default;
    SampleMatrix(std::size_t n, std::size_t d) : rows(n), cols(d), data(n * d, 0.0) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    const double* row(std::size_t r) const { return data.data() + r * cols; }
    bool empty() const { return rows == 0; }
};

// Compact diagonal-Gaussian summary of a data batch: per-dimension mean and
// population standard deviation plus the number of samples summarized.
// This is the currency of all distribution comparisons in the system.
struct GaussianSketch {
    std::vector<double> mean;
    std::vector<double> std_dev;  // elementwise >= 0
    std::int64_t count = 0;

    std::size_t dim() const { return mean.size(); }
};

// Discrete label distribution over C classes; components sum to 1.
struct LabelHistogram {
    std::vector<double> probs;

    std::size_t classes() const { return probs.size(); }
};

// Column means + population (1/n) standard deviations. Throws
// std::invalid_argument("empty batch") on an empty sample set.
GaussianSketch sketch_from_samples(const SampleMatrix& samples);

// Exact pooled mean/variance via sum and sum-of-squares identities.
// Dimension mismatch throws std::invalid_argument.
GaussianSketch merge_sketches(const GaussianSketch& a, const GaussianSketch& b);

// Closed-form 2-Wasserstein distance between axis-aligned Gaussians:
// sqrt(||mean_a - mean_b||^2 + ||std_a - std_b||^2).
double w2_distance(const GaussianSketch& a, const GaussianSketch& b);

// Total variation distance, 1/2 * sum |p_c - q_c|, in [0, 1].
double tv_distance(const LabelHistogram& p, const LabelHistogram& q);

// Histogram over the binary label alphabet {-1, +1}: probs = [P(-1), P(+1)].
LabelHistogram histogram_from_labels(const std::vector<int>& labels);

}  // namespace adabridge
