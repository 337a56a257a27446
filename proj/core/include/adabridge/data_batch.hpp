#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "adabridge/sketch.hpp"

namespace adabridge {

// One unit of client sensor data. The sketch and label histogram are always
// recomputable from samples/labels; make_batch keeps them consistent.
struct DataBatch {
    std::string batch_id;
    SampleMatrix samples;
    std::vector<int> labels;  // elements in {-1, +1}, aligned with sample rows
    std::int64_t bytes = 0;   // serialized payload size, >= 1
    GaussianSketch sketch;
    LabelHistogram label_hist;
    std::string origin_client;

    std::size_t sample_count() const { return samples.rows; }
};

// Builds a batch with sketch/label_hist derived from the given data.
DataBatch make_batch(std::string batch_id, SampleMatrix samples, std::vector<int> labels,
                     std::int64_t bytes, std::string origin_client);

}  // namespace adabridge
