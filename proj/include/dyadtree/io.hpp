#pragma once

// File formats: CSV datasets with header x1,...,xd,y (labels +/-1), CSV
// point lists, and the JSON model format with breadth-first node lists.
// Doubles are written with 17 significant digits so round trips are exact.

#include <cstdint>
#include <string>
#include <vector>

#include "dyadtree/classifier.hpp"
#include "dyadtree/dataset.hpp"

namespace dyadtree {

std::string format_double(double v); // %.17g

Dataset read_dataset_csv(const std::string& path);
void write_dataset_csv(const std::string& path, const Dataset& data);

// Points with or without a trailing y column (ignored when present).
std::vector<std::vector<double>> read_points_csv(const std::string& path);

void write_labels_csv(const std::string& path, const std::vector<int>& labels);

struct ModelMeta {
    int m_star = 0;
    std::uint64_t seed = 0;
    int j_max = 0;
};

struct LoadedModel {
    SetClassifier classifier;
    ModelMeta meta;
};

// Uniform-grid classifiers are re-expressed as uniform-depth trees, so the
// grid side must be a power of two to be saved.
void save_model_json(const std::string& path, const SetClassifier& model, const ModelMeta& meta);
LoadedModel load_model_json(const std::string& path);

} // namespace dyadtree
