#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dyadtree/errors.hpp"

namespace dyadtree {

// One observation: a point of [0,1]^d with a +/-1 label.
struct LabeledSample {
    std::vector<double> x;
    int y = 1;
};

struct Dataset {
    int dim = 0;
    std::vector<LabeledSample> samples;

    int size() const { return static_cast<int>(samples.size()); }

    std::span<const double> point(int i) const { return samples[static_cast<std::size_t>(i)].x; }
    int label(int i) const { return samples[static_cast<std::size_t>(i)].y; }

    // Number of +1 labels.
    std::int64_t positives() const {
        std::int64_t p = 0;
        for (const auto& s : samples)
            if (s.y > 0) ++p;
        return p;
    }
};

// Rejects empty data, ragged dimensions, coordinates outside [0,1] and
// labels outside {-1,+1}.
inline void validate(const Dataset& data) {
    if (data.samples.empty()) throw DataError("dataset is empty");
    if (data.dim < 1) throw DataError("dataset dimension must be >= 1");
    for (const auto& s : data.samples) {
        if (static_cast<int>(s.x.size()) != data.dim)
            throw DataError("dataset has samples of mixed dimension");
        for (double v : s.x)
            if (!(v >= 0.0 && v <= 1.0)) throw DataError("sample coordinate outside [0,1]");
        if (s.y != 1 && s.y != -1) throw DataError("label must be -1 or +1");
    }
}

inline Dataset make_dataset(int dim, std::vector<LabeledSample> samples) {
    Dataset d{dim, std::move(samples)};
    validate(d);
    return d;
}

} // namespace dyadtree
