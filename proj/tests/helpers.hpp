#pragma once

#include <vector>

#include "dyadtree/dataset.hpp"
#include "dyadtree/rng.hpp"

namespace dyadtree::testing {

// Four points on [0,1]: negatives at 0.1, 0.3 and positives at 0.6, 0.9.
inline Dataset z1() {
    Dataset d;
    d.dim = 1;
    d.samples = {{{0.1}, -1}, {{0.3}, -1}, {{0.6}, 1}, {{0.9}, 1}};
    return d;
}

inline Dataset random_dataset(Rng& rng, int n, int dim) {
    Dataset d;
    d.dim = dim;
    d.samples.resize(static_cast<std::size_t>(n));
    for (auto& s : d.samples) {
        s.x.resize(static_cast<std::size_t>(dim));
        for (double& v : s.x) v = rng.uniform();
        s.y = (rng.next() & 1) ? 1 : -1;
    }
    return d;
}

} // namespace dyadtree::testing
