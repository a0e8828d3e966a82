#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fepls/func_space.hpp"

namespace fepls {

// Paired sample (X_i, Y_i) with every X_i on one grid.
struct Dataset {
    Grid grid{1};
    std::vector<FunctionSample> X;
    std::vector<double> Y;
    // Known index for simulated data.
    std::optional<FunctionSample> index;
    // Noise draws for simulated data, when retained.
    std::vector<FunctionSample> noise;
    std::uint64_t seed = 0;

    std::size_t size() const noexcept { return Y.size(); }

    // Throws when lengths disagree or some X_i is off-grid.
    void validate() const;
};

}  // namespace fepls
