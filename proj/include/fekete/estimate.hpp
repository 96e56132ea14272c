#pragma once

#include <cstdint>

namespace fekete {

// Every stochastic (and stochastic-capable) result carries its provenance.
// std_error is the sampling error alone: exact mode implies std_error = 0
// and n_samples equal to the full enumeration count.
struct Estimate {
    enum class Mode { exact, monte_carlo };

    double value = 0.0;
    double std_error = 0.0;
    uint64_t n_samples = 0;
    uint64_t seed = 0;
    Mode mode = Mode::exact;
};

}  // namespace fekete
