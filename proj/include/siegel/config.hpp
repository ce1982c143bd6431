#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>

namespace siegel {

// Budget for every counting operation, measured in enumerated lattice points:
// stored/streamed vectors for enumeration, aggregated tuples for coefficient
// tables, visited partial tuples for representation numbers.
struct RunConfig {
    std::uint64_t cap = 100000000;  // vector cap
    unsigned threads = 0;           // 0 = hardware concurrency
    std::string format = "json";    // json | table
    bool no_timestamp = false;

    unsigned effective_threads() const {
        if (threads > 0) return threads;
        unsigned hw = std::thread::hardware_concurrency();
        return hw > 0 ? hw : 1;
    }
};

struct CapExceeded : std::runtime_error {
    double estimate;
    explicit CapExceeded(double est, const std::string& what_arg)
        : std::runtime_error(what_arg), estimate(est) {}
};

}  // namespace siegel
