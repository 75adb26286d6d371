#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace vsi {

// Uniformly sampled simulation record, column-major (one vector per channel).
// Row k sits at t = k*dt. Channel names double as CSV column headers.
struct SimTrace {
    double dt = 0.0;
    std::vector<std::string> channels;
    std::vector<std::vector<double>> data;
    // Samples at the head of the trace that a moving-average pass could not
    // fill with a complete window; consumers should skip them.
    std::size_t warmup_samples = 0;
    // Free-form provenance: params snapshot, scenario, integrator id, ...
    std::map<std::string, std::string> metadata;

    std::size_t size() const { return data.empty() ? 0 : data.front().size(); }
    std::size_t channel_index(const std::string& name) const;  // throws UsageError
    const std::vector<double>& channel(const std::string& name) const;

    // Header `t_s,<channels...>`, shortest-round-trip numbers, one row per
    // sample. Byte-deterministic for identical traces.
    void write_csv(std::ostream& out) const;
};

// Mean and peak-to-peak ripple of one channel over a trailing window.
struct ChannelStats {
    double mean = 0.0;
    double ripple = 0.0;
};

// Stats over the trailing `window` seconds (rounded to whole samples) of every
// channel, in channel order. The window must cover at least 2 samples and fit
// inside the trace.
std::vector<ChannelStats> steady_state_of_trace(const SimTrace& trace, double window);

}  // namespace vsi
