#include "vsi/trace.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "vsi/errors.hpp"
#include "vsi/format.hpp"

namespace vsi {

std::size_t SimTrace::channel_index(const std::string& name) const {
    for (std::size_t i = 0; i < channels.size(); ++i)
        if (channels[i] == name) return i;
    throw UsageError("trace has no channel named '" + name + "'");
}

const std::vector<double>& SimTrace::channel(const std::string& name) const {
    return data[channel_index(name)];
}

void SimTrace::write_csv(std::ostream& out) const {
    out << "t_s";
    for (const auto& name : channels) out << ',' << name;
    out << '\n';
    const std::size_t n = size();
    for (std::size_t k = 0; k < n; ++k) {
        out << to_shortest(static_cast<double>(k) * dt);
        for (const auto& column : data) out << ',' << to_shortest(column[k]);
        out << '\n';
    }
}

std::vector<ChannelStats> steady_state_of_trace(const SimTrace& trace, double window) {
    const std::size_t n = trace.size();
    if (trace.dt <= 0.0) throw UsageError("trace has no sample period");
    const auto m = static_cast<std::size_t>(std::llround(window / trace.dt));
    if (m < 2) throw UsageError("window covers fewer than 2 samples");
    if (m > n) throw UsageError("window is longer than the trace");

    std::vector<ChannelStats> stats(trace.channels.size());
    for (std::size_t c = 0; c < trace.channels.size(); ++c) {
        const auto& column = trace.data[c];
        double sum = 0.0;
        double lo = column[n - m];
        double hi = lo;
        for (std::size_t k = n - m; k < n; ++k) {
            sum += column[k];
            lo = std::min(lo, column[k]);
            hi = std::max(hi, column[k]);
        }
        stats[c].mean = sum / static_cast<double>(m);
        stats[c].ripple = hi - lo;
    }
    return stats;
}

}  // namespace vsi
