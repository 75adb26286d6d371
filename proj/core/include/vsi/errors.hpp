#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vsi {

// Malformed or physically implausible configuration input.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A caller asked for something the API cannot do (bad window, bad entry
// name, non-positive step size, ...). Distinct from ConfigError so the CLI
// can word messages differently, but both map to the same exit code.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// No physically meaningful operating point or modulation exists for the
// requested parameters: negative discriminant, zero-sequence offset outside
// the feasible band, duty waveform leaving [0, 1].
struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A transfer-function evaluation hit a pole of the model (sI - A singular).
struct PoleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A simulation left the plausible range (non-finite or absurd state). Keeps
// the first offending sample index for diagnostics.
struct DivergedError : std::runtime_error {
    DivergedError(const std::string& msg, std::size_t sample)
        : std::runtime_error(msg), sample_index(sample) {}
    std::size_t sample_index;
};

}  // namespace vsi
