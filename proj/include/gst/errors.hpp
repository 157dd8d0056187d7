// Exception types shared across the gst library.
#pragma once

#include <stdexcept>
#include <string>

namespace gst {

struct InvalidN : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct EnumerationCapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnexpectedKernelDim : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateB2 : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptySlice : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SamplingStalled : std::runtime_error {
    SamplingStalled(const std::string& what, long long attempts_)
        : std::runtime_error(what), attempts(attempts_) {}
    long long attempts = 0;
};

// Thrown by the path builder when the endpoints provably lie in different
// connected components (sign obstruction on a 0-sphere block).
struct DifferentComponents : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationFailed : std::runtime_error {
    ValidationFailed(const std::string& what, int waypoint_)
        : std::runtime_error(what), waypoint(waypoint_) {}
    int waypoint = -1;
};

}  // namespace gst
