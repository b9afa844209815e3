#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pi2 {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidArgument : Error {
    using Error::Error;
};

// Coefficient recurrence left the floating range; carries the index reached.
struct CoefficientOverflow : Error {
    int index_reached;
    CoefficientOverflow(const std::string& msg, int idx)
        : Error(msg), index_reached(idx) {}
};

// auto_truncate could not reach the requested threshold before the series
// started to diverge; carries the achievable minimum.
struct ThresholdUnreachable : Error {
    double achievable_minimum;
    int minimal_index;
    ThresholdUnreachable(const std::string& msg, double min_term, int idx)
        : Error(msg), achievable_minimum(min_term), minimal_index(idx) {}
};

// Model curve has a triple or quadruple branch point at the requested (x,t).
struct DegenerateCurve : Error {
    using Error::Error;
};

struct BranchTrackingFailure : Error {
    using Error::Error;
};

struct NoConvergence : Error {
    std::vector<double> residual_history;
    NoConvergence(const std::string& msg, std::vector<double> hist)
        : Error(msg), residual_history(std::move(hist)) {}
};

struct SingularSolve : Error {
    using Error::Error;
};

// Quasi-linear Stokes difference grows instead of decaying at the requested
// direction.
struct NotExponentiallySmall : Error {
    using Error::Error;
};

// Measured difference is below the truncation/rounding floor everywhere.
struct SignalBelowNoiseFloor : Error {
    using Error::Error;
};

}  // namespace pi2
