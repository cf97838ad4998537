#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace nnlab {

// One sampled point of a training run. `sse` holds the squared-error sum over
// all cases and outputs; for EA curves that is the best fitness so far.
struct CurvePoint {
    std::int64_t iteration = 0; // epoch (BP) or generation (EA), 1-based
    double error_pct = 0.0;     // training misclassification percentage
    double sse = 0.0;
};

struct LearningCurve {
    std::vector<CurvePoint> points;
};

// columns: epoch,train_error_pct,sse
void write_bp_curve_csv(std::ostream& out, const LearningCurve& curve);
// columns: generation,best_fit,best_error_pct
void write_ea_curve_csv(std::ostream& out, const LearningCurve& curve);

} // namespace nnlab
