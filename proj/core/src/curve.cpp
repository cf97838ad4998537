#include "nnlab/curve.hpp"

#include <ostream>

#include "nnlab/util.hpp"

namespace nnlab {

void write_bp_curve_csv(std::ostream& out, const LearningCurve& curve) {
    out << "epoch,train_error_pct,sse\n";
    for (const CurvePoint& p : curve.points) {
        out << p.iteration << ',' << format_double(p.error_pct) << ',' << format_double(p.sse)
            << '\n';
    }
}

void write_ea_curve_csv(std::ostream& out, const LearningCurve& curve) {
    out << "generation,best_fit,best_error_pct\n";
    for (const CurvePoint& p : curve.points) {
        out << p.iteration << ',' << format_double(p.sse) << ',' << format_double(p.error_pct)
            << '\n';
    }
}

} // namespace nnlab
