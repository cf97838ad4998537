#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nnlab/ablation.hpp"
#include "nnlab/bp.hpp"
#include "nnlab/curve.hpp"
#include "nnlab/dataset.hpp"
#include "nnlab/ea.hpp"
#include "nnlab/eval.hpp"
#include "nnlab/network.hpp"

namespace nnlab {

enum class Trainer { BP, EA };
enum class AblationMode { None, Singles, Pairs, All };
enum class PlanCategory { Original, Hidden, Input, HiddenPair };

const char* to_string(Trainer t);
const char* to_string(PlanCategory c);

struct EvalSplit {
    enum class Kind { Full, Holdout } kind = Kind::Full;
    double holdout_fraction = 0.25; // share of cases held out for evaluation
    std::uint64_t seed = 0;
};

struct ExperimentSpec {
    Dataset dataset;
    Topology topology;
    int repetitions = 20;
    BPConfig bp;
    EAConfig ea;
    AblationMode ablation = AblationMode::None;
    EvalSplit split;
    std::uint64_t base_seed = 1; // repetition r trains BP and EA with seed base_seed + r

    void validate() const;
};

struct RunRecord {
    Trainer trainer = Trainer::BP;
    std::uint64_t seed = 0;
    std::string plan_label;
    PlanCategory category = PlanCategory::Original;
    double success_pct = 0.0;
    std::optional<std::size_t> collapsed_class;
};

struct TrainingFailure {
    Trainer trainer = Trainer::BP;
    std::uint64_t seed = 0;
    std::string message;
};

struct RunCurve {
    Trainer trainer = Trainer::BP;
    std::uint64_t seed = 0;
    LearningCurve curve;
};

struct ExperimentResult {
    std::vector<RunRecord> records;   // sorted by (trainer, seed, plan label)
    std::vector<TrainingFailure> failures;
    std::vector<RunCurve> curves;
};

// R repetitions x {BP, EA} x {original + ablation plans}. Repetitions run
// independently (up to `jobs` in parallel); the record order is sorted
// afterwards so scheduling cannot change the output.
ExperimentResult run_experiment(const ExperimentSpec& spec, unsigned jobs = 1);

struct StatsSummary {
    Trainer trainer = Trainer::BP;
    PlanCategory category = PlanCategory::Original;
    double mean = 0.0;
    double sd = 0.0;
    std::size_t n = 0;
};

enum class SdMode { Population, Sample };

// Mean and SD of success grouped by trainer x plan category.
std::vector<StatsSummary> summarize(std::span<const RunRecord> records,
                                    SdMode sd_mode = SdMode::Population);

struct CurveCross {
    bool reached = false;
    std::int64_t iteration = 0;
};

// First curve point at or below the threshold error percentage.
CurveCross first_at_or_below(const LearningCurve& curve, double threshold_error_pct);

// (first BP epoch at/below threshold) / (first EA generation at/below
// threshold); empty when either curve never gets there.
std::optional<double> convergence_ratio(const LearningCurve& bp_curve,
                                        const LearningCurve& ea_curve,
                                        double threshold_error_pct);

// columns: trainer,seed,plan_label,plan_category,success_pct,collapsed_class
void write_records_csv(std::ostream& out, std::span<const RunRecord> records);
std::vector<RunRecord> read_records_csv(std::istream& in);

// columns: trainer,category,mean_pct,sd_pct,n
void write_summary_csv(std::ostream& out, std::span<const StatsSummary> summaries);

} // namespace nnlab
