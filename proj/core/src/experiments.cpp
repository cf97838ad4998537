#include "nnlab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "nnlab/errors.hpp"
#include "nnlab/util.hpp"

namespace nnlab {

const char* to_string(Trainer t) { return t == Trainer::BP ? "bp" : "ea"; }

const char* to_string(PlanCategory c) {
    switch (c) {
    case PlanCategory::Original: return "original";
    case PlanCategory::Hidden: return "hidden";
    case PlanCategory::Input: return "input";
    case PlanCategory::HiddenPair: return "hidden-pair";
    }
    return "?";
}

namespace {

Trainer trainer_from_string(const std::string& s) {
    if (s == "bp") return Trainer::BP;
    if (s == "ea") return Trainer::EA;
    throw DataError("records csv: unknown trainer '" + s + "'");
}

PlanCategory category_from_string(const std::string& s) {
    if (s == "original") return PlanCategory::Original;
    if (s == "hidden") return PlanCategory::Hidden;
    if (s == "input") return PlanCategory::Input;
    if (s == "hidden-pair") return PlanCategory::HiddenPair;
    throw DataError("records csv: unknown plan category '" + s + "'");
}

// "H2" < "H10": digit runs compare numerically, the rest lexicographically.
bool natural_less(const std::string& a, const std::string& b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (std::isdigit(static_cast<unsigned char>(a[i])) &&
            std::isdigit(static_cast<unsigned char>(b[j]))) {
            std::size_t ie = i, je = j;
            while (ie < a.size() && std::isdigit(static_cast<unsigned char>(a[ie]))) ++ie;
            while (je < b.size() && std::isdigit(static_cast<unsigned char>(b[je]))) ++je;
            const unsigned long long va = std::stoull(a.substr(i, ie - i));
            const unsigned long long vb = std::stoull(b.substr(j, je - j));
            if (va != vb) return va < vb;
            i = ie;
            j = je;
        } else {
            if (a[i] != b[j]) return a[i] < b[j];
            ++i;
            ++j;
        }
    }
    return a.size() < b.size();
}

struct PlanEntry {
    AblationPlan plan;
    PlanCategory category;
};

std::vector<PlanEntry> expand_plans(const Topology& t, AblationMode mode) {
    std::vector<PlanEntry> entries;
    entries.push_back({AblationPlan{{}, "original"}, PlanCategory::Original});
    if (mode == AblationMode::Singles || mode == AblationMode::All) {
        for (auto& p : enumerate_singles(t, LayerKind::Hidden)) {
            entries.push_back({std::move(p), PlanCategory::Hidden});
        }
        for (auto& p : enumerate_singles(t, LayerKind::Input)) {
            entries.push_back({std::move(p), PlanCategory::Input});
        }
    }
    if (mode == AblationMode::Pairs || mode == AblationMode::All) {
        for (auto& p : enumerate_hidden_pairs(t)) {
            entries.push_back({std::move(p), PlanCategory::HiddenPair});
        }
    }
    return entries;
}

} // namespace

void ExperimentSpec::validate() const {
    if (repetitions < 1) throw ConfigError("experiment: repetitions must be >= 1");
    topology.validate();
    bp.validate();
    ea.validate();
    if (dataset.size() == 0) throw ConfigError("experiment: empty dataset");
    if (dataset.n_inputs() != topology.n_inputs || dataset.n_classes() != topology.n_outputs) {
        throw ConfigError("experiment: dataset arity (" + std::to_string(dataset.n_inputs()) +
                          " inputs, " + std::to_string(dataset.n_classes()) +
                          " classes) does not match topology");
    }
    if (split.kind == EvalSplit::Kind::Holdout &&
        (split.holdout_fraction <= 0.0 || split.holdout_fraction >= 1.0)) {
        throw ConfigError("experiment: holdout fraction must be in (0,1)");
    }
    if ((ablation == AblationMode::Pairs || ablation == AblationMode::All) &&
        topology.total_hidden() < 2) {
        throw ConfigError("experiment: pair ablation needs >= 2 hidden neurons");
    }
}

ExperimentResult run_experiment(const ExperimentSpec& spec, unsigned jobs) {
    spec.validate();

    Dataset train = spec.dataset;
    Dataset eval = spec.dataset;
    if (spec.split.kind == EvalSplit::Kind::Holdout) {
        std::vector<std::size_t> idx(spec.dataset.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::mt19937_64 rng(spec.split.seed);
        std::shuffle(idx.begin(), idx.end(), rng);
        std::size_t n_eval = static_cast<std::size_t>(
            std::round(spec.split.holdout_fraction * static_cast<double>(idx.size())));
        n_eval = std::clamp<std::size_t>(n_eval, 1, idx.size() - 1);
        eval = subset(spec.dataset, std::span(idx).subspan(0, n_eval));
        train = subset(spec.dataset, std::span(idx).subspan(n_eval));
    }

    const auto plans = expand_plans(spec.topology, spec.ablation);

    struct RepOutput {
        std::vector<RunRecord> records;
        std::vector<TrainingFailure> failures;
        std::vector<RunCurve> curves;
    };
    std::vector<RepOutput> per_rep(static_cast<std::size_t>(spec.repetitions));

    auto evaluate_plans = [&](Trainer trainer, std::uint64_t seed, const Network& net,
                              RepOutput& out) {
        for (const PlanEntry& entry : plans) {
            const Network ablated = apply(net, entry.plan);
            RunRecord rec;
            rec.trainer = trainer;
            rec.seed = seed;
            rec.plan_label = entry.plan.label;
            rec.category = entry.category;
            rec.success_pct = classification_success(ablated, eval);
            rec.collapsed_class = detect_collapse(ablated, eval);
            out.records.push_back(std::move(rec));
        }
    };

    auto run_one = [&](int r) {
        RepOutput& out = per_rep[static_cast<std::size_t>(r)];
        const std::uint64_t seed = spec.base_seed + static_cast<std::uint64_t>(r);

        BPConfig bp_cfg = spec.bp;
        bp_cfg.seed = seed;
        try {
            BPTrainResult bp = train_bp(spec.topology, train, bp_cfg);
            out.curves.push_back({Trainer::BP, seed, std::move(bp.curve)});
            evaluate_plans(Trainer::BP, seed, bp.network, out);
        } catch (const DivergenceError& e) {
            out.failures.push_back({Trainer::BP, seed, e.what()});
        }

        EAConfig ea_cfg = spec.ea;
        ea_cfg.seed = seed;
        EvolveResult ea = evolve(spec.topology, train, ea_cfg);
        out.curves.push_back({Trainer::EA, seed, std::move(ea.curve)});
        evaluate_plans(Trainer::EA, seed, ea.network, out);
    };

    const unsigned n_jobs =
        std::clamp<unsigned>(jobs, 1, static_cast<unsigned>(spec.repetitions));
    if (n_jobs <= 1) {
        for (int r = 0; r < spec.repetitions; ++r) run_one(r);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> workers;
        workers.reserve(n_jobs);
        for (unsigned t = 0; t < n_jobs; ++t) {
            workers.emplace_back([&] {
                for (int r = next.fetch_add(1); r < spec.repetitions; r = next.fetch_add(1)) {
                    run_one(r);
                }
            });
        }
        for (auto& w : workers) w.join();
    }

    ExperimentResult result;
    for (auto& rep : per_rep) {
        std::move(rep.records.begin(), rep.records.end(), std::back_inserter(result.records));
        std::move(rep.failures.begin(), rep.failures.end(), std::back_inserter(result.failures));
        std::move(rep.curves.begin(), rep.curves.end(), std::back_inserter(result.curves));
    }
    std::sort(result.records.begin(), result.records.end(),
              [](const RunRecord& a, const RunRecord& b) {
                  if (a.trainer != b.trainer) return a.trainer < b.trainer;
                  if (a.seed != b.seed) return a.seed < b.seed;
                  return natural_less(a.plan_label, b.plan_label);
              });
    std::sort(result.curves.begin(), result.curves.end(), [](const RunCurve& a, const RunCurve& b) {
        if (a.trainer != b.trainer) return a.trainer < b.trainer;
        return a.seed < b.seed;
    });
    return result;
}

std::vector<StatsSummary> summarize(std::span<const RunRecord> records, SdMode sd_mode) {
    if (records.empty()) throw ConfigError("summarize: no records");
    std::map<std::pair<Trainer, PlanCategory>, std::vector<double>> groups;
    for (const RunRecord& r : records) {
        groups[{r.trainer, r.category}].push_back(r.success_pct);
    }
    std::vector<StatsSummary> out;
    for (const auto& [key, values] : groups) {
        StatsSummary s;
        s.trainer = key.first;
        s.category = key.second;
        s.n = values.size();
        double sum = 0.0;
        for (double v : values) sum += v;
        s.mean = sum / static_cast<double>(values.size());
        double sq = 0.0;
        for (double v : values) sq += (v - s.mean) * (v - s.mean);
        if (sd_mode == SdMode::Population) {
            s.sd = std::sqrt(sq / static_cast<double>(values.size()));
        } else {
            s.sd = values.size() > 1 ? std::sqrt(sq / static_cast<double>(values.size() - 1)) : 0.0;
        }
        out.push_back(s);
    }
    return out;
}

CurveCross first_at_or_below(const LearningCurve& curve, double threshold_error_pct) {
    for (const CurvePoint& p : curve.points) {
        if (p.error_pct <= threshold_error_pct) return {true, p.iteration};
    }
    return {false, 0};
}

std::optional<double> convergence_ratio(const LearningCurve& bp_curve,
                                        const LearningCurve& ea_curve,
                                        double threshold_error_pct) {
    const CurveCross bp = first_at_or_below(bp_curve, threshold_error_pct);
    const CurveCross ea = first_at_or_below(ea_curve, threshold_error_pct);
    if (!bp.reached || !ea.reached) return std::nullopt;
    return static_cast<double>(bp.iteration) / static_cast<double>(ea.iteration);
}

void write_records_csv(std::ostream& out, std::span<const RunRecord> records) {
    out << "trainer,seed,plan_label,plan_category,success_pct,collapsed_class\n";
    for (const RunRecord& r : records) {
        out << to_string(r.trainer) << ',' << r.seed << ',' << r.plan_label << ','
            << to_string(r.category) << ',' << format_double(r.success_pct) << ',';
        if (r.collapsed_class) out << *r.collapsed_class;
        out << '\n';
    }
}

std::vector<RunRecord> read_records_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("records csv: empty input");
    std::vector<RunRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string tok;
        std::vector<std::string> fields;
        while (std::getline(ss, tok, ',')) fields.push_back(tok);
        if (!line.empty() && line.back() == ',') fields.push_back("");
        if (fields.size() != 6) {
            throw DataError("records csv: line " + std::to_string(line_no) + " has " +
                            std::to_string(fields.size()) + " fields, expected 6");
        }
        RunRecord r;
        r.trainer = trainer_from_string(fields[0]);
        r.seed = std::stoull(fields[1]);
        r.plan_label = fields[2];
        r.category = category_from_string(fields[3]);
        r.success_pct = std::stod(fields[4]);
        if (!fields[5].empty()) r.collapsed_class = std::stoull(fields[5]);
        records.push_back(std::move(r));
    }
    return records;
}

void write_summary_csv(std::ostream& out, std::span<const StatsSummary> summaries) {
    out << "trainer,category,mean_pct,sd_pct,n\n";
    for (const StatsSummary& s : summaries) {
        out << to_string(s.trainer) << ',' << to_string(s.category) << ','
            << format_double(s.mean) << ',' << format_double(s.sd) << ',' << s.n << '\n';
    }
}

} // namespace nnlab
