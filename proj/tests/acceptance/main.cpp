// Acceptance gate. One line per criterion: PASS / FAIL / SKIP plus a detail
// string. Exit code = number of failed gating criteria (the UCI check is
// advisory and never gates). Tolerances are pinned here, not configurable.
//
// Environment:
//   NNLAB_CLI      path to the nnlab binary (criterion 10)
//   NNLAB_DATA_DIR directory holding schemas/ (criterion 11)
//   NNLAB_UCI_DIR  directory with breast-cancer-wisconsin.data; absent -> SKIP 11

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nnlab/ablation.hpp"
#include "nnlab/bp.hpp"
#include "nnlab/dataset.hpp"
#include "nnlab/ea.hpp"
#include "nnlab/eval.hpp"
#include "nnlab/experiments.hpp"
#include "nnlab/network.hpp"

#include "support/oracles.hpp"

namespace fs = std::filesystem;
using namespace nnlab;

namespace {

int failures = 0;

void report(int idx, const char* status, const std::string& detail) {
    std::printf("%2d %-4s %s\n", idx, status, detail.c_str());
    std::fflush(stdout);
}

void verdict(int idx, bool ok, const std::string& detail, bool gates = true) {
    if (!ok && gates) ++failures;
    report(idx, ok ? "PASS" : "FAIL", detail);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Topology topo(std::size_t i, std::vector<std::size_t> hidden, std::size_t o, bool bias = true) {
    Topology t;
    t.n_inputs = i;
    t.hidden_sizes = std::move(hidden);
    t.n_outputs = o;
    t.bias = bias;
    return t;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// ---- 1: analytic gradients vs central finite differences ----

void criterion_gradients() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(4217);
    std::uniform_real_distribution<double> param(0.5, 2.0);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        Network net = init_weights(topo(3, {4}, 2), rng(), 1.0);
        if (i % 2 == 1) { // half the nets with non-default activation params
            for (auto& layer : net.neuron_configs) {
                for (auto& nc : layer) {
                    nc.activation.alpha = param(rng);
                    nc.activation.beta = param(rng);
                    nc.activation.gamma = param(rng);
                    nc.output_scale = param(rng);
                }
            }
        }
        const std::vector<double> input = oracle::random_input(3, rng);
        const std::vector<double> target = oracle::random_input(2, rng);
        const Gradients analytic = error_gradients(net, input, target);
        const Gradients fd = oracle::fd_gradients(net, input, target, 1e-5);
        for (std::size_t l = 0; l < analytic.size(); ++l) {
            for (std::size_t k = 0; k < analytic[l].data.size(); ++k) {
                const double a = analytic[l].data[k];
                const double f = fd[l].data[k];
                const double rel =
                    std::fabs(a - f) / std::max({std::fabs(a), std::fabs(f), 1e-4});
                worst = std::max(worst, rel);
            }
        }
    }
    const double secs = seconds_since(t0);
    verdict(1, worst < 1e-5 && secs < 5.0,
            fmt("gradcheck 10x 3-4-2: max rel err %.3g (< 1e-5), %.2f s (< 5)", worst, secs));
}

// ---- 2: beta=0 shutdown equals physically removing the neuron ----

void criterion_removal() {
    std::mt19937_64 rng(911);
    std::uniform_int_distribution<std::size_t> in_d(1, 5), hid_d(2, 6), out_d(1, 3);
    std::uniform_int_distribution<int> layers_d(1, 2), coin(0, 1);
    std::uniform_real_distribution<double> param(0.5, 2.0);
    double worst = 0.0;
    int checked = 0;
    for (int i = 0; i < 20; ++i) {
        Topology t;
        t.n_inputs = in_d(rng);
        const int n_layers = layers_d(rng);
        for (int l = 0; l < n_layers; ++l) t.hidden_sizes.push_back(hid_d(rng));
        t.n_outputs = out_d(rng);
        t.bias = coin(rng) == 0;
        Network net = init_weights(t, rng(), 2.0);
        if (coin(rng) == 0) {
            for (auto& layer : net.neuron_configs) {
                for (auto& nc : layer) {
                    nc.activation.alpha = param(rng);
                    nc.activation.beta = param(rng);
                    nc.activation.gamma = param(rng);
                }
            }
        }
        for (std::size_t l = 0; l < t.hidden_sizes.size(); ++l) {
            for (std::size_t n = 0; n < t.hidden_sizes[l]; ++n) {
                AblationPlan plan;
                plan.items.push_back({LayerKind::Hidden, l, n, 0.0});
                const Network shut = apply(net, plan, ShutdownMechanism::BetaScale);
                const Network removed = oracle::remove_hidden_neuron(net, l, n);
                for (int probe = 0; probe < 5; ++probe) {
                    const auto input = oracle::random_input(t.n_inputs, rng);
                    const auto a = forward_output(shut, input);
                    const auto b = forward_output(removed, input);
                    for (std::size_t o = 0; o < a.size(); ++o) {
                        worst = std::max(worst, std::fabs(a[o] - b[o]));
                    }
                }
                ++checked;
            }
        }
    }
    verdict(2, worst <= 1e-12,
            fmt("beta=0 == neuron removal on %d net/neuron combos: max |diff| %.3g (<= 1e-12)",
                checked, worst));
}

// ---- 3: EA operator properties ----

void criterion_operators() {
    std::mt19937_64 rng(5150);
    std::uniform_real_distribution<double> weight(-5.0, 5.0);
    std::uniform_int_distribution<std::size_t> len_d(2, 30);

    // crossover children stay coordinate-wise inside the parent span
    bool cross_ok = true;
    for (int trial = 0; trial < 10000 && cross_ok; ++trial) {
        const std::size_t len = len_d(rng);
        std::vector<double> w1(len), w2(len);
        for (double& v : w1) v = weight(rng);
        for (double& v : w2) v = weight(rng);
        if (trial % 7 == 0) w2 = w1; // degenerate pairing must also hold
        const auto [c1, c2] = crossover(w1, w2, rng);
        for (std::size_t g = 0; g < len; ++g) {
            const double lo = std::min(w1[g], w2[g]);
            const double hi = std::max(w1[g], w2[g]);
            // convex combination can leave the span by rounding only
            const double tol = 1e-12 * std::max({1.0, std::fabs(lo), std::fabs(hi)});
            if (c1[g] < lo - tol || c1[g] > hi + tol || c2[g] < lo - tol || c2[g] > hi + tol) {
                cross_ok = false;
                break;
            }
        }
    }

    // mutation steps bounded by cte
    const double cte = 0.4;
    bool mut_ok = true;
    double max_step = 0.0;
    Chromosome base;
    base.genes.assign(12, 0.0);
    for (std::size_t g = 0; g < base.genes.size(); ++g) base.genes[g] = weight(rng);
    for (int trial = 0; trial < 100000 && mut_ok; ++trial) {
        const Chromosome m = mutate(base, cte, rng);
        if (m.fit.has_value()) mut_ok = false;
        int changed = 0;
        for (std::size_t g = 0; g < base.genes.size(); ++g) {
            const double step = std::fabs(m.genes[g] - base.genes[g]);
            if (step > 0.0) {
                ++changed;
                max_step = std::max(max_step, step);
            }
        }
        if (changed > 1 || max_step > cte + 1e-15) mut_ok = false;
    }

    // roulette frequencies match the probabilities (chi-square, df=9, alpha=0.001)
    std::vector<double> fits(10);
    std::uniform_real_distribution<double> fit_d(0.1, 20.0);
    for (double& f : fits) f = fit_d(rng);
    const std::vector<double> probs = selection_probs(fits, 1e-9);
    const std::size_t draws = 100000;
    const std::vector<std::size_t> picks = roulette_select(probs, draws, rng);
    std::vector<std::size_t> observed(probs.size(), 0);
    for (std::size_t p : picks) ++observed[p];
    const double chi2 = oracle::chi_square(observed, probs, draws);
    const bool roulette_ok = chi2 < 27.877; // chi^2_{0.999, df=9}

    // selection probabilities form a distribution under both inversions
    bool sum_ok = true;
    for (int trial = 0; trial < 100 && sum_ok; ++trial) {
        std::vector<double> f(2 + trial % 9);
        for (double& x : f) x = fit_d(rng);
        for (auto inv : {FitnessInversion::MaxMinus, FitnessInversion::Reciprocal}) {
            const auto p = selection_probs(f, 1e-9, inv);
            double sum = 0.0;
            for (double x : p) {
                if (x < 0.0) sum_ok = false;
                sum += x;
            }
            if (std::fabs(sum - 1.0) > 1e-12) sum_ok = false;
        }
    }

    verdict(3, cross_ok && mut_ok && roulette_ok && sum_ok,
            fmt("operators: crossover span %s, mutation bound %s (max step %.4f <= %.1f), "
                "roulette chi2 %.2f (< 27.877), prob sums %s",
                cross_ok ? "ok" : "VIOLATED", mut_ok ? "ok" : "VIOLATED", max_step, cte, chi2,
                sum_ok ? "ok" : "VIOLATED"));
}

// ---- 4: fitness equals a brute-force double loop ----

void criterion_fitness() {
    std::mt19937_64 rng(808);
    std::uniform_int_distribution<std::size_t> cases_d(5, 40);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const Network net = oracle::random_network(rng);
        const Dataset d = oracle::random_dataset(cases_d(rng), net.topology.n_inputs,
                                                 net.topology.n_outputs, rng);
        const Chromosome c = encode(net);
        // fitness() decodes with default neuron configs; mirror that for the oracle
        const Network plain = decode(c, net.topology);
        const double got = fitness(c, d, net.topology);
        const double want = oracle::brute_force_sse(plain, d);
        worst = std::max(worst, std::fabs(got - want));
    }
    verdict(4, worst <= 1e-12,
            fmt("fitness vs brute force on 50 nets: max |diff| %.3g (<= 1e-12)", worst));
}

// ---- 5: XOR desk benchmark ----

void criterion_xor() {
    const auto t0 = std::chrono::steady_clock::now();
    const Dataset d = gen_synthetic(SyntheticKind::Xor, 4, 0);
    const Topology t = topo(2, {4}, 2);
    int bp_hits = 0, ea_hits = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        BPConfig bp; // eta 0.1, momentum 0.9, 20000 epochs
        bp.seed = seed;
        bp.curve_samples = 1; // curve not needed here
        if (classification_success(train_bp(t, d, bp).network, d) == 100.0) ++bp_hits;

        EAConfig ea;
        ea.population_size = 10;
        ea.mutation_cte = 0.4;
        ea.crossover_prob = 0.8;
        ea.mutation_prob = 0.8;
        ea.generations = 2000;
        ea.seed = seed;
        if (classification_success(evolve(t, d, ea).network, d) == 100.0) ++ea_hits;
    }
    const double secs = seconds_since(t0);
    verdict(5, bp_hits >= 18 && ea_hits >= 18 && secs < 60.0,
            fmt("xor 100%% on bp %d/20, ea %d/20 (>= 18 each), %.1f s (< 60)", bp_hits, ea_hits,
                secs));
}

// ---- 6: EA reaches the 5% error threshold in fewer iterations ----

void criterion_convergence() {
    const Dataset d = gen_synthetic(SyntheticKind::Xor, 4, 0);
    const Topology t = topo(2, {4}, 2);
    std::vector<double> ratios;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        BPConfig bp; // stock settings: eta 0.1, momentum 0.9
        bp.seed = seed;
        bp.curve_samples = bp.epochs; // record every epoch: no stride quantization
        const LearningCurve bp_curve = train_bp(t, d, bp).curve;

        EAConfig ea;
        ea.population_size = 10;
        ea.mutation_cte = 1.2; // coarse steps reach the +-5 weight scale xor needs
        ea.generations = 2000;
        ea.seed = seed;
        const LearningCurve ea_curve = evolve(t, d, ea).curve;

        const CurveCross b = first_at_or_below(bp_curve, 5.0);
        const CurveCross e = first_at_or_below(ea_curve, 5.0);
        if (b.reached && e.reached) {
            ratios.push_back(static_cast<double>(b.iteration) / static_cast<double>(e.iteration));
        } else if (e.reached) {
            ratios.push_back(std::numeric_limits<double>::infinity()); // only the EA got there
        } else if (b.reached) {
            ratios.push_back(0.0); // only BP got there
        } // neither: seed carries no signal
    }
    const bool enough = ratios.size() >= 10;
    const double med = enough ? median(ratios) : 0.0;
    verdict(6, enough && med > 1.0,
            fmt("convergence ratio (bp epochs / ea generations at 5%% error): median %.2f over "
                "%zu/20 seeds (> 1.0)",
                med, ratios.size()));
}

// ---- 7: robustness ordering on blobs, bootstrap over seeds ----

struct SeedStats {
    std::vector<double> bp_hidden, ea_hidden; // per-plan success
    double bp_original = 0.0, ea_original = 0.0;
};

void criterion_robustness() {
    // Budgets where both trainers reach 100% on the original nets (sd 0 for
    // both), isolating the post-shutdown comparison the tables describe.
    ExperimentSpec spec;
    spec.dataset = gen_synthetic(SyntheticKind::Blobs, 200, 5);
    spec.topology = topo(2, {6}, 2);
    spec.repetitions = 10;
    spec.bp.epochs = 200;
    spec.bp.curve_samples = 1;
    spec.ea.generations = 4000;
    spec.ea.population_size = 10;
    spec.ea.mutation_cte = 0.8;
    spec.ablation = AblationMode::Singles;
    spec.base_seed = 1;
    const ExperimentResult res = run_experiment(spec, 4);

    std::vector<std::uint64_t> seeds;
    for (int r = 0; r < spec.repetitions; ++r) {
        seeds.push_back(spec.base_seed + static_cast<std::uint64_t>(r));
    }
    std::vector<SeedStats> by_seed(seeds.size());
    for (const RunRecord& rec : res.records) {
        const std::size_t idx = static_cast<std::size_t>(rec.seed - spec.base_seed);
        SeedStats& s = by_seed[idx];
        if (rec.category == PlanCategory::Hidden) {
            (rec.trainer == Trainer::BP ? s.bp_hidden : s.ea_hidden).push_back(rec.success_pct);
        } else if (rec.category == PlanCategory::Original) {
            (rec.trainer == Trainer::BP ? s.bp_original : s.ea_original) = rec.success_pct;
        }
    }

    // mean over hidden-plan records, population SD over original records
    auto stats = [&](const std::vector<std::size_t>& pick, double& ea_h, double& bp_h,
                     double& ea_sd, double& bp_sd) {
        std::vector<double> eh, bh, eo, bo;
        for (std::size_t i : pick) {
            const SeedStats& s = by_seed[i];
            eh.insert(eh.end(), s.ea_hidden.begin(), s.ea_hidden.end());
            bh.insert(bh.end(), s.bp_hidden.begin(), s.bp_hidden.end());
            eo.push_back(s.ea_original);
            bo.push_back(s.bp_original);
        }
        auto mean = [](const std::vector<double>& v) {
            double sum = 0.0;
            for (double x : v) sum += x;
            return sum / static_cast<double>(v.size());
        };
        auto sd = [&](const std::vector<double>& v) {
            const double m = mean(v);
            double acc = 0.0;
            for (double x : v) acc += (x - m) * (x - m);
            return std::sqrt(acc / static_cast<double>(v.size()));
        };
        ea_h = mean(eh);
        bp_h = mean(bh);
        ea_sd = sd(eo);
        bp_sd = sd(bo);
    };

    std::vector<std::size_t> all(seeds.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    double ea_h, bp_h, ea_sd, bp_sd;
    stats(all, ea_h, bp_h, ea_sd, bp_sd);

    std::mt19937_64 boot_rng(99);
    std::uniform_int_distribution<std::size_t> pick_d(0, seeds.size() - 1);
    int holds = 0;
    for (int b = 0; b < 10; ++b) {
        std::vector<std::size_t> pick(seeds.size());
        for (std::size_t& p : pick) p = pick_d(boot_rng);
        double reh, rbh, res_, rbs;
        stats(pick, reh, rbh, res_, rbs);
        if (reh >= rbh && res_ <= rbs) ++holds;
    }
    verdict(7, holds >= 8,
            fmt("blobs 2-6-2: mean hidden ea %.2f vs bp %.2f, sd original ea %.2f vs bp %.2f; "
                "ordering holds in %d/10 bootstrap resamples (>= 8)",
                ea_h, bp_h, ea_sd, bp_sd, holds));
}

// ---- 8: constant-class network scores exactly the majority share ----

void criterion_majority() {
    // first-layer weights all zero -> hidden constant; output row 0 strongly
    // positive, row 1 strongly negative -> always class 0
    Network net = make_network(topo(2, {2}, 2));
    Matrix& out = net.weights[1];
    for (std::size_t c = 0; c < out.cols; ++c) {
        out.at(0, c) = 5.0;
        out.at(1, c) = -5.0;
    }

    Dataset d;
    d.name = "split-503-268";
    d.class_counts = {503, 268}; // PIMA's 65.24 / 34.76 split
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 771; ++i) {
        d.inputs.push_back({u(rng), u(rng)});
        d.targets.push_back(i < 503 ? std::vector<double>{1.0, 0.0}
                                    : std::vector<double>{0.0, 1.0});
    }

    const double majority = 100.0 * 503.0 / 771.0;
    const double success = classification_success(net, d);
    const auto collapse = detect_collapse(net, d);
    const bool ok = success == majority && collapse.has_value() && *collapse == 0 &&
                    majority_fraction(d) == majority && std::fabs(majority - 65.24) < 0.005;
    verdict(8, ok,
            fmt("constant net on 503/268 split: success %.6f == majority %.6f, collapse -> "
                "class %s",
                success, majority, collapse ? std::to_string(*collapse).c_str() : "none"));
}

// ---- 9: enumeration counts for the benchmark geometries ----

void criterion_counts() {
    struct Geometry {
        std::size_t inputs, hidden, outputs, pairs;
    };
    const Geometry geos[] = {
        {9, 8, 2, 28}, {51, 12, 2, 66}, {58, 6, 3, 15}, {8, 8, 2, 28}, {60, 12, 2, 66},
    };
    bool ok = true;
    for (const Geometry& g : geos) {
        const Topology t = topo(g.inputs, {g.hidden}, g.outputs);
        ok = ok && enumerate_singles(t, LayerKind::Input).size() == g.inputs &&
             enumerate_singles(t, LayerKind::Hidden).size() == g.hidden &&
             enumerate_hidden_pairs(t).size() == g.pairs;
    }
    verdict(9, ok, "singles/pairs counts match I, H, H(H-1)/2 for all five geometries");
}

// ---- 10: byte-identical experiment outputs through the CLI ----

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void criterion_determinism() {
    std::string cli;
    if (const char* env = std::getenv("NNLAB_CLI")) cli = env;
    if (cli.empty() || !fs::exists(cli)) {
        verdict(10, false, "nnlab binary not found; set NNLAB_CLI");
        return;
    }
    const fs::path base = fs::temp_directory_path() / "nnlab_acceptance_det";
    fs::remove_all(base);
    fs::create_directories(base);
    const std::string spec_args =
        " experiment --dataset blobs --n 40 --data-seed 3 --topology 2-3-2 --reps 2"
        " --ablation all --seed 11 --epochs 200 --generations 60 --pop-size 10";
    auto run = [&](const std::string& extra, const char* tag) {
        const fs::path out = base / tag;
        const std::string cmd = cli + spec_args + extra + " --out " + out.string() + " >" +
                                (base / (std::string(tag) + ".log")).string() + " 2>&1";
        return std::system(cmd.c_str()) == 0;
    };
    const bool ran = run("", "a") && run("", "b") && run(" --jobs 4", "c");
    const bool records_same = ran && slurp(base / "a" / "records.csv") ==
                                         slurp(base / "b" / "records.csv") &&
                              slurp(base / "a" / "records.csv") ==
                                  slurp(base / "c" / "records.csv");
    const bool summary_same = ran && slurp(base / "a" / "summary.csv") ==
                                         slurp(base / "b" / "summary.csv") &&
                              slurp(base / "a" / "summary.csv") ==
                                  slurp(base / "c" / "summary.csv");
    verdict(10, ran && records_same && summary_same,
            fmt("three cli experiment runs (jobs 1, 1, 4): records.csv %s, summary.csv %s",
                records_same ? "identical" : "DIFFER", summary_same ? "identical" : "DIFFER"));
}

// ---- 11 (advisory): CANCER 9-8-2 original-success bands ----

void criterion_uci() {
    const char* uci = std::getenv("NNLAB_UCI_DIR");
    const fs::path data_file = uci ? fs::path(uci) / "breast-cancer-wisconsin.data" : fs::path();
    if (!uci || !fs::exists(data_file)) {
        report(11, "SKIP", "optional: breast-cancer-wisconsin.data not present (set "
                           "NNLAB_UCI_DIR to run)");
        return;
    }
    const char* data_dir = std::getenv("NNLAB_DATA_DIR");
    const fs::path schema =
        (data_dir ? fs::path(data_dir) : fs::path("data")) / "schemas" / "cancer.schema.json";
    if (!fs::exists(schema)) {
        verdict(11, false, "cancer.schema.json not found; set NNLAB_DATA_DIR", false);
        return;
    }
    ExperimentSpec spec;
    spec.dataset = load_csv(data_file, load_schema(schema));
    spec.topology = topo(9, {8}, 2);
    spec.repetitions = 20;
    spec.bp.epochs = 5000;
    spec.bp.curve_samples = 1;
    spec.ea.generations = 2000;
    spec.ea.population_size = 10;
    spec.ea.mutation_cte = 0.4;
    spec.base_seed = 1;
    const ExperimentResult res = run_experiment(spec, 4);
    double bp_sum = 0.0, ea_sum = 0.0;
    std::size_t bp_n = 0, ea_n = 0;
    for (const RunRecord& r : res.records) {
        if (r.category != PlanCategory::Original) continue;
        if (r.trainer == Trainer::BP) {
            bp_sum += r.success_pct;
            ++bp_n;
        } else {
            ea_sum += r.success_pct;
            ++ea_n;
        }
    }
    const double bp_mean = bp_n ? bp_sum / static_cast<double>(bp_n) : 0.0;
    const double ea_mean = ea_n ? ea_sum / static_cast<double>(ea_n) : 0.0;
    const bool ok = ea_mean >= 90.0 && ea_mean <= 100.0 && bp_mean >= 80.0 && bp_mean <= 96.0;
    // advisory band: a miss asks for investigation, it does not gate the build
    verdict(11, ok,
            fmt("cancer 9-8-2 x20: ea original mean %.2f (band [90,100]), bp %.2f (band "
                "[80,96]) - advisory",
                ea_mean, bp_mean),
            false);
}

} // namespace

int main() {
    criterion_gradients();
    criterion_removal();
    criterion_operators();
    criterion_fitness();
    criterion_xor();
    criterion_convergence();
    criterion_robustness();
    criterion_majority();
    criterion_counts();
    criterion_determinism();
    criterion_uci();
    if (failures) std::printf("%d criteria FAILED\n", failures);
    else std::printf("all gating criteria passed\n");
    return failures;
}
