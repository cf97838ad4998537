// nnlab command line: gen-data | train | ablate | experiment | summarize.
// Exit codes: 0 ok, 1 usage/config, 2 data, 3 divergence.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nnlab/ablation.hpp"
#include "nnlab/bp.hpp"
#include "nnlab/dataset.hpp"
#include "nnlab/ea.hpp"
#include "nnlab/errors.hpp"
#include "nnlab/eval.hpp"
#include "nnlab/experiments.hpp"
#include "nnlab/network.hpp"
#include "nnlab/network_io.hpp"
#include "nnlab/util.hpp"

namespace fs = std::filesystem;
using nnlab::ConfigError;
using nnlab::DataError;
using json = nlohmann::ordered_json;

namespace {

std::string iso_timestamp() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw DataError("cannot write " + p.string());
    out << content;
    if (!out) throw DataError("short write: " + p.string());
}

void write_manifest(const fs::path& out_dir, json manifest) {
    manifest["created"] = iso_timestamp(); // the only timestamp in any artifact
    write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

nnlab::Topology parse_topology(const std::string& text, bool bias) {
    std::vector<std::size_t> sizes;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, '-')) {
        try {
            std::size_t pos = 0;
            const unsigned long v = std::stoul(part, &pos);
            if (pos != part.size()) throw std::invalid_argument(part);
            sizes.push_back(v);
        } catch (const std::exception&) {
            throw ConfigError("topology '" + text + "': bad layer size '" + part + "'");
        }
    }
    if (sizes.size() < 2) {
        throw ConfigError("topology '" + text + "': need at least inputs and outputs");
    }
    nnlab::Topology t;
    t.n_inputs = sizes.front();
    t.n_outputs = sizes.back();
    t.hidden_sizes.assign(sizes.begin() + 1, sizes.end() - 1);
    t.bias = bias;
    t.validate();
    return t;
}

std::string topology_string(const nnlab::Topology& t) {
    std::string s = std::to_string(t.n_inputs);
    for (std::size_t h : t.hidden_sizes) s += "-" + std::to_string(h);
    s += "-" + std::to_string(t.n_outputs);
    return s;
}

// Reads back the canonical dump written by gen-data / write_normalized_csv:
// header x0..x{k-1},y0..y{m-1}, one-hot targets.
nnlab::Dataset read_normalized_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw DataError(path.string() + ": empty file");
    std::size_t n_x = 0, n_y = 0;
    {
        std::stringstream hs(line);
        std::string col;
        bool seen_y = false;
        while (std::getline(hs, col, ',')) {
            if (!col.empty() && col[0] == 'x' && !seen_y) {
                ++n_x;
            } else if (!col.empty() && col[0] == 'y') {
                seen_y = true;
                ++n_y;
            } else {
                throw DataError(path.string() + ": not a normalized csv (header column '" +
                                col + "')");
            }
        }
    }
    if (n_x == 0 || n_y == 0) throw DataError(path.string() + ": not a normalized csv");

    nnlab::Dataset d;
    d.name = path.stem().string();
    d.class_counts.assign(n_y, 0);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::stringstream ls(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(ls, cell, ',')) {
            try {
                vals.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw DataError(path.string() + ":" + std::to_string(line_no) +
                                ": bad number '" + cell + "'");
            }
        }
        if (vals.size() != n_x + n_y) {
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(n_x + n_y) + " columns, got " +
                            std::to_string(vals.size()));
        }
        std::vector<double> target(vals.begin() + static_cast<std::ptrdiff_t>(n_x), vals.end());
        double sum = 0.0;
        for (double v : target) {
            if (v != 0.0 && v != 1.0) {
                throw DataError(path.string() + ":" + std::to_string(line_no) +
                                ": target columns must be one-hot");
            }
            sum += v;
        }
        if (sum != 1.0) {
            throw DataError(path.string() + ":" + std::to_string(line_no) +
                            ": target columns must be one-hot");
        }
        d.inputs.emplace_back(vals.begin(), vals.begin() + static_cast<std::ptrdiff_t>(n_x));
        d.targets.push_back(std::move(target));
        for (std::size_t c = 0; c < n_y; ++c) {
            if (d.targets.back()[c] == 1.0) ++d.class_counts[c];
        }
    }
    if (d.inputs.empty()) throw DataError(path.string() + ": no data rows");
    return d;
}

struct DataOpts {
    std::string dataset;     // "xor", "blobs", or a file path
    std::string schema;      // optional schema json for raw csv files
    std::size_t n = 0;       // synthetic row count; 0 = kind default
    std::uint64_t data_seed = 0;
};

void add_data_opts(CLI::App* cmd, DataOpts& o) {
    cmd->add_option("--dataset", o.dataset, "xor | blobs | path to a csv file")->required();
    cmd->add_option("--schema", o.schema, "schema json for a raw csv dataset");
    cmd->add_option("--n", o.n, "synthetic dataset size (xor default 4, blobs default 200)");
    cmd->add_option("--data-seed", o.data_seed, "rng seed for synthetic data")
        ->capture_default_str();
}

nnlab::Dataset resolve_dataset(const DataOpts& o, json* cfg) {
    if (o.dataset == "xor" || o.dataset == "blobs") {
        const bool is_xor = o.dataset == "xor";
        const std::size_t n = o.n ? o.n : (is_xor ? 4 : 200);
        nnlab::Dataset d = nnlab::gen_synthetic(
            is_xor ? nnlab::SyntheticKind::Xor : nnlab::SyntheticKind::Blobs, n, o.data_seed);
        if (cfg) {
            (*cfg)["dataset"] = o.dataset;
            (*cfg)["n"] = n;
            (*cfg)["data_seed"] = o.data_seed;
        }
        return d;
    }
    const fs::path path = o.dataset;
    if (!fs::exists(path)) throw DataError("dataset not found: " + path.string());

    fs::path schema_path;
    if (!o.schema.empty()) {
        schema_path = o.schema;
    } else {
        fs::path sidecar = path;
        sidecar.replace_extension(".schema.json");
        if (fs::exists(sidecar)) schema_path = sidecar;
    }
    if (!schema_path.empty()) {
        const nnlab::SchemaSpec schema = nnlab::load_schema(schema_path);
        nnlab::LoadStats stats;
        nnlab::Dataset d = nnlab::load_csv(path, schema, &stats);
        if (cfg) {
            (*cfg)["dataset"] = path.string();
            (*cfg)["schema"] = schema_path.string();
            (*cfg)["rows_read"] = stats.rows_read;
            (*cfg)["rows_dropped_missing_class"] = stats.rows_dropped_missing_class;
            (*cfg)["input_width"] = stats.input_width;
        }
        return d;
    }
    // no schema anywhere: only the canonical normalized dump is self-describing
    nnlab::Dataset d = read_normalized_csv(path);
    if (cfg) {
        (*cfg)["dataset"] = path.string();
        (*cfg)["schema"] = nullptr;
    }
    return d;
}

json bp_json(const nnlab::BPConfig& c) {
    json j;
    j["learning_factor"] = c.learning_factor;
    j["momentum"] = c.momentum;
    j["epochs"] = c.epochs;
    j["shuffle_each_epoch"] = c.shuffle_each_epoch;
    j["init_range"] = c.init_range;
    j["curve_samples"] = c.curve_samples;
    j["weight_limit"] = c.weight_limit;
    return j;
}

json ea_json(const nnlab::EAConfig& c) {
    json j;
    j["population_size"] = c.population_size;
    j["generations"] = c.generations;
    j["crossover_prob"] = c.crossover_prob;
    j["mutation_prob"] = c.mutation_prob;
    j["mutation_cte"] = c.mutation_cte;
    if (c.target_fit) j["target_fit"] = *c.target_fit;
    else j["target_fit"] = nullptr;
    j["epsilon"] = c.epsilon;
    j["init_range"] = c.init_range;
    j["inversion"] =
        c.inversion == nnlab::FitnessInversion::MaxMinus ? "max-minus" : "reciprocal";
    j["mutation_mode"] =
        c.mutation_mode == nnlab::MutationMode::SingleGene ? "single" : "per-gene";
    return j;
}

struct TrainerFlags {
    nnlab::BPConfig bp;
    nnlab::EAConfig ea;
    std::string inversion = "max-minus";
    std::string mutation_mode = "single";
    double init_range = 0.5;

    void finish() {
        if (inversion == "max-minus") ea.inversion = nnlab::FitnessInversion::MaxMinus;
        else if (inversion == "reciprocal") ea.inversion = nnlab::FitnessInversion::Reciprocal;
        else throw ConfigError("--inversion: expected max-minus or reciprocal");
        if (mutation_mode == "single") ea.mutation_mode = nnlab::MutationMode::SingleGene;
        else if (mutation_mode == "per-gene") ea.mutation_mode = nnlab::MutationMode::PerGene;
        else throw ConfigError("--mutation-mode: expected single or per-gene");
        bp.init_range = init_range;
        ea.init_range = init_range;
    }
};

void add_bp_flags(CLI::App* cmd, TrainerFlags& f) {
    cmd->add_option("--learning-factor", f.bp.learning_factor, "BP learning factor")
        ->capture_default_str();
    cmd->add_option("--momentum", f.bp.momentum, "BP momentum term")->capture_default_str();
    cmd->add_option("--epochs", f.bp.epochs, "BP training epochs")->capture_default_str();
    cmd->add_flag("--shuffle", f.bp.shuffle_each_epoch, "reshuffle case order every epoch");
    cmd->add_option("--curve-samples", f.bp.curve_samples, "target number of curve points")
        ->capture_default_str();
    cmd->add_option("--weight-limit", f.bp.weight_limit, "divergence guard on |weight|")
        ->capture_default_str();
}

void add_ea_flags(CLI::App* cmd, TrainerFlags& f) {
    cmd->add_option("--pop-size", f.ea.population_size, "EA population size (even, >= 2)")
        ->capture_default_str();
    cmd->add_option("--generations", f.ea.generations, "EA generations")->capture_default_str();
    cmd->add_option("--crossover-prob", f.ea.crossover_prob, "EA crossover probability")
        ->capture_default_str();
    cmd->add_option("--mutation-prob", f.ea.mutation_prob, "EA mutation probability")
        ->capture_default_str();
    cmd->add_option("--cte", f.ea.mutation_cte, "EA mutation step bound")->capture_default_str();
    cmd->add_option("--target-fit", f.ea.target_fit, "stop early when best fit <= this");
    cmd->add_option("--epsilon", f.ea.epsilon, "EA selection epsilon")->capture_default_str();
    cmd->add_option("--inversion", f.inversion, "max-minus | reciprocal")->capture_default_str();
    cmd->add_option("--mutation-mode", f.mutation_mode, "single | per-gene")
        ->capture_default_str();
}

void check_arity(const nnlab::Dataset& d, const nnlab::Topology& t) {
    if (d.n_inputs() != t.n_inputs || d.n_classes() != t.n_outputs) {
        throw ConfigError("dataset '" + d.name + "' has " + std::to_string(d.n_inputs()) +
                          " inputs / " + std::to_string(d.n_classes()) +
                          " classes, topology is " + topology_string(t));
    }
}

// default hidden layer of 4 sized between the dataset's arities
nnlab::Topology topology_for(const std::string& flag, const nnlab::Dataset& d, bool bias) {
    if (!flag.empty()) {
        nnlab::Topology t = parse_topology(flag, bias);
        check_arity(d, t);
        return t;
    }
    nnlab::Topology t;
    t.n_inputs = d.n_inputs();
    t.hidden_sizes = {4};
    t.n_outputs = d.n_classes();
    t.bias = bias;
    t.validate();
    return t;
}

// ---- gen-data ----

struct GenDataOpts {
    std::string kind;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::string out = ".";
};

int cmd_gen_data(const GenDataOpts& o) {
    if (o.kind != "xor" && o.kind != "blobs") {
        throw ConfigError("gen-data: --kind must be xor or blobs");
    }
    const std::size_t n = o.n ? o.n : (o.kind == "xor" ? 4u : 200u);
    const nnlab::Dataset d = nnlab::gen_synthetic(
        o.kind == "xor" ? nnlab::SyntheticKind::Xor : nnlab::SyntheticKind::Blobs, n, o.seed);
    fs::create_directories(o.out);
    std::ostringstream csv;
    nnlab::write_normalized_csv(csv, d);
    write_file(fs::path(o.out) / "data.csv", csv.str());

    json m;
    m["subcommand"] = "gen-data";
    m["config"] = {{"kind", o.kind}, {"n", n}, {"seed", o.seed}};
    m["dataset"] = {{"rows", d.size()},
                    {"inputs", d.n_inputs()},
                    {"classes", d.n_classes()},
                    {"majority_pct", nnlab::majority_fraction(d)}};
    m["artifacts"] = {"data.csv"};
    write_manifest(o.out, m);
    std::cout << "wrote " << (fs::path(o.out) / "data.csv").string() << " (" << d.size()
              << " rows, " << d.n_inputs() << " inputs, " << d.n_classes() << " classes)\n";
    return 0;
}

// ---- train ----

struct TrainOpts {
    std::string trainer;
    DataOpts data;
    std::string topology;
    bool no_bias = false;
    std::uint64_t seed = 1;
    std::string out = ".";
    TrainerFlags flags;
};

int cmd_train(TrainOpts& o) {
    if (o.trainer != "bp" && o.trainer != "ea") {
        throw ConfigError("train: --trainer must be bp or ea");
    }
    o.flags.finish();
    json data_cfg;
    const nnlab::Dataset d = resolve_dataset(o.data, &data_cfg);
    const nnlab::Topology t = topology_for(o.topology, d, !o.no_bias);
    check_arity(d, t);
    fs::create_directories(o.out);

    json m;
    m["subcommand"] = "train";
    json cfg = data_cfg;
    cfg["trainer"] = o.trainer;
    cfg["topology"] = topology_string(t);
    cfg["bias"] = t.bias;
    cfg["seed"] = o.seed;

    nnlab::Network trained;
    std::ostringstream curve;
    if (o.trainer == "bp") {
        nnlab::BPConfig bp = o.flags.bp;
        bp.seed = o.seed;
        cfg["bp"] = bp_json(bp);
        const nnlab::BPTrainResult res = nnlab::train_bp(t, d, bp);
        trained = res.network;
        nnlab::write_bp_curve_csv(curve, res.curve);
    } else {
        nnlab::EAConfig ea = o.flags.ea;
        ea.seed = o.seed;
        cfg["ea"] = ea_json(ea);
        const nnlab::EvolveResult res = nnlab::evolve(t, d, ea);
        trained = res.network;
        nnlab::write_ea_curve_csv(curve, res.curve);
        cfg["generations_run"] = res.generations_run;
    }
    nnlab::save_network(fs::path(o.out) / "network.json", trained);
    write_file(fs::path(o.out) / "curve.csv", curve.str());

    const double success = nnlab::classification_success(trained, d);
    const double sse = nnlab::sum_squared_error(trained, d);
    m["config"] = cfg;
    m["result"] = {{"train_success_pct", success}, {"train_sse", sse}};
    m["artifacts"] = {"network.json", "curve.csv"};
    write_manifest(o.out, m);
    std::printf("%s on %s (%s): success %.2f%%, sse %.6g\n", o.trainer.c_str(), d.name.c_str(),
                topology_string(t).c_str(), success, sse);
    return 0;
}

// ---- ablate ----

struct AblateOpts {
    std::string network;
    std::string topology;
    bool no_bias = false;
    DataOpts data;
    std::string mode = "singles";
    double scale = 0.0;
    std::string out = ".";
};

int cmd_ablate(AblateOpts& o) {
    if (!o.network.empty() && !o.topology.empty()) {
        throw ConfigError("ablate: give --network or --topology, not both");
    }
    if (o.network.empty() && o.topology.empty()) {
        throw ConfigError("ablate: one of --network or --topology is required");
    }
    if (o.scale < 0.0 || o.scale > 1.0) throw ConfigError("ablate: --scale must be in [0,1]");

    nnlab::Network net;
    nnlab::Topology t;
    const bool have_net = !o.network.empty();
    if (have_net) {
        net = nnlab::load_network(o.network);
        t = net.topology;
    } else {
        t = parse_topology(o.topology, !o.no_bias);
    }

    struct Entry {
        nnlab::AblationPlan plan;
        const char* category;
    };
    std::vector<Entry> entries;
    if (o.mode == "singles" || o.mode == "all") {
        for (auto& p : nnlab::enumerate_singles(t, nnlab::LayerKind::Hidden)) {
            entries.push_back({std::move(p), "hidden"});
        }
        for (auto& p : nnlab::enumerate_singles(t, nnlab::LayerKind::Input)) {
            entries.push_back({std::move(p), "input"});
        }
    }
    if (o.mode == "pairs" || o.mode == "all") {
        for (auto& p : nnlab::enumerate_hidden_pairs(t)) {
            entries.push_back({std::move(p), "hidden-pair"});
        }
    }
    if (entries.empty()) throw ConfigError("ablate: --mode must be singles, pairs or all");
    if (o.scale != 0.0) {
        for (Entry& e : entries) {
            for (auto& item : e.plan.items) item.scale = o.scale;
        }
    }

    fs::create_directories(o.out);
    std::vector<nnlab::AblationPlan> plans;
    plans.reserve(entries.size());
    for (const Entry& e : entries) plans.push_back(e.plan);
    std::ostringstream plans_csv;
    nnlab::write_plans_csv(plans_csv, plans);
    write_file(fs::path(o.out) / "plans.csv", plans_csv.str());

    json m;
    m["subcommand"] = "ablate";
    json cfg;
    if (have_net) cfg["network"] = o.network;
    cfg["topology"] = topology_string(t);
    cfg["mode"] = o.mode;
    cfg["scale"] = o.scale;
    json artifacts = json::array({"plans.csv"});

    if (have_net && !o.data.dataset.empty()) {
        json data_cfg;
        const nnlab::Dataset d = resolve_dataset(o.data, &data_cfg);
        check_arity(d, t);
        for (auto& [k, v] : data_cfg.items()) cfg[k] = v;
        std::ostringstream ev;
        ev << "label,category,success_pct,collapsed_class\n";
        auto row = [&](const std::string& label, const char* category,
                       const nnlab::Network& candidate) {
            ev << label << ',' << category << ','
               << nnlab::format_double(nnlab::classification_success(candidate, d)) << ',';
            if (auto c = nnlab::detect_collapse(candidate, d)) ev << *c;
            ev << '\n';
        };
        row("original", "original", net);
        for (const Entry& e : entries) {
            row(e.plan.label, e.category, nnlab::apply(net, e.plan));
        }
        write_file(fs::path(o.out) / "evaluation.csv", ev.str());
        artifacts.push_back("evaluation.csv");
    }

    m["config"] = cfg;
    m["plans"] = entries.size();
    m["artifacts"] = artifacts;
    write_manifest(o.out, m);
    std::cout << "wrote " << (fs::path(o.out) / "plans.csv").string() << " (" << entries.size()
              << " plans)\n";
    return 0;
}

// ---- experiment ----

struct ExperimentOpts {
    DataOpts data;
    std::string topology;
    bool no_bias = false;
    int reps = 20;
    std::string ablation = "none";
    std::uint64_t seed = 1;
    unsigned jobs = 1;
    std::string split = "full";
    double holdout_fraction = 0.25;
    std::uint64_t split_seed = 0;
    std::string sd = "population";
    double convergence_threshold = -1.0; // error pct; < 0 disables the report
    std::string out = ".";
    TrainerFlags flags;
};

nnlab::SdMode parse_sd(const std::string& s) {
    if (s == "population") return nnlab::SdMode::Population;
    if (s == "sample") return nnlab::SdMode::Sample;
    throw ConfigError("--sd: expected population or sample");
}

int cmd_experiment(ExperimentOpts& o) {
    o.flags.finish();
    json data_cfg;
    nnlab::ExperimentSpec spec;
    spec.dataset = resolve_dataset(o.data, &data_cfg);
    spec.topology = topology_for(o.topology, spec.dataset, !o.no_bias);
    spec.repetitions = o.reps;
    spec.bp = o.flags.bp;
    spec.ea = o.flags.ea;
    spec.base_seed = o.seed;

    if (o.ablation == "none") spec.ablation = nnlab::AblationMode::None;
    else if (o.ablation == "singles") spec.ablation = nnlab::AblationMode::Singles;
    else if (o.ablation == "pairs") spec.ablation = nnlab::AblationMode::Pairs;
    else if (o.ablation == "all") spec.ablation = nnlab::AblationMode::All;
    else throw ConfigError("--ablation: expected none, singles, pairs or all");

    if (o.split == "full") {
        spec.split.kind = nnlab::EvalSplit::Kind::Full;
    } else if (o.split == "holdout") {
        spec.split.kind = nnlab::EvalSplit::Kind::Holdout;
        spec.split.holdout_fraction = o.holdout_fraction;
        spec.split.seed = o.split_seed;
    } else {
        throw ConfigError("--split: expected full or holdout");
    }
    const nnlab::SdMode sd_mode = parse_sd(o.sd);

    const nnlab::ExperimentResult res = nnlab::run_experiment(spec, o.jobs);

    fs::create_directories(fs::path(o.out) / "curves");
    std::ostringstream records;
    nnlab::write_records_csv(records, res.records);
    write_file(fs::path(o.out) / "records.csv", records.str());

    const auto sums = nnlab::summarize(res.records, sd_mode);
    std::ostringstream summary;
    nnlab::write_summary_csv(summary, sums);
    write_file(fs::path(o.out) / "summary.csv", summary.str());

    for (const nnlab::RunCurve& rc : res.curves) {
        std::ostringstream curve;
        if (rc.trainer == nnlab::Trainer::BP) nnlab::write_bp_curve_csv(curve, rc.curve);
        else nnlab::write_ea_curve_csv(curve, rc.curve);
        const std::string fname = std::string(nnlab::to_string(rc.trainer)) + "_seed" +
                                  std::to_string(rc.seed) + ".csv";
        write_file(fs::path(o.out) / "curves" / fname, curve.str());
    }

    json m;
    m["subcommand"] = "experiment";
    json cfg = data_cfg;
    cfg["topology"] = topology_string(spec.topology);
    cfg["bias"] = spec.topology.bias;
    cfg["repetitions"] = spec.repetitions;
    cfg["ablation"] = o.ablation;
    cfg["split"] = o.split;
    if (spec.split.kind == nnlab::EvalSplit::Kind::Holdout) {
        cfg["holdout_fraction"] = spec.split.holdout_fraction;
        cfg["split_seed"] = spec.split.seed;
    }
    cfg["base_seed"] = spec.base_seed;
    cfg["jobs"] = o.jobs;
    cfg["sd"] = o.sd;
    cfg["bp"] = bp_json(spec.bp);
    cfg["ea"] = ea_json(spec.ea);
    m["config"] = cfg;

    json failures = json::array();
    for (const nnlab::TrainingFailure& f : res.failures) {
        failures.push_back({{"trainer", nnlab::to_string(f.trainer)},
                            {"seed", f.seed},
                            {"message", f.message}});
    }
    m["failures"] = failures;

    if (o.convergence_threshold >= 0.0) {
        json conv;
        conv["threshold_error_pct"] = o.convergence_threshold;
        json per_seed = json::array();
        double ratio_sum = 0.0;
        std::size_t ratio_n = 0;
        for (int r = 0; r < spec.repetitions; ++r) {
            const std::uint64_t seed = spec.base_seed + static_cast<std::uint64_t>(r);
            const nnlab::LearningCurve* bp_curve = nullptr;
            const nnlab::LearningCurve* ea_curve = nullptr;
            for (const nnlab::RunCurve& rc : res.curves) {
                if (rc.seed != seed) continue;
                if (rc.trainer == nnlab::Trainer::BP) bp_curve = &rc.curve;
                else ea_curve = &rc.curve;
            }
            if (!bp_curve || !ea_curve) continue;
            json row;
            row["seed"] = seed;
            const auto bp_cross = nnlab::first_at_or_below(*bp_curve, o.convergence_threshold);
            const auto ea_cross = nnlab::first_at_or_below(*ea_curve, o.convergence_threshold);
            row["bp_epoch"] = bp_cross.reached ? json(bp_cross.iteration) : json(nullptr);
            row["ea_generation"] = ea_cross.reached ? json(ea_cross.iteration) : json(nullptr);
            const auto ratio =
                nnlab::convergence_ratio(*bp_curve, *ea_curve, o.convergence_threshold);
            row["ratio"] = ratio ? json(*ratio) : json(nullptr);
            if (ratio) {
                ratio_sum += *ratio;
                ++ratio_n;
            }
            per_seed.push_back(row);
        }
        conv["per_seed"] = per_seed;
        conv["mean_ratio"] = ratio_n ? json(ratio_sum / static_cast<double>(ratio_n))
                                     : json(nullptr);
        m["convergence"] = conv;
    }

    m["records"] = res.records.size();
    m["artifacts"] = {"records.csv", "summary.csv", "curves/"};
    write_manifest(o.out, m);

    std::printf("%-8s %-12s %9s %8s %5s\n", "trainer", "category", "mean", "sd", "n");
    for (const nnlab::StatsSummary& s : sums) {
        std::printf("%-8s %-12s %9.2f %8.2f %5zu\n", nnlab::to_string(s.trainer),
                    nnlab::to_string(s.category), s.mean, s.sd, s.n);
    }
    std::cout << res.records.size() << " records";
    if (!res.failures.empty()) std::cout << ", " << res.failures.size() << " failed runs";
    std::cout << " -> " << o.out << "\n";
    return res.records.empty() ? 3 : 0;
}

// ---- summarize ----

struct SummarizeOpts {
    std::string records;
    std::string sd = "population";
    std::string out = ".";
};

int cmd_summarize(const SummarizeOpts& o) {
    std::ifstream in(o.records);
    if (!in) throw DataError("cannot read " + o.records);
    const auto records = nnlab::read_records_csv(in);
    const auto sums = nnlab::summarize(records, parse_sd(o.sd));

    fs::create_directories(o.out);
    std::ostringstream csv;
    nnlab::write_summary_csv(csv, sums);
    write_file(fs::path(o.out) / "summary.csv", csv.str());

    json m;
    m["subcommand"] = "summarize";
    m["config"] = {{"records", o.records}, {"sd", o.sd}};
    m["artifacts"] = {"summary.csv"};
    write_manifest(o.out, m);

    std::printf("%-8s %-12s %9s %8s %5s\n", "trainer", "category", "mean", "sd", "n");
    for (const nnlab::StatsSummary& s : sums) {
        std::printf("%-8s %-12s %9.2f %8.2f %5zu\n", nnlab::to_string(s.trainer),
                    nnlab::to_string(s.category), s.mean, s.sd, s.n);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"feedforward net lab: BP vs EA training and neuron-shutdown robustness"};
    app.require_subcommand(1);

    GenDataOpts gen;
    CLI::App* gen_cmd = app.add_subcommand("gen-data", "generate a synthetic dataset");
    gen_cmd->add_option("--kind", gen.kind, "xor | blobs")->required();
    gen_cmd->add_option("--n", gen.n, "row count (xor default 4, blobs default 200)");
    gen_cmd->add_option("--seed", gen.seed, "rng seed")->capture_default_str();
    gen_cmd->add_option("--out", gen.out, "output directory")->capture_default_str();

    TrainOpts train;
    CLI::App* train_cmd = app.add_subcommand("train", "train one network with bp or ea");
    train_cmd->add_option("--trainer", train.trainer, "bp | ea")->required();
    add_data_opts(train_cmd, train.data);
    train_cmd->add_option("--topology", train.topology,
                          "layer sizes as I-H-O, e.g. 9-8-2 (default <inputs>-4-<classes>)");
    train_cmd->add_flag("--no-bias", train.no_bias, "drop the bias weights");
    train_cmd->add_option("--seed", train.seed, "weight init / trainer seed")
        ->capture_default_str();
    train_cmd->add_option("--init-range", train.flags.init_range,
                          "uniform weight init range (+/-)")
        ->capture_default_str();
    train_cmd->add_option("--out", train.out, "output directory")->capture_default_str();
    add_bp_flags(train_cmd, train.flags);
    add_ea_flags(train_cmd, train.flags);

    AblateOpts ablate;
    CLI::App* ablate_cmd =
        app.add_subcommand("ablate", "enumerate shutdown plans, optionally evaluate a network");
    ablate_cmd->add_option("--network", ablate.network, "trained network json");
    ablate_cmd->add_option("--topology", ablate.topology, "topology I-H-O when no network given");
    ablate_cmd->add_flag("--no-bias", ablate.no_bias, "drop the bias weights");
    ablate_cmd->add_option("--dataset", ablate.data.dataset,
                           "evaluation data (xor | blobs | csv path)");
    ablate_cmd->add_option("--schema", ablate.data.schema, "schema json for a raw csv dataset");
    ablate_cmd->add_option("--n", ablate.data.n, "synthetic dataset size");
    ablate_cmd->add_option("--data-seed", ablate.data.data_seed, "rng seed for synthetic data")
        ->capture_default_str();
    ablate_cmd->add_option("--mode", ablate.mode, "singles | pairs | all")->capture_default_str();
    ablate_cmd->add_option("--scale", ablate.scale, "degradation scale, 0 = full shutdown")
        ->capture_default_str();
    ablate_cmd->add_option("--out", ablate.out, "output directory")->capture_default_str();

    ExperimentOpts exp;
    CLI::App* exp_cmd =
        app.add_subcommand("experiment", "R repetitions of bp and ea + ablation sweep + stats");
    add_data_opts(exp_cmd, exp.data);
    exp_cmd->add_option("--topology", exp.topology,
                        "layer sizes as I-H-O (default <inputs>-4-<classes>)");
    exp_cmd->add_flag("--no-bias", exp.no_bias, "drop the bias weights");
    exp_cmd->add_option("--reps", exp.reps, "repetitions per trainer")->capture_default_str();
    exp_cmd->add_option("--ablation", exp.ablation, "none | singles | pairs | all")
        ->capture_default_str();
    exp_cmd->add_option("--seed", exp.seed, "base seed; repetition r uses seed+r")
        ->capture_default_str();
    exp_cmd->add_option("--jobs", exp.jobs, "max repetitions running in parallel")
        ->capture_default_str();
    exp_cmd->add_option("--split", exp.split, "full | holdout")->capture_default_str();
    exp_cmd->add_option("--holdout-fraction", exp.holdout_fraction,
                        "evaluation share under --split holdout")
        ->capture_default_str();
    exp_cmd->add_option("--split-seed", exp.split_seed, "shuffle seed for the holdout split")
        ->capture_default_str();
    exp_cmd->add_option("--sd", exp.sd, "population | sample")->capture_default_str();
    exp_cmd->add_option("--convergence-threshold", exp.convergence_threshold,
                        "error %% threshold for the BP-epochs / EA-generations ratio report");
    exp_cmd->add_option("--init-range", exp.flags.init_range, "uniform weight init range (+/-)")
        ->capture_default_str();
    exp_cmd->add_option("--out", exp.out, "output directory")->capture_default_str();
    add_bp_flags(exp_cmd, exp.flags);
    add_ea_flags(exp_cmd, exp.flags);

    SummarizeOpts sum;
    CLI::App* sum_cmd = app.add_subcommand("summarize", "recompute summary.csv from records.csv");
    sum_cmd->add_option("--records", sum.records, "records.csv from an experiment run")
        ->required();
    sum_cmd->add_option("--sd", sum.sd, "population | sample")->capture_default_str();
    sum_cmd->add_option("--out", sum.out, "output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help / --version
        app.exit(e);
        return 1;
    }

    try {
        if (*gen_cmd) return cmd_gen_data(gen);
        if (*train_cmd) return cmd_train(train);
        if (*ablate_cmd) return cmd_ablate(ablate);
        if (*exp_cmd) return cmd_experiment(exp);
        if (*sum_cmd) return cmd_summarize(sum);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const nnlab::DivergenceError& e) {
        std::cerr << "divergence: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
