#include "nnlab/ea.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nnlab/errors.hpp"
#include "nnlab/eval.hpp"

namespace nnlab {

void EAConfig::validate() const {
    if (population_size < 2 || population_size % 2 != 0) {
        throw ConfigError("ea: population_size must be >= 2 and even");
    }
    if (generations < 1) throw ConfigError("ea: generations must be >= 1");
    if (crossover_prob < 0.0 || crossover_prob > 1.0) {
        throw ConfigError("ea: crossover_prob must be in [0,1]");
    }
    if (mutation_prob < 0.0 || mutation_prob > 1.0) {
        throw ConfigError("ea: mutation_prob must be in [0,1]");
    }
    if (mutation_cte <= 0.0) throw ConfigError("ea: mutation_cte must be > 0");
    if (target_fit && *target_fit < 0.0) throw ConfigError("ea: target_fit must be >= 0");
    if (epsilon <= 0.0) throw ConfigError("ea: epsilon must be > 0");
    if (init_range <= 0.0) throw ConfigError("ea: init_range must be > 0");
}

Chromosome encode(const Network& net) {
    Chromosome c;
    c.genes.reserve(net.topology.weight_count());
    for (const Matrix& m : net.weights) {
        c.genes.insert(c.genes.end(), m.data.begin(), m.data.end());
    }
    return c;
}

Network decode(const Chromosome& c, const Topology& t) {
    t.validate();
    if (c.genes.size() != t.weight_count()) {
        throw ConfigError("decode: gene count " + std::to_string(c.genes.size()) +
                          " does not match topology weight count " +
                          std::to_string(t.weight_count()));
    }
    Network net = make_network(t);
    std::size_t pos = 0;
    for (Matrix& m : net.weights) {
        std::copy_n(c.genes.begin() + static_cast<std::ptrdiff_t>(pos), m.data.size(),
                    m.data.begin());
        pos += m.data.size();
    }
    return net;
}

double fitness(const Chromosome& c, const Dataset& data, const Topology& t) {
    return sum_squared_error(decode(c, t), data);
}

std::vector<double> selection_probs(std::span<const double> fits, double epsilon,
                                    FitnessInversion inversion) {
    if (fits.empty()) throw ConfigError("selection_probs: empty population");
    std::vector<double> g(fits.size());
    if (inversion == FitnessInversion::MaxMinus) {
        const double max_fit = *std::max_element(fits.begin(), fits.end());
        for (std::size_t i = 0; i < fits.size(); ++i) g[i] = (max_fit - fits[i]) + epsilon;
    } else {
        for (std::size_t i = 0; i < fits.size(); ++i) g[i] = 1.0 / (fits[i] + epsilon);
    }
    double sum = 0.0;
    for (double v : g) sum += v;
    for (double& v : g) v /= sum;
    return g;
}

std::vector<std::size_t> roulette_select(std::span<const double> probs, std::size_t count,
                                         std::mt19937_64& rng) {
    std::vector<std::size_t> picked;
    picked.reserve(count);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (std::size_t n = 0; n < count; ++n) {
        const double u = dist(rng);
        double cumulative = 0.0;
        std::size_t chosen = probs.size() - 1; // rounding fallback
        for (std::size_t i = 0; i < probs.size(); ++i) {
            cumulative += probs[i];
            if (u < cumulative) {
                chosen = i;
                break;
            }
        }
        picked.push_back(chosen);
    }
    return picked;
}

std::pair<std::vector<double>, std::vector<double>>
crossover(std::span<const double> w1, std::span<const double> w2, std::mt19937_64& rng) {
    if (w1.size() != w2.size()) throw ConfigError("crossover: gene length mismatch");
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    const double a = dist(rng);
    const double b = dist(rng);
    std::vector<double> c1(w1.size()), c2(w1.size());
    for (std::size_t k = 0; k < w1.size(); ++k) {
        c1[k] = a * w1[k] + (1.0 - a) * w2[k];
        c2[k] = b * w1[k] + (1.0 - b) * w2[k];
    }
    return {std::move(c1), std::move(c2)};
}

Chromosome mutate(Chromosome c, double cte, std::mt19937_64& rng, MutationMode mode) {
    if (cte <= 0.0) throw ConfigError("mutate: cte must be > 0");
    if (c.genes.empty()) return c;
    std::uniform_real_distribution<double> delta(-1.0, 1.0);
    if (mode == MutationMode::SingleGene) {
        std::uniform_int_distribution<std::size_t> pick(0, c.genes.size() - 1);
        c.genes[pick(rng)] += delta(rng) * cte;
    } else {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const double per_gene = 1.0 / static_cast<double>(c.genes.size());
        for (double& gene : c.genes) {
            if (u(rng) < per_gene) gene += delta(rng) * cte;
        }
    }
    c.fit.reset();
    return c;
}

EvolveResult evolve(const Topology& topology, const Dataset& data, const EAConfig& cfg) {
    topology.validate();
    cfg.validate();
    if (data.size() == 0) throw ConfigError("ea: empty dataset");
    if (data.n_inputs() != topology.n_inputs || data.n_classes() != topology.n_outputs) {
        throw ConfigError("ea: dataset arity does not match topology");
    }

    std::mt19937_64 rng(cfg.seed);
    const std::size_t gene_count = topology.weight_count();

    std::vector<Chromosome> population(cfg.population_size);
    {
        std::uniform_real_distribution<double> dist(-cfg.init_range, cfg.init_range);
        for (auto& c : population) {
            c.genes.resize(gene_count);
            for (double& g : c.genes) g = dist(rng);
        }
    }

    Chromosome best_ever;
    double best_fit = std::numeric_limits<double>::infinity();
    double best_error_pct = 100.0;
    LearningCurve curve;
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::int64_t gen = 0;

    for (gen = 1; gen <= cfg.generations; ++gen) {
        // evaluation; copies carried over keep their cached fit
        for (auto& c : population) {
            if (!c.fit) c.fit = fitness(c, data, topology);
            if (*c.fit < best_fit) {
                best_fit = *c.fit;
                best_ever = c;
                best_error_pct =
                    100.0 - classification_success(decode(best_ever, topology), data);
            }
        }
        curve.points.push_back({gen, best_error_pct, best_fit});

        // termination is checked between evaluation and selection
        if (cfg.target_fit && best_fit <= *cfg.target_fit) break;
        if (gen == cfg.generations) break;

        std::vector<double> fits(population.size());
        for (std::size_t i = 0; i < population.size(); ++i) fits[i] = *population[i].fit;
        const auto probs = selection_probs(fits, cfg.epsilon, cfg.inversion);
        const auto parents = roulette_select(probs, cfg.population_size, rng);

        std::vector<Chromosome> next;
        next.reserve(cfg.population_size);
        for (std::size_t p = 0; p + 1 < parents.size(); p += 2) {
            const Chromosome& p1 = population[parents[p]];
            const Chromosome& p2 = population[parents[p + 1]];
            Chromosome c1, c2;
            if (coin(rng) < cfg.crossover_prob) {
                auto [g1, g2] = crossover(p1.genes, p2.genes, rng);
                c1.genes = std::move(g1);
                c2.genes = std::move(g2);
            } else {
                c1 = p1;
                c2 = p2;
            }
            if (coin(rng) < cfg.mutation_prob) {
                c1 = mutate(std::move(c1), cfg.mutation_cte, rng, cfg.mutation_mode);
            }
            if (coin(rng) < cfg.mutation_prob) {
                c2 = mutate(std::move(c2), cfg.mutation_cte, rng, cfg.mutation_mode);
            }
            next.push_back(std::move(c1));
            next.push_back(std::move(c2));
        }
        population = std::move(next);
    }

    EvolveResult result;
    result.network = decode(best_ever, topology);
    result.curve = std::move(curve);
    result.best_fit = best_fit;
    result.generations_run = std::min(gen, cfg.generations);
    return result;
}

} // namespace nnlab
