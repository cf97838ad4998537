#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "nnlab/curve.hpp"
#include "nnlab/dataset.hpp"
#include "nnlab/network.hpp"

namespace nnlab {

// One candidate weight vector. Gene layout is the concatenation of the layer
// matrices, row-major, bias weight last in each row -- the same layout the
// network serializer uses.
struct Chromosome {
    std::vector<double> genes;
    std::optional<double> fit;
};

enum class FitnessInversion {
    MaxMinus,   // g_i = (max fit - fit_i) + epsilon
    Reciprocal, // g_i = 1 / (fit_i + epsilon)
};

enum class MutationMode {
    SingleGene, // exactly one uniformly chosen gene per mutated chromosome
    PerGene,    // each gene independently with probability 1/gene_count
};

struct EAConfig {
    std::size_t population_size = 10; // must be >= 2 and even
    std::int64_t generations = 1000;
    double crossover_prob = 0.8;
    double mutation_prob = 0.8;
    double mutation_cte = 0.4;
    std::optional<double> target_fit; // early stop when best fit <= this
    std::uint64_t seed = 0;
    double epsilon = 1e-9; // guards the all-equal-fitness case
    double init_range = 0.5;
    FitnessInversion inversion = FitnessInversion::MaxMinus;
    MutationMode mutation_mode = MutationMode::SingleGene;

    void validate() const;
};

Chromosome encode(const Network& net);
// Weights only; NeuronConfigs come out default. Throws on gene-count mismatch.
Network decode(const Chromosome& c, const Topology& t);

// sum over training cases and output neurons of (net output - target)^2.
double fitness(const Chromosome& c, const Dataset& data, const Topology& t);

// Normalized inverted fitness: lowest fit gets the highest probability.
std::vector<double> selection_probs(std::span<const double> fits, double epsilon,
                                    FitnessInversion inversion = FitnessInversion::MaxMinus);

// `count` independent spins of the wheel; duplicates expected.
std::vector<std::size_t> roulette_select(std::span<const double> probs, std::size_t count,
                                         std::mt19937_64& rng);

// child1 = a*w1 + (1-a)*w2, child2 = b*w1 + (1-b)*w2 with scalar a, b ~ U[0,1]
// drawn once per pairing.
std::pair<std::vector<double>, std::vector<double>>
crossover(std::span<const double> w1, std::span<const double> w2, std::mt19937_64& rng);

// Adds a*cte, a ~ U[-1,1], to one uniformly chosen gene (SingleGene) or to
// each gene with probability 1/gene_count (PerGene). Clears the cached fit.
Chromosome mutate(Chromosome c, double cte, std::mt19937_64& rng,
                  MutationMode mode = MutationMode::SingleGene);

struct EvolveResult {
    Network network; // decoded best-ever chromosome
    LearningCurve curve;
    double best_fit = 0.0;
    std::int64_t generations_run = 0;
};

// Generation loop: evaluate, record, check termination (after evaluation,
// before selection), then roulette selection, pairwise crossover, mutation.
// The best-ever chromosome is tracked outside the population and returned.
EvolveResult evolve(const Topology& topology, const Dataset& data, const EAConfig& cfg);

} // namespace nnlab
