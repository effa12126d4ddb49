#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hydromission/rng.hpp"

namespace hydromission {

// Candidate solution. Cost is minimized; the suitability index is
// defined as hsi() == -cost throughout.
struct Habitat {
    std::vector<double> siv;
    double cost = 0.0;
    double violation = 0.0;    // constraint-violation share of the cost
    double immigration = 0.0;  // lambda
    double emigration = 0.0;   // mu
    bool feasible = true;

    double hsi() const { return -cost; }
};

enum class RateModel { RankLinear, Constant };

struct BboConfig {
    int population = 50;
    int iterations = 100;
    double max_immigration = 1.0;  // I
    double max_emigration = 1.0;   // E
    double max_mutation = 0.1;     // m_max
    int species_max = 0;           // 0 -> population - 1
    int elites = 2;
    RateModel rate_model = RateModel::RankLinear;
    double constant_mu = 0.2;
    double constant_lambda = 0.8;
};

// Probability vector over species counts 0..S_max; entries sum to 1.
struct SpeciesDistribution {
    std::vector<double> p;
};

// One forward-Euler step of the species-count birth/death ODE
// (immigration moves a habitat up one count, emigration down one),
// renormalized to unit mass. Throws if dt drives an entry negative;
// the caller should halve dt and retry.
SpeciesDistribution species_step(const SpeciesDistribution& d, const std::vector<double>& lambda,
                                 const std::vector<double>& mu, double dt);

// m_max * (1 - P_s / P_max), clamped to [0, m_max]. P_max == 0 returns m_max.
double mutation_rate(double p_s, double m_max, double p_max);

// Fills (immigration, emigration) per habitat. Population must be sorted
// best (lowest cost) first. RankLinear: best mu = E down to worst mu = 0,
// lambda = I * (1 - mu / E). Constant: configured pair for everyone.
void assign_rates(std::vector<Habitat>& sorted_population, const BboConfig& config);

// Problem-supplied encoding. Solutions are real vectors; sequence
// problems decode them on the fly.
class Encoding {
  public:
    struct Evaluation {
        double cost = 0.0;
        double violation = 0.0;  // 0 when all constraints are satisfied
    };

    virtual ~Encoding() = default;
    virtual std::vector<double> random_solution(Rng& rng) = 0;
    virtual Evaluation evaluate(const std::vector<double>& siv) = 0;
    virtual void mutate(std::vector<double>& siv, double rate, Rng& rng) = 0;

    // Maps a post-migration/mutation solution back into the feasible
    // set; returns false if it cannot.
    virtual bool repair(std::vector<double>& siv) { return true; }
    virtual std::string infeasibility_reason(const std::vector<double>& siv) {
        return "infeasible solution";
    }
    // Receiver takes the donor's value at the given SIV index.
    virtual void exchange_siv(std::vector<double>& receiver, const std::vector<double>& donor,
                              std::size_t index, Rng& rng) {
        receiver[index] = donor[index];
    }
};

struct BboResult {
    Habitat best;
    std::vector<double> best_history;   // index 0 = initial population
    std::vector<double> mean_history;
    std::vector<double> mean_violation_history;
    long long evaluations = 0;
};

// Migration pass per the standard loop: habitat i immigrates with
// probability lambda_i, the donor is roulette-selected proportional to
// mu, and one random SIV is transferred. The first `elites` entries of
// the sorted population are exempt. Donors come from the pre-migration
// population.
void migrate(std::vector<Habitat>& sorted_population, Encoding& encoding, const BboConfig& config,
             Rng& rng);

// Full optimization loop: evaluate, assign rates, migrate, mutate,
// repair, elitism. Seeds can pre-populate part of the initial
// population (warm start); the rest is drawn from the encoding.
BboResult run_bbo(Encoding& encoding, const BboConfig& config, std::uint64_t seed,
                  const std::vector<std::vector<double>>& initial = {});

}  // namespace hydromission
