#include "hydromission/bbo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hydromission {

SpeciesDistribution species_step(const SpeciesDistribution& d, const std::vector<double>& lambda,
                                 const std::vector<double>& mu, double dt) {
    const std::size_t n = d.p.size();
    if (n == 0 || lambda.size() != n || mu.size() != n) {
        throw std::invalid_argument("species_step: rate vectors must match distribution size");
    }
    SpeciesDistribution out;
    out.p.resize(n);
    for (std::size_t s = 0; s < n; ++s) {
        double dp = -(lambda[s] + mu[s]) * d.p[s];
        if (s + 1 < n) {
            dp += mu[s + 1] * d.p[s + 1];  // a fuller habitat loses one species
        }
        if (s > 0) {
            dp += lambda[s - 1] * d.p[s - 1];  // an emptier habitat gains one
        }
        out.p[s] = d.p[s] + dt * dp;
        if (out.p[s] < 0.0) {
            throw std::invalid_argument("species_step: dt too large, entry went negative");
        }
    }
    const double total = std::accumulate(out.p.begin(), out.p.end(), 0.0);
    if (total > 0.0) {
        for (double& v : out.p) {
            v /= total;
        }
    }
    return out;
}

double mutation_rate(double p_s, double m_max, double p_max) {
    if (p_max <= 0.0) {
        return m_max;
    }
    return std::clamp(m_max * (1.0 - p_s / p_max), 0.0, m_max);
}

void assign_rates(std::vector<Habitat>& sorted_population, const BboConfig& config) {
    const std::size_t n = sorted_population.size();
    if (n == 0) {
        throw std::invalid_argument("assign_rates: empty population");
    }
    if (config.rate_model == RateModel::Constant) {
        for (Habitat& h : sorted_population) {
            h.emigration = config.constant_mu;
            h.immigration = config.constant_lambda;
        }
        return;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double frac = n == 1 ? 1.0 : static_cast<double>(n - 1 - i) / static_cast<double>(n - 1);
        sorted_population[i].emigration = config.max_emigration * frac;
        sorted_population[i].immigration = config.max_immigration * (1.0 - frac);
    }
}

namespace {

std::size_t roulette(const std::vector<double>& weights, Rng& rng) {
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (total <= 0.0) {
        return weights.size();  // no eligible donor
    }
    double pick = rng.uniform(0.0, total);
    for (std::size_t j = 0; j < weights.size(); ++j) {
        pick -= weights[j];
        if (pick <= 0.0) {
            return j;
        }
    }
    return weights.size() - 1;
}

// Species probabilities from the stationary distribution of the linear
// birth/death chain (lambda_s falling, mu_s rising linearly in s),
// which reduces to a binomial over 0..S_max. Computed in log space.
std::vector<double> stationary_species_probabilities(int species_max) {
    std::vector<double> p(static_cast<std::size_t>(species_max) + 1);
    double log_norm = -1e300;
    for (int s = 0; s <= species_max; ++s) {
        const double lc = std::lgamma(species_max + 1.0) - std::lgamma(s + 1.0) -
                          std::lgamma(species_max - s + 1.0);
        p[static_cast<std::size_t>(s)] = lc;
        log_norm = std::max(log_norm, lc);
    }
    double total = 0.0;
    for (double& v : p) {
        v = std::exp(v - log_norm);
        total += v;
    }
    for (double& v : p) {
        v /= total;
    }
    return p;
}

}  // namespace

void migrate(std::vector<Habitat>& sorted_population, Encoding& encoding, const BboConfig& config,
             Rng& rng) {
    const std::size_t n = sorted_population.size();
    const std::vector<Habitat> donors = sorted_population;
    std::vector<double> mu(n);
    for (std::size_t j = 0; j < n; ++j) {
        mu[j] = donors[j].emigration;
    }
    const std::size_t first = static_cast<std::size_t>(std::max(0, config.elites));
    for (std::size_t i = first; i < n; ++i) {
        if (rng.uniform(0.0, 1.0) >= sorted_population[i].immigration) {
            continue;
        }
        const std::size_t j = roulette(mu, rng);
        if (j >= n || sorted_population[i].siv.empty()) {
            continue;
        }
        std::vector<double> backup = sorted_population[i].siv;
        const std::size_t idx =
            static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(backup.size()) - 1));
        encoding.exchange_siv(sorted_population[i].siv, donors[j].siv, idx, rng);
        if (encoding.repair(sorted_population[i].siv)) {
            sorted_population[i].feasible = true;
        } else {
            sorted_population[i].siv = std::move(backup);  // keep pre-migration habitat
        }
    }
}

BboResult run_bbo(Encoding& encoding, const BboConfig& config, std::uint64_t seed,
                  const std::vector<std::vector<double>>& initial) {
    if (config.population < 1 || config.iterations < 1) {
        throw std::invalid_argument("run_bbo: population and iterations must be positive");
    }
    if (config.max_mutation <= 0.0 || config.max_mutation > 1.0) {
        throw std::invalid_argument("run_bbo: max_mutation must be in (0, 1]");
    }
    if (config.elites >= config.population) {
        throw std::invalid_argument("run_bbo: elites must be < population");
    }

    const std::size_t n = static_cast<std::size_t>(config.population);
    BboResult result;
    Rng rng(derive_seed(seed, 0xb00));

    std::vector<Habitat> pop(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i < initial.size()) {
            pop[i].siv = initial[i];
        } else {
            pop[i].siv = encoding.random_solution(rng);
        }
        pop[i].feasible = encoding.repair(pop[i].siv);
    }
    if (std::none_of(pop.begin(), pop.end(), [](const Habitat& h) { return h.feasible; })) {
        throw std::runtime_error("run_bbo: initial population infeasible: " +
                                 encoding.infeasibility_reason(pop.front().siv));
    }
    for (Habitat& h : pop) {
        const Encoding::Evaluation ev = encoding.evaluate(h.siv);
        h.cost = ev.cost;
        h.violation = ev.violation;
        ++result.evaluations;
    }
    std::sort(pop.begin(), pop.end(),
              [](const Habitat& a, const Habitat& b) { return a.cost < b.cost; });

    auto record = [&]() {
        double sum = 0.0;
        double viol = 0.0;
        for (const Habitat& h : pop) {
            sum += h.cost;
            viol += h.violation;
        }
        result.best_history.push_back(pop.front().cost);
        result.mean_history.push_back(sum / static_cast<double>(n));
        result.mean_violation_history.push_back(viol / static_cast<double>(n));
    };
    record();

    const int species_max = config.species_max > 0 ? config.species_max : std::max(1, config.population - 1);
    const std::vector<double> p_species = stationary_species_probabilities(species_max);
    const double p_max = *std::max_element(p_species.begin(), p_species.end());
    // best rank carries the full species count
    std::vector<double> rank_rate(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double frac = n == 1 ? 1.0 : static_cast<double>(n - 1 - i) / static_cast<double>(n - 1);
        const int s = static_cast<int>(std::lround(frac * species_max));
        rank_rate[i] = mutation_rate(p_species[static_cast<std::size_t>(s)], config.max_mutation, p_max);
    }

    const std::size_t elites = static_cast<std::size_t>(std::max(0, config.elites));
    for (int gen = 1; gen <= config.iterations; ++gen) {
        assign_rates(pop, config);
        const std::vector<Habitat> elite_copy(pop.begin(), pop.begin() + static_cast<long>(elites));

        std::vector<std::vector<double>> before(n);
        std::vector<double> before_cost(n);
        std::vector<double> before_violation(n);
        for (std::size_t i = 0; i < n; ++i) {
            before[i] = pop[i].siv;
            before_cost[i] = pop[i].cost;
            before_violation[i] = pop[i].violation;
        }

        migrate(pop, encoding, config, rng);

        for (std::size_t i = elites; i < n; ++i) {
            if (rank_rate[i] <= 0.0) {
                continue;
            }
            std::vector<double> backup = pop[i].siv;
            encoding.mutate(pop[i].siv, rank_rate[i], rng);
            if (!encoding.repair(pop[i].siv)) {
                pop[i].siv = std::move(backup);
            }
        }

        for (std::size_t i = 0; i < n; ++i) {
            if (pop[i].siv != before[i]) {
                const Encoding::Evaluation ev = encoding.evaluate(pop[i].siv);
                ++result.evaluations;
                // feasibility check: a change that worsens the habitat's
                // constraint violation is rejected outright, so per-habitat
                // violation never increases and the population settles into
                // the feasible set as it converges
                if (ev.violation > before_violation[i]) {
                    pop[i].siv = before[i];
                    pop[i].cost = before_cost[i];
                    pop[i].violation = before_violation[i];
                } else {
                    pop[i].cost = ev.cost;
                    pop[i].violation = ev.violation;
                }
            }
        }

        std::sort(pop.begin(), pop.end(),
                  [](const Habitat& a, const Habitat& b) { return a.cost < b.cost; });
        // elitism: previous bests displace the current worst
        for (std::size_t e = 0; e < elite_copy.size(); ++e) {
            if (elite_copy[e].cost < pop[n - 1 - e].cost) {
                pop[n - 1 - e] = elite_copy[e];
            }
        }
        std::sort(pop.begin(), pop.end(),
                  [](const Habitat& a, const Habitat& b) { return a.cost < b.cost; });
        record();
    }

    result.best = pop.front();
    return result;
}

}  // namespace hydromission
