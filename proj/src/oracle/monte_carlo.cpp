#include "mars/oracle/monte_carlo.hpp"

#include "mars/core/errors.hpp"
#include "mars/core/parallel.hpp"

#include <cmath>

namespace mars {

namespace {

constexpr std::uint64_t kChunk = 1 << 14;

std::size_t chunk_count(std::uint64_t n) { return static_cast<std::size_t>((n + kChunk - 1) / kChunk); }

std::uint64_t chunk_size(std::uint64_t n, std::size_t chunk) {
    return std::min<std::uint64_t>(kChunk, n - static_cast<std::uint64_t>(chunk) * kChunk);
}

} // namespace

void RunningStats::add(double x) {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
}

void RunningStats::merge(const RunningStats &other) {
    if (other.count == 0)
        return;
    if (count == 0) {
        *this = other;
        return;
    }
    const double n1 = static_cast<double>(count), n2 = static_cast<double>(other.count);
    const double delta = other.mean - mean;
    const double n = n1 + n2;
    mean += delta * n2 / n;
    m2 += other.m2 + delta * delta * n1 * n2 / n;
    count += other.count;
}

double RunningStats::standard_error() const {
    return count > 1 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0;
}

RunningStats estimate_many(const MisProblem &problem, const BudgetVector &beta, const EstimatorOptions &options,
                           std::uint64_t runs, std::uint64_t seed, unsigned workers) {
    const std::size_t chunks = chunk_count(runs);
    std::vector<RunningStats> partial(chunks);
    parallel_for(chunks, workers, [&](std::size_t c) {
        Rng rng(seed, c);
        EstimatorRunner runner(problem, beta, options);
        RunningStats s;
        for (std::uint64_t k = 0, n = chunk_size(runs, c); k < n; ++k)
            s.add(runner(rng));
        partial[c] = s;
    });
    RunningStats total;
    for (const auto &p : partial)
        total.merge(p);
    return total;
}

MonteCarloMoments monte_carlo_moments(const MisProblem &problem, const BudgetVector &beta, WeightMode mode,
                                      std::uint64_t samples, std::uint64_t seed, unsigned workers) {
    const std::size_t nt = problem.num_techniques();
    const std::size_t chunks = chunk_count(samples);
    MonteCarloMoments out;
    for (std::size_t t = 0; t < nt; ++t) {
        std::vector<RunningStats> first(chunks), second(chunks);
        parallel_for(chunks, workers, [&](std::size_t c) {
            Rng rng(seed, (static_cast<std::uint64_t>(t) << 32) | c);
            const auto &density = problem.technique(t).density;
            for (std::uint64_t k = 0, n = chunk_size(samples, c); k < n; ++k) {
                const double x = density.sample(rng.uniform());
                const auto w = balance_weights(problem, x, mode, beta);
                const double value = primary_estimate(problem, t, x, w);
                first[c].add(value);
                second[c].add(value * value);
            }
        });
        RunningStats f, s;
        for (std::size_t c = 0; c < chunks; ++c) {
            f.merge(first[c]);
            s.merge(second[c]);
        }
        out.stats.push_back(TechniqueStats::from_moments(f.mean, s.mean, problem.cost(t)));
        out.first_moment_error.push_back(f.standard_error());
        out.second_moment_error.push_back(s.standard_error());
    }
    return out;
}

} // namespace mars
