// Acceptance checks, one PASS/FAIL line per criterion.

#include "oracles/oracles.hpp"

#include "mars/core/rounding.hpp"
#include "mars/efficiency/gradient.hpp"
#include "mars/fixedpoint/solver.hpp"
#include "mars/flatland/render.hpp"
#include "mars/io/problem_io.hpp"
#include "mars/io/scene_io.hpp"
#include "mars/oracle/grid_search.hpp"
#include "mars/oracle/monte_carlo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace mars;

namespace {

std::string data(const std::string &relative) { return std::string(MARS_DATA_DIR) + "/" + relative; }

const std::vector<std::string> kCorpus = {"fig2", "perfect", "disjoint", "symmetric", "bimodal", "splitting"};

MisProblem corpus(const std::string &name) { return load_problem(data("corpus/" + name + ".json")); }

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void fail(const std::string &why) {
        if (pass)
            detail << "first failure: " << why << "; ";
        pass = false;
    }
};

std::string name_of(WeightMode m) { return m == WeightMode::BudgetAware ? "aware" : "unaware"; }
std::string name_of(Rounding r) { return r == Rounding::Naive ? "naive" : "low-discrepancy"; }

std::string format(const BudgetVector &beta) {
    std::ostringstream out;
    out << "(";
    for (std::size_t t = 0; t < beta.size(); ++t)
        out << (t ? ", " : "") << beta[t];
    return out.str() + ")";
}

/// Problems with their random budgets, mode and rounding.
struct Config {
    std::string problem;
    BudgetVector beta;
    WeightMode mode;
    Rounding rounding;
};

std::vector<Config> random_configs(std::uint64_t seed, bool fractional_only) {
    std::mt19937_64 gen(seed);
    std::vector<std::string> names = kCorpus;
    names.push_back("three");
    std::uniform_real_distribution<double> logBeta(std::log(0.1), std::log(5.0));
    std::vector<Config> out;
    for (std::size_t k = 0; k < 20; ++k) {
        Config c;
        c.problem = names[k % names.size()];
        const auto p = c.problem == "three" ? load_problem(data("extra/three.json")) : corpus(c.problem);
        std::vector<double> beta(p.num_techniques());
        for (auto &b : beta) {
            b = std::exp(logBeta(gen));
            if (fractional_only && std::abs(b - std::round(b)) < 0.05)
                b += 0.3;
        }
        c.beta = BudgetVector(beta);
        c.mode = gen() % 2 ? WeightMode::BudgetAware : WeightMode::BudgetUnaware;
        c.rounding = gen() % 2 ? Rounding::LowDiscrepancy : Rounding::Naive;
        out.push_back(c);
    }
    return out;
}

MisProblem problem_of(const std::string &name) {
    return name == "three" ? load_problem(data("extra/three.json")) : corpus(name);
}

// 1: estimator unbiasedness
Outcome unbiasedness() {
    Outcome o;
    double worst = 0;
    for (const auto &c : random_configs(101, false)) {
        const auto p = problem_of(c.problem);
        const double truth = p.reference_integral();
        const auto stats = estimate_many(p, c.beta, {c.mode, c.rounding, Normalization::RealValued}, 100000, 7);
        const double z = std::abs(stats.mean - truth) / stats.standard_error();
        worst = std::max(worst, z);
        if (!(z <= 4))
            o.fail(c.problem + " " + format(c.beta) + " " + name_of(c.mode) + " " + name_of(c.rounding) +
                   " is " + std::to_string(z) + " standard errors off");
    }
    o.detail << "20 configurations, worst deviation " << std::setprecision(3) << worst << " standard errors (limit 4)";
    return o;
}

// 2: variance models
Outcome variance_models() {
    Outcome o;
    double worst = 0;
    for (const auto &c : random_configs(202, true)) {
        const auto p = problem_of(c.problem);
        const auto moments = technique_moments(p, c.beta, c.mode);
        double predicted = 0;
        for (std::size_t t = 0; t < p.num_techniques(); ++t)
            predicted += secondary_variance(moments[t], c.beta[t], VarianceModel::ExactStochastic);
        const auto stats =
            estimate_many(p, c.beta, {c.mode, Rounding::Naive, Normalization::RealValued}, 1000000, 13);
        const double rel = std::abs(stats.variance() / predicted - 1);
        worst = std::max(worst, rel);
        if (!(rel <= 0.03))
            o.fail(c.problem + " " + format(c.beta) + " " + name_of(c.mode) + " relative error " +
                   std::to_string(rel));
    }
    double identity = 0;
    for (const auto &name : kCorpus) {
        const auto p = corpus(name);
        const auto m = technique_moments(p, BudgetVector::filled(p.num_techniques(), 1), WeightMode::BudgetUnaware);
        for (const auto &s : m)
            for (double b : {0.05, 0.2, 0.5, 0.99, 1.0, 2.0, 3.0, 7.0, 20.0}) {
                const double e = secondary_variance(s, b, VarianceModel::ExactStochastic);
                const double q = secondary_variance(s, b, VarianceModel::Simplified);
                identity = std::max(identity, std::abs(e - q) / std::max(std::abs(q), 1e-300));
            }
    }
    if (!(identity <= 1e-12))
        o.fail("exact and simplified models differ by " + std::to_string(identity));
    o.detail << "20 configurations, worst relative variance error " << std::setprecision(3) << 100 * worst
             << "% (limit 3%), exact/simplified identity " << identity << " (limit 1e-12)";
    return o;
}

double solver_optimum(MomentCache &cache) {
    SolverConfig config;
    config.max_iterations = 500;
    config.tolerance = 1e-12;
    const auto n = cache.problem().num_techniques();
    return solve(cache, BudgetVector::filled(n, 1), VarianceModel::Simplified, config).final().inv_efficiency;
}

// 3: optimality of the fixed point
Outcome optimality() {
    Outcome o;
    double worst = 0;
    for (const auto &name : kCorpus) {
        const auto p = corpus(name);
        MomentCache cache(p, WeightMode::BudgetUnaware);
        const auto grid = grid_search(cache, VarianceModel::Simplified, {.resolution = 128});
        const auto t = solve(cache, BudgetVector::filled(p.num_techniques(), 1), VarianceModel::Simplified);
        const double ratio = t.final().inv_efficiency / grid.min;
        worst = std::max(worst, ratio);
        if (!(ratio <= 1.01))
            o.fail(name + " solver/grid = " + std::to_string(ratio));
    }
    o.detail << "6 problems, worst solver/grid-minimum ratio " << std::setprecision(6) << worst << " (limit 1.01)";
    return o;
}

// 4: convergence speed
Outcome convergence() {
    Outcome o;
    double worst5 = 0, worst20 = 0;
    for (const auto &name : kCorpus) {
        const auto p = corpus(name);
        MomentCache cache(p, WeightMode::BudgetUnaware);
        const auto grid = grid_search(cache, VarianceModel::Simplified, {.resolution = 128});
        const double optimum = std::min(grid.min, solver_optimum(cache));
        for (double a : {0.1, 1.0, 10.0})
            for (double b : {0.1, 1.0, 10.0}) {
                const auto t = solve(cache, {a, b}, VarianceModel::Simplified);
                auto at = [&](std::size_t k) { return t.entries[std::min(k, t.entries.size() - 1)].inv_efficiency; };
                const double r5 = at(5) / optimum - 1, r20 = at(20) / optimum - 1;
                worst5 = std::max(worst5, r5);
                worst20 = std::max(worst20, r20);
                if (!(r5 <= 0.05))
                    o.fail(name + " from (" + std::to_string(a) + ", " + std::to_string(b) + ") is " +
                           std::to_string(100 * r5) + "% off at iteration 5");
                if (!(r20 <= 0.005))
                    o.fail(name + " from (" + std::to_string(a) + ", " + std::to_string(b) + ") is " +
                           std::to_string(100 * r20) + "% off at iteration 20");
            }
    }
    o.detail << "54 trajectories, worst excess " << std::setprecision(3) << 100 * worst5 << "% at iteration 5 (limit 5%), "
             << 100 * worst20 << "% at iteration 20 (limit 0.5%)";
    return o;
}

// 5: restricted baselines
Outcome baselines() {
    Outcome o;
    double fig2Gap = 0;
    for (const auto &name : kCorpus) {
        const auto p = corpus(name);
        MomentCache cache(p, WeightMode::BudgetUnaware);
        const GridSpec spec{.resolution = 128};
        const auto grid = grid_search(cache, VarianceModel::Simplified, spec);
        const double best = std::min(grid.min, solver_optimum(cache));
        const auto b = constrained_baselines(cache, VarianceModel::Simplified, spec);
        const std::pair<const char *, double> restricted[] = {
            {"OS", b.os.inv_efficiency}, {"RRS", b.rrs.inv_efficiency}, {"O+R", b.o_plus_r.inv_efficiency}};
        for (const auto &[label, value] : restricted)
            if (!(best <= value * (1 + 1e-9)))
                o.fail(name + ": unconstrained " + std::to_string(best) + " above " + label + " " +
                       std::to_string(value));
        if (name == "fig2") {
            fig2Gap = b.o_plus_r.inv_efficiency / best - 1;
            if (!(fig2Gap > 1e-4))
                o.fail("fig2: O+R is not strictly worse than the unconstrained optimum");
        }
    }
    o.detail << "unconstrained optimum below OS, RRS and O+R on all 6 problems; O+R excess on fig2 "
             << std::setprecision(3) << 100 * fig2Gap << "%";
    return o;
}

// 6: gradient agreement
Outcome gradients() {
    Outcome o;
    double unaware = 0, minPositive = 1;
    const GridSpec spec{.lo = 0.05, .hi = 20, .resolution = 16};
    for (const auto &name : kCorpus) {
        const auto p = corpus(name);
        for (double d : gradient_agreement_map(p, WeightMode::BudgetUnaware, spec).dot)
            unaware = std::max(unaware, std::abs(d - 1));
        const double positive = gradient_agreement_map(p, WeightMode::BudgetAware, spec).positive_fraction();
        minPositive = std::min(minPositive, positive);
        if (!(positive > 0.5))
            o.fail(name + ": aware map positive fraction " + std::to_string(positive));
    }
    if (!(unaware <= 1e-6))
        o.fail("unaware map deviates from 1 by " + std::to_string(unaware));
    o.detail << "unaware map within " << std::setprecision(3) << unaware << " of 1 (limit 1e-6), smallest aware "
             << "positive fraction " << minPositive;
    return o;
}

// 7: rounding
Outcome rounding() {
    Outcome o;
    std::mt19937_64 gen(77);
    std::uniform_real_distribution<double> budget(0.0, 6.0), unit(0.0, 1.0);
    double worstTotal = 0;
    for (int trial = 0; trial < 200000; ++trial) {
        std::vector<double> beta(1 + trial % 8);
        for (auto &b : beta)
            b = budget(gen);
        const auto g = low_discrepancy_round(beta, unit(gen));
        const double d = std::abs(std::accumulate(g.begin(), g.end(), 0.0) - std::accumulate(beta.begin(), beta.end(), 0.0));
        worstTotal = std::max(worstTotal, d);
    }
    if (!(worstTotal < 1))
        o.fail("low-discrepancy total deviates by " + std::to_string(worstTotal));

    const int n = 1 << 17;
    // dyadic budgets: every rounding threshold falls between grid points, so the grid mean is exact
    const std::vector<double> beta = {0.3125, 1.453125, 0.796875, 2.046875, 0.125};
    std::vector<double> sums(beta.size(), 0.0);
    for (int i = 0; i < n; ++i) {
        const auto g = low_discrepancy_round(beta, (i + 0.5) / n);
        for (std::size_t t = 0; t < beta.size(); ++t)
            sums[t] += g[t];
    }
    double worstExpectation = 0;
    for (std::size_t t = 0; t < beta.size(); ++t)
        worstExpectation = std::max(worstExpectation, std::abs(sums[t] / n - beta[t]));
    if (!(worstExpectation <= 1e-12))
        o.fail("u-grid expectation off by " + std::to_string(worstExpectation));

    const auto three = load_problem(data("extra/three.json"));
    const BudgetVector fractional{0.7, 1.3, 0.45};
    const std::uint64_t runs = 2000000;
    const auto ld = estimate_many(three, fractional, {WeightMode::BudgetAware, Rounding::LowDiscrepancy}, runs, 31);
    const auto naive = estimate_many(three, fractional, {WeightMode::BudgetAware, Rounding::Naive}, runs, 32);
    const double ratio = ld.variance() / naive.variance();
    if (!(ratio <= 1))
        o.fail("low-discrepancy variance exceeds naive rounding by " + std::to_string(100 * (ratio - 1)) + "%");
    o.detail << "worst total deviation " << std::setprecision(3) << worstTotal << " (limit < 1), u-grid expectation error "
             << worstExpectation << ", variance low-discrepancy/naive " << std::setprecision(4) << ratio;
    return o;
}

// 8: flatland
Outcome flatland_checks() {
    using namespace mars::flatland;
    Outcome o;

    // (a) analytic scene
    const auto analytic = load_scene(data("scenes/analytic.json"));
    RenderConfig a;
    a.strategy = Strategy::Mars;
    a.iterations = 9;
    a.samples_per_pixel = 12000; // 16 pixels × 9 × 12000 ≈ 1.7·10⁶ samples
    a.seed = 2024;
    const auto ra = render(analytic, a);
    const oracle::FloorScene floor;
    double worstZ = 0;
    for (std::size_t px = 0; px < ra.mean.size(); ++px)
        worstZ = std::max(worstZ, std::abs(ra.mean[px] - floor.pixel(px)) / std::sqrt(ra.variance_of_mean[px]));
    if (!(worstZ <= 4))
        o.fail("analytic scene pixel off by " + std::to_string(worstZ) + " sigma");

    // (b) relMSE at an equal ray budget
    const auto scene = load_scene(data("scenes/asymmetric.json"));
    RenderConfig ref;
    ref.strategy = Strategy::ClassicRR;
    ref.ray_budget = 50000000;
    ref.seed = 999;
    const auto reference = render(scene, ref).image;
    const std::pair<const char *, Strategy> modes[] = {
        {"mars", Strategy::Mars}, {"shared", Strategy::Shared}, {"fixed1", Strategy::Fixed}};
    double mean[3] = {0, 0, 0};
    for (std::size_t m = 0; m < 3; ++m)
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            RenderConfig c;
            c.strategy = modes[m].second;
            c.ray_budget = 3000000;
            c.seed = seed;
            mean[m] += relative_mse(render(scene, c).image, reference) / 5;
        }
    if (!(mean[0] <= mean[1]))
        o.fail("MARS relMSE above shared-budget mode");
    if (!(mean[0] <= mean[2]))
        o.fail("MARS relMSE above fixed-budget mode");

    // (c) statistics clamping: same trained cache and streams, clamp on and off
    SpatialCache cache(scene.bounds());
    ImageState state(scene.camera().pixels);
    {
        IntegratorSettings warm;
        warm.learned = false;
        const Integrator integrator(scene, cache, warm);
        IterationImage image(scene.camera().pixels);
        auto stats = cache.make_statistics();
        RayCounter counter;
        for (std::uint64_t pass = 0; pass < 64; ++pass)
            for (std::size_t px = 0; px < scene.camera().pixels; ++px) {
                Rng rng(5, sample_stream(0, pass, px));
                image.pixels[px].add(integrator.estimate_pixel(px, std::nullopt, rng, &stats, counter).value);
            }
        image.rays = counter.rays;
        image.samples_per_pixel = 64;
        state.add(image);
        const auto s = image_statistics(image, state.estimates());
        cache.update(stats, s.variance, s.cost, false);
    }
    const auto estimates = state.estimates();
    IntegratorSettings on, off;
    off.clamp_statistics = false;
    const Integrator clamped(scene, cache, on), raw(scene, cache, off);
    std::uint64_t compared = 0, mismatched = 0;
    RayCounter c1, c2;
    for (std::uint64_t pass = 0; pass < 256; ++pass)
        for (std::size_t px = 0; px < scene.camera().pixels; ++px) {
            Rng r1(6, sample_stream(1, pass, px)), r2(6, sample_stream(1, pass, px));
            auto s1 = cache.make_statistics(), s2 = cache.make_statistics();
            const auto x = clamped.estimate_pixel(px, estimates[px], r1, &s1, c1);
            const auto y = raw.estimate_pixel(px, estimates[px], r2, &s2, c2);
            ++compared;
            if (x.value != y.value || x.rays != y.rays)
                ++mismatched;
        }
    if (mismatched)
        o.fail(std::to_string(mismatched) + " of " + std::to_string(compared) + " samples changed under clamping");

    // (d) ray accounting
    RenderConfig d;
    d.ray_budget = 1000000;
    d.seed = 3;
    const auto rd = render(scene, d);
    std::uint64_t total = 0;
    double worstAccount = 0;
    for (const auto &rep : rd.reports) {
        const double expected = rep.cost * static_cast<double>(scene.camera().pixels) * static_cast<double>(rep.spp);
        worstAccount = std::max(worstAccount, std::abs(expected - static_cast<double>(rep.rays)));
        total += rep.rays;
    }
    if (!(worstAccount <= 1e-6) || total != rd.rays)
        o.fail("ray accounting mismatch");

    o.detail << std::setprecision(3) << "(a) worst pixel " << worstZ << " sigma; (b) mean relMSE mars " << mean[0]
             << ", shared " << mean[1] << ", fixed1 " << mean[2] << "; (c) " << compared << " samples, "
             << mismatched << " changed; (d) C_I·N·spp vs rays max error " << worstAccount << ", total " << total
             << " rays";
    return o;
}

// 9: shared-budget degeneracy and scale invariance
Outcome degeneracy() {
    Outcome o;
    for (const char *file : {"extra/single.json", "extra/single_zero_overhead.json"}) {
        const auto p = load_problem(data(file));
        for (auto mode : {WeightMode::BudgetUnaware, WeightMode::BudgetAware})
            for (double init : {0.05, 0.3, 1.0, 4.0, 20.0}) {
                SolverConfig shared;
                shared.shared_budget = true;
                const auto a = solve(p, {init}, mode, VarianceModel::Simplified, shared);
                const auto b = solve(p, {init}, mode, VarianceModel::Simplified);
                bool same = a.entries.size() == b.entries.size() && a.status == b.status;
                for (std::size_t k = 0; same && k < a.entries.size(); ++k)
                    same = a.entries[k].beta == b.entries[k].beta &&
                           a.entries[k].inv_efficiency == b.entries[k].inv_efficiency;
                if (!same)
                    o.fail(std::string(file) + " trajectories differ from " + std::to_string(init));
            }
    }
    const auto p = load_problem(data("extra/single_zero_overhead.json"));
    const double base = inverse_efficiency(p, {1}, WeightMode::BudgetUnaware, VarianceModel::Simplified);
    double spread = 0;
    for (double b = 1; b <= 20; b *= 1.07)
        spread = std::max(spread, std::abs(inverse_efficiency(p, {b}, WeightMode::BudgetUnaware,
                                                              VarianceModel::Simplified) / base - 1));
    if (!(spread <= 1e-12))
        o.fail("zero-overhead inverse efficiency varies by " + std::to_string(spread));
    o.detail << "20 shared/per-technique trajectory pairs identical; zero-overhead inverse efficiency spread over "
             << "splitting budgets " << std::setprecision(3) << spread;
    return o;
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"unbiasedness", unbiasedness},
        {"variance models", variance_models},
        {"optimality (budget-unaware)", optimality},
        {"convergence speed", convergence},
        {"baseline containment", baselines},
        {"gradient agreement", gradients},
        {"rounding", rounding},
        {"flatland", flatland_checks},
        {"shared-budget degeneracy", degeneracy},
    };
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception &e) {
            o.fail(std::string("exception: ") + e.what());
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << k + 1 << " " << criteria[k].first << ": "
                  << o.detail.str() << " [" << std::fixed << std::setprecision(1) << seconds << " s]"
                  << std::defaultfloat << std::endl;
    }
    return failures ? 1 : 0;
}
