#include "commands.hpp"

#include "mars/core/errors.hpp"
#include "mars/efficiency/gradient.hpp"
#include "mars/fixedpoint/solver.hpp"
#include "mars/io/csv.hpp"
#include "mars/io/problem_io.hpp"
#include "mars/oracle/grid_search.hpp"
#include "mars/oracle/monte_carlo.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace mars::cli {

using nlohmann::json;

std::uint64_t Context::require_seed(const std::string &command) const {
    if (!seed)
        throw UsageError(command + " is stochastic and needs --seed");
    return *seed;
}

void Context::prepare() {
    std::error_code ec;
    std::filesystem::create_directories(out, ec);
    if (ec || !std::filesystem::is_directory(out))
        throw UsageError("cannot create output directory " + out.string());
    const auto probe = out / ".write-test";
    {
        std::ofstream test(probe);
        if (!test)
            throw UsageError("output directory " + out.string() + " is not writable");
    }
    std::filesystem::remove(probe, ec);
    manifest["outputs"] = json::array();
}

std::filesystem::path Context::output(const std::string &name) {
    manifest["outputs"].push_back(name);
    return out / name;
}

void Context::write_manifest(int exit_code, const std::string &message) {
    manifest["exit_code"] = exit_code;
    if (!message.empty())
        manifest["message"] = message;
    if (seed)
        manifest["seed"] = *seed;
    else
        manifest["seed"] = nullptr;
    manifest["workers"] = workers;
    std::ofstream file(out / "manifest.json");
    file << manifest.dump(2) << '\n';
}

GridSpec GridOptions::spec() const {
    GridSpec g;
    g.lo = lo;
    g.hi = hi;
    g.resolution = resolution;
    if (spacing == "log")
        g.spacing = Spacing::Log;
    else if (spacing == "linear")
        g.spacing = Spacing::Linear;
    else
        throw UsageError("grid spacing must be log or linear");
    g.validate();
    return g;
}

std::string to_string(WeightMode mode) { return mode == WeightMode::BudgetAware ? "aware" : "unaware"; }

std::string to_string(VarianceModel model) {
    switch (model) {
    case VarianceModel::ExactStochastic: return "exact";
    case VarianceModel::Simplified: return "simplified";
    case VarianceModel::NearestRounding: return "nearest";
    }
    return "?";
}

namespace {

json grid_json(const GridSpec &g) {
    return {{"lo", g.lo}, {"hi", g.hi}, {"resolution", g.resolution},
            {"spacing", g.spacing == Spacing::Log ? "log" : "linear"}};
}

json restricted_json(const RestrictedOptimum &r) { return {{"beta", r.beta.vector()}, {"inv_efficiency", r.inv_efficiency}}; }

std::vector<double> parse_list(const std::string &text) {
    std::vector<double> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (item.find_first_not_of(" \t", used) != std::string::npos)
                throw std::invalid_argument(item);
        } catch (const std::exception &) {
            throw UsageError("cannot parse budget list '" + text + "'");
        }
    }
    return out;
}

BudgetVector budgets(const std::vector<double> &values, const MisProblem &problem, const std::string &what) {
    if (values.size() != problem.num_techniques())
        throw UsageError(what + " needs " + std::to_string(problem.num_techniques()) + " values, got " +
                         std::to_string(values.size()));
    try {
        return BudgetVector(values);
    } catch (const ContractViolation &e) {
        throw UsageError(what + ": " + e.what());
    }
}

} // namespace

int run_landscape(Context &ctx, const LandscapeOptions &options) {
    const GridSpec grid = options.grid.spec();
    ctx.manifest["config"] = {{"problem", options.problem}, {"mode", to_string(options.mode)},
                              {"model", to_string(options.model)}, {"grid", grid_json(grid)}};
    const MisProblem problem = load_problem(options.problem);
    ctx.prepare();

    MomentCache moments(problem, options.mode);
    const auto result = grid_search(moments, options.model, grid, ctx.workers);
    write_landscape(ctx.output("landscape.csv"), result.landscape);

    json summary{{"problem", problem.name()},
                 {"mode", to_string(options.mode)},
                 {"argmin", result.argmin.vector()},
                 {"min", result.min}};
    double unconstrained = result.min;
    if (options.mode == WeightMode::BudgetUnaware && options.model == VarianceModel::Simplified) {
        SolverConfig config;
        config.clamp = BudgetClamp{grid.lo, grid.hi};
        const auto trajectory = solve(moments, BudgetVector::filled(problem.num_techniques(), 1.0),
                                      options.model, config);
        summary["solver"] = {{"beta", trajectory.final().beta.vector()},
                             {"inv_efficiency", trajectory.final().inv_efficiency},
                             {"status", to_string(trajectory.status)}};
        unconstrained = std::min(unconstrained, trajectory.final().inv_efficiency);
    }
    if (problem.num_techniques() == 2) {
        const auto b = constrained_baselines(moments, options.model, grid);
        summary["baselines"] = {{"OS", restricted_json(b.os)},
                                {"RRS", restricted_json(b.rrs)},
                                {"O+R", restricted_json(b.o_plus_r)}};
        unconstrained = std::min({unconstrained, b.os.inv_efficiency, b.rrs.inv_efficiency,
                                  b.o_plus_r.inv_efficiency});
    }
    summary["unconstrained_min"] = unconstrained;
    std::ofstream(ctx.output("summary.json")) << summary.dump(2) << '\n';
    std::cout << summary.dump(2) << '\n';
    ctx.write_manifest(kSuccess);
    return kSuccess;
}

int run_solve(Context &ctx, const SolveOptions &options) {
    const MisProblem problem = load_problem(options.problem);
    SolverConfig config;
    config.max_iterations = options.max_iterations;
    config.tolerance = options.tolerance;
    config.shared_budget = options.shared;
    if (options.no_clamp)
        config.clamp.reset();
    else
        config.clamp = BudgetClamp{options.clamp_lo, options.clamp_hi};
    std::vector<double> init = options.init;
    if (init.empty())
        init.assign(problem.num_techniques(), 1.0);
    const BudgetVector start = budgets(init, problem, "--init");
    try {
        config.validate();
        if (config.clamp)
            start.check_bounds(config.clamp->lo, config.clamp->hi);
    } catch (const ContractViolation &e) {
        throw UsageError(e.what());
    }
    ctx.manifest["config"] = {{"problem", options.problem},
                              {"init", init},
                              {"mode", to_string(options.mode)},
                              {"model", to_string(options.model)},
                              {"max_iterations", config.max_iterations},
                              {"tolerance", config.tolerance},
                              {"clamp", config.clamp ? json{config.clamp->lo, config.clamp->hi} : json(nullptr)},
                              {"shared_budget", config.shared_budget}};
    ctx.prepare();

    const auto trajectory = solve(problem, start, options.mode, options.model, config);
    write_trajectory(ctx.output("trajectory.csv"), trajectory);
    const auto &last = trajectory.final();
    std::cout << "status " << to_string(trajectory.status) << " after " << last.iteration << " iterations\n";
    std::cout << "beta";
    for (double b : last.beta.vector())
        std::cout << ' ' << b;
    std::cout << "\ninv_efficiency " << last.inv_efficiency << '\n';
    const int code = trajectory.converged() ? kSuccess : kNonConvergence;
    ctx.write_manifest(code, trajectory.converged() ? "" : "solver " + to_string(trajectory.status));
    return code;
}

int run_gradcheck(Context &ctx, const GradcheckOptions &options) {
    const GridSpec grid = options.grid.spec();
    ctx.manifest["config"] = {{"problem", options.problem}, {"mode", to_string(options.mode)},
                              {"model", "simplified"}, {"grid", grid_json(grid)}};
    const MisProblem problem = load_problem(options.problem);
    ctx.prepare();

    const auto map = gradient_agreement_map(problem, options.mode, grid, ctx.workers);
    write_gradient_map(ctx.output("gradient.csv"), map);
    const auto [lo, hi] = std::minmax_element(map.dot.begin(), map.dot.end());
    json summary{{"problem", problem.name()},
                 {"mode", to_string(options.mode)},
                 {"points", map.dot.size()},
                 {"positive_fraction", map.positive_fraction()},
                 {"min_dot", *lo},
                 {"max_dot", *hi}};
    std::ofstream(ctx.output("gradient_summary.json")) << summary.dump(2) << '\n';
    std::cout << summary.dump(2) << '\n';
    ctx.write_manifest(kSuccess);
    return kSuccess;
}

int run_variance_study(Context &ctx, const VarianceStudyOptions &options) {
    const std::uint64_t seed = ctx.require_seed("variance-study");
    const MisProblem problem = load_problem(options.problem);
    std::vector<BudgetVector> points;
    for (const auto &text : options.betas)
        points.push_back(budgets(parse_list(text), problem, "--beta"));
    if (points.empty())
        throw UsageError("variance-study needs at least one --beta");
    ctx.manifest["config"] = {{"problem", options.problem}, {"betas", options.betas}, {"runs", options.runs},
                              {"mode", to_string(options.mode)}};
    ctx.prepare();

    auto header = beta_columns(problem.num_techniques());
    header.insert(header.end(), {"exact", "simplified", "nearest", "empirical", "empirical_rounded_count",
                                 "empirical_low_discrepancy"});
    CsvWriter csv(ctx.output("variance_study.csv"), header);
    for (std::size_t k = 0; k < points.size(); ++k) {
        const auto &beta = points[k];
        const auto stats = technique_moments(problem, beta, options.mode);
        // the overhead term is a model constant, not part of the sampled estimator
        auto model = [&](VarianceModel m) { return total_variance(stats, beta, 0.0, m); };
        auto empirical = [&](Rounding r, Normalization n, std::uint64_t stream) {
            return estimate_many(problem, beta, {options.mode, r, n}, options.runs, seed + 1000003 * (3 * k + stream),
                                 ctx.workers)
                .variance();
        };
        auto row = beta.vector();
        row.insert(row.end(), {model(VarianceModel::ExactStochastic), model(VarianceModel::Simplified),
                               model(VarianceModel::NearestRounding),
                               empirical(Rounding::Naive, Normalization::RealValued, 0),
                               empirical(Rounding::Naive, Normalization::RoundedCount, 1),
                               empirical(Rounding::LowDiscrepancy, Normalization::RealValued, 2)});
        csv.row(row);
    }
    ctx.write_manifest(kSuccess);
    return kSuccess;
}

int run_oracle(Context &ctx, const OracleOptions &options) {
    const std::uint64_t seed = ctx.require_seed("oracle");
    const MisProblem problem = load_problem(options.problem);
    std::vector<double> init = options.beta;
    if (init.empty())
        init.assign(problem.num_techniques(), 1.0);
    const BudgetVector beta = budgets(init, problem, "--beta");
    ctx.manifest["config"] = {{"problem", options.problem}, {"beta", init}, {"mode", to_string(options.mode)},
                              {"samples", options.samples}};
    ctx.prepare();

    const auto quadrature = technique_moments(problem, beta, options.mode);
    const auto mc = monte_carlo_moments(problem, beta, options.mode, options.samples, seed, ctx.workers);
    CsvWriter csv(ctx.output("moments.csv"), {"technique", "first_quadrature", "first_mc", "first_mc_stderr",
                                              "second_quadrature", "second_mc", "second_mc_stderr"});
    json summary{{"problem", problem.name()}, {"beta", init}, {"techniques", json::array()}};
    for (std::size_t t = 0; t < problem.num_techniques(); ++t) {
        csv.row({static_cast<double>(t + 1), quadrature[t].first_moment, mc.stats[t].first_moment,
                 mc.first_moment_error[t], quadrature[t].second_moment, mc.stats[t].second_moment,
                 mc.second_moment_error[t]});
        summary["techniques"].push_back(
            {{"name", problem.technique(t).name},
             {"first_z", (mc.stats[t].first_moment - quadrature[t].first_moment) / mc.first_moment_error[t]},
             {"second_z", (mc.stats[t].second_moment - quadrature[t].second_moment) / mc.second_moment_error[t]}});
    }
    std::ofstream(ctx.output("oracle_summary.json")) << summary.dump(2) << '\n';
    std::cout << summary.dump(2) << '\n';
    ctx.write_manifest(kSuccess);
    return kSuccess;
}

} // namespace mars::cli
