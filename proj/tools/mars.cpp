#include "commands.hpp"

#include "mars/core/errors.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

using namespace mars;
using namespace mars::cli;

namespace {

const std::map<std::string, WeightMode> kModes{{"unaware", WeightMode::BudgetUnaware},
                                               {"aware", WeightMode::BudgetAware}};
const std::map<std::string, VarianceModel> kModels{{"exact", VarianceModel::ExactStochastic},
                                                   {"simplified", VarianceModel::Simplified},
                                                   {"nearest", VarianceModel::NearestRounding}};

void add_grid(CLI::App *cmd, GridOptions &grid) {
    cmd->add_option("--lo", grid.lo, "Smallest budget on each axis")->capture_default_str();
    cmd->add_option("--hi", grid.hi, "Largest budget on each axis")->capture_default_str();
    cmd->add_option("--resolution", grid.resolution, "Grid points per axis")->capture_default_str();
    cmd->add_option("--spacing", grid.spacing, "log or linear")
        ->check(CLI::IsMember({"log", "linear"}))
        ->capture_default_str();
}

void add_mode(CLI::App *cmd, WeightMode &mode) {
    cmd->add_option("--mode", mode, "MIS weights: unaware or aware")
        ->transform(CLI::CheckedTransformer(kModes, CLI::ignore_case));
}

void add_model(CLI::App *cmd, VarianceModel &model) {
    cmd->add_option("--model", model, "Variance model: exact, simplified or nearest")
        ->transform(CLI::CheckedTransformer(kModels, CLI::ignore_case));
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Per-technique sample budgets for multi-sample MIS"};
    app.require_subcommand(1);

    Context ctx;
    std::uint64_t seed = 0;
    auto *seedOption = app.add_option("--seed", seed, "Seed for every random stream (required by stochastic commands)");
    app.add_option("--workers", ctx.workers, "Worker threads (0 = all cores)")->capture_default_str();
    app.add_option("--out", ctx.out, "Output directory")->capture_default_str();

    LandscapeOptions landscape;
    auto *landscapeCmd = app.add_subcommand("landscape", "Grid search of inverse efficiency with restricted baselines");
    landscapeCmd->add_option("problem", landscape.problem, "Problem JSON file")->required();
    add_mode(landscapeCmd, landscape.mode);
    add_model(landscapeCmd, landscape.model);
    add_grid(landscapeCmd, landscape.grid);

    SolveOptions solve;
    auto *solveCmd = app.add_subcommand("solve", "Run the fixed-point budget iteration");
    solveCmd->add_option("problem", solve.problem, "Problem JSON file")->required();
    solveCmd->add_option("--init", solve.init, "Initial budgets (one per technique, default all 1)")->delimiter(',');
    add_mode(solveCmd, solve.mode);
    add_model(solveCmd, solve.model);
    solveCmd->add_option("--max-iterations", solve.max_iterations)->capture_default_str();
    solveCmd->add_option("--tolerance", solve.tolerance, "Relative budget change for convergence")
        ->capture_default_str();
    solveCmd->add_flag("--no-clamp", solve.no_clamp, "Do not clamp budgets");
    solveCmd->add_option("--clamp-lo", solve.clamp_lo)->capture_default_str();
    solveCmd->add_option("--clamp-hi", solve.clamp_hi)->capture_default_str();
    solveCmd->add_flag("--shared", solve.shared, "One common budget for all techniques");

    GradcheckOptions gradcheck;
    auto *gradCmd = app.add_subcommand("gradcheck", "Compare proxy and finite-difference gradients on a grid");
    gradCmd->add_option("problem", gradcheck.problem, "Problem JSON file")->required();
    add_mode(gradCmd, gradcheck.mode);
    add_grid(gradCmd, gradcheck.grid);

    VarianceStudyOptions study;
    auto *studyCmd = app.add_subcommand("variance-study", "Variance models against empirical estimator variance");
    studyCmd->add_option("problem", study.problem, "Problem JSON file")->required();
    studyCmd->add_option("--beta", study.betas, "Budget vector, comma separated; repeatable")->required();
    studyCmd->add_option("--runs", study.runs, "Estimator realizations per budget")->capture_default_str();
    add_mode(studyCmd, study.mode);

    OracleOptions oracle;
    auto *oracleCmd = app.add_subcommand("oracle", "Monte Carlo cross-check of the quadrature moments");
    oracleCmd->add_option("problem", oracle.problem, "Problem JSON file")->required();
    oracleCmd->add_option("--beta", oracle.beta, "Budgets (for budget-aware weights)")->delimiter(',');
    oracleCmd->add_option("--samples", oracle.samples)->capture_default_str();
    add_mode(oracleCmd, oracle.mode);

    RenderOptions render;
    auto *renderCmd = app.add_subcommand("render", "Render a flatland scene");
    renderCmd->add_option("scene", render.scene, "Scene JSON file")->required();
    renderCmd->add_option("--mode", render.mode, "Budget strategy")
        ->check(CLI::IsMember({"mars", "shared", "fixed1", "classic-rr"}))
        ->capture_default_str();
    renderCmd->add_option("--iterations", render.iterations)->capture_default_str();
    renderCmd->add_option("--budget", render.budget, "Total ray budget")->capture_default_str();
    renderCmd->add_option("--spp", render.spp, "Fixed samples per pixel per iteration instead of a ray budget");
    renderCmd->add_flag("--no-clamp-stats", render.no_clamp_stats, "Disable outlier clamping of statistics");
    renderCmd->add_option("--breadth", render.breadth, "Largest number of continuation paths per camera sample")
        ->capture_default_str();
    renderCmd->add_option("--fixed-budget", render.fixed_budget, "Budget of every technique in fixed1 mode")
        ->capture_default_str();
    renderCmd->add_option("--weights", render.weights, "MIS weights: unaware or aware")
        ->transform(CLI::CheckedTransformer(kModes, CLI::ignore_case));
    renderCmd->add_option("--reference", render.reference, "Reference PFM; adds relMSE to the summary");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kUsage;
    }
    if (*seedOption)
        ctx.seed = seed;

    auto *cmd = app.get_subcommands().front();
    ctx.manifest["command"] = cmd->get_name();
    try {
        if (cmd == landscapeCmd)
            return run_landscape(ctx, landscape);
        if (cmd == solveCmd)
            return run_solve(ctx, solve);
        if (cmd == gradCmd)
            return run_gradcheck(ctx, gradcheck);
        if (cmd == studyCmd)
            return run_variance_study(ctx, study);
        if (cmd == oracleCmd)
            return run_oracle(ctx, oracle);
        if (cmd == renderCmd)
            return run_render(ctx, render);
    } catch (const UsageError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const SchemaError &e) {
        std::cerr << "schema error: " << e.what() << '\n';
        return kUsage;
    } catch (const ValidationError &e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kUsage;
    } catch (const NumericalError &e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        if (std::filesystem::is_directory(ctx.out))
            ctx.write_manifest(kNonConvergence, e.what());
        return kNonConvergence;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
