#pragma once

#include "mars/core/estimator.hpp"
#include "mars/efficiency/efficiency.hpp"
#include "mars/efficiency/grid.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mars::cli {

/// Bad flags or configuration; maps to exit code 1.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum ExitCode { kSuccess = 0, kUsage = 1, kNonConvergence = 2 };

class Context {
public:
    std::optional<std::uint64_t> seed;
    unsigned workers = 0;
    std::filesystem::path out = "out";
    nlohmann::json manifest;

    std::uint64_t require_seed(const std::string &command) const;

    /// Creates the output directory and checks that it is writable.
    void prepare();

    /// Path inside the output directory, recorded in the manifest.
    std::filesystem::path output(const std::string &name);

    void write_manifest(int exit_code, const std::string &message = {});
};

struct GridOptions {
    double lo = 0.05;
    double hi = 20;
    std::size_t resolution = 128;
    std::string spacing = "log";

    GridSpec spec() const;
};

struct LandscapeOptions {
    std::string problem;
    WeightMode mode = WeightMode::BudgetUnaware;
    VarianceModel model = VarianceModel::Simplified;
    GridOptions grid;
};

struct SolveOptions {
    std::string problem;
    std::vector<double> init;
    WeightMode mode = WeightMode::BudgetUnaware;
    VarianceModel model = VarianceModel::Simplified;
    std::size_t max_iterations = 50;
    double tolerance = 1e-6;
    bool no_clamp = false;
    double clamp_lo = 0.05;
    double clamp_hi = 20;
    bool shared = false;
};

struct GradcheckOptions {
    std::string problem;
    WeightMode mode = WeightMode::BudgetAware;
    GridOptions grid;
};

struct VarianceStudyOptions {
    std::string problem;
    std::vector<std::string> betas;
    std::uint64_t runs = 1000000;
    WeightMode mode = WeightMode::BudgetUnaware;
};

struct OracleOptions {
    std::string problem;
    std::vector<double> beta;
    WeightMode mode = WeightMode::BudgetUnaware;
    std::uint64_t samples = 10000000;
};

struct RenderOptions {
    std::string scene;
    std::string mode = "mars";
    std::size_t iterations = 9;
    double budget = 1e6;
    std::size_t spp = 0;
    bool no_clamp_stats = false;
    double breadth = 32;
    double fixed_budget = 1;
    WeightMode weights = WeightMode::BudgetAware;
    std::string reference;
};

int run_landscape(Context &ctx, const LandscapeOptions &options);
int run_solve(Context &ctx, const SolveOptions &options);
int run_gradcheck(Context &ctx, const GradcheckOptions &options);
int run_variance_study(Context &ctx, const VarianceStudyOptions &options);
int run_oracle(Context &ctx, const OracleOptions &options);
int run_render(Context &ctx, const RenderOptions &options);

std::string to_string(WeightMode mode);
std::string to_string(VarianceModel model);

} // namespace mars::cli
