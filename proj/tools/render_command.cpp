#include "commands.hpp"

#include "mars/core/errors.hpp"
#include "mars/io/csv.hpp"
#include "mars/io/image_io.hpp"
#include "mars/io/scene_io.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>

namespace mars::cli {

using nlohmann::json;
using namespace flatland;

namespace {

Strategy strategy(const std::string &mode) {
    if (mode == "mars")
        return Strategy::Mars;
    if (mode == "shared")
        return Strategy::Shared;
    if (mode == "fixed1")
        return Strategy::Fixed;
    if (mode == "classic-rr")
        return Strategy::ClassicRR;
    throw UsageError("unknown render mode '" + mode + "'");
}

std::string numbered(const char *prefix, std::size_t k, const char *suffix) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s%02zu%s", prefix, k, suffix);
    return buf;
}

} // namespace

int run_render(Context &ctx, const RenderOptions &options) {
    const Scene scene = load_scene(options.scene);
    RenderConfig config;
    config.strategy = strategy(options.mode);
    config.fixed_budget = options.fixed_budget;
    config.iterations = options.iterations;
    config.seed = ctx.require_seed("render");
    config.workers = ctx.workers;
    config.weights = options.weights;
    config.clamp_statistics = !options.no_clamp_stats;
    config.breadth_cap = options.breadth;
    if (options.spp > 0)
        config.samples_per_pixel = options.spp;
    else if (options.budget >= 1)
        config.ray_budget = static_cast<std::uint64_t>(options.budget);
    if (options.iterations > 32)
        throw UsageError("--iterations must be at most 32");
    try {
        config.validate();
    } catch (const ValidationError &e) {
        throw UsageError(e.what());
    }
    std::optional<GrayImage> reference;
    if (!options.reference.empty()) {
        reference = read_pfm(options.reference);
        if (reference->values.size() != scene.camera().pixels)
            throw UsageError("reference image does not match the camera resolution");
    }

    ctx.manifest["config"] = {{"scene", options.scene},
                              {"mode", options.mode},
                              {"fixed_budget", config.fixed_budget},
                              {"iterations", config.iterations},
                              {"warmup_iterations", config.warmup_iterations},
                              {"ray_budget", config.ray_budget},
                              {"samples_per_pixel", config.samples_per_pixel},
                              {"weights", to_string(config.weights)},
                              {"clamp_statistics", config.clamp_statistics},
                              {"clamp_factor", config.clamp_factor},
                              {"breadth_cap", config.breadth_cap},
                              {"max_depth", config.max_depth},
                              {"budget_bounds", {config.cache.bounds.lo, config.cache.bounds.hi}},
                              {"reference", options.reference}};
    ctx.prepare();

    const RenderResult result = render(scene, config);
    const std::size_t pixels = scene.camera().pixels;

    write_pfm(ctx.output("image.pfm"), result.image, pixels, 1);
    write_png_preview(ctx.output("image.png"), result.image);
    write_pfm(ctx.output("mean.pfm"), result.mean, pixels, 1);

    CsvWriter reports(ctx.output("iterations.csv"), {"iteration", "spp", "V_I", "C_I", "inv_efficiency", "rays_total"});
    for (const auto &r : result.reports)
        reports.row({static_cast<double>(r.iteration), static_cast<double>(r.spp), r.variance, r.cost,
                     r.inv_efficiency, static_cast<double>(r.rays)});

    for (std::size_t k = 0; k < result.budget_maps.size(); ++k) {
        const auto &map = result.budget_maps[k];
        write_budget_png(ctx.output(numbered("budgets_", k, ".png")), scene, map, config.cache.bounds);
        CsvWriter leaves(ctx.output(numbered("budgets_", k, ".csv")),
                         {"x0", "y0", "x1", "y1", "beta_bsdf", "beta_nee", "beta_guided"});
        for (const auto &leaf : map)
            leaves.row({leaf.box.lo.x, leaf.box.lo.y, leaf.box.hi.x, leaf.box.hi.y, leaf.beta[kBsdf],
                        leaf.beta[kNee], leaf.beta[kGuided]});
    }

    json summary = {{"rays_total", result.rays},
                    {"iterations", result.reports.size()},
                    {"final_inv_efficiency", result.reports.back().inv_efficiency}};
    if (reference) {
        const double error = relative_mse(result.image, reference->values);
        summary["relmse"] = error;
        std::cout << "relMSE " << error << '\n';
    }
    std::ofstream(ctx.output("render_summary.json")) << summary.dump(2) << '\n';

    std::cout << "rays " << result.rays << '\n';
    for (const auto &r : result.reports)
        std::cout << "iteration " << r.iteration << " spp " << r.spp << " V_I " << r.variance << " C_I " << r.cost
                  << " inv_eff " << r.inv_efficiency << '\n';
    ctx.write_manifest(kSuccess);
    return kSuccess;
}

} // namespace mars::cli
