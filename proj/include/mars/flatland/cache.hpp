#pragma once

#include "mars/flatland/guide.hpp"
#include "mars/flatland/scene.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace mars::flatland {

enum Technique : std::size_t { kBsdf = 0, kNee = 1, kGuided = 2 };
inline constexpr std::size_t kTechniques = 3;

const char *technique_name(std::size_t t);

struct Accumulator {
    std::uint64_t count = 0;
    double sum = 0;
    double sum_sq = 0;
    double rays = 0;

    void add(double value, double ray_count) {
        ++count;
        sum += value;
        sum_sq += value * value;
        rays += ray_count;
    }
    void merge(const Accumulator &o) {
        count += o.count;
        sum += o.sum;
        sum_sq += o.sum_sq;
        rays += o.rays;
    }
};

using GuideWeights = std::array<double, GuideHistogram::kBins>;

/// Per-leaf training data gathered during one iteration. One instance per worker,
/// reduced at the iteration barrier.
struct CacheStatistics {
    std::vector<std::array<Accumulator, kTechniques>> techniques;
    std::vector<GuideWeights> guide;

    explicit CacheStatistics(std::size_t leaves = 0);
    std::size_t leaves() const { return techniques.size(); }
    void merge(const CacheStatistics &other);
};

struct BudgetBounds {
    double lo = 0.05;
    double hi = 20;
};

/// Budget factors with the path prefactor T/Î left out:
/// β_RR = (T/Î)·rr and β_S = (T/Î)·split.
struct BudgetFactors {
    double rr = 1;
    double split = 1;
};

/// Three-case rule with the prefactor applied: RR if β_RR < 1, split if β_S > 1,
/// otherwise one sample. Result clamped to `bounds`.
double spatial_budget(const BudgetFactors &factors, double prefactor, BudgetBounds bounds);

/// Factors for one technique from its moments:
/// rr = sqrt(C_I/C_t · E[L²]/V_I), split = sqrt(C_I/C_t · Var[L]/V_I).
BudgetFactors budget_factors(double second_moment, double variance, double cost, double image_variance,
                             double image_cost);

struct CacheConfig {
    std::uint64_t split_threshold = 2000;
    std::size_t max_depth = 12;
    BudgetBounds bounds;
};

struct Leaf {
    Bounds box;
    std::size_t depth = 0;
    std::array<std::optional<BudgetFactors>, kTechniques> factors;
    GuideHistogram guide;
};

class SpatialCache {
public:
    explicit SpatialCache(Bounds box, CacheConfig config = {});

    /// Leaf whose box contains p; points outside the root box go to the nearest leaf.
    std::size_t lookup(Vec2 p) const;

    std::size_t num_leaves() const { return m_leaves.size(); }
    const Leaf &leaf(std::size_t i) const { return m_leaves[i]; }
    Leaf &leaf(std::size_t i) { return m_leaves[i]; }
    const CacheConfig &config() const { return m_config; }

    CacheStatistics make_statistics() const { return CacheStatistics(num_leaves()); }

    /// Refits budget factors and guide histograms from one iteration of statistics,
    /// then subdivides busy leaves (children inherit the parent's state). A technique
    /// without samples in a leaf keeps its previous factors. With `shared` set, one
    /// factor pair computed from moments and costs pooled over the techniques is
    /// stored for all of them. Skips the budget refit when V_I or C_I is not positive.
    void update(const CacheStatistics &stats, double image_variance, double image_cost, bool shared);

    /// Nominal budgets of a leaf (prefactor 1); techniques without factors report 1.
    std::array<double, kTechniques> nominal_budgets(std::size_t leaf) const;

private:
    struct Node {
        Bounds box;
        std::size_t depth = 0;
        std::array<std::size_t, 4> children{};
        std::size_t leaf = 0;
        bool is_leaf = true;
    };

    void split(std::size_t node);

    CacheConfig m_config;
    std::vector<Node> m_nodes;
    std::vector<Leaf> m_leaves;
    std::vector<std::size_t> m_leafNode;
};

} // namespace mars::flatland
