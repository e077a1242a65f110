#include "mars/flatland/cache.hpp"

#include "mars/core/errors.hpp"

#include <algorithm>
#include <cmath>

namespace mars::flatland {

const char *technique_name(std::size_t t) {
    switch (t) {
    case kBsdf: return "bsdf";
    case kNee: return "nee";
    case kGuided: return "guided";
    }
    return "unknown";
}

CacheStatistics::CacheStatistics(std::size_t leaves) : techniques(leaves), guide(leaves, GuideWeights{}) {}

void CacheStatistics::merge(const CacheStatistics &other) {
    if (other.leaves() != leaves())
        throw ContractViolation("cannot merge statistics of different cache layouts");
    for (std::size_t l = 0; l < leaves(); ++l) {
        for (std::size_t t = 0; t < kTechniques; ++t)
            techniques[l][t].merge(other.techniques[l][t]);
        for (std::size_t b = 0; b < GuideHistogram::kBins; ++b)
            guide[l][b] += other.guide[l][b];
    }
}

double spatial_budget(const BudgetFactors &factors, double prefactor, BudgetBounds bounds) {
    double beta = 1;
    const double rr = prefactor * factors.rr;
    const double split = prefactor * factors.split;
    if (rr < 1)
        beta = rr;
    else if (split > 1)
        beta = split;
    return std::clamp(beta, bounds.lo, bounds.hi);
}

BudgetFactors budget_factors(double second_moment, double variance, double cost, double image_variance,
                             double image_cost) {
    const double ratio = image_cost / (cost * image_variance);
    return {std::sqrt(ratio * second_moment), std::sqrt(ratio * std::max(variance, 0.0))};
}

SpatialCache::SpatialCache(Bounds box, CacheConfig config) : m_config(config) {
    if (!(config.bounds.lo > 0 && config.bounds.lo <= 1 && config.bounds.hi >= 1))
        throw ContractViolation("budget bounds must satisfy 0 < lo <= 1 <= hi");
    m_nodes.push_back(Node{box, 0, {}, 0, true});
    m_leaves.push_back(Leaf{box, 0, {}, GuideHistogram{}});
    m_leafNode.push_back(0);
}

std::size_t SpatialCache::lookup(Vec2 p) const {
    std::size_t n = 0;
    while (!m_nodes[n].is_leaf) {
        const Node &node = m_nodes[n];
        const Vec2 c = (node.box.lo + node.box.hi) * 0.5;
        const std::size_t q = (p.x >= c.x ? 1 : 0) + (p.y >= c.y ? 2 : 0);
        n = node.children[q];
    }
    return m_nodes[n].leaf;
}

void SpatialCache::split(std::size_t n) {
    const Node parent = m_nodes[n];
    const Leaf inherited = m_leaves[parent.leaf];
    const Vec2 lo = parent.box.lo, hi = parent.box.hi;
    const Vec2 c = (lo + hi) * 0.5;
    const std::array<Bounds, 4> boxes = {
        Bounds{lo, c},
        Bounds{{c.x, lo.y}, {hi.x, c.y}},
        Bounds{{lo.x, c.y}, {c.x, hi.y}},
        Bounds{c, hi},
    };
    for (std::size_t q = 0; q < 4; ++q) {
        // the first child reuses the parent's leaf slot
        std::size_t leaf = parent.leaf;
        if (q > 0) {
            leaf = m_leaves.size();
            m_leaves.push_back(inherited);
            m_leafNode.push_back(0);
        }
        m_leaves[leaf].box = boxes[q];
        m_leaves[leaf].depth = parent.depth + 1;
        m_nodes[n].children[q] = m_nodes.size();
        m_leafNode[leaf] = m_nodes.size();
        m_nodes.push_back(Node{boxes[q], parent.depth + 1, {}, leaf, true});
    }
    m_nodes[n].is_leaf = false;
}

void SpatialCache::update(const CacheStatistics &stats, double image_variance, double image_cost, bool shared) {
    if (stats.leaves() != num_leaves())
        throw ContractViolation("statistics do not match the cache layout");
    const bool refit = image_variance > 0 && image_cost > 0 && std::isfinite(image_variance);
    const std::size_t leaves = num_leaves();
    std::vector<std::size_t> busy;
    for (std::size_t l = 0; l < leaves; ++l) {
        Leaf &leaf = m_leaves[l];
        const auto &acc = stats.techniques[l];
        std::uint64_t total = 0;
        for (const auto &a : acc)
            total += a.count;

        if (refit && shared) {
            double second = 0, variance = 0, cost = 0;
            bool any = false;
            for (const auto &a : acc) {
                if (a.count == 0)
                    continue;
                const double n = static_cast<double>(a.count);
                const double mean = a.sum / n;
                second += a.sum_sq / n;
                variance += std::max(a.sum_sq / n - mean * mean, 0.0);
                cost += a.rays / n;
                any = true;
            }
            if (any) {
                const auto f = budget_factors(second, variance, cost, image_variance, image_cost);
                leaf.factors.fill(f);
            }
        } else if (refit) {
            for (std::size_t t = 0; t < kTechniques; ++t) {
                const auto &a = acc[t];
                if (a.count == 0)
                    continue;
                const double n = static_cast<double>(a.count);
                const double mean = a.sum / n;
                const double second = a.sum_sq / n;
                leaf.factors[t] = budget_factors(second, second - mean * mean, a.rays / n, image_variance, image_cost);
            }
        }
        leaf.guide.fit(stats.guide[l]);
        if (total > m_config.split_threshold && leaf.depth < m_config.max_depth)
            busy.push_back(l);
    }
    for (std::size_t l : busy)
        split(m_leafNode[l]);
}

std::array<double, kTechniques> SpatialCache::nominal_budgets(std::size_t l) const {
    std::array<double, kTechniques> out{};
    for (std::size_t t = 0; t < kTechniques; ++t) {
        const auto &f = m_leaves[l].factors[t];
        out[t] = f ? spatial_budget(*f, 1.0, m_config.bounds) : 1.0;
    }
    return out;
}

} // namespace mars::flatland
