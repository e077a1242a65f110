#include "mars/core/quadrature.hpp"

#include "mars/core/errors.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <queue>

namespace mars {

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
using Gauss = boost::math::quadrature::gauss<double, 10>;

struct Panel {
    double a, b;
    std::vector<double> value, error, l1;
    double priority = 0;
};

struct ByPriority {
    bool operator()(const Panel *lhs, const Panel *rhs) const { return lhs->priority < rhs->priority; }
};

class Rule {
public:
    Rule(const VectorIntegrand &g, std::size_t dim) : m_g(g), m_dim(dim), m_fp(dim), m_fm(dim) {}

    void apply(Panel &panel) {
        const auto &x = Kronrod::abscissa();
        const auto &wk = Kronrod::weights();
        const auto &wg = Gauss::weights();
        const double half = 0.5 * (panel.b - panel.a);
        const double mid = 0.5 * (panel.a + panel.b);

        std::vector<double> kronrod(m_dim, 0.0), gauss(m_dim, 0.0), l1(m_dim, 0.0);
        // 10-point Gauss has no center node; it uses the odd Kronrod abscissae
        m_g(mid, m_fp);
        for (std::size_t k = 0; k < m_dim; ++k) {
            kronrod[k] = m_fp[k] * wk[0];
            l1[k] = std::abs(m_fp[k]) * wk[0];
        }
        for (std::size_t i = 1; i < x.size(); ++i) {
            m_g(mid + half * x[i], m_fp);
            m_g(mid - half * x[i], m_fm);
            for (std::size_t k = 0; k < m_dim; ++k) {
                const double sum = m_fp[k] + m_fm[k];
                kronrod[k] += sum * wk[i];
                l1[k] += (std::abs(m_fp[k]) + std::abs(m_fm[k])) * wk[i];
                if (i % 2 == 1)
                    gauss[k] += sum * wg[i / 2];
            }
        }
        panel.value.resize(m_dim);
        panel.error.resize(m_dim);
        panel.l1.resize(m_dim);
        for (std::size_t k = 0; k < m_dim; ++k) {
            panel.value[k] = kronrod[k] * half;
            panel.l1[k] = l1[k] * std::abs(half);
            panel.error[k] = std::max(std::abs(kronrod[k] - gauss[k]) * std::abs(half),
                                      std::abs(panel.value[k]) * 4 * std::numeric_limits<double>::epsilon());
        }
    }

private:
    const VectorIntegrand &m_g;
    std::size_t m_dim;
    std::vector<double> m_fp, m_fm;
};

} // namespace

QuadratureResult integrate(const VectorIntegrand &g, std::size_t dim, Interval domain,
                           std::vector<double> breakpoints, const QuadratureOptions &options) {
    QuadratureResult result;
    result.value.assign(dim, 0.0);
    result.error.assign(dim, 0.0);
    result.l1.assign(dim, 0.0);
    if (dim == 0 || !(domain.hi > domain.lo)) {
        result.converged = true;
        return result;
    }

    breakpoints.push_back(domain.lo);
    breakpoints.push_back(domain.hi);
    std::erase_if(breakpoints, [&](double b) { return !(b >= domain.lo && b <= domain.hi); });
    std::sort(breakpoints.begin(), breakpoints.end());
    breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());

    Rule rule(g, dim);
    std::vector<std::unique_ptr<Panel>> storage;
    std::priority_queue<Panel *, std::vector<Panel *>, ByPriority> queue;

    auto tolerance = [&](std::size_t k) { return std::max(options.abs_tol, options.rel_tol * result.l1[k]); };

    auto add = [&](double a, double b) {
        auto panel = std::make_unique<Panel>();
        panel->a = a;
        panel->b = b;
        rule.apply(*panel);
        for (std::size_t k = 0; k < dim; ++k) {
            result.value[k] += panel->value[k];
            result.error[k] += panel->error[k];
            result.l1[k] += panel->l1[k];
        }
        storage.push_back(std::move(panel));
        return storage.back().get();
    };

    auto remove = [&](const Panel &panel) {
        for (std::size_t k = 0; k < dim; ++k) {
            result.value[k] -= panel.value[k];
            result.error[k] -= panel.error[k];
            result.l1[k] -= panel.l1[k];
        }
    };

    std::vector<Panel *> pending;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
        if (breakpoints[i + 1] > breakpoints[i])
            pending.push_back(add(breakpoints[i], breakpoints[i + 1]));

    // Priorities are relative to the current tolerances, which only move slightly as
    // panels refine, so they are assigned once at insertion.
    auto prioritize = [&](Panel *panel) {
        double p = 0;
        for (std::size_t k = 0; k < dim; ++k)
            p = std::max(p, panel->error[k] / std::max(tolerance(k), std::numeric_limits<double>::min()));
        panel->priority = p;
        queue.push(panel);
    };
    for (Panel *p : pending)
        prioritize(p);

    auto satisfied = [&] {
        for (std::size_t k = 0; k < dim; ++k)
            if (result.error[k] > tolerance(k)) {
                result.worst_component = k;
                return false;
            }
        return true;
    };

    std::vector<Panel *> frozen;
    result.panels = queue.size();
    while (!satisfied()) {
        if (result.panels >= options.max_panels || queue.empty()) {
            result.converged = false;
            return result;
        }
        Panel *worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst->a + worst->b);
        if (!(mid > worst->a && mid < worst->b)) {
            // cannot split further; accept this panel's error as final
            frozen.push_back(worst);
            if (queue.empty()) {
                result.converged = false;
                return result;
            }
            continue;
        }
        remove(*worst);
        Panel *left = add(worst->a, mid);
        Panel *right = add(mid, worst->b);
        prioritize(left);
        prioritize(right);
        ++result.panels;
    }

    // Recompute sums from surviving panels to shed accumulated cancellation from
    // the running add/remove bookkeeping.
    std::fill(result.value.begin(), result.value.end(), 0.0);
    std::fill(result.error.begin(), result.error.end(), 0.0);
    std::fill(result.l1.begin(), result.l1.end(), 0.0);
    std::vector<const Panel *> live(frozen.begin(), frozen.end());
    while (!queue.empty()) {
        live.push_back(queue.top());
        queue.pop();
    }
    std::sort(live.begin(), live.end(), [](const Panel *l, const Panel *r) { return l->a < r->a; });
    for (const Panel *panel : live)
        for (std::size_t k = 0; k < dim; ++k) {
            result.value[k] += panel->value[k];
            result.error[k] += panel->error[k];
            result.l1[k] += panel->l1[k];
        }
    result.converged = true;
    return result;
}

double integrate(const std::function<double(double)> &g, Interval domain, std::vector<double> breakpoints,
                 const QuadratureOptions &options) {
    const VectorIntegrand vg = [&](double x, std::span<double> out) { out[0] = g(x); };
    auto result = integrate(vg, 1, domain, std::move(breakpoints), options);
    if (!result.converged)
        throw NumericalError("quadrature did not reach tolerance (error " + std::to_string(result.error[0]) +
                             " after " + std::to_string(result.panels) + " panels)");
    return result.value[0];
}

} // namespace mars
