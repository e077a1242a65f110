#include "mars/core/problem.hpp"

#include "mars/core/errors.hpp"
#include "mars/core/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace mars {

MisProblem::MisProblem(Interval domain, std::vector<Subintegrand> subintegrands, std::vector<Technique> techniques,
                       std::vector<std::vector<bool>> indicator, double overhead_cost, double overhead_variance,
                       std::string name)
    : m_name(std::move(name)), m_domain(domain), m_subintegrands(std::move(subintegrands)),
      m_techniques(std::move(techniques)), m_indicator(std::move(indicator)), m_overheadCost(overhead_cost),
      m_overheadVariance(overhead_variance) {
    for (const auto &s : m_subintegrands)
        m_breakpoints.insert(m_breakpoints.end(), s.breakpoints.begin(), s.breakpoints.end());
    for (const auto &t : m_techniques) {
        auto b = t.density.breakpoints();
        m_breakpoints.insert(m_breakpoints.end(), b.begin(), b.end());
    }
    std::erase_if(m_breakpoints, [&](double b) { return !(b > m_domain.lo && b < m_domain.hi); });
    std::sort(m_breakpoints.begin(), m_breakpoints.end());
    m_breakpoints.erase(std::unique(m_breakpoints.begin(), m_breakpoints.end()), m_breakpoints.end());
    validate();
}

std::vector<double> MisProblem::costs() const {
    std::vector<double> out;
    for (const auto &t : m_techniques)
        out.push_back(t.cost);
    return out;
}

void MisProblem::validate() const {
    const std::string where = m_name.empty() ? std::string("problem") : "problem '" + m_name + "'";
    if (!(m_domain.hi > m_domain.lo) || !std::isfinite(m_domain.lo) || !std::isfinite(m_domain.hi))
        throw ValidationError(where + ": domain must be a finite nonempty interval");
    if (m_subintegrands.empty())
        throw ValidationError(where + ": needs at least one subintegrand");
    if (m_techniques.empty())
        throw ValidationError(where + ": needs at least one technique");
    if (m_indicator.size() != m_subintegrands.size())
        throw ValidationError(where + ": indicator needs one row per subintegrand");
    for (std::size_t i = 0; i < m_indicator.size(); ++i) {
        if (m_indicator[i].size() != m_techniques.size())
            throw ValidationError(where + ": indicator row " + std::to_string(i) + " needs one entry per technique");
        if (std::none_of(m_indicator[i].begin(), m_indicator[i].end(), [](bool b) { return b; }))
            throw ValidationError(where + ": subintegrand " + std::to_string(i) + " is estimated by no technique");
    }
    for (std::size_t t = 0; t < m_techniques.size(); ++t) {
        if (!(m_techniques[t].cost > 0) || !std::isfinite(m_techniques[t].cost))
            throw ValidationError(where + ": technique " + std::to_string(t) + " needs a positive cost");
        const Interval support = m_techniques[t].density.support();
        if (support.lo < m_domain.lo || support.hi > m_domain.hi)
            throw ValidationError(where + ": technique " + std::to_string(t) + " has support outside the domain");
        const auto &density = m_techniques[t].density;
        const double mass = integrate([&](double x) { return density.pdf(x); }, m_domain, m_breakpoints,
                                      {.rel_tol = 1e-10});
        if (std::abs(mass - 1) > 1e-6)
            throw ValidationError(where + ": density of technique " + std::to_string(t) + " integrates to " +
                                  std::to_string(mass));
    }
    if (!(m_overheadCost >= 0) || !(m_overheadVariance >= 0))
        throw ValidationError(where + ": overhead cost and variance must be nonnegative");

    constexpr int points = 10000;
    const double h = m_domain.length() / points;
    for (int j = 0; j < points; ++j) {
        const double x = m_domain.lo + (j + 0.5) * h;
        for (std::size_t i = 0; i < m_subintegrands.size(); ++i) {
            const double fi = f(i, x);
            if (!std::isfinite(fi))
                throw ValidationError(where + ": subintegrand " + std::to_string(i) + " is not finite at x=" +
                                      std::to_string(x));
            if (fi == 0)
                continue;
            double denominator = 0;
            for (std::size_t t = 0; t < m_techniques.size(); ++t)
                if (m_indicator[i][t])
                    denominator += pdf(t, x);
            if (!(denominator > 0))
                throw ValidationError(where + ": subintegrand " + std::to_string(i) + " is nonzero at x=" +
                                      std::to_string(x) + " where none of its techniques has density");
        }
    }
}

double MisProblem::reference_integral(double rel_tol) const {
    auto total = [&](double x) {
        double sum = 0;
        for (std::size_t i = 0; i < m_subintegrands.size(); ++i)
            sum += f(i, x);
        return sum;
    };
    return integrate(total, m_domain, m_breakpoints, {.rel_tol = rel_tol});
}

MisProblem MisProblem::permuted(const std::vector<std::size_t> &perm) const {
    if (perm.size() != m_techniques.size())
        throw ContractViolation("permutation size does not match technique count");
    std::vector<Technique> techniques;
    std::vector<std::vector<bool>> indicator(m_indicator.size());
    for (std::size_t t : perm)
        techniques.push_back(m_techniques.at(t));
    for (std::size_t i = 0; i < m_indicator.size(); ++i)
        for (std::size_t t : perm)
            indicator[i].push_back(m_indicator[i][t]);
    return MisProblem(m_domain, m_subintegrands, std::move(techniques), std::move(indicator), m_overheadCost,
                      m_overheadVariance, m_name);
}

} // namespace mars
