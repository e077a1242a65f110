#pragma once

#include "mars/core/density.hpp"

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace mars {

struct Subintegrand {
    std::function<double(double)> eval;
    /// Known discontinuities, passed on to quadrature.
    std::vector<double> breakpoints;
    std::string label;
};

struct Technique {
    std::string name;
    Density density;
    /// Abstract cost units per primary sample.
    double cost = 1;
};

/// A 1D multi-sample MIS integration problem: f = Σ_i f_i on a closed interval,
/// estimated by techniques p_t where technique t covers subintegrand i iff
/// indicator[i][t].
class MisProblem {
public:
    /// Validates on construction and throws ValidationError on failure.
    MisProblem(Interval domain, std::vector<Subintegrand> subintegrands, std::vector<Technique> techniques,
               std::vector<std::vector<bool>> indicator, double overhead_cost, double overhead_variance,
               std::string name = {});

    const std::string &name() const { return m_name; }
    Interval domain() const { return m_domain; }

    std::size_t num_subintegrands() const { return m_subintegrands.size(); }
    std::size_t num_techniques() const { return m_techniques.size(); }

    const Subintegrand &subintegrand(std::size_t i) const { return m_subintegrands[i]; }
    const Technique &technique(std::size_t t) const { return m_techniques[t]; }
    bool estimates(std::size_t i, std::size_t t) const { return m_indicator[i][t]; }
    const std::vector<std::vector<bool>> &indicator() const { return m_indicator; }

    double f(std::size_t i, double x) const { return m_subintegrands[i].eval(x); }
    double pdf(std::size_t t, double x) const { return m_techniques[t].density.pdf(x); }
    double cost(std::size_t t) const { return m_techniques[t].cost; }
    std::vector<double> costs() const;

    double overhead_cost() const { return m_overheadCost; }
    double overhead_variance() const { return m_overheadVariance; }

    /// Union of all subintegrand and density discontinuities inside the domain.
    const std::vector<double> &breakpoints() const { return m_breakpoints; }

    /// ∫ Σ_i f_i by adaptive quadrature.
    double reference_integral(double rel_tol = 1e-12) const;

    /// Same problem with techniques reordered: new technique t is old technique perm[t].
    MisProblem permuted(const std::vector<std::size_t> &perm) const;

private:
    void validate() const;

    std::string m_name;
    Interval m_domain;
    std::vector<Subintegrand> m_subintegrands;
    std::vector<Technique> m_techniques;
    std::vector<std::vector<bool>> m_indicator;
    double m_overheadCost;
    double m_overheadVariance;
    std::vector<double> m_breakpoints;
};

} // namespace mars
