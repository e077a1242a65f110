#pragma once

#include "mars/efficiency/gradient.hpp"
#include "mars/fixedpoint/solver.hpp"
#include "mars/oracle/grid_search.hpp"

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace mars {

/// Minimal CSV writer: numbers are written with full round-trip precision.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path &path, const std::vector<std::string> &header);

    void row(const std::vector<double> &values);

private:
    std::ofstream m_out;
    std::size_t m_columns;
};

std::vector<std::string> beta_columns(std::size_t n);

/// beta_1..beta_n, variance, cost, inv_efficiency
void write_landscape(const std::filesystem::path &path, const Landscape &landscape);

/// beta_1..beta_n, dot_product
void write_gradient_map(const std::filesystem::path &path, const GradientMap &map);

/// iteration, beta_1..beta_n, variance, cost, inv_efficiency
void write_trajectory(const std::filesystem::path &path, const Trajectory &trajectory);

} // namespace mars
