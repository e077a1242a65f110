#include "mars/io/csv.hpp"

#include "mars/core/errors.hpp"

#include <charconv>

namespace mars {

CsvWriter::CsvWriter(const std::filesystem::path &path, const std::vector<std::string> &header)
    : m_out(path), m_columns(header.size()) {
    if (!m_out)
        throw std::runtime_error("cannot write " + path.string());
    for (std::size_t c = 0; c < header.size(); ++c)
        m_out << (c ? "," : "") << header[c];
    m_out << '\n';
}

void CsvWriter::row(const std::vector<double> &values) {
    if (values.size() != m_columns)
        throw ContractViolation("CSV row has " + std::to_string(values.size()) + " values, header has " +
                                std::to_string(m_columns));
    char buffer[64];
    for (std::size_t c = 0; c < values.size(); ++c) {
        auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, values[c]);
        (void)ec;
        if (c)
            m_out << ',';
        m_out.write(buffer, end - buffer);
    }
    m_out << '\n';
}

std::vector<std::string> beta_columns(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t t = 1; t <= n; ++t)
        out.push_back("beta_" + std::to_string(t));
    return out;
}

void write_landscape(const std::filesystem::path &path, const Landscape &landscape) {
    const std::size_t n = landscape.axes.size();
    auto header = beta_columns(n);
    header.insert(header.end(), {"variance", "cost", "inv_efficiency"});
    CsvWriter csv(path, header);
    for (std::size_t k = 0; k < landscape.points.size(); ++k) {
        auto row = landscape.points[k].vector();
        row.insert(row.end(), {landscape.values[k].variance, landscape.values[k].cost,
                               landscape.values[k].inv_efficiency});
        csv.row(row);
    }
}

void write_gradient_map(const std::filesystem::path &path, const GradientMap &map) {
    auto header = beta_columns(map.axes.size());
    header.push_back("dot_product");
    CsvWriter csv(path, header);
    for (std::size_t k = 0; k < map.points.size(); ++k) {
        auto row = map.points[k].vector();
        row.push_back(map.dot[k]);
        csv.row(row);
    }
}

void write_trajectory(const std::filesystem::path &path, const Trajectory &trajectory) {
    const std::size_t n = trajectory.entries.empty() ? 0 : trajectory.entries.front().beta.size();
    std::vector<std::string> header{"iteration"};
    auto betas = beta_columns(n);
    header.insert(header.end(), betas.begin(), betas.end());
    header.insert(header.end(), {"variance", "cost", "inv_efficiency"});
    CsvWriter csv(path, header);
    for (const auto &e : trajectory.entries) {
        std::vector<double> row{static_cast<double>(e.iteration)};
        row.insert(row.end(), e.beta.vector().begin(), e.beta.vector().end());
        row.insert(row.end(), {e.variance, e.cost, e.inv_efficiency});
        csv.row(row);
    }
}

} // namespace mars
