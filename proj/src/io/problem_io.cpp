#include "mars/io/problem_io.hpp"

#include "mars/core/errors.hpp"
#include "mars/core/expression.hpp"

#include <fstream>

namespace mars {

using nlohmann::json;

namespace {

const json &require(const json &obj, const char *key, const std::string &context) {
    if (!obj.is_object() || !obj.contains(key))
        throw SchemaError(context + ": missing field '" + key + "'");
    return obj.at(key);
}

double number(const json &value, const std::string &context) {
    if (!value.is_number())
        throw SchemaError(context + ": expected a number");
    return value.get<double>();
}

double numberOr(const json &obj, const char *key, double fallback, const std::string &context) {
    return obj.contains(key) ? number(obj.at(key), context + "." + key) : fallback;
}

Interval parseInterval(const json &value, const std::string &context) {
    if (!value.is_array() || value.size() != 2)
        throw SchemaError(context + ": expected [lo, hi]");
    return {number(value[0], context), number(value[1], context)};
}

} // namespace

Density parse_density(const json &spec, Interval domain) {
    const std::string context = "density";
    const std::string type = require(spec, "type", context).is_string() ? spec.at("type").get<std::string>() : "";
    if (type == "uniform") {
        Interval support{numberOr(spec, "lo", domain.lo, context), numberOr(spec, "hi", domain.hi, context)};
        return Density::uniform(support);
    }
    if (type == "gaussian") {
        return Density::gaussian(number(require(spec, "mean", context), "density.mean"),
                                 number(require(spec, "sigma", context), "density.sigma"), domain);
    }
    if (type == "tabulated") {
        const json &shape = require(spec, "shape", context);
        if (!shape.is_string())
            throw SchemaError("density.shape: expected an expression string");
        const Expression expr = Expression::parse(shape.get<std::string>());
        const auto cells = static_cast<std::size_t>(numberOr(spec, "cells", 2048, context));
        return Density::tabulated([&](double x) { return expr(x); }, domain, cells);
    }
    if (type == "mixture") {
        const json &weights = require(spec, "weights", context);
        const json &components = require(spec, "components", context);
        if (!weights.is_array() || !components.is_array())
            throw SchemaError("density mixture: weights and components must be arrays");
        std::vector<double> w;
        std::vector<Density> c;
        for (const auto &v : weights)
            w.push_back(number(v, "density.weights"));
        for (const auto &v : components)
            c.push_back(parse_density(v, domain));
        return Density::mixture(std::move(w), std::move(c));
    }
    throw SchemaError("density: unknown type '" + type + "' (expected uniform, gaussian, tabulated or mixture)");
}

MisProblem parse_problem(const json &doc, const std::string &fallback_name) {
    if (!doc.is_object())
        throw SchemaError("problem: expected a JSON object");
    const std::string name = doc.value("name", fallback_name);
    const Interval domain = parseInterval(require(doc, "domain", "problem"), "problem.domain");

    std::vector<Subintegrand> subintegrands;
    const json &subs = require(doc, "subintegrands", "problem");
    if (!subs.is_array() || subs.empty())
        throw SchemaError("problem.subintegrands: expected a nonempty array");
    for (const auto &s : subs) {
        std::string text, label;
        if (s.is_string()) {
            text = s.get<std::string>();
        } else if (s.is_object()) {
            const json &e = require(s, "expr", "subintegrand");
            if (!e.is_string())
                throw SchemaError("subintegrand.expr: expected a string");
            text = e.get<std::string>();
            label = s.value("label", "");
        } else {
            throw SchemaError("problem.subintegrands: entries must be strings or objects");
        }
        auto expr = Expression::parse(text);
        subintegrands.push_back({[expr](double x) { return expr(x); }, expr.breakpoints(),
                                 label.empty() ? text : label});
    }

    std::vector<Technique> techniques;
    const json &techs = require(doc, "techniques", "problem");
    if (!techs.is_array() || techs.empty())
        throw SchemaError("problem.techniques: expected a nonempty array");
    for (std::size_t t = 0; t < techs.size(); ++t) {
        const json &spec = techs[t];
        const std::string context = "techniques[" + std::to_string(t) + "]";
        Density density = parse_density(require(spec, "density", context), domain);
        techniques.push_back({spec.value("name", "p" + std::to_string(t + 1)), std::move(density),
                              number(require(spec, "cost", context), context + ".cost")});
    }

    std::vector<std::vector<bool>> indicator;
    if (doc.contains("indicator")) {
        const json &rows = doc.at("indicator");
        if (!rows.is_array())
            throw SchemaError("problem.indicator: expected an array of rows");
        for (const auto &row : rows) {
            if (!row.is_array())
                throw SchemaError("problem.indicator: rows must be arrays");
            std::vector<bool> r;
            for (const auto &v : row) {
                if (v.is_boolean())
                    r.push_back(v.get<bool>());
                else if (v.is_number_integer())
                    r.push_back(v.get<int>() != 0);
                else
                    throw SchemaError("problem.indicator: entries must be booleans or 0/1");
            }
            indicator.push_back(std::move(r));
        }
    } else {
        indicator.assign(subintegrands.size(), std::vector<bool>(techniques.size(), true));
    }

    return MisProblem(domain, std::move(subintegrands), std::move(techniques), std::move(indicator),
                      number(require(doc, "overhead_cost", "problem"), "problem.overhead_cost"),
                      number(require(doc, "overhead_variance", "problem"), "problem.overhead_variance"), name);
}

MisProblem load_problem(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in)
        throw SchemaError("cannot open problem file " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error &e) {
        throw SchemaError(path.string() + ": " + e.what());
    }
    return parse_problem(doc, path.stem().string());
}

} // namespace mars
