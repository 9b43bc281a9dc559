#include "natopt/algorithms.hpp"

#include "natopt/csv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace natopt {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

ParameterSpec open_positive(std::string name, double def)
{
    return {std::move(name), 0.0, inf, true, true, def, false};
}

ParameterSpec closed(std::string name, double lo, double hi, double def)
{
    return {std::move(name), lo, hi, false, false, def, false};
}

std::vector<AlgorithmDescriptor> build_registry()
{
    using M = Mechanism;
    std::vector<AlgorithmDescriptor> r;

    r.push_back({"gd", "Newton-Raphson", {{"eta", 0.0, inf, true, true, 0.1, false}}, {M::GGM}, {}, false, 1});
    r.push_back({"de", "DE", {{"F", 0.0, 2.0, true, true, 0.7, false}}, {M::RP, M::DBP}, {}, false, 4});
    r.push_back({"pso", "PSO", {open_positive("alpha", 1.0), open_positive("beta", 1.0)}, {M::DBP}, {M::DBP}, true, 1});
    r.push_back({"fa", "FA",
                 {open_positive("beta0", 1.0), open_positive("gamma", 1.0), {"alpha", 0.0, inf, false, true, 0.01, false}},
                 {M::DBP, M::IRW}, {}, false, 2});
    r.push_back({"ba", "BA",
                 {{"f_min", -inf, inf, true, true, 0.0, false}, {"f_max", -inf, inf, true, true, 2.0, false}},
                 {M::RP, M::DBP}, {M::RP, M::DBP}, true, 1});
    r.push_back({"cs", "CS",
                 {closed("p_a", 0.0, 1.0, 0.25), open_positive("alpha", 1.0), closed("lambda", 0.3, 1.99, 1.5)},
                 {M::RP, M::DBP, M::LTRW}, {}, false, 3});
    r.push_back({"fpa", "FPA",
                 {closed("p", 0.0, 1.0, 0.8), open_positive("gamma", 0.1), closed("lambda", 0.3, 1.99, 1.5)},
                 {M::DBP, M::LTRW}, {}, false, 3});
    // no row in the mechanism table
    r.push_back({"ga", "",
                 {closed("crossover_rate", 0.0, 1.0, 0.9), closed("mutation_rate", 0.0, 1.0, 0.2),
                  open_positive("mutation_scale", 0.01), {"elite_count", 0.0, inf, false, true, 1.0, true}},
                 {}, {}, false, 2});
    r.push_back({"sa", "SA",
                 {open_positive("initial_temperature", 1.0), {"cooling_factor", 0.0, 1.0, true, true, 0.99, false},
                  open_positive("step_scale", 0.05)},
                 {M::IRW}, {}, false, 1});
    return r;
}

} // namespace

const char* to_string(Mechanism m)
{
    switch (m) {
    case Mechanism::GGM: return "GGM";
    case Mechanism::RP: return "RP";
    case Mechanism::DBP: return "DBP";
    case Mechanism::IRW: return "IRW";
    case Mechanism::LTRW: return "LTRW";
    }
    return "?";
}

bool ParameterSpec::admits(double value) const
{
    if (std::isnan(value))
        return false;
    if (lower_open ? !(value > lower) : !(value >= lower))
        return false;
    if (upper_open ? !(value < upper) : !(value <= upper))
        return false;
    if (integer && value != std::floor(value))
        return false;
    return true;
}

std::string ParameterSpec::range_text() const
{
    return std::string(lower_open ? "(" : "[") + csv::number(lower) + ", " + csv::number(upper) +
           (upper_open ? ")" : "]");
}

const ParameterSpec* AlgorithmDescriptor::find(std::string_view parameter) const
{
    auto it = std::find_if(parameters.begin(), parameters.end(), [&](const auto& p) { return p.name == parameter; });
    return it == parameters.end() ? nullptr : &*it;
}

ParameterSet AlgorithmDescriptor::defaults() const
{
    ParameterSet out;
    for (const auto& p : parameters)
        out[p.name] = p.default_value;
    return out;
}

const std::vector<AlgorithmDescriptor>& algorithm_registry()
{
    static const std::vector<AlgorithmDescriptor> registry = build_registry();
    return registry;
}

const AlgorithmDescriptor& find_algorithm(std::string_view name)
{
    for (const auto& d : algorithm_registry())
        if (d.name == name)
            return d;
    throw ParameterError("unknown algorithm '" + std::string(name) +
                         "' (expected one of gd, de, pso, fa, ba, cs, fpa, ga, sa)");
}

ParameterSet resolve_parameters(const AlgorithmDescriptor& descriptor, const ParameterSet& overrides)
{
    ParameterSet out = descriptor.defaults();
    for (const auto& [name, value] : overrides) {
        const ParameterSpec* spec = descriptor.find(name);
        if (!spec)
            throw ParameterError("algorithm '" + descriptor.name + "' has no parameter '" + name + "'");
        if (!spec->admits(value))
            throw ParameterError("parameter " + name + " of " + descriptor.name + " must lie in " +
                                 spec->range_text() + ", got " + csv::number(value));
        out[name] = value;
    }
    if (descriptor.name == "ba" && out["f_min"] > out["f_max"])
        throw ParameterError("parameter f_min of ba must not exceed f_max");
    return out;
}

namespace {

double get(const ParameterSet& p, const char* name, double fallback)
{
    auto it = p.find(name);
    return it == p.end() ? fallback : it->second;
}

} // namespace

GDParams GDParams::from(const ParameterSet& p) { return {get(p, "eta", 0.1)}; }

DEParams DEParams::from(const ParameterSet& p) { return {get(p, "F", 0.7)}; }

PSOParams PSOParams::from(const ParameterSet& p) { return {get(p, "alpha", 1.0), get(p, "beta", 1.0), false}; }

FAParams FAParams::from(const ParameterSet& p)
{
    return {get(p, "beta0", 1.0), get(p, "gamma", 1.0), get(p, "alpha", 0.01)};
}

BAParams BAParams::from(const ParameterSet& p) { return {get(p, "f_min", 0.0), get(p, "f_max", 2.0)}; }

CSParams CSParams::from(const ParameterSet& p)
{
    return {get(p, "p_a", 0.25), get(p, "alpha", 1.0), get(p, "lambda", 1.5)};
}

FPAParams FPAParams::from(const ParameterSet& p)
{
    return {get(p, "p", 0.8), get(p, "gamma", 0.1), get(p, "lambda", 1.5)};
}

GAParams GAParams::from(const ParameterSet& p)
{
    return {get(p, "crossover_rate", 0.9), get(p, "mutation_rate", 0.2), get(p, "mutation_scale", 0.01),
            static_cast<std::size_t>(std::llround(get(p, "elite_count", 1.0)))};
}

SAParams SAParams::from(const ParameterSet& p)
{
    return {get(p, "initial_temperature", 1.0), get(p, "cooling_factor", 0.99), get(p, "step_scale", 0.05)};
}

} // namespace natopt
