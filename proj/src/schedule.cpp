#include "natopt/schedule.hpp"

#include "natopt/core.hpp"

#include <cmath>

namespace natopt {

ScheduleKind parse_schedule_kind(const std::string& name)
{
    if (name == "constant") return ScheduleKind::constant;
    if (name == "linear") return ScheduleKind::linear;
    if (name == "geometric") return ScheduleKind::geometric;
    throw std::invalid_argument("unknown schedule kind '" + name + "' (expected constant, linear or geometric)");
}

const char* to_string(ScheduleKind kind)
{
    switch (kind) {
    case ScheduleKind::constant: return "constant";
    case ScheduleKind::linear: return "linear";
    case ScheduleKind::geometric: return "geometric";
    }
    return "constant";
}

double parameter_schedule(ScheduleKind kind, double start, double end, double t, double t_max)
{
    if (!(t_max > 0.0) || t < 0.0 || t > t_max)
        throw ContractViolation("parameter_schedule: requires 0 <= t <= t_max and t_max > 0");
    if (kind == ScheduleKind::geometric && (start == 0.0 || end == 0.0 || (start > 0.0) != (end > 0.0)))
        throw std::invalid_argument("geometric schedule needs nonzero endpoints of the same sign");
    if (t == t_max && kind != ScheduleKind::constant)
        return end;
    const double frac = t / t_max;
    switch (kind) {
    case ScheduleKind::constant:
        return start;
    case ScheduleKind::linear:
        return start + (end - start) * frac;
    case ScheduleKind::geometric:
        return start * std::pow(end / start, frac);
    }
    return start;
}

} // namespace natopt
