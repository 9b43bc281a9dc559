#pragma once

#include <string>

namespace natopt {

enum class ScheduleKind { constant, linear, geometric };

ScheduleKind parse_schedule_kind(const std::string& name);
const char* to_string(ScheduleKind kind);

/// A parameter value that varies over the run, indexed by evaluations spent.
struct ParameterSchedule {
    std::string parameter;
    ScheduleKind kind = ScheduleKind::constant;
    double start = 0.0;
    double end = 0.0;
};

/// constant: start; linear: start + (end - start) t / t_max;
/// geometric: start (end / start)^(t / t_max), endpoints nonzero with equal sign.
double parameter_schedule(ScheduleKind kind, double start, double end, double t, double t_max);

inline double parameter_schedule(const ParameterSchedule& s, double t, double t_max)
{
    return parameter_schedule(s.kind, s.start, s.end, t, t_max);
}

} // namespace natopt
