#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "arcweave/engine.hpp"

namespace arcweave {

struct RunReport {
    std::string curve;
    std::string expression;
    Interval domain;
    double t0 = 0.0;
    StepControls controls;
    EndpointReport side_a;
    EndpointReport side_b;
    std::vector<CriticalPoint> critical_points;
    double wall_ms = 0.0;
};

RunReport make_report(const CurveSpec& spec, double t0, const StepControls& controls, const RunPair& runs,
                      std::vector<CriticalPoint> critical_points, double wall_ms);

/// Pretty-printed JSON (two-space indent, trailing newline). Non-finite
/// numbers are written as null and optional fields are omitted.
std::string to_json(const RunReport& report);
/// Throws InvalidArgument when the document does not follow the schema.
RunReport report_from_json(std::string_view text);

std::string to_json(const LimitSet& limit_set);

inline constexpr std::string_view kTraceHeader = "s,re,im,step,radius_est,unit_speed_err,curvature";

/// Header plus one row per sample, 17 significant digits.
std::string trace_csv(const std::vector<TraceSample>& trace);
/// Inverse of trace_csv; throws MalformedTrace on a bad header, a bad row or no rows.
std::vector<TraceSample> parse_trace_csv(std::string_view text);

/// One polyline through the trace points, y pointing up, 5% margin, 1:1 aspect.
std::string render_svg(const std::vector<TraceSample>& trace);

}  // namespace arcweave
