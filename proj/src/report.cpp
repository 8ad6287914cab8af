#include "arcweave/report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <json.hpp>

#include "arcweave/error.hpp"

namespace arcweave {

namespace {

using Json = nlohmann::ordered_json;

Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

double number_or(const Json& j, double fallback) { return j.is_null() ? fallback : j.get<double>(); }

double real(const Json& j) { return number_or(j, std::nan("")); }

template <typename Enum, std::size_t N>
Enum enum_from(const std::string& text, const Enum (&values)[N], std::string_view what) {
    for (Enum v : values) {
        if (to_string(v) == text) return v;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown " + std::string(what) + " '" + text + "'");
}

constexpr Classification kClassifications[] = {Classification::Infinite, Classification::FiniteObstruction,
                                                Classification::Periodic, Classification::BudgetExhausted};
constexpr LimitKind kLimitKinds[] = {LimitKind::Point, LimitKind::Infinity, LimitKind::Circle,
                                     LimitKind::Unknown};
constexpr Side kSides[] = {Side::A, Side::B};

Json limit_json(const LimitSet& ls) {
    Json params = Json::object();
    if (ls.kind == LimitKind::Point) {
        params["re"] = number(ls.point.real());
        params["im"] = number(ls.point.imag());
    } else if (ls.kind == LimitKind::Circle) {
        params["center_re"] = number(ls.center.real());
        params["center_im"] = number(ls.center.imag());
        params["radius"] = number(ls.radius);
    }
    return {{"kind", to_string(ls.kind)}, {"params", params}, {"residual", number(ls.residual)}};
}

LimitSet limit_from(const Json& j) {
    LimitSet ls;
    ls.kind = enum_from(j.at("kind").get<std::string>(), kLimitKinds, "limit set kind");
    const Json& p = j.at("params");
    if (ls.kind == LimitKind::Point) {
        ls.point = {real(p.at("re")), real(p.at("im"))};
    } else if (ls.kind == LimitKind::Circle) {
        ls.center = {real(p.at("center_re")), real(p.at("center_im"))};
        ls.radius = real(p.at("radius"));
    }
    ls.residual = real(j.at("residual"));
    return ls;
}

Json endpoint_json(const EndpointReport& e) {
    Json j;
    j["side"] = to_string(e.side);
    j["classification"] = to_string(e.classification);
    if (std::isfinite(e.s_bound)) j["s_bound"] = e.s_bound;
    if (e.period) j["period"] = *e.period;
    j["ratio"] = number(e.ratio);
    j["limit_set"] = limit_json(e.limit_set);
    j["steps"] = e.steps;
    j["max_unit_speed_err"] = number(e.max_unit_speed_err);
    j["note"] = e.note;
    return j;
}

EndpointReport endpoint_from(const Json& j) {
    EndpointReport e;
    e.side = enum_from(j.at("side").get<std::string>(), kSides, "side");
    e.classification = enum_from(j.at("classification").get<std::string>(), kClassifications, "classification");
    const double dir = e.side == Side::A ? -1.0 : 1.0;
    e.s_bound = j.contains("s_bound") ? j["s_bound"].get<double>() : dir * kUnbounded;
    if (j.contains("period")) e.period = j["period"].get<double>();
    e.ratio = real(j.at("ratio"));
    e.limit_set = limit_from(j.at("limit_set"));
    e.steps = j.at("steps").get<std::int64_t>();
    e.max_unit_speed_err = real(j.at("max_unit_speed_err"));
    e.note = j.at("note").get<std::string>();
    return e;
}

Json controls_json(const StepControls& c) {
    return {{"order", c.order},
            {"step_fraction", c.step_fraction},
            {"drift_tol", c.drift_tol},
            {"min_step", c.min_step},
            {"s_budget", c.s_budget},
            {"max_steps", c.max_steps},
            {"max_step", c.max_step},
            {"truncation_tol", c.truncation_tol},
            {"period_tol", c.period_tol},
            {"detect_period", c.detect_period},
            {"reanchor_every", c.reanchor_every},
            {"keep_jets", c.keep_jets}};
}

StepControls controls_from(const Json& j) {
    StepControls c;
    c.order = j.at("order").get<int>();
    c.step_fraction = j.at("step_fraction").get<double>();
    c.drift_tol = j.at("drift_tol").get<double>();
    c.min_step = j.at("min_step").get<double>();
    c.s_budget = j.at("s_budget").get<double>();
    c.max_steps = j.at("max_steps").get<std::int64_t>();
    c.max_step = j.at("max_step").get<double>();
    c.truncation_tol = j.at("truncation_tol").get<double>();
    c.period_tol = j.at("period_tol").get<double>();
    c.detect_period = j.at("detect_period").get<bool>();
    c.reanchor_every = j.at("reanchor_every").get<int>();
    c.keep_jets = j.at("keep_jets").get<bool>();
    return c;
}

double parse_field(std::string_view field, std::size_t line) {
    double x = 0;
    const char* end = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), end, x);
    if (ec != std::errc() || ptr != end) {
        throw Error(ErrorCode::MalformedTrace,
                    "line " + std::to_string(line) + ": '" + std::string(field) + "' is not a number");
    }
    return x;
}

}  // namespace

RunReport make_report(const CurveSpec& spec, double t0, const StepControls& controls, const RunPair& runs,
                      std::vector<CriticalPoint> critical_points, double wall_ms) {
    return {spec.name, print(spec.ast), spec.domain, t0, controls, runs.side_a, runs.side_b,
            std::move(critical_points), wall_ms};
}

std::string to_json(const LimitSet& limit_set) { return limit_json(limit_set).dump(2) + "\n"; }

std::string to_json(const RunReport& r) {
    Json j;
    j["curve"] = {{"name", r.curve},
                  {"expression", r.expression},
                  {"domain", Json::array({number(r.domain.lo), number(r.domain.hi)})}};
    j["t0"] = r.t0;
    j["controls"] = controls_json(r.controls);
    j["sideA"] = endpoint_json(r.side_a);
    j["sideB"] = endpoint_json(r.side_b);
    Json crit = Json::array();
    for (const auto& c : r.critical_points) crit.push_back({{"t", c.t}, {"residual", number(c.residual)}});
    j["critical_points"] = crit;
    j["wall_ms"] = r.wall_ms;
    return j.dump(2) + "\n";
}

RunReport report_from_json(std::string_view text) {
    try {
        const Json j = Json::parse(text);
        RunReport r;
        const Json& curve = j.at("curve");
        r.curve = curve.at("name").get<std::string>();
        r.expression = curve.at("expression").get<std::string>();
        const Json& dom = curve.at("domain");
        r.domain = {number_or(dom.at(0), -kUnbounded), number_or(dom.at(1), kUnbounded)};
        r.t0 = j.at("t0").get<double>();
        r.controls = controls_from(j.at("controls"));
        r.side_a = endpoint_from(j.at("sideA"));
        r.side_b = endpoint_from(j.at("sideB"));
        for (const auto& c : j.at("critical_points")) {
            r.critical_points.push_back({c.at("t").get<double>(), real(c.at("residual"))});
        }
        r.wall_ms = j.at("wall_ms").get<double>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidArgument, std::string("malformed report: ") + e.what());
    }
}

std::string trace_csv(const std::vector<TraceSample>& trace) {
    std::string out(kTraceHeader);
    out += '\n';
    for (const auto& t : trace) {
        out += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", t.s, t.point.real(),
                           t.point.imag(), t.step, t.radius_est, t.unit_speed_err, t.curvature);
    }
    return out;
}

std::vector<TraceSample> parse_trace_csv(std::string_view text) {
    std::vector<TraceSample> out;
    std::size_t line_no = 0;
    bool header = true;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (header) {
            if (line != kTraceHeader) throw Error(ErrorCode::MalformedTrace, "unexpected header");
            header = false;
            continue;
        }
        if (line.empty()) continue;
        double v[7];
        std::size_t k = 0;
        for (;;) {
            const auto comma = line.find(',');
            if (k == 7) throw Error(ErrorCode::MalformedTrace, "line " + std::to_string(line_no) + ": too many fields");
            v[k++] = parse_field(line.substr(0, comma), line_no);
            if (comma == std::string_view::npos) break;
            line = line.substr(comma + 1);
        }
        if (k != 7) throw Error(ErrorCode::MalformedTrace, "line " + std::to_string(line_no) + ": expected 7 fields");
        out.push_back({v[0], {v[1], v[2]}, v[3], v[4], v[5], v[6]});
    }
    if (header) throw Error(ErrorCode::MalformedTrace, "empty file");
    if (out.empty()) throw Error(ErrorCode::MalformedTrace, "no samples");
    return out;
}

std::string render_svg(const std::vector<TraceSample>& trace) {
    if (trace.empty()) throw Error(ErrorCode::MalformedTrace, "no samples to render");
    double x0 = kUnbounded, x1 = -kUnbounded, y0 = kUnbounded, y1 = -kUnbounded;
    for (const auto& t : trace) {
        const double x = t.point.real(), y = -t.point.imag();
        if (!std::isfinite(x) || !std::isfinite(y)) throw Error(ErrorCode::MalformedTrace, "non-finite point");
        x0 = std::min(x0, x);
        x1 = std::max(x1, x);
        y0 = std::min(y0, y);
        y1 = std::max(y1, y);
    }
    double extent = std::max(x1 - x0, y1 - y0);
    if (extent == 0) extent = 1;
    const double margin = 0.05 * extent;
    const double w = x1 - x0 + 2 * margin, h = y1 - y0 + 2 * margin;
    const double px = 800.0 / std::max(w, h);

    std::string pts;
    for (const auto& t : trace) {
        if (!pts.empty()) pts += ' ';
        pts += fmt::format("{:.9g},{:.9g}", t.point.real(), -t.point.imag());
    }
    return fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" "
        "viewBox=\"{:.9g} {:.9g} {:.9g} {:.9g}\" preserveAspectRatio=\"xMidYMid meet\">\n"
        "  <polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" vector-effect=\"non-scaling-stroke\" "
        "points=\"{}\"/>\n</svg>\n",
        w * px, h * px, x0 - margin, y0 - margin, w, h, pts);
}

}  // namespace arcweave
