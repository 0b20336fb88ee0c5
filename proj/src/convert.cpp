#include "bimlog/convert.hpp"

#include "bimlog/geometry.hpp"

namespace bimlog {

double unit_roundtrip_length(double meters) {
    const double feet = meters / kMetersPerFoot;
    return parse_real(format_real(feet)) * kMetersPerFoot;
}

GeometricBase unit_roundtrip_geometry(const GeometricBase& g) {
    const GeometricBase feet = scale_geometry(g, 1.0 / kMetersPerFoot);
    const GeometricBase reparsed = parse_geometry(serialize_geometry(feet));
    return scale_geometry(reparsed, kMetersPerFoot);
}

LogEvent unit_roundtrip_event(const LogEvent& event) {
    LogEvent out = event;
    if (out.geometry) out.geometry = unit_roundtrip_geometry(*out.geometry);
    for (auto& [name, value] : out.params)
        if (is_length_param(name))
            if (double* v = std::get_if<double>(&value)) *v = unit_roundtrip_length(*v);
    return out;
}

std::vector<LogEvent> unit_roundtrip_events(const std::vector<LogEvent>& events) {
    std::vector<LogEvent> out;
    out.reserve(events.size());
    for (const LogEvent& e : events) out.push_back(unit_roundtrip_event(e));
    return out;
}

} // namespace bimlog
