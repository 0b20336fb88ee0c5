#include "bimlog/codec.hpp"

#include "bimlog/errors.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace bimlog {

using namespace std::string_literals;

namespace {

bool is_decimal_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

std::int64_t parse_int(std::string_view text, std::size_t offset) {
    std::int64_t value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw FormatError("expected an integer, got '"s + std::string(text) + "'", offset);
    return value;
}

// --- Geometry text parser ------------------------------------------------------

struct Cursor {
    std::string_view text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool eof() const { return pos >= text.size(); }
    char peek() {
        skip_ws();
        if (eof()) throw FormatError("unexpected end of input", pos);
        return text[pos];
    }
    void expect(char c) {
        skip_ws();
        if (eof() || text[pos] != c)
            throw FormatError("expected '"s + c + "'", pos);
        ++pos;
    }
    bool try_consume(char c) {
        skip_ws();
        if (!eof() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    std::string_view ident() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && std::isalpha(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start) throw FormatError("expected an identifier", start);
        return text.substr(start, pos - start);
    }
    std::string_view token() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size()) {
            char c = text[pos];
            if (c == ',' || c == ';' || c == ')' || c == ']' || c == '}' || c == '>' ||
                std::isspace(static_cast<unsigned char>(c)))
                break;
            ++pos;
        }
        if (pos == start) throw FormatError("expected a value", start);
        return text.substr(start, pos - start);
    }
    double real() {
        skip_ws();
        std::size_t start = pos;
        return parse_real(token(), start);
    }
    std::int64_t integer() {
        skip_ws();
        std::size_t start = pos;
        return parse_int(token(), start);
    }
    bool boolean() {
        skip_ws();
        std::size_t start = pos;
        std::string_view id = ident();
        if (id == "true") return true;
        if (id == "false") return false;
        throw FormatError("expected 'true' or 'false'", start);
    }
    Vec3 point() {
        expect('(');
        double x = real();
        expect(',');
        double y = real();
        expect(',');
        double z = real();
        expect(')');
        return Vec3(x, y, z);
    }
    std::vector<double> real_list() {
        expect('<');
        std::vector<double> out;
        if (try_consume('>')) return out;
        out.push_back(real());
        while (try_consume(';')) out.push_back(real());
        expect('>');
        return out;
    }
    std::vector<Vec3> point_list() {
        expect('<');
        std::vector<Vec3> out;
        if (try_consume('>')) return out;
        out.push_back(point());
        while (try_consume(';')) out.push_back(point());
        expect('>');
        return out;
    }
};

Curve parse_curve(Cursor& cur) {
    cur.expect('[');
    cur.skip_ws();
    const std::size_t kind_pos = cur.pos;
    std::string_view kind = cur.ident();
    Curve result;
    if (kind == "Line") {
        Line l;
        cur.expect(',');
        l.end1 = cur.point();
        cur.expect(',');
        l.end2 = cur.point();
        result = l;
    } else if (kind == "Arc") {
        Arc a;
        cur.expect(',');
        a.center = cur.point();
        cur.expect(',');
        a.radius = cur.real();
        cur.expect(',');
        a.start_angle = cur.real();
        cur.expect(',');
        a.end_angle = cur.real();
        // The serialized form has no plane; default to world XY at the center.
        a.plane = Plane::world_xy(a.center);
        result = a;
    } else if (kind == "CylindricalHelix") {
        CylindricalHelix h;
        cur.expect(',');
        h.base = cur.point();
        cur.expect(',');
        h.radius = cur.real();
        cur.expect(',');
        h.x_vector = cur.point();
        cur.expect(',');
        h.z_vector = cur.point();
        cur.expect(',');
        h.pitch = cur.real();
        cur.expect(',');
        h.start_angle = cur.real();
        cur.expect(',');
        h.end_angle = cur.real();
        result = h;
    } else if (kind == "Ellipse") {
        Ellipse e;
        cur.expect(',');
        e.center = cur.point();
        cur.expect(',');
        e.x_radius = cur.real();
        cur.expect(',');
        e.y_radius = cur.real();
        cur.expect(',');
        e.x_axis = cur.point();
        cur.expect(',');
        e.y_axis = cur.point();
        cur.expect(',');
        e.start_param = cur.real();
        cur.expect(',');
        e.end_param = cur.real();
        result = e;
    } else if (kind == "NurbsSpline") {
        NurbsSpline s;
        cur.expect(',');
        std::int64_t degree = cur.integer();
        if (degree < 1 || degree > 64)
            throw FormatError("spline degree out of range", kind_pos);
        s.degree = static_cast<int>(degree);
        cur.expect(',');
        s.knots = cur.real_list();
        cur.expect(',');
        s.control_points = cur.point_list();
        cur.expect(',');
        s.weights = cur.real_list();
        result = s;
    } else if (kind == "HermiteSpline") {
        HermiteSpline h;
        cur.expect(',');
        h.control_points = cur.point_list();
        cur.expect(',');
        h.periodic = cur.boolean();
        cur.expect(',');
        std::vector<Vec3> tangents = cur.point_list();
        if (!tangents.empty()) h.tangents = std::move(tangents);
        result = h;
    } else {
        throw FormatError("unknown curve kind '"s + std::string(kind) + "'", kind_pos);
    }
    cur.expect(']');
    return result;
}

CurveLoop parse_loop(Cursor& cur) {
    cur.expect('{');
    cur.skip_ws();
    const std::size_t tag_pos = cur.pos;
    if (cur.ident() != "CurveLoop") throw FormatError("expected 'CurveLoop'", tag_pos);
    CurveLoop loop;
    while (cur.try_consume(',')) loop.curves.push_back(parse_curve(cur));
    cur.expect('}');
    return loop;
}

GeometricBase curve_to_base(Curve&& c) {
    return std::visit([](auto&& v) -> GeometricBase { return std::move(v); }, std::move(c));
}

GeometricBase parse_geometry_impl(Cursor& cur) {
    char c = cur.peek();
    if (c == '(') return LocationPoint{cur.point()};
    if (c == '[') return curve_to_base(parse_curve(cur));
    if (c == '{') return parse_loop(cur);
    const std::size_t tag_pos = cur.pos;
    std::string_view id = cur.ident();
    if (id != "Profile")
        throw FormatError("expected a point, curve, loop or 'Profile'", tag_pos);
    Profile profile;
    while (cur.try_consume(',')) profile.loops.push_back(parse_loop(cur));
    return profile;
}

// --- Geometry serializer --------------------------------------------------------

void append_point(std::string& out, const Vec3& p) {
    out += '(';
    out += format_real(p.x());
    out += ", ";
    out += format_real(p.y());
    out += ", ";
    out += format_real(p.z());
    out += ')';
}

void append_real_list(std::string& out, std::span<const double> values) {
    out += '<';
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += "; ";
        out += format_real(values[i]);
    }
    out += '>';
}

void append_point_list(std::string& out, std::span<const Vec3> values) {
    out += '<';
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += "; ";
        append_point(out, values[i]);
    }
    out += '>';
}

void append_curve(std::string& out, const Curve& c) {
    struct V {
        std::string& out;
        void operator()(const Line& l) const {
            out += "[Line, ";
            append_point(out, l.end1);
            out += ", ";
            append_point(out, l.end2);
            out += ']';
        }
        void operator()(const Arc& a) const {
            out += "[Arc, ";
            append_point(out, a.center);
            out += ", ";
            out += format_real(a.radius);
            out += ", ";
            out += format_real(a.start_angle);
            out += ", ";
            out += format_real(a.end_angle);
            out += ']';
        }
        void operator()(const CylindricalHelix& h) const {
            out += "[CylindricalHelix, ";
            append_point(out, h.base);
            out += ", ";
            out += format_real(h.radius);
            out += ", ";
            append_point(out, h.x_vector);
            out += ", ";
            append_point(out, h.z_vector);
            out += ", ";
            out += format_real(h.pitch);
            out += ", ";
            out += format_real(h.start_angle);
            out += ", ";
            out += format_real(h.end_angle);
            out += ']';
        }
        void operator()(const Ellipse& e) const {
            out += "[Ellipse, ";
            append_point(out, e.center);
            out += ", ";
            out += format_real(e.x_radius);
            out += ", ";
            out += format_real(e.y_radius);
            out += ", ";
            append_point(out, e.x_axis);
            out += ", ";
            append_point(out, e.y_axis);
            out += ", ";
            out += format_real(e.start_param);
            out += ", ";
            out += format_real(e.end_param);
            out += ']';
        }
        void operator()(const NurbsSpline& s) const {
            out += "[NurbsSpline, ";
            out += std::to_string(s.degree);
            out += ", ";
            append_real_list(out, s.knots);
            out += ", ";
            append_point_list(out, s.control_points);
            out += ", ";
            append_real_list(out, s.weights);
            out += ']';
        }
        void operator()(const HermiteSpline& h) const {
            out += "[HermiteSpline, ";
            append_point_list(out, h.control_points);
            out += ", ";
            out += h.periodic ? "true" : "false";
            out += ", ";
            if (h.tangents)
                append_point_list(out, *h.tangents);
            else
                out += "<>";
            out += ']';
        }
    };
    std::visit(V{out}, c);
}

void append_loop(std::string& out, const CurveLoop& loop) {
    out += "{CurveLoop";
    for (const Curve& c : loop.curves) {
        out += ", ";
        append_curve(out, c);
    }
    out += '}';
}

// --- CSV framing ------------------------------------------------------------------

/// Splits one RFC-4180 record into raw (unquoted) fields.
std::vector<std::string> split_record(std::string_view record) {
    std::vector<std::string> fields;
    std::string current;
    std::size_t i = 0;
    while (true) {
        current.clear();
        if (i < record.size() && record[i] == '"') {
            ++i;
            bool closed = false;
            while (i < record.size()) {
                if (record[i] == '"') {
                    if (i + 1 < record.size() && record[i + 1] == '"') {
                        current += '"';
                        i += 2;
                    } else {
                        ++i;
                        closed = true;
                        break;
                    }
                } else {
                    current += record[i++];
                }
            }
            if (!closed) throw FormatError("unterminated quoted field", i);
            if (i < record.size() && record[i] != ',')
                throw FormatError("text after closing quote", i);
        } else {
            while (i < record.size() && record[i] != ',') {
                if (record[i] == '"') throw FormatError("bare quote inside field", i);
                current += record[i++];
            }
        }
        fields.push_back(current);
        if (i >= record.size()) break;
        ++i;  // the separating comma
        if (i == record.size()) {
            fields.emplace_back();
            break;
        }
    }
    return fields;
}

std::string csv_quote(std::string_view content) {
    std::string out;
    out.reserve(content.size() + 2);
    out += '"';
    for (char c : content) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

constexpr std::array<std::string_view, 8> kColumns{
    "seq", "command", "element_id", "category", "subtype", "geometry", "params", "host_ref"};

LogEvent parse_event_impl(std::string_view record, std::int64_t seq, std::string* column_out) {
    auto in_column = [&](std::size_t idx) {
        if (column_out) *column_out = kColumns[idx];
    };
    if (column_out) column_out->clear();

    std::vector<std::string> fields = split_record(record);
    if (fields.size() != kColumns.size())
        throw FormatError("expected 8 columns, got " + std::to_string(fields.size()), 0);

    LogEvent e;
    in_column(0);
    e.seq = parse_int(fields[0], 0);
    if (e.seq < 1) throw ValidationError("seq must be a positive integer");

    in_column(1);
    if (auto cmd = parse_command(fields[1]))
        e.command = *cmd;
    else
        throw FormatError("unknown command token '" + fields[1] + "'", 0);

    in_column(2);
    e.element_id = parse_int(fields[2], 0);
    if (e.element_id < 1) throw ValidationError("element_id must be a positive integer");

    in_column(3);
    if (auto cat = parse_category(fields[3]))
        e.category = *cat;
    else
        throw FormatError("unknown category '" + fields[3] + "'", 0);

    in_column(4);
    if (auto sub = parse_subtype(fields[4]))
        e.subtype = *sub;
    else
        throw FormatError("unknown subtype '" + fields[4] + "'", 0);
    if (!subtype_matches_category(e.category, e.subtype))
        throw ValidationError("subtype " + fields[4] + " does not belong to category " +
                              fields[3]);

    in_column(5);
    if (!fields[5].empty()) e.geometry = parse_geometry(fields[5]);

    in_column(6);
    if (!fields[6].empty()) e.params = parse_params(fields[6]);

    in_column(7);
    if (!fields[7].empty()) {
        std::int64_t host = parse_int(fields[7], 0);
        if (host < 1) throw ValidationError("host_ref must be a positive integer");
        e.host_ref = host;
    }

    // Per-command shape.
    switch (e.command) {
        case Command::Added:
            if (!e.geometry) {
                in_column(5);
                throw ValidationError("ADDED event requires geometry");
            }
            if ((e.category == Category::Window || e.category == Category::Door) &&
                !e.host_ref) {
                in_column(7);
                throw ValidationError("hosted ADDED event requires host_ref");
            }
            break;
        case Command::Modified:
            if (!e.geometry && e.params.empty()) {
                if (column_out) column_out->clear();
                throw ValidationError("MODIFIED event requires geometry or params");
            }
            break;
        case Command::Deleted:
            if (e.geometry || !e.params.empty() || e.host_ref) {
                if (column_out) column_out->clear();
                throw ValidationError("DELETED event must have empty geometry, params and host");
            }
            break;
    }
    (void)seq;
    return e;
}

} // namespace

// --- Reals --------------------------------------------------------------------

std::string format_real(double v) {
    if (v == 0.0) return "0";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    std::string s = buf;
    const std::size_t epos = s.find_first_of("eE");
    std::string mantissa = (epos == std::string::npos) ? s : s.substr(0, epos);
    const std::string exponent = (epos == std::string::npos) ? "" : s.substr(epos);
    if (mantissa.find('.') != std::string::npos) {
        std::size_t last = mantissa.find_last_not_of('0');
        if (mantissa[last] == '.') --last;
        mantissa.erase(last + 1);
    }
    return mantissa + exponent;
}

double parse_real(std::string_view text, std::size_t offset) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || text.empty())
        throw FormatError("expected a real number, got '"s + std::string(text) + "'", offset);
    if (!std::isfinite(value))
        throw FormatError("real value must be finite", offset);
    return value;
}

std::string format_real_token(double value) {
    std::string text = format_real(value);
    if (text.find_first_of(".eE") == std::string::npos) text += ".0";
    return text;
}

// --- Geometry -------------------------------------------------------------------

std::string serialize_geometry(const GeometricBase& g) {
    std::string out;
    std::visit(
        [&out](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, LocationPoint>) {
                append_point(out, v.point);
            } else if constexpr (std::is_same_v<T, CurveLoop>) {
                append_loop(out, v);
            } else if constexpr (std::is_same_v<T, Profile>) {
                out += "Profile";
                for (const CurveLoop& loop : v.loops) {
                    out += ", ";
                    append_loop(out, loop);
                }
            } else {
                append_curve(out, Curve{v});
            }
        },
        g);
    return out;
}

GeometricBase parse_geometry(std::string_view text) {
    Cursor cur{text};
    GeometricBase g = parse_geometry_impl(cur);
    cur.skip_ws();
    if (!cur.eof()) throw FormatError("trailing characters after geometry", cur.pos);
    validate_geometry(g);
    return g;
}

// --- Params ----------------------------------------------------------------------

namespace {

std::string quote_text(std::string_view text) {
    std::string out;
    out.reserve(text.size() + 2);
    out += '"';
    for (char c : text) {
        if (c == '"' || c == '\\' || c == ';' || c == '=') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

void append_param_value(std::string& out, std::string_view name, const ParamValue& v) {
    struct V {
        std::string& out;
        std::string_view name;
        void operator()(double d) const {
            std::string text = format_real(d);
            // Unknown names re-parse by literal form, so force a real-looking
            // token; canonical real names (Height=3) stay bare.
            if (canonical_param_kind(name) != ParamKind::Real &&
                text.find_first_of(".eE") == std::string::npos)
                text += ".0";
            out += text;
        }
        void operator()(std::int64_t i) const { out += std::to_string(i); }
        void operator()(const std::string& s) const { out += quote_text(s); }
        void operator()(bool b) const { out += b ? "true" : "false"; }
        void operator()(const ElementRef& r) const {
            out += '#';
            out += std::to_string(r.id);
        }
    };
    std::visit(V{out, name}, v);
}

} // namespace

std::string serialize_params(const ParamList& params) {
    std::string out;
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (i) out += ';';
        out += params[i].first;
        out += '=';
        append_param_value(out, params[i].first, params[i].second);
    }
    return out;
}

ParamList parse_params(std::string_view text) {
    ParamList out;
    std::size_t i = 0;
    while (i < text.size()) {
        // name
        std::size_t name_start = i;
        while (i < text.size() && text[i] != '=' && text[i] != ';') ++i;
        if (i >= text.size() || text[i] != '=')
            throw FormatError("expected '=' after parameter name", i);
        std::string name(text.substr(name_start, i - name_start));
        if (name.empty()) throw FormatError("empty parameter name", name_start);
        ++i;

        // value
        ParamValue value;
        if (i < text.size() && text[i] == '"') {
            ++i;
            std::string s;
            bool closed = false;
            while (i < text.size()) {
                char c = text[i];
                if (c == '\\') {
                    if (i + 1 >= text.size())
                        throw FormatError("dangling escape in text value", i);
                    s += text[i + 1];
                    i += 2;
                } else if (c == '"') {
                    ++i;
                    closed = true;
                    break;
                } else {
                    s += c;
                    ++i;
                }
            }
            if (!closed) throw FormatError("unterminated text value", i);
            value = std::move(s);
        } else {
            std::size_t value_start = i;
            while (i < text.size() && text[i] != ';') ++i;
            std::string_view token = text.substr(value_start, i - value_start);
            if (token.empty()) throw FormatError("empty parameter value", value_start);

            std::optional<ParamKind> kind = canonical_param_kind(name);
            if (kind == ParamKind::Text) {
                throw FormatError("text parameter '" + name + "' must be quoted", value_start);
            } else if (kind == ParamKind::Real) {
                value = parse_real(token, value_start);
            } else if (token == "true") {
                value = true;
            } else if (token == "false") {
                value = false;
            } else if (token.front() == '#') {
                value = ElementRef{parse_int(token.substr(1), value_start + 1)};
            } else if (token.find_first_of(".eE") == std::string_view::npos &&
                       (is_decimal_digits(token) ||
                        (token.front() == '-' && is_decimal_digits(token.substr(1))))) {
                value = parse_int(token, value_start);
            } else {
                value = parse_real(token, value_start);
            }
        }

        if (find_param(out, name))
            throw ValidationError("duplicate parameter name '" + name + "'");
        out.emplace_back(std::move(name), std::move(value));

        if (i < text.size()) {
            if (text[i] != ';') throw FormatError("expected ';' between parameters", i);
            ++i;
            if (i == text.size()) throw FormatError("trailing ';' in params", i);
        }
    }
    return out;
}

// --- Events ------------------------------------------------------------------------

bool exact_equals(const LogEvent& a, const LogEvent& b) {
    if (a.seq != b.seq || a.command != b.command || a.element_id != b.element_id ||
        a.category != b.category || a.subtype != b.subtype || a.host_ref != b.host_ref ||
        a.params != b.params)
        return false;
    if (a.geometry.has_value() != b.geometry.has_value()) return false;
    if (a.geometry && !exact_equals(*a.geometry, *b.geometry)) return false;
    return true;
}

std::string to_string(const Diagnostic& d) {
    std::string out = "row " + std::to_string(d.row);
    if (!d.column.empty()) out += ", " + d.column;
    out += ": " + d.message;
    return out;
}

std::string format_event(const LogEvent& e) {
    std::string out;
    out += std::to_string(e.seq);
    out += ',';
    out += to_string(e.command);
    out += ',';
    out += std::to_string(e.element_id);
    out += ',';
    out += to_string(e.category);
    out += ',';
    out += to_string(e.subtype);
    out += ',';
    if (e.geometry) out += csv_quote(serialize_geometry(*e.geometry));
    out += ',';
    if (!e.params.empty()) out += csv_quote(serialize_params(e.params));
    out += ',';
    if (e.host_ref) out += std::to_string(*e.host_ref);
    return out;
}

LogEvent parse_event(std::string_view record, std::int64_t seq) {
    return parse_event_impl(record, seq, nullptr);
}

// --- Whole logs ----------------------------------------------------------------------

ReadResult read_log(std::string_view text, ReadMode mode) {
    ReadResult result;

    // Split into records; quoted fields may contain newlines.
    std::vector<std::string_view> records;
    std::size_t start = 0;
    bool in_quotes = false;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || (text[i] == '\n' && !in_quotes)) {
            std::string_view rec = text.substr(start, i - start);
            if (!rec.empty() && rec.back() == '\r') rec.remove_suffix(1);
            if (!rec.empty()) records.push_back(rec);
            start = i + 1;
        } else if (i < text.size() && text[i] == '"') {
            in_quotes = !in_quotes;
        }
    }

    std::size_t first = 0;
    if (!records.empty()) {
        // Header detection: a row whose first field is the literal "seq".
        if (records[0].substr(0, 4) == "seq," || records[0] == "seq") first = 1;
    }

    std::int64_t row = 0;
    for (std::size_t r = first; r < records.size(); ++r) {
        ++row;
        std::string column;
        try {
            LogEvent e = parse_event_impl(records[r], row, &column);
            e.seq = row;  // seq comes from data-row order
            result.events.push_back(std::move(e));
        } catch (const Error& err) {
            result.diagnostics.push_back({row, column, err.what()});
            if (mode == ReadMode::Strict) {
                result.aborted = true;
                break;
            }
        }
    }
    return result;
}

ReadResult read_log(std::istream& in, ReadMode mode) {
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoError("failed to read log stream");
    return read_log(std::string_view{buffer.str()}, mode);
}

void write_log(std::ostream& out, std::span<const LogEvent> events) {
    out << kLogHeader << '\n';
    for (const LogEvent& e : events) out << format_event(e) << '\n';
    if (!out) throw IoError("failed to write log stream");
}

std::string write_log(std::span<const LogEvent> events) {
    std::ostringstream out;
    write_log(out, events);
    return out.str();
}

} // namespace bimlog
