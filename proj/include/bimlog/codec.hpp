#pragma once

#include "bimlog/geometry.hpp"
#include "bimlog/params.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bimlog {

/// One recorded editing action. seq is the 1-based position in the log.
///
/// Per-command shape:
///   ADDED     geometry present; params optional; Window/Door carry host_ref
///   MODIFIED  at least one of geometry / params present
///   DELETED   geometry absent, params empty, host_ref absent
struct LogEvent {
    std::int64_t seq = 0;
    Command command = Command::Added;
    ElementId element_id = 0;
    Category category = Category::Wall;
    Subtype subtype = Subtype::RectWall;
    std::optional<GeometricBase> geometry;
    ParamList params;
    std::optional<ElementId> host_ref;
};

bool exact_equals(const LogEvent& a, const LogEvent& b);

/// A recoverable problem tied to a log row (or replayed event seq).
struct Diagnostic {
    std::int64_t row = 0;
    std::string column;  // empty when the problem is not column-specific
    std::string message;
};

std::string to_string(const Diagnostic& d);

// --- Real numbers ------------------------------------------------------------
//
// Reals are written with at most nine significant digits, in the shortest
// form denoting that nine-digit value (trailing zeros trimmed, '.' decimal
// separator, exponent only when %.9g would use one). -0 normalizes to 0.

std::string format_real(double v);

/// Strict parse of a complete real token; FormatError on trailing junk or a
/// non-finite value. `offset` is added to reported error positions.
double parse_real(std::string_view text, std::size_t offset = 0);

/// format_real plus a ".0" suffix when the result would otherwise read as an
/// integer literal. JSON writers use it so reals stay reals on reload.
std::string format_real_token(double value);

// --- Geometry text -----------------------------------------------------------
//
// Canonical serialized forms (one space after every ',' and ';'):
//   point     (x, y, z)
//   Line      [Line, (x, y, z), (x, y, z)]
//   Arc       [Arc, center, radius, startAngle, endAngle]
//   Helix     [CylindricalHelix, base, radius, xVector, zVector, pitch, start, end]
//   Ellipse   [Ellipse, center, xRadius, yRadius, xAxis, yAxis, start, end]
//   Nurbs     [NurbsSpline, degree, <knots>, <points>, <weights>]
//   Hermite   [HermiteSpline, <points>, periodic, <tangents-or-empty>]
//   loop      {CurveLoop, curve, curve, ...}
//   profile   Profile, loop, loop, ...
// Lists use '<v; v; ...>'. The Arc form has no plane field: parsing defaults
// the carrier plane to world XY with its origin at the center (the in-memory
// Arc always carries a full plane, so other orientations do not round-trip
// through text).

std::string serialize_geometry(const GeometricBase& g);

/// Inverse of serialize_geometry, tolerant of arbitrary whitespace after
/// delimiters. FormatError (with byte offset) on grammar violations;
/// ValidationError when the parsed geometry fails structural validation.
GeometricBase parse_geometry(std::string_view text);

// --- Parameters --------------------------------------------------------------
//
// params serialize as name=value;name=value. Value forms:
//   real      shortest 9-digit form (canonical dimension names print bare,
//             so Height=3 is a real; unknown real params print with a forced
//             '.' or exponent so they re-parse as reals)
//   integer   decimal digits
//   flag      true | false
//   reference #id
//   text      "..." with backslash escapes for '"', '\', ';' and '='
// Names of canonical parameters decide the parsed kind; unknown names fall
// back to the literal form above.

std::string serialize_params(const ParamList& params);
ParamList parse_params(std::string_view text);

// --- CSV events ----------------------------------------------------------------
//
// Column order: seq,command,element_id,category,subtype,geometry,params,host_ref
// RFC-4180 framing; geometry and params are double-quoted whenever non-empty.

inline constexpr std::string_view kLogHeader =
    "seq,command,element_id,category,subtype,geometry,params,host_ref";

/// One CSV record (no trailing newline).
std::string format_event(const LogEvent& e);

/// Inverse of format_event. `seq` is the expected 1-based row position, used
/// for error reporting; the returned event carries the row's own seq column.
/// FormatError / ValidationError on malformed rows.
LogEvent parse_event(std::string_view record, std::int64_t seq);

enum class ReadMode { Lenient, Strict };

struct ReadResult {
    std::vector<LogEvent> events;
    std::vector<Diagnostic> diagnostics;
    bool aborted = false;  // strict mode stopped at the first malformed row
};

/// Reads a whole log. An optional header row is detected and skipped. seq is
/// assigned from data-row order (1-based) regardless of the seq column.
/// Lenient mode skips malformed rows and records one diagnostic per row;
/// strict mode stops at the first problem.
ReadResult read_log(std::istream& in, ReadMode mode = ReadMode::Lenient);
ReadResult read_log(std::string_view text, ReadMode mode = ReadMode::Lenient);

/// Writes the header row and one record per event, LF line endings.
void write_log(std::ostream& out, std::span<const LogEvent> events);
std::string write_log(std::span<const LogEvent> events);

} // namespace bimlog
