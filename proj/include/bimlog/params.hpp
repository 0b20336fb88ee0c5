#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace bimlog {

using ElementId = std::int64_t;

enum class Command { Added, Modified, Deleted };

enum class Category { Wall, Floor, Window, Door, Column };

enum class Subtype {
    RectWall,
    ProfileWall,
    FlatFloor,
    SlopedFloor,
    HostedInstance,
    FreeColumn,
    SlantedColumn,
};

inline constexpr std::size_t kCategoryCount = 5;

std::string_view to_string(Command c);
std::string_view to_string(Category c);
std::string_view to_string(Subtype s);

/// Exact-token parses; empty optional when the token is unknown.
/// Command tokens are the uppercase ADDED / MODIFIED / DELETED.
std::optional<Command> parse_command(std::string_view token);
std::optional<Category> parse_category(std::string_view token);
std::optional<Subtype> parse_subtype(std::string_view token);

/// True when the subtype belongs to the category (HostedInstance belongs to
/// both Window and Door).
bool subtype_matches_category(Category c, Subtype s);

/// A parameter value referencing another element by id.
struct ElementRef {
    ElementId id = 0;
    friend bool operator==(const ElementRef&, const ElementRef&) = default;
};

/// real | integer | text | flag | element reference
using ParamValue = std::variant<double, std::int64_t, std::string, bool, ElementRef>;

/// Ordered name/value association; names unique within a list.
using ParamList = std::vector<std::pair<std::string, ParamValue>>;

const ParamValue* find_param(const ParamList& params, std::string_view name);

enum class ParamKind { Real, Integer, Text, Flag, Reference };

ParamKind kind_of(const ParamValue& v);

/// What a parameter measures; drives unit conversion.
enum class ParamDimension { None, Length, Angle };

/// One canonical parameter of a category.
struct ParamSpec {
    std::string_view name;
    ParamKind kind;
    ParamDimension dimension;
    double default_real = 0.0;  // only meaningful for Real kind; Text defaults to ""
};

/// The canonical parameter set of a category, in canonical order. Every
/// element of the category carries exactly these names (plus any extras),
/// with "Comments" always last.
std::span<const ParamSpec> canonical_params(Category c);

/// Kind of a canonical parameter name, uniform across categories
/// (e.g. Height is Real everywhere, Comments is Text). Empty for unknown names.
std::optional<ParamKind> canonical_param_kind(std::string_view name);

/// True for canonical parameters that measure a length (unit conversion
/// applies to them; angles and text do not convert).
bool is_length_param(std::string_view name);

/// Default value of one canonical parameter.
ParamValue default_param_value(const ParamSpec& spec);

} // namespace bimlog
