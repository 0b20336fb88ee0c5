#include "bimlog/params.hpp"

#include <array>

namespace bimlog {
namespace {

// Canonical parameter tables. Dimension params are meters / radians.
constexpr std::array<ParamSpec, 4> kWallParams{{
    {"Height", ParamKind::Real, ParamDimension::Length, 3.0},
    {"Width", ParamKind::Real, ParamDimension::Length, 0.3},
    {"BaseOffset", ParamKind::Real, ParamDimension::Length, 0.0},
    {"Comments", ParamKind::Text, ParamDimension::None, 0.0},
}};

constexpr std::array<ParamSpec, 3> kFloorParams{{
    {"Thickness", ParamKind::Real, ParamDimension::Length, 0.2},
    {"SlopeAngle", ParamKind::Real, ParamDimension::Angle, 0.0},
    {"Comments", ParamKind::Text, ParamDimension::None, 0.0},
}};

constexpr std::array<ParamSpec, 4> kWindowParams{{
    {"Width", ParamKind::Real, ParamDimension::Length, 0.9},
    {"Height", ParamKind::Real, ParamDimension::Length, 1.2},
    {"SillHeight", ParamKind::Real, ParamDimension::Length, 0.8},
    {"Comments", ParamKind::Text, ParamDimension::None, 0.0},
}};

constexpr std::array<ParamSpec, 4> kDoorParams{{
    {"Width", ParamKind::Real, ParamDimension::Length, 0.9},
    {"Height", ParamKind::Real, ParamDimension::Length, 2.1},
    {"SillHeight", ParamKind::Real, ParamDimension::Length, 0.0},
    {"Comments", ParamKind::Text, ParamDimension::None, 0.0},
}};

constexpr std::array<ParamSpec, 4> kColumnParams{{
    {"b", ParamKind::Real, ParamDimension::Length, 0.3},
    {"h", ParamKind::Real, ParamDimension::Length, 0.3},
    {"Height", ParamKind::Real, ParamDimension::Length, 3.0},
    {"Comments", ParamKind::Text, ParamDimension::None, 0.0},
}};

} // namespace

std::string_view to_string(Command c) {
    switch (c) {
        case Command::Added: return "ADDED";
        case Command::Modified: return "MODIFIED";
        case Command::Deleted: return "DELETED";
    }
    return "";
}

std::string_view to_string(Category c) {
    switch (c) {
        case Category::Wall: return "Wall";
        case Category::Floor: return "Floor";
        case Category::Window: return "Window";
        case Category::Door: return "Door";
        case Category::Column: return "Column";
    }
    return "";
}

std::string_view to_string(Subtype s) {
    switch (s) {
        case Subtype::RectWall: return "RectWall";
        case Subtype::ProfileWall: return "ProfileWall";
        case Subtype::FlatFloor: return "FlatFloor";
        case Subtype::SlopedFloor: return "SlopedFloor";
        case Subtype::HostedInstance: return "HostedInstance";
        case Subtype::FreeColumn: return "FreeColumn";
        case Subtype::SlantedColumn: return "SlantedColumn";
    }
    return "";
}

std::optional<Command> parse_command(std::string_view token) {
    if (token == "ADDED") return Command::Added;
    if (token == "MODIFIED") return Command::Modified;
    if (token == "DELETED") return Command::Deleted;
    return std::nullopt;
}

std::optional<Category> parse_category(std::string_view token) {
    if (token == "Wall") return Category::Wall;
    if (token == "Floor") return Category::Floor;
    if (token == "Window") return Category::Window;
    if (token == "Door") return Category::Door;
    if (token == "Column") return Category::Column;
    return std::nullopt;
}

std::optional<Subtype> parse_subtype(std::string_view token) {
    if (token == "RectWall") return Subtype::RectWall;
    if (token == "ProfileWall") return Subtype::ProfileWall;
    if (token == "FlatFloor") return Subtype::FlatFloor;
    if (token == "SlopedFloor") return Subtype::SlopedFloor;
    if (token == "HostedInstance") return Subtype::HostedInstance;
    if (token == "FreeColumn") return Subtype::FreeColumn;
    if (token == "SlantedColumn") return Subtype::SlantedColumn;
    return std::nullopt;
}

bool subtype_matches_category(Category c, Subtype s) {
    switch (s) {
        case Subtype::RectWall:
        case Subtype::ProfileWall: return c == Category::Wall;
        case Subtype::FlatFloor:
        case Subtype::SlopedFloor: return c == Category::Floor;
        case Subtype::HostedInstance: return c == Category::Window || c == Category::Door;
        case Subtype::FreeColumn:
        case Subtype::SlantedColumn: return c == Category::Column;
    }
    return false;
}

const ParamValue* find_param(const ParamList& params, std::string_view name) {
    for (const auto& [n, v] : params)
        if (n == name) return &v;
    return nullptr;
}

ParamKind kind_of(const ParamValue& v) {
    switch (v.index()) {
        case 0: return ParamKind::Real;
        case 1: return ParamKind::Integer;
        case 2: return ParamKind::Text;
        case 3: return ParamKind::Flag;
        default: return ParamKind::Reference;
    }
}

std::span<const ParamSpec> canonical_params(Category c) {
    switch (c) {
        case Category::Wall: return kWallParams;
        case Category::Floor: return kFloorParams;
        case Category::Window: return kWindowParams;
        case Category::Door: return kDoorParams;
        case Category::Column: return kColumnParams;
    }
    return {};
}

std::optional<ParamKind> canonical_param_kind(std::string_view name) {
    if (name == "Comments") return ParamKind::Text;
    if (name == "Height" || name == "Width" || name == "BaseOffset" || name == "Thickness" ||
        name == "SlopeAngle" || name == "SillHeight" || name == "b" || name == "h")
        return ParamKind::Real;
    return std::nullopt;
}

bool is_length_param(std::string_view name) {
    return name == "Height" || name == "Width" || name == "BaseOffset" || name == "Thickness" ||
           name == "SillHeight" || name == "b" || name == "h";
}

ParamValue default_param_value(const ParamSpec& spec) {
    switch (spec.kind) {
        case ParamKind::Real: return spec.default_real;
        case ParamKind::Integer: return std::int64_t{0};
        case ParamKind::Text: return std::string{};
        case ParamKind::Flag: return false;
        case ParamKind::Reference: return ElementRef{};
    }
    return std::string{};
}

} // namespace bimlog
