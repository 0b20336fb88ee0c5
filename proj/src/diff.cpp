#include "bimlog/diff.hpp"

#include "bimlog/codec.hpp"
#include "bimlog/errors.hpp"

#include <array>
#include <cstdio>
#include <map>
#include <string>

namespace bimlog {
namespace {

constexpr std::array<Category, 5> kCategories = {Category::Wall, Category::Floor,
                                                 Category::Window, Category::Door,
                                                 Category::Column};

struct PairMetrics {
    double distance = 0.0;
    double volume_diff_pct = 0.0;
    bool volume_ok = false;
};

PairMetrics measure_pair(const ModelState& original, const ModelState& reproduced,
                         ElementId orig_id, ElementId repr_id) {
    PairMetrics m;
    const Vec3 po = representative_point(original.element(orig_id));
    const Vec3 pr = representative_point(reproduced.element(repr_id));
    m.distance = (po - pr).norm();
    try {
        const double vo = original.element_volume(orig_id);
        const double vr = reproduced.element_volume(repr_id);
        if (vo > 0.0) {
            m.volume_diff_pct = 100.0 * std::abs(vr - vo) / vo;
            m.volume_ok = true;
        }
    } catch (const Error&) {
        // Volume is undefined for this pair; reported via volume_skipped.
    }
    return m;
}

void append_stats_fields(std::string& out, const CategoryStats& s, const std::string& indent) {
    out += indent + "\"matched\": " + std::to_string(s.matched) + ",\n";
    out += indent + "\"unmatchedOriginal\": " + std::to_string(s.unmatched_original) + ",\n";
    out += indent + "\"unmatchedReproduced\": " + std::to_string(s.unmatched_reproduced) +
           ",\n";
    out += indent + "\"avgDistance\": " + format_real_token(s.avg_distance) + ",\n";
    out += indent + "\"avgVolumeDiffPct\": " + format_real_token(s.avg_volume_diff_pct) + ",\n";
    out += indent + "\"volumeSkipped\": " + std::to_string(s.volume_skipped) + ",\n";
    out += indent + "\"empty\": ";
    out += s.empty ? "true" : "false";
    out += '\n';
}

} // namespace

namespace {

bool is_id_text(const std::string& text) {
    if (text.empty() || text.size() > 18) return false;
    for (char c : text)
        if (c < '0' || c > '9') return false;
    return true;
}

std::int64_t match_key(const ElementRecord& rec) {
    if (const ParamValue* v = find_param(rec.params, "Comments"))
        if (const std::string* text = std::get_if<std::string>(v); text && is_id_text(*text))
            return std::stoll(*text);
    return rec.id;
}

std::map<std::int64_t, ElementId> key_index(const ModelState& model) {
    std::map<std::int64_t, ElementId> index;
    for (const auto& [id, rec] : model.elements()) {
        auto [it, inserted] = index.emplace(match_key(rec), id);
        if (!inserted)
            throw ValidationError("elements " + std::to_string(it->second) + " and " +
                                  std::to_string(id) + " share the match key " +
                                  std::to_string(it->first));
    }
    return index;
}

} // namespace

MatchResult match_by_comment(const ModelState& original, const ModelState& reproduced) {
    MatchResult result;
    const std::map<std::int64_t, ElementId> orig = key_index(original);
    const std::map<std::int64_t, ElementId> repr = key_index(reproduced);
    for (const auto& [key, orig_id] : orig) {
        auto found = repr.find(key);
        if (found != repr.end())
            result.matched.emplace_back(orig_id, found->second);
        else
            result.unmatched_original.push_back(orig_id);
    }
    for (const auto& [key, repr_id] : repr)
        if (!orig.count(key)) result.unmatched_reproduced.push_back(repr_id);
    return result;
}

DiffReport diff_models(const ModelState& original, const ModelState& reproduced) {
    const MatchResult match = match_by_comment(original, reproduced);

    struct Accum {
        std::int64_t matched = 0;
        std::int64_t unmatched_original = 0;
        std::int64_t unmatched_reproduced = 0;
        double distance_sum = 0.0;
        double volume_pct_sum = 0.0;
        std::int64_t volume_counted = 0;
        std::int64_t volume_skipped = 0;
    };
    std::map<Category, Accum> per_category;
    for (Category c : kCategories) per_category[c];

    for (const auto& [orig_id, repr_id] : match.matched) {
        Accum& a = per_category[original.element(orig_id).category];
        const PairMetrics m = measure_pair(original, reproduced, orig_id, repr_id);
        a.matched++;
        a.distance_sum += m.distance;
        if (m.volume_ok) {
            a.volume_pct_sum += m.volume_diff_pct;
            a.volume_counted++;
        } else {
            a.volume_skipped++;
        }
    }
    for (ElementId id : match.unmatched_original)
        per_category[original.element(id).category].unmatched_original++;
    for (ElementId id : match.unmatched_reproduced)
        per_category[reproduced.element(id).category].unmatched_reproduced++;

    DiffReport report;
    Accum total;
    for (Category c : kCategories) {
        const Accum& a = per_category[c];
        CategoryStats s;
        s.category = c;
        s.matched = a.matched;
        s.unmatched_original = a.unmatched_original;
        s.unmatched_reproduced = a.unmatched_reproduced;
        s.avg_distance = a.matched > 0 ? a.distance_sum / a.matched : 0.0;
        s.avg_volume_diff_pct = a.volume_counted > 0 ? a.volume_pct_sum / a.volume_counted : 0.0;
        s.volume_skipped = a.volume_skipped;
        s.empty = a.matched == 0 && a.unmatched_original == 0 && a.unmatched_reproduced == 0;
        report.categories.push_back(s);

        total.matched += a.matched;
        total.unmatched_original += a.unmatched_original;
        total.unmatched_reproduced += a.unmatched_reproduced;
        total.distance_sum += a.distance_sum;
        total.volume_pct_sum += a.volume_pct_sum;
        total.volume_counted += a.volume_counted;
        total.volume_skipped += a.volume_skipped;
    }
    report.total.matched = total.matched;
    report.total.unmatched_original = total.unmatched_original;
    report.total.unmatched_reproduced = total.unmatched_reproduced;
    report.total.avg_distance = total.matched > 0 ? total.distance_sum / total.matched : 0.0;
    report.total.avg_volume_diff_pct =
        total.volume_counted > 0 ? total.volume_pct_sum / total.volume_counted : 0.0;
    report.total.volume_skipped = total.volume_skipped;
    report.total.empty = total.matched == 0 && total.unmatched_original == 0 &&
                         total.unmatched_reproduced == 0;
    return report;
}

bool diff_is_zero(const DiffReport& report) {
    auto clean = [](const CategoryStats& s) {
        return s.unmatched_original == 0 && s.unmatched_reproduced == 0 &&
               s.avg_distance == 0.0 && s.avg_volume_diff_pct == 0.0 && s.volume_skipped == 0;
    };
    for (const CategoryStats& s : report.categories)
        if (!clean(s)) return false;
    return clean(report.total);
}

std::string diff_report_json(const DiffReport& report) {
    std::string out;
    out += "{\n";
    out += "  \"schema\": \"";
    out += kDiffSchema;
    out += "\",\n";
    out += "  \"matchMethod\": \"" + report.match_method + "\",\n";
    out += "  \"categories\": [\n";
    for (std::size_t i = 0; i < report.categories.size(); ++i) {
        const CategoryStats& s = report.categories[i];
        out += "    {\n";
        out += "      \"category\": \"" + std::string(to_string(s.category)) + "\",\n";
        append_stats_fields(out, s, "      ");
        out += i + 1 < report.categories.size() ? "    },\n" : "    }\n";
    }
    out += "  ],\n";
    out += "  \"total\": {\n";
    append_stats_fields(out, report.total, "    ");
    out += "  }\n";
    out += "}\n";
    return out;
}

std::string diff_report_table(const DiffReport& report) {
    std::string out;
    char line[160];
    std::snprintf(line, sizeof line, "%-8s %8s %10s %10s %14s %14s %8s\n", "category", "matched",
                  "unm.orig", "unm.repr", "avgDist", "avgVol%", "volSkip");
    out += line;
    auto row = [&](const char* name, const CategoryStats& s) {
        std::snprintf(line, sizeof line, "%-8s %8lld %10lld %10lld %14s %14s %8lld\n", name,
                      static_cast<long long>(s.matched),
                      static_cast<long long>(s.unmatched_original),
                      static_cast<long long>(s.unmatched_reproduced),
                      format_real(s.avg_distance).c_str(),
                      format_real(s.avg_volume_diff_pct).c_str(),
                      static_cast<long long>(s.volume_skipped));
        out += line;
    };
    for (const CategoryStats& s : report.categories)
        row(std::string(to_string(s.category)).c_str(), s);
    row("total", report.total);
    return out;
}

} // namespace bimlog
