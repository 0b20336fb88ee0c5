#include "bimlog/cli.hpp"

#include "bimlog/convert.hpp"
#include "bimlog/diff.hpp"
#include "bimlog/errors.hpp"
#include "bimlog/replay.hpp"
#include "bimlog/scenario.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

namespace bimlog::cli {
namespace {

constexpr int kOk = 0;
constexpr int kDiagnostics = 1;
constexpr int kInputError = 2;
constexpr int kInternalError = 3;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoError("cannot read '" + path + "'");
    return buffer.str();
}

void spill(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << content;
    out.flush();
    if (!out) throw IoError("cannot write '" + path + "'");
}

void print_diagnostics(std::ostream& err, const std::vector<Diagnostic>& diagnostics) {
    for (const Diagnostic& d : diagnostics) err << to_string(d) << '\n';
}

struct ReplayArgs {
    std::string log_path;
    std::string model_out;
    bool strict = false;
    bool unit_roundtrip = false;
};

int run_replay(const ReplayArgs& args, std::ostream& out, std::ostream& err) {
    const ReadMode read_mode = args.strict ? ReadMode::Strict : ReadMode::Lenient;
    const ReplayMode replay_mode = args.strict ? ReplayMode::Strict : ReplayMode::Lenient;

    const ReadResult parsed = read_log(slurp(args.log_path), read_mode);
    print_diagnostics(err, parsed.diagnostics);
    if (parsed.aborted) {
        err << "aborted: the log could not be parsed in strict mode\n";
        return kInputError;
    }

    ModelState model;
    const ReplayReport report = replay_log(model, parsed.events, replay_mode);
    print_diagnostics(err, report.warnings);
    if (report.aborted_at) {
        err << "aborted: event at row " << *report.aborted_at
            << " could not be applied in strict mode\n";
        return kInputError;
    }

    bool noisy = !parsed.diagnostics.empty() || !report.warnings.empty();

    if (args.unit_roundtrip) {
        ModelState converted;
        const ReplayReport second =
            replay_log(converted, unit_roundtrip_events(parsed.events), replay_mode);
        print_diagnostics(err, second.warnings);
        if (second.aborted_at) {
            err << "aborted: converted event at row " << *second.aborted_at
                << " could not be applied in strict mode\n";
            return kInputError;
        }
        noisy = noisy || !second.warnings.empty();
        out << diff_report_json(diff_models(model, converted));
    } else {
        out << "events: " << parsed.events.size() << '\n';
        out << "applied: " << report.events_applied << " (" << report.added << " added, "
            << report.modified << " modified, " << report.deleted << " deleted)\n";
        out << "warnings: " << report.warnings.size() << '\n';
        for (const auto& [category, count] : report.final_counts)
            out << to_string(category) << ": " << count << '\n';
    }
    if (!args.model_out.empty()) spill(args.model_out, model.dump_json());
    return noisy ? kDiagnostics : kOk;
}

struct DiffArgs {
    std::string original_path;
    std::string reproduced_path;
    bool json = false;
};

int run_diff(const DiffArgs& args, std::ostream& out, std::ostream&) {
    const ModelState original = ModelState::from_json(slurp(args.original_path));
    const ModelState reproduced = ModelState::from_json(slurp(args.reproduced_path));
    const DiffReport report = diff_models(original, reproduced);
    out << (args.json ? diff_report_json(report) : diff_report_table(report));
    return diff_is_zero(report) ? kOk : kDiagnostics;
}

struct SynthArgs {
    std::uint64_t seed = 1;
    std::string counts = "10,3,4,3,3";
    double churn = 0.3;
    std::string scenario_path;
    std::string log_out;
    std::string model_out;
    std::string scenario_out;
};

NetCounts parse_counts(const std::string& text) {
    NetCounts counts;
    std::int64_t* slots[5] = {&counts.walls, &counts.floors, &counts.windows, &counts.doors,
                              &counts.columns};
    std::size_t pos = 0;
    for (int i = 0; i < 5; ++i) {
        const std::size_t next = text.find(',', pos);
        const bool last = i == 4;
        if (last != (next == std::string::npos))
            throw ValidationError("counts must be five comma-separated integers");
        const std::string field = text.substr(pos, last ? std::string::npos : next - pos);
        try {
            std::size_t used = 0;
            *slots[i] = std::stoll(field, &used);
            if (used != field.size()) throw std::invalid_argument(field);
        } catch (const std::exception&) {
            throw ValidationError("counts must be five comma-separated integers");
        }
        pos = next + 1;
    }
    return counts;
}

int run_synth(const SynthArgs& args, std::ostream& out, std::ostream&) {
    Scenario scenario;
    if (!args.scenario_path.empty())
        scenario = scenario_from_json(slurp(args.scenario_path));
    else
        scenario = random_scenario(args.seed, parse_counts(args.counts), args.churn);

    const SessionResult session = run_scenario(scenario);
    const std::string log_text = write_log(session.events);
    if (args.log_out.empty())
        out << log_text;
    else
        spill(args.log_out, log_text);
    if (!args.model_out.empty()) spill(args.model_out, session.ground_truth.dump_json());
    if (!args.scenario_out.empty()) spill(args.scenario_out, scenario_to_json(scenario));
    return kOk;
}

struct ValidateArgs {
    std::string log_path;
    bool strict = false;
};

int run_validate(const ValidateArgs& args, std::ostream& out, std::ostream& err) {
    const ReadMode mode = args.strict ? ReadMode::Strict : ReadMode::Lenient;
    const ReadResult parsed = read_log(slurp(args.log_path), mode);
    print_diagnostics(err, parsed.diagnostics);
    out << "events: " << parsed.events.size() << '\n';
    out << "diagnostics: " << parsed.diagnostics.size() << '\n';
    if (parsed.aborted) {
        err << "aborted: the log could not be parsed in strict mode\n";
        return kInputError;
    }
    return parsed.diagnostics.empty() ? kOk : kDiagnostics;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Event log tooling for parametric building models", "bimlog"};
    app.require_subcommand(1);

    ReplayArgs replay_args;
    CLI::App* replay = app.add_subcommand("replay", "Rebuild a model from an event log");
    replay->add_option("log", replay_args.log_path, "event log in CSV form")->required();
    replay->add_option("-o,--model-out", replay_args.model_out, "write the model dump here");
    replay->add_flag("--strict", replay_args.strict, "stop at the first problem");
    replay->add_flag("--unit-roundtrip", replay_args.unit_roundtrip,
                     "replay the log next to its feet-and-back conversion and print the "
                     "difference report");

    DiffArgs diff_args;
    CLI::App* diff = app.add_subcommand("diff", "Compare two model dumps");
    diff->add_option("original", diff_args.original_path, "model dump taken as reference")
        ->required();
    diff->add_option("reproduced", diff_args.reproduced_path, "model dump under comparison")
        ->required();
    diff->add_flag("--json", diff_args.json, "print the report as JSON instead of a table");

    SynthArgs synth_args;
    CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic editing session");
    synth->add_option("--seed", synth_args.seed, "generator seed");
    synth->add_option("--counts", synth_args.counts,
                      "net walls,floors,windows,doors,columns");
    synth->add_option("--churn", synth_args.churn, "fraction of events that cancel out");
    CLI::Option* from_file =
        synth->add_option("--scenario", synth_args.scenario_path, "run this scenario file");
    synth->add_option("-o,--log-out", synth_args.log_out,
                      "write the event log here instead of stdout");
    synth->add_option("--model-out", synth_args.model_out, "write the final model dump here");
    synth->add_option("--emit-scenario", synth_args.scenario_out,
                      "write the scenario as JSON here");
    from_file->excludes("--seed", "--counts", "--churn");

    ValidateArgs validate_args;
    CLI::App* validate = app.add_subcommand("validate", "Parse a log and report diagnostics");
    validate->add_option("log", validate_args.log_path, "event log in CSV form")->required();
    validate->add_flag("--strict", validate_args.strict, "stop at the first problem");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (replay->parsed()) return run_replay(replay_args, out, err);
        if (diff->parsed()) return run_diff(diff_args, out, err);
        if (synth->parsed()) return run_synth(synth_args, out, err);
        if (validate->parsed()) return run_validate(validate_args, out, err);
        err << "no command given\n";
        return kInputError;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternalError;
    }
}

} // namespace bimlog::cli
