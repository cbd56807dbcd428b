#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qflab {

// Version stamped into every report and golden file.
inline constexpr const char* kArtifactVersion = "0.1.0";

// One named check inside a scenario: the expected value is frozen in the
// scenario definition, the computed value comes from the library operation
// named in `operation`. A failed assertion carries its witness verbatim.
struct Assertion {
    std::string name;
    std::string operation;
    std::string expected;
    std::string computed;
    bool pass = false;
    std::string witness; // empty unless the assertion failed
};

// Outcome of one scenario run.
struct Report {
    std::string scenario;
    std::string version = kArtifactVersion;
    std::vector<Assertion> assertions;
    std::int64_t elapsed_ms = 0;

    bool pass() const;
};

// An integer parameter accepted by a scenario, with its validated range and
// the value used when the key is absent.
struct ParamSpec {
    std::string key;
    long min_value = 0;
    long max_value = 0;
    long fallback = 0;
    std::string what;
};

// Parameter assignments from the command line or a config file.
using ScenarioParams = std::map<std::string, long>;

// A named, replayable bundle of carriers and assertions. Builders are
// deterministic: the same name and parameters always produce the same
// assertion list, byte for byte.
struct Scenario {
    std::string name;
    std::string description;
    std::vector<ParamSpec> params; // accepted keys; everything else is rejected
    std::function<std::vector<Assertion>(const ScenarioParams&)> builder;
};

// The shipped catalog, sorted by name.
const std::vector<Scenario>& scenario_catalog();

// Catalog lookup; null when the name is not shipped.
const Scenario* find_scenario(const std::string& name);

// The union of every scenario's parameter keys, for config validation.
std::vector<std::string> known_param_keys();

// Runs one scenario. Throws Error for an unknown name, an unknown parameter
// key, or an out-of-range value; GuardExceeded propagates from the library.
Report run_scenario(const std::string& name, const ScenarioParams& params = {});

// Runs several scenarios (the full catalog when `names` is empty) on up to
// `workers` threads. Reports come back ordered by scenario name regardless
// of completion order and are identical for every worker count.
std::vector<Report> run_scenarios(std::vector<std::string> names,
                                  const ScenarioParams& params = {}, unsigned workers = 1);

enum class ReportFormat { text, json, csv };

// Parses "text" / "json" / "csv"; empty result for anything else.
std::optional<ReportFormat> parse_format(const std::string& name);

// Renders reports in the requested format: one JSON object for a single
// report and a JSON array for several; CSV rows under a single header; an
// aligned text block per report with an overall summary line.
std::string render_reports(const std::vector<Report>& reports, ReportFormat format);

// Canonical rendering used for golden comparison: the JSON object of one
// report without the elapsed-ms member (every other byte is deterministic).
std::string canonical_render(const Report& report);

// Writes <dir>/<scenario>.json canonical renderings of the full catalog run
// with default parameters; returns the written paths, sorted. Creates the
// directory when missing; filesystem failures throw Error.
std::vector<std::string> regenerate_goldens(const std::string& dir);

// Re-runs the catalog with default parameters and compares the canonical
// renderings byte for byte against <dir>/<scenario>.json. One assertion per
// scenario; a mismatch lists the differing lines in its witness.
Report verify_goldens(const std::string& dir);

} // namespace qflab
