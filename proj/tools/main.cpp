#include "qflab/error.hpp"
#include "qflab/scenario.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using qflab::Error;
using qflab::ReportFormat;
using qflab::ScenarioParams;

// Everything a `run` invocation needs; command-line flags override the
// values read from a config file.
struct RunConfig {
    std::vector<std::string> scenarios;
    ScenarioParams params;
    std::string format;
    std::string out;
    std::optional<unsigned> workers;
};

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read config file " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw Error("config file " + path + " is not valid structured text: " + e.what());
    }
    if (!doc.is_object()) throw Error("config file " + path + " must contain an object");

    RunConfig cfg;
    for (const auto& [key, value] : doc.items()) {
        if (key == "scenario") {
            if (value.is_string()) {
                cfg.scenarios.push_back(value.get<std::string>());
            } else if (value.is_array()) {
                for (const auto& item : value) {
                    if (!item.is_string())
                        throw Error("config key 'scenario' must hold names");
                    cfg.scenarios.push_back(item.get<std::string>());
                }
            } else {
                throw Error("config key 'scenario' must be a name or a list of names");
            }
        } else if (key == "params") {
            if (!value.is_object())
                throw Error("config key 'params' must be an object of integers");
            for (const auto& [pkey, pvalue] : value.items()) {
                if (!pvalue.is_number_integer())
                    throw Error("config parameter '" + pkey + "' must be an integer");
                cfg.params[pkey] = pvalue.get<long>();
            }
        } else if (key == "format") {
            if (!value.is_string()) throw Error("config key 'format' must be a string");
            cfg.format = value.get<std::string>();
        } else if (key == "out") {
            if (!value.is_string()) throw Error("config key 'out' must be a string");
            cfg.out = value.get<std::string>();
        } else if (key == "workers") {
            if (!value.is_number_integer() || value.get<long>() < 1)
                throw Error("config key 'workers' must be an integer of at least 1");
            cfg.workers = static_cast<unsigned>(value.get<long>());
        } else {
            throw Error("unknown config key: " + key);
        }
    }
    return cfg;
}

ReportFormat parse_format_or_throw(const std::string& name) {
    std::optional<ReportFormat> format = qflab::parse_format(name);
    if (!format) throw Error("unknown format: " + name + " (expected json, csv, or text)");
    return *format;
}

void emit(const std::string& rendered, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << rendered;
        return;
    }
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open output file " + out_path);
    out << rendered;
    out.close();
    if (!out) throw Error("failed to write output file " + out_path);
}

std::string render_catalog(ReportFormat format) {
    const auto& catalog = qflab::scenario_catalog();
    switch (format) {
    case ReportFormat::json: {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& sc : catalog) {
            nlohmann::ordered_json entry;
            entry["name"] = sc.name;
            entry["description"] = sc.description;
            nlohmann::ordered_json params = nlohmann::ordered_json::array();
            for (const auto& p : sc.params) {
                nlohmann::ordered_json spec;
                spec["key"] = p.key;
                spec["default"] = p.fallback;
                spec["min"] = p.min_value;
                spec["max"] = p.max_value;
                spec["what"] = p.what;
                params.push_back(std::move(spec));
            }
            entry["params"] = std::move(params);
            arr.push_back(std::move(entry));
        }
        return arr.dump(2) + "\n";
    }
    case ReportFormat::csv: {
        auto escape = [](const std::string& field) {
            if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
            std::string quoted = "\"";
            for (char c : field) {
                if (c == '"') quoted += '"';
                quoted += c;
            }
            return quoted + "\"";
        };
        std::string out = "name,description,params\n";
        for (const auto& sc : catalog) {
            std::string params;
            for (const auto& p : sc.params) {
                if (!params.empty()) params += "; ";
                params += p.key + "=" + std::to_string(p.fallback) + " [" +
                          std::to_string(p.min_value) + ".." + std::to_string(p.max_value) +
                          "]";
            }
            out += escape(sc.name) + "," + escape(sc.description) + "," + escape(params) +
                   "\n";
        }
        return out;
    }
    case ReportFormat::text: {
        std::ostringstream os;
        for (const auto& sc : catalog) {
            os << sc.name << "\n  " << sc.description << "\n";
            for (const auto& p : sc.params)
                os << "  param " << p.key << " = " << p.fallback << " in ["
                   << p.min_value << ", " << p.max_value << "] — " << p.what << "\n";
        }
        return os.str();
    }
    }
    return {};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"qflab — exact scenarios for relative quadratic maps"};
    app.set_version_flag("--version", std::string("qflab ") + qflab::kArtifactVersion);
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "Run scenarios (the full catalog by default)");
    std::vector<std::string> names;
    run_cmd->add_option("scenarios", names, "scenario names; see `list`");
    std::string config_path;
    run_cmd->add_option("--config", config_path,
                        "structured config file with keys scenario, params, format, out, "
                        "workers");
    std::string run_format = "text";
    run_cmd->add_option("--format", run_format, "output format: json, csv, or text");
    std::string run_out;
    run_cmd->add_option("--out", run_out, "write the report here instead of stdout");
    unsigned run_workers = 1;
    run_cmd->add_option("--workers", run_workers, "scenarios run concurrently")
        ->check(CLI::Range(1u, 256u));

    auto* list_cmd = app.add_subcommand("list", "List the scenario catalog");
    std::string list_format = "text";
    list_cmd->add_option("--format", list_format, "output format: json, csv, or text");
    std::string list_out;
    list_cmd->add_option("--out", list_out, "write the catalog here instead of stdout");

    auto* goldens_cmd = app.add_subcommand("goldens", "Golden-file regression");
    goldens_cmd->require_subcommand(1);
    auto* regen_cmd =
        goldens_cmd->add_subcommand("regen", "Re-run the catalog and rewrite the goldens");
    std::string regen_dir = "goldens";
    regen_cmd->add_option("--dir", regen_dir, "golden directory");
    auto* verify_cmd = goldens_cmd->add_subcommand(
        "verify", "Re-run the catalog and compare against the goldens byte for byte");
    std::string verify_dir = "goldens";
    verify_cmd->add_option("--dir", verify_dir, "golden directory");
    std::string verify_format = "text";
    verify_cmd->add_option("--format", verify_format, "output format: json, csv, or text");
    std::string verify_out;
    verify_cmd->add_option("--out", verify_out, "write the report here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help / --version
        app.exit(e);
        return 2;
    }

    try {
        if (*run_cmd) {
            RunConfig cfg;
            if (!config_path.empty()) cfg = load_config(config_path);
            if (!names.empty()) cfg.scenarios = names;
            if (run_cmd->count("--format") > 0 || cfg.format.empty()) cfg.format = run_format;
            if (run_cmd->count("--out") > 0) cfg.out = run_out;
            if (run_cmd->count("--workers") > 0 || !cfg.workers) cfg.workers = run_workers;
            ReportFormat format = parse_format_or_throw(cfg.format);
            std::vector<qflab::Report> reports =
                qflab::run_scenarios(cfg.scenarios, cfg.params, *cfg.workers);
            emit(qflab::render_reports(reports, format), cfg.out);
            for (const qflab::Report& r : reports)
                if (!r.pass()) return 1;
            return 0;
        }
        if (*list_cmd) {
            emit(render_catalog(parse_format_or_throw(list_format)), list_out);
            return 0;
        }
        if (*regen_cmd) {
            for (const std::string& path : qflab::regenerate_goldens(regen_dir))
                std::cout << path << "\n";
            return 0;
        }
        if (*verify_cmd) {
            qflab::Report report = qflab::verify_goldens(verify_dir);
            emit(qflab::render_reports({report}, parse_format_or_throw(verify_format)),
                 verify_out);
            return report.pass() ? 0 : 1;
        }
    } catch (const qflab::GuardExceeded& e) {
        std::cerr << "guard exceeded: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
