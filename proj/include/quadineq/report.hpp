#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace quadineq {

// Reproducibility header embedded in every report: JSON reports carry it as
// a "manifest" field, CSV reports as leading '#' comment lines.  The
// timestamp stays at the fixed string "unset" unless the caller explicitly
// provides one, so repeated runs stay byte-identical.
struct RunManifest {
    std::string command;        // subcommand and flags (worker count elided)
    nlohmann::json transform;   // transform spec, or null when not applicable
    unsigned long long seed = 42;
    std::vector<std::pair<std::string, double>> tolerances;
    std::string output_path;    // empty = stdout
    std::string timestamp = "unset";

    nlohmann::json to_json() const;
    std::string csv_comment() const;
};

// Shortest representation that round-trips through double.
std::string format_double(double x);

// body must be a nonempty JSON object; the manifest is embedded under
// "manifest" and the result pretty-printed with sorted keys.
void emit_json_report(const RunManifest& m, nlohmann::json body);

// rows must be nonempty; output is manifest comments, the header line, the
// rows, then one trailing '#' comment line per summary entry.
void emit_csv_report(const RunManifest& m, const std::string& header,
                     const std::vector<std::string>& rows,
                     const std::vector<std::string>& summary = {});

}  // namespace quadineq
