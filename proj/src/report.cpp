#include "quadineq/report.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "quadineq/common.hpp"

namespace quadineq {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    // nlohmann serializes doubles with the shortest round-trip form.
    return nlohmann::json(x).dump();
}

nlohmann::json RunManifest::to_json() const {
    nlohmann::json tol = nlohmann::json::object();
    for (const auto& [name, value] : tolerances) tol[name] = value;
    return nlohmann::json{
        {"command", command},
        {"transform", transform},
        {"seed", seed},
        {"tolerances", tol},
        {"output", output_path.empty() ? "-" : output_path},
        {"timestamp", timestamp},
    };
}

std::string RunManifest::csv_comment() const {
    std::ostringstream out;
    out << "# command: " << command << "\n";
    out << "# transform: " << transform.dump() << "\n";
    out << "# seed: " << seed << "\n";
    for (const auto& [name, value] : tolerances)
        out << "# tolerance " << name << ": " << format_double(value) << "\n";
    out << "# output: " << (output_path.empty() ? "-" : output_path) << "\n";
    out << "# timestamp: " << timestamp << "\n";
    return out.str();
}

namespace {

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        if (!std::cout) throw domain_error("failed to write report to stdout");
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw domain_error("cannot open output path: " + path);
    out << text;
    out.flush();
    if (!out) throw domain_error("failed while writing report: " + path);
}

}  // namespace

void emit_json_report(const RunManifest& m, nlohmann::json body) {
    if (!body.is_object() || body.empty())
        throw domain_error("refusing to emit an empty report");
    body["manifest"] = m.to_json();
    write_text(m.output_path, body.dump(2) + "\n");
}

void emit_csv_report(const RunManifest& m, const std::string& header,
                     const std::vector<std::string>& rows,
                     const std::vector<std::string>& summary) {
    if (rows.empty()) throw domain_error("refusing to emit an empty report");
    std::ostringstream out;
    out << m.csv_comment();
    out << header << "\n";
    for (const auto& row : rows) out << row << "\n";
    for (const auto& line : summary) out << "# " << line << "\n";
    write_text(m.output_path, out.str());
}

}  // namespace quadineq
