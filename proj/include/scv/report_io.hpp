#ifndef SCV_REPORT_IO_HPP
#define SCV_REPORT_IO_HPP

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "scv/consistency.hpp"
#include "scv/errors.hpp"

namespace scv {

// All numeric output goes through one formatter so repeated runs are
// byte-identical.
inline std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline nlohmann::ordered_json report_to_json(const ConsistencyReport& report) {
    nlohmann::ordered_json j;
    j["alpha"] = report.alpha;
    j["psi"] = report.psi;
    j["phi"] = report.phi;
    j["combined"] = report.combined;
    j["degenerate"] = report.degenerate;
    nlohmann::ordered_json stmts = nlohmann::ordered_json::object();
    for (const auto& [key, score] : report.per_statement) stmts[key] = score;
    j["per_statement"] = std::move(stmts);
    nlohmann::ordered_json edges = nlohmann::ordered_json::object();
    for (const auto& [key, score] : report.per_edge) edges[key.first + "->" + key.second] = score;
    j["per_edge"] = std::move(edges);
    j["flagged"] = report.flagged;
    return j;
}

inline std::string report_to_csv(const ConsistencyReport& report) {
    std::string out = "level,key,score,flagged\n";
    for (const auto& [key, score] : report.per_statement)
        out += "statement," + key + "," + fmt_num(score) + "," +
               (report.flagged.count(key) ? "1" : "0") + "\n";
    for (const auto& [key, score] : report.per_edge)
        out += "edge," + key.first + "->" + key.second + "," + fmt_num(score) + ",0\n";
    out += "global,psi," + fmt_num(report.psi) + ",0\n";
    out += "global,phi," + fmt_num(report.phi) + ",0\n";
    out += "global,combined," + fmt_num(report.combined) + ",0\n";
    return out;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path);
    f << content;
}

inline std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw MissingInputError("cannot read " + path);
    return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

} // namespace scv

#endif
