#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "pcurv/scenario.hpp"

int main(int argc, char** argv) {
    CLI::App app{"run p-adic curvature scenarios"};
    std::string scenario_path, out_path;
    std::vector<std::string> commands;
    std::optional<int> precision;
    std::optional<uint64_t> seed;
    bool quiet = false;
    app.add_option("--scenario", scenario_path, "scenario JSON file")->required();
    app.add_option("--out", out_path, "report path (overrides the scenario's output field)");
    app.add_option("--command", commands, "command to run; repeatable, replaces the scenario list");
    app.add_option("--precision", precision, "pi-adic precision");
    app.add_option("--seed", seed, "random seed");
    app.add_flag("--quiet", quiet, "no summary on stdout");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    pcurv::json report;
    bool ok = false;
    try {
        std::ifstream in(scenario_path);
        if (!in) throw pcurv::Error("SchemaError", "cannot open " + scenario_path);
        pcurv::json j;
        try {
            j = pcurv::json::parse(in);
        } catch (const pcurv::json::parse_error& e) {
            throw pcurv::Error("SchemaError", std::string("invalid JSON: ") + e.what());
        }
        pcurv::Scenario s = pcurv::parse_scenario(j, precision, seed);
        std::optional<std::vector<std::string>> cmds;
        if (!commands.empty()) cmds = commands;
        auto rr = pcurv::run(s, cmds);
        report = rr.report;
        ok = rr.ok;
        if (out_path.empty()) out_path = s.output;
    } catch (const pcurv::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    std::string text = report.dump(2) + "\n";
    if (out_path.empty() || out_path == "-") {
        if (!quiet) std::cout << text;
    } else {
        std::ofstream out(out_path);
        out << text;
        if (!quiet)
            for (const auto& line : pcurv::summarize(report)) std::cout << line << "\n";
    }
    return ok ? 0 : 1;
}
