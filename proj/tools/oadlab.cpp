// Command-line harness: runs seeded scenario suites and emits machine-readable
// reports. Exit codes: 0 all cases pass, 1 some case failed, 2 usage or
// configuration error, 3 internal numerical error (non-convergence).
#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "oadl/suites.hpp"

namespace {

// "key=value,key=value" budget overrides.
void apply_budget_overrides(oadl::ScenarioConfig& cfg, const std::string& overrides) {
    std::stringstream ss(overrides);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("budget override '" + item + "' is not key=value");
        const std::string key = item.substr(0, eq);
        const std::string value = item.substr(eq + 1);
        if (key == "num_starts") cfg.budgets.num_starts = std::stoi(value);
        else if (key == "max_iters") cfg.budgets.max_iters = std::stoi(value);
        else if (key == "tol") cfg.budgets.tol = std::stod(value);
        else if (key == "sample_budget") cfg.budgets.sample_budget = std::stoi(value);
        else if (key == "pair_count") cfg.pair_count = std::stoi(value);
        else if (key == "triple_count") cfg.triple_count = std::stoi(value);
        else if (key == "tensor_count") cfg.tensor_count = std::stoi(value);
        else throw std::invalid_argument("unknown budget key '" + key + "'");
    }
}

void apply_config_file(oadl::ScenarioConfig& cfg, const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open config file " + path);
    oadl::json j;
    f >> j;
    if (j.contains("suite")) cfg.suite = j["suite"].get<std::string>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<uint64_t>();
    if (j.contains("dims")) cfg.dims = j["dims"].get<std::vector<int>>();
    if (j.contains("k_values")) cfg.k_values = j["k_values"].get<std::vector<int>>();
    if (j.contains("pair_count")) cfg.pair_count = j["pair_count"].get<int>();
    if (j.contains("triple_count")) cfg.triple_count = j["triple_count"].get<int>();
    if (j.contains("tensor_count")) cfg.tensor_count = j["tensor_count"].get<int>();
    if (j.contains("output_path")) cfg.output_path = j["output_path"].get<std::string>();
    if (j.contains("format")) cfg.format = j["format"].get<std::string>();
    if (j.contains("budgets")) {
        const oadl::json& b = j["budgets"];
        if (b.contains("num_starts")) cfg.budgets.num_starts = b["num_starts"].get<int>();
        if (b.contains("max_iters")) cfg.budgets.max_iters = b["max_iters"].get<int>();
        if (b.contains("tol")) cfg.budgets.tol = b["tol"].get<double>();
        if (b.contains("sample_budget"))
            cfg.budgets.sample_budget = b["sample_budget"].get<int>();
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"operator-algebra distance laboratory scenario runner"};

    std::string suite, config_path, out_path, format, overrides;
    uint64_t seed = 1;
    app.add_option("--suite", suite, "suite name (see --list)");
    auto* seed_opt = app.add_option("--seed", seed, "64-bit scenario seed");
    app.add_option("--config", config_path, "JSON config file with explicit keys");
    app.add_option("--out", out_path, "report output path");
    app.add_option("--format", format, "report format: json or text-table");
    app.add_option("--budget-overrides", overrides,
                   "comma-separated key=value budget overrides");
    bool list = false;
    app.add_flag("--list", list, "list suite names and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (list) {
        for (const std::string& s : oadl::suite_names()) std::cout << s << "\n";
        return 0;
    }

    oadl::ScenarioConfig cfg;
    try {
        cfg = oadl::ScenarioConfig::defaults(suite.empty() ? "structure-identities" : suite, seed);
        if (!config_path.empty()) apply_config_file(cfg, config_path);
        // Explicit flags win over the config file.
        if (!suite.empty()) cfg.suite = suite;
        if (seed_opt->count() > 0 || config_path.empty()) cfg.seed = seed;
        cfg.budgets.seed = cfg.seed;
        if (!out_path.empty()) cfg.output_path = out_path;
        if (!format.empty()) cfg.format = format;
        if (!overrides.empty()) apply_budget_overrides(cfg, overrides);
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    try {
        const oadl::SuiteReport report = oadl::run_suite(cfg);
        if (cfg.output_path.empty()) std::cout << oadl::emit_report(report, cfg.format) << "\n";
        if (!report.aggregate) {
            std::cerr << "FAIL: first failing case: " << report.first_failure() << "\n";
            return 1;
        }
        return 0;
    } catch (const oadl::numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
}
