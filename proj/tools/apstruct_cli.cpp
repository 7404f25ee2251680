// apstruct: check induced (a,1)f structures on sphere families in E^{2p+q}.
//
//   apstruct verify --config run.json [--threads N] [--out-json F] [--out-csv F]
//   apstruct table  --config run.json --point 1,0,1,0
//   apstruct sweep  --config run.json --param r3 --grid 0.5,1,2

#include "apstruct/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

struct CommonOptions {
    std::string config;
    int threads = -1;
    std::string out_json;
    std::string out_csv;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool outputs) {
    cmd->add_option("--config", o.config, "run configuration (JSON)")->required();
    if (outputs) {
        cmd->add_option("--threads", o.threads, "worker threads (0 = hardware)")->check(CLI::NonNegativeNumber);
        cmd->add_option("--out-json", o.out_json, "JSON report path");
        cmd->add_option("--out-csv", o.out_csv, "CSV summary path");
    }
}

apstruct::cli::RunConfig load(const CommonOptions& o) {
    auto cfg = apstruct::cli::load_config(o.config);
    if (o.threads >= 0) cfg.threads = static_cast<unsigned>(o.threads);
    if (!o.out_json.empty()) cfg.json_path = o.out_json;
    if (!o.out_csv.empty()) cfg.csv_path = o.out_csv;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    namespace cli = apstruct::cli;

    CLI::App app{"Check the structure an almost product operator induces on sphere families in E^{2p+q}"};
    app.require_subcommand(1);

    CommonOptions verify_opts;
    auto* verify = app.add_subcommand("verify", "run the verification suites and write reports");
    add_common(verify, verify_opts, true);

    CommonOptions table_opts;
    std::string point;
    auto* table = app.add_subcommand("table", "print the structure at a point, closed form beside oracle");
    add_common(table, table_opts, false);
    table->add_option("--point", point, "comma-separated coordinates x..., y..., z...")->required();

    CommonOptions sweep_opts;
    std::string param;
    std::string grid;
    auto* sweep = app.add_subcommand("sweep", "repeat verification over a grid of one parameter");
    add_common(sweep, sweep_opts, true);
    sweep->add_option("--param", param, "parameter to vary")->required();
    sweep->add_option("--grid", grid, "comma-separated values")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return cli::kExitUsage;
    }

    try {
        if (*verify) {
            return cli::cmd_verify(load(verify_opts), std::cout, std::cerr);
        }
        if (*table) {
            return cli::cmd_table(load(table_opts), point, std::cout, std::cerr);
        }
        if (*sweep) {
            return cli::cmd_sweep(load(sweep_opts), param, grid, std::cout, std::cerr);
        }
    } catch (const std::exception& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return cli::kExitUsage;
    }
    return cli::kExitUsage;
}
