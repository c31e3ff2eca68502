#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "vxgs/config.hpp"

int main(int argc, char** argv) {
    CLI::App app{"variable-exponent ground-state toolkit"};

    std::string config_path;
    std::string out_dir;
    long long seed = -1;
    bool quiet = false;

    app.add_option("--config", config_path, "JSON config file")->required();
    app.add_option("--out", out_dir, "output directory (overrides the config)");
    app.add_option("--seed", seed, "RNG seed (overrides the config)");
    app.add_flag("--quiet", quiet, "suppress the report on stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        vxgs::RunConfig cfg = vxgs::load_config(config_path);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (seed >= 0) cfg.solver.rng_seed = static_cast<std::uint64_t>(seed);
        if (quiet) cfg.quiet = true;
        return vxgs::run(cfg);
    } catch (const vxgs::error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
