#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "reglaw.h"

namespace {

int fail(const char* fallback) {
    const char* msg = rgl_last_error();
    std::fprintf(stderr, "error: %s\n", msg ? msg : fallback);
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"regularity-of-laws experiment runner"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".", kind;
    int workers = 0;
    long long seed = -1;

    CLI::App* run = app.add_subcommand("run", "run an experiment from a JSON config");
    run->add_option("config", config_path, "configuration file")->required();
    run->add_option("--out", out_dir, "output directory (default: current)");
    run->add_option("--workers", workers, "worker threads (0 = hardware)");
    run->add_option("--seed", seed, "override the config seed");

    CLI::App* list = app.add_subcommand("list", "list the experiment kinds");
    CLI::App* describe = app.add_subcommand("describe", "print a kind's parameter schema");
    describe->add_option("kind", kind, "experiment kind")->required();

    CLI11_PARSE(app, argc, argv);

    if (list->parsed()) {
        char* s = rgl_list_kinds();
        std::printf("%s\n", s);
        rgl_string_free(s);
        return 0;
    }
    if (describe->parsed()) {
        char* s = rgl_describe(kind.c_str());
        if (!s) return fail("unknown kind");
        std::printf("%s\n", s);
        rgl_string_free(s);
        return 0;
    }

    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
        std::fprintf(stderr, "error: cannot read %s\n", config_path.c_str());
        return 1;
    }
    std::ostringstream text;
    text << in.rdbuf();
    rgl_config* cfg = rgl_config_parse(text.str().c_str());
    if (!cfg) return fail("invalid config");
    int status = rgl_run(cfg, out_dir.c_str(), workers, seed);
    rgl_config_free(cfg);
    if (status == 1) return fail("run failed");
    return status;
}
