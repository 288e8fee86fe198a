#include "reglaw.h"

#include <cstring>
#include <string>

#include "reglaw/experiment.hpp"

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

} // namespace

struct rgl_config {
    std::string text;
};

extern "C" {

rgl_config* rgl_config_parse(const char* json_text) {
    if (!json_text) {
        g_last_error = "null config";
        return nullptr;
    }
    try {
        // Validate eagerly so a bad document fails here; keep the original
        // text, the manifest echoes it verbatim.
        std::string text(json_text);
        reglaw::validate_config(text);
        return new rgl_config{std::move(text)};
    } catch (const std::exception& ex) {
        g_last_error = ex.what();
        return nullptr;
    }
}

void rgl_config_free(rgl_config* cfg) { delete cfg; }

int rgl_run(const rgl_config* cfg, const char* out_dir, int workers,
            long long seed_override) {
    if (!cfg || !out_dir) {
        g_last_error = "null argument";
        return 1;
    }
    g_last_error.clear();
    int status = reglaw::run_to_directory(cfg->text, out_dir, workers, seed_override);
    if (status == 1 && g_last_error.empty()) g_last_error = "run failed";
    return status;
}

const char* rgl_last_error(void) {
    return g_last_error.empty() ? nullptr : g_last_error.c_str();
}

char* rgl_list_kinds(void) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const std::string& k : reglaw::experiment_kinds()) arr.push_back(k);
    return dup_string(arr.dump(2));
}

char* rgl_describe(const char* kind) {
    if (!kind) {
        g_last_error = "null kind";
        return nullptr;
    }
    try {
        return dup_string(reglaw::experiment_schema(kind).dump(2));
    } catch (const std::exception& ex) {
        g_last_error = ex.what();
        return nullptr;
    }
}

void rgl_string_free(char* s) { delete[] s; }

} // extern "C"
