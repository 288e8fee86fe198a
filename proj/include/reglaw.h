#ifndef REGLAW_H
#define REGLAW_H

/* C interface to the experiment runner. Configurations are opaque handles;
 * strings returned by rgl_* calls are heap-allocated and must be released
 * with rgl_string_free. Status contract: 0 pass, 2 inconclusive, 1 error. */

#ifdef __cplusplus
extern "C" {
#endif

typedef struct rgl_config rgl_config;

/* Parses and schema-validates a JSON configuration document.
 * Returns NULL on error (see rgl_last_error). */
rgl_config* rgl_config_parse(const char* json_text);
void rgl_config_free(rgl_config* cfg);

/* Runs the configured experiment, writing manifest.json, report.json and the
 * curve CSVs under out_dir. workers <= 0 selects the hardware default;
 * seed_override >= 0 replaces the config seed. Returns 0, 2 or 1. */
int rgl_run(const rgl_config* cfg, const char* out_dir, int workers,
            long long seed_override);

/* Message of the last failed call on this thread, or NULL. */
const char* rgl_last_error(void);

/* JSON array of the available experiment kinds. */
char* rgl_list_kinds(void);

/* JSON parameter schema for one kind; NULL if the kind is unknown. */
char* rgl_describe(const char* kind);

void rgl_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* REGLAW_H */
