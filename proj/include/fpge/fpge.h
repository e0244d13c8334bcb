/* SPDX-License-Identifier: Apache-2.0
 * Copyright 2026 The fpge Authors
 *
 * C interface to the fpge library: floating-point grammatical evolution.
 *
 * A program is encoded as one exact decimal number in [0, 1] and decoded
 * through a BNF grammar in depth-first or breadth-first order. The library
 * provides decoding, expression fitness, landscape scans and the search
 * harnesses built on them.
 *
 * Conventions:
 *   - Every object is an opaque handle released with its *_free function.
 *     Passing NULL to *_free is a no-op.
 *   - Functions that can fail return fpge_status. On failure the output
 *     handle is left untouched and fpge_last_error() describes the problem
 *     for the calling thread until its next failing call.
 *   - Strings returned as `const char*` are owned by the handle they came
 *     from and stay valid until it is freed. Strings returned through
 *     `char**` are owned by the caller and released with fpge_string_free.
 *   - Genotypes cross the interface as decimal literals ("0", "1",
 *     "0.<digits>").
 */

#ifndef FPGE_FPGE_H
#define FPGE_FPGE_H

#include <stddef.h>
#include <stdint.h>

#if defined(FPGE_BUILDING_LIBRARY)
#define FPGE_API __attribute__((visibility("default")))
#else
#define FPGE_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fpge_status {
    FPGE_OK = 0,
    FPGE_E_INVALID_ARGUMENT = 1, /* bad parameter or configuration */
    FPGE_E_GRAMMAR = 2,          /* grammar syntax or validation error */
    FPGE_E_DATA = 3,             /* malformed dataset, literal or scan file */
    FPGE_E_IO = 4,               /* file could not be written */
    FPGE_E_INTERNAL = 5
} fpge_status;

typedef enum fpge_order { FPGE_ORDER_DFS = 0, FPGE_ORDER_BFS = 1 } fpge_order;

typedef enum fpge_metric { FPGE_METRIC_RMSE = 0, FPGE_METRIC_MAE = 1 } fpge_metric;

typedef enum fpge_algorithm {
    FPGE_ALGO_FPGE_DFS = 0,
    FPGE_ALGO_FPGE_BFS = 1,
    FPGE_ALGO_DE_DFS = 2,
    FPGE_ALGO_DE_BFS = 3,
    FPGE_ALGO_RAND_DFS = 4,
    FPGE_ALGO_RAND_BFS = 5,
    FPGE_ALGO_INT_GE = 6
} fpge_algorithm;

typedef struct fpge_grammar fpge_grammar;
typedef struct fpge_dataset fpge_dataset;
typedef struct fpge_decoding fpge_decoding;
typedef struct fpge_scan fpge_scan;
typedef struct fpge_experiment fpge_experiment;

typedef struct fpge_decode_limits {
    uint32_t max_depth; /* root is depth 1; default 15 */
    uint32_t max_nodes; /* default 2000 */
} fpge_decode_limits;

FPGE_API const char* fpge_version(void);
FPGE_API const char* fpge_last_error(void);
FPGE_API void fpge_string_free(char* text);
FPGE_API fpge_decode_limits fpge_decode_limits_default(void);

/* Name lookups; return FPGE_E_INVALID_ARGUMENT for unknown names. */
FPGE_API fpge_status fpge_parse_order(const char* name, fpge_order* out);
FPGE_API fpge_status fpge_parse_algorithm(const char* name, fpge_algorithm* out);
FPGE_API fpge_status fpge_parse_metric(const char* name, fpge_metric* out);
FPGE_API const char* fpge_algorithm_name(fpge_algorithm algorithm);

/* ---- Grammars ---------------------------------------------------------- */

FPGE_API fpge_status fpge_grammar_parse(const char* text, fpge_grammar** out);
FPGE_API fpge_status fpge_grammar_load(const char* path, fpge_grammar** out);
FPGE_API void fpge_grammar_free(fpge_grammar* grammar);
FPGE_API size_t fpge_grammar_rule_count(const fpge_grammar* grammar);
FPGE_API size_t fpge_grammar_production_count(const fpge_grammar* grammar);
FPGE_API const char* fpge_grammar_rule_name(const fpge_grammar* grammar, size_t rule);
FPGE_API size_t fpge_grammar_rule_size(const fpge_grammar* grammar, size_t rule);
/* 16 hex digits identifying the canonical form. */
FPGE_API const char* fpge_grammar_digest(const fpge_grammar* grammar);
FPGE_API fpge_status fpge_grammar_serialize(const fpge_grammar* grammar, char** out);
FPGE_API fpge_status fpge_grammar_min_depth(const fpge_grammar* grammar, const char* rule, uint32_t* out);
/* Moves the productions of `rule` that contain nonterminals into a new rule
 * `new_name` referenced by a single production placed first in `rule`. */
FPGE_API fpge_status fpge_grammar_factor(const fpge_grammar* grammar, const char* rule, const char* new_name,
    fpge_grammar** out);

/* ---- Decoding ---------------------------------------------------------- */

/* Decodes `val` (a decimal literal with at most `precision` fractional
 * digits). An invalid individual is a successful call whose result reports
 * fpge_decoding_valid() == 0. */
FPGE_API fpge_status fpge_decode(const fpge_grammar* grammar, const char* val, uint32_t precision, fpge_order order,
    fpge_decode_limits limits, fpge_decoding** out);
/* Integer-codon mapping (leftmost derivation, codon mod k, no wrapping). */
FPGE_API fpge_status fpge_decode_codons(const fpge_grammar* grammar, const uint32_t* codons, size_t count,
    fpge_decode_limits limits, fpge_decoding** out);
FPGE_API void fpge_decoding_free(fpge_decoding* decoding);
FPGE_API int fpge_decoding_valid(const fpge_decoding* decoding);
/* "depth", "nodes" or "codons"; empty string when valid. */
FPGE_API const char* fpge_decoding_invalid_reason(const fpge_decoding* decoding);
/* Empty string when invalid. */
FPGE_API const char* fpge_decoding_phenotype(const fpge_decoding* decoding);
/* 0 when invalid. */
FPGE_API size_t fpge_decoding_node_count(const fpge_decoding* decoding);
/* Untrimmed decimal; empty string when invalid. */
FPGE_API const char* fpge_decoding_residual(const fpge_decoding* decoding);
/* Production index chosen at each expansion, in consumption order. */
FPGE_API size_t fpge_decoding_choice_count(const fpge_decoding* decoding);
FPGE_API const uint32_t* fpge_decoding_choices(const fpge_decoding* decoding);

/* ---- Datasets and fitness ---------------------------------------------- */

/* benchmark: "keijzer6", "paige1" or "vlad4". */
FPGE_API fpge_status fpge_dataset_generate(const char* benchmark, size_t rows, uint64_t seed, fpge_dataset** out);
FPGE_API fpge_status fpge_dataset_load_csv(const char* path, fpge_dataset** out);
/* preamble may be NULL; it is written verbatim before the header. */
FPGE_API fpge_status fpge_dataset_write_csv(const fpge_dataset* dataset, const char* path, const char* preamble);
FPGE_API void fpge_dataset_free(fpge_dataset* dataset);
FPGE_API size_t fpge_dataset_rows(const fpge_dataset* dataset);
FPGE_API size_t fpge_dataset_variables(const fpge_dataset* dataset);
FPGE_API const char* fpge_dataset_id(const fpge_dataset* dataset);
/* Splits off the trailing `fraction` of rows as a held-out partition. */
FPGE_API fpge_status fpge_dataset_holdout(const fpge_dataset* dataset, double fraction, fpge_dataset** train,
    fpge_dataset** test);
/* Fitness of a phenotype; +inf when it fails to parse or evaluate. */
FPGE_API fpge_status fpge_fitness(const char* phenotype, const fpge_dataset* dataset, fpge_metric metric, double* out);

/* ---- Landscape scans --------------------------------------------------- */

typedef struct fpge_scan_config {
    fpge_order order;
    size_t samples; /* default 25000 */
    fpge_decode_limits limits;
    uint64_t seed;
    uint32_t precision; /* default 150 */
    fpge_metric metric;
    unsigned threads; /* 0 = all cores; the result is independent of it */
} fpge_scan_config;

typedef struct fpge_scan_record {
    const char* val; /* untrimmed decimal, owned by the scan */
    double fitness;  /* +inf for Worst */
    size_t nodes;
    int valid;
    const char* invalid_reason; /* "" when valid */
} fpge_scan_record;

typedef struct fpge_svg_options {
    int width;
    int height;
    const char* title; /* may be NULL */
    int log_fitness;
    int show_fitness;
    int show_nodes;
    int mark_best;
} fpge_svg_options;

FPGE_API void fpge_scan_config_init(fpge_scan_config* config);
FPGE_API void fpge_svg_options_init(fpge_svg_options* options);
FPGE_API fpge_status fpge_scan_run(const fpge_grammar* grammar, const fpge_dataset* dataset,
    const fpge_scan_config* config, fpge_scan** out);
FPGE_API fpge_status fpge_scan_load_csv(const char* path, fpge_scan** out);
FPGE_API fpge_status fpge_scan_write_csv(const fpge_scan* scan, const char* path, const char* preamble);
FPGE_API fpge_status fpge_scan_write_svg(const fpge_scan* scan, const char* path, const fpge_svg_options* options);
FPGE_API void fpge_scan_free(fpge_scan* scan);
FPGE_API size_t fpge_scan_size(const fpge_scan* scan);
FPGE_API fpge_status fpge_scan_record_at(const fpge_scan* scan, size_t index, fpge_scan_record* out);
/* Index of the lowest fitness (ties to the smaller val). */
FPGE_API fpge_status fpge_scan_best(const fpge_scan* scan, size_t* index);
/* `count` contiguous records around `center`, clipped at the ends. */
FPGE_API fpge_status fpge_scan_zoom(const fpge_scan* scan, size_t center, size_t count, fpge_scan** out);
/* Fresh evenly spaced samples over the val interval spanned by `window`. */
FPGE_API fpge_status fpge_scan_rescan(const fpge_scan* window, const fpge_grammar* grammar, const fpge_dataset* dataset,
    const fpge_scan_config* config, size_t samples, fpge_scan** out);

/* ---- Search experiments ------------------------------------------------ */

typedef struct fpge_search_config {
    fpge_algorithm algorithm;
    uint32_t precision;           /* default 150 */
    size_t population;            /* default 500 */
    size_t generations;           /* 0 = budget / population */
    size_t budget;                /* evaluations per run, default 25000 */
    const char* mutation_width;   /* decimal half width, default "0.05" */
    double crossover_probability; /* default 0.75 */
    size_t tournament_size;       /* default 2 */
    size_t elitism;               /* default 1 */
    double de_weight;             /* default 0.5 */
    size_t genome_length;         /* int-ge codons, default 200 */
    double codon_mutation_probability; /* int-ge, default 0.01 */
    fpge_decode_limits limits;
    fpge_metric metric;
    uint64_t seed; /* run r uses seed + r */
} fpge_search_config;

FPGE_API void fpge_search_config_init(fpge_search_config* config);
FPGE_API fpge_status fpge_search_config_validate(const fpge_search_config* config);
/* `key = value` lines describing the effective configuration. */
FPGE_API fpge_status fpge_search_config_describe(const fpge_search_config* config, char** out);

/* holdout may be NULL. threads: 0 = all cores; traces do not depend on it. */
FPGE_API fpge_status fpge_experiment_run(const fpge_grammar* grammar, const fpge_dataset* dataset,
    const fpge_dataset* holdout, const fpge_search_config* config, size_t runs, unsigned threads,
    fpge_experiment** out);
FPGE_API void fpge_experiment_free(fpge_experiment* experiment);
FPGE_API size_t fpge_experiment_runs(const fpge_experiment* experiment);
FPGE_API size_t fpge_experiment_length(const fpge_experiment* experiment);
FPGE_API const double* fpge_experiment_mean(const fpge_experiment* experiment);
FPGE_API const double* fpge_experiment_std(const fpge_experiment* experiment);
FPGE_API const double* fpge_experiment_run_trace(const fpge_experiment* experiment, size_t run);
FPGE_API const char* fpge_experiment_best_phenotype(const fpge_experiment* experiment, size_t run);
FPGE_API const char* fpge_experiment_best_genotype(const fpge_experiment* experiment, size_t run);
/* NaN when no holdout was given or the run found no valid individual. */
FPGE_API double fpge_experiment_test_fitness(const fpge_experiment* experiment, size_t run);
/* Columns eval,mean_best,std_best, or eval,run,best when per_run != 0. */
FPGE_API fpge_status fpge_experiment_write_csv(const fpge_experiment* experiment, const char* path, int per_run,
    const char* preamble);

#ifdef __cplusplus
}
#endif

#endif /* FPGE_FPGE_H */
