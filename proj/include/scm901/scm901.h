/* SPDX-License-Identifier: Apache-2.0
 *
 * scm901: 3GPP TR 38.901 spatial channel model library and link-level simulator
 * Copyright (C) 2026 the scm901 authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 * ------------------------------------------------------------------------
 *
 * C API of the scm901 shared library. All objects are opaque handles; all
 * functions return a status code and report results through out-parameters.
 * Handles are not thread-safe; use one per thread or serialize externally.
 *
 * Scenario names: "RMa", "UMa", "UMi-StreetCanyon", "InH-OfficeMixed",
 * "InH-OfficeOpen". Conditions: "LOS", "NLOS".
 */

#ifndef SCM901_H
#define SCM901_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum scm901_status
{
    SCM901_OK = 0,
    SCM901_ERR_INVALID_ARGUMENT = 1,
    SCM901_ERR_PARSE = 2,
    SCM901_ERR_IO = 3,
    SCM901_ERR_INTERNAL = 4
} scm901_status;

/* Short name of a status code. */
const char* scm901_status_name(scm901_status status);

/* Detail message of the last failure on the calling thread ("" if none). */
const char* scm901_last_error(void);

/* ---------------------------------------------------------------- catalog */

typedef struct scm901_catalog scm901_catalog;

/* Load and validate a parameter catalog file. */
scm901_status scm901_catalog_load(const char* path, scm901_catalog** out);

/* The catalog embedded in the library. */
scm901_status scm901_catalog_load_default(scm901_catalog** out);

void scm901_catalog_free(scm901_catalog* catalog);

/* Canonical text form; free the string with scm901_string_free. */
scm901_status scm901_catalog_format(const scm901_catalog* catalog, char** out_text);

void scm901_string_free(char* text);

/* FNV-1a fingerprint of the catalog source text. */
scm901_status scm901_catalog_checksum(const scm901_catalog* catalog, uint64_t* out);

/* ----------------------------------------------------------- point queries */

/* LOS probability for the node positions (x, y, z in meters). */
scm901_status scm901_los_probability(const scm901_catalog* catalog,
                                     const char* scenario,
                                     const double a_xyz[3],
                                     const double b_xyz[3],
                                     double* out_probability);

/* Mean pathloss in dB (no shadowing). */
scm901_status scm901_mean_pathloss(const scm901_catalog* catalog,
                                   const char* scenario,
                                   const char* condition,
                                   const double a_xyz[3],
                                   const double b_xyz[3],
                                   double fc_hz,
                                   double* out_db);

/* Breakpoint distance of the scenario's LOS pathloss model, meters. */
scm901_status scm901_breakpoint_distance(const scm901_catalog* catalog,
                                         const char* scenario,
                                         double h_bs_m,
                                         double h_ut_m,
                                         double fc_hz,
                                         double* out_m);

/* ------------------------------------------------------------- simulation */

typedef struct scm901_array_config
{
    uint32_t rows;
    uint32_t cols;
    double spacing_v_wl;
    double spacing_h_wl;
    double bearing_deg;
    double downtilt_deg;
    double element_gain_db;
    int isotropic;
} scm901_array_config;

typedef struct scm901_sim_config
{
    const char* scenario;
    double fc_hz;
    double tx_power_dbm;
    double noise_figure_db;
    double temperature_k;

    double pos_a[3];
    double pos_b[3];
    double vel_a[3];
    double vel_b[3];
    scm901_array_config array_a;
    scm901_array_config array_b;

    double condition_update_period_s;
    double channel_update_period_s;
    int shadowing_enabled;
    int blockage_enabled;
    int num_nonself_blockers;
    double blocker_speed_ms;
    int portrait_mode;

    double bandwidth_hz;
    uint32_t num_subbands;

    double trace_duration_s;
    double trace_step_s;

    uint64_t seed;
    uint32_t runs;
} scm901_sim_config;

/* Fill a config with the documented defaults (UMa, 2.1 GHz, 30 dBm, NF 5 dB,
 * isotropic single elements, 100 MHz / 72 subbands, seed 1). */
void scm901_sim_config_init(scm901_sim_config* config);

/* Write the SNR-trace CSV (`time_s,pathloss_db,snr_db`) to out_csv_path. */
scm901_status scm901_run_snr_trace(const scm901_catalog* catalog,
                                   const scm901_sim_config* config,
                                   const char* out_csv_path);

/* Write the averaged loss-vs-distance CSV
 * (`distance_m,condition,mean_loss_db,analytic_loss_db,runs`) to
 * out_csv_path. Pass distances_m = NULL to use the scenario default grid. */
scm901_status scm901_run_loss_sweep(const scm901_catalog* catalog,
                                    const scm901_sim_config* config,
                                    const double* distances_m,
                                    size_t n_distances,
                                    const char* out_csv_path);

/* ------------------------------------------------------------ link handle */

/* A configured two-node link (condition + pathloss + fading + spectrum
 * models with beams steered at the peer). */
typedef struct scm901_link scm901_link;

scm901_status scm901_link_create(const scm901_catalog* catalog,
                                 const scm901_sim_config* config,
                                 scm901_link** out);

void scm901_link_free(scm901_link* link);

/* Advance the link to time now_s and report the experienced propagation loss
 * and SNR. Calls must use non-decreasing times. */
scm901_status scm901_link_step(scm901_link* link,
                               double now_s,
                               double* out_pathloss_db,
                               double* out_snr_db);

#ifdef __cplusplus
}
#endif

#endif /* SCM901_H */
