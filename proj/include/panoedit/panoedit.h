/* Copyright 2026 The panoedit Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * panoedit C API.
 *
 * Conventions:
 *  - Every fallible call returns pe_status; PE_OK is zero. On failure the
 *    message is available from pe_last_error() on the calling thread.
 *  - Handles are opaque and owned by the caller once returned through an
 *    out-parameter; release them with the matching *_destroy call.
 *    Destroy functions accept NULL.
 *  - pe_image holds a W x H x C grid of doubles, row-major with interleaved
 *    channels. "Planar" buffers are C x H x W.
 *  - Returned strings are owned by the library. Strings from handles live as
 *    long as the handle; other strings stay valid until the next call on the
 *    same thread.
 *  - Calls are thread-safe for distinct handles.
 */
#ifndef PANOEDIT_PANOEDIT_H
#define PANOEDIT_PANOEDIT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(PANOEDIT_BUILDING_LIBRARY)
#define PE_API __attribute__((visibility("default")))
#else
#define PE_API
#endif

typedef enum pe_status {
  PE_OK = 0,
  PE_ERR_INVALID_ARGUMENT = 1,
  PE_ERR_DOMAIN = 2,
  PE_ERR_SHAPE = 3,
  PE_ERR_EMPTY_MASK = 4,
  PE_ERR_EMPTY_REGION = 5,
  PE_ERR_IO = 6,
  PE_ERR_PARSE = 7,
  PE_ERR_CONTRACT = 8,
  PE_ERR_POLE_BBOX = 9,
  PE_ERR_UNSUPPORTED = 10,
  PE_ERR_NULL_POINTER = 11,
  PE_ERR_CALLBACK = 12,
  PE_ERR_INTERNAL = 13
} pe_status;

PE_API const char *pe_version(void);
PE_API const char *pe_status_name(pe_status status);
/* Message of the last failed call on this thread, "" if none. */
PE_API const char *pe_last_error(void);

/* ---- images ------------------------------------------------------------ */

typedef struct pe_image pe_image;

PE_API pe_status pe_image_create(int width, int height, int channels, double fill, pe_image **out);
PE_API pe_status pe_image_from_f64(const double *data, int width, int height, int channels, pe_image **out);
PE_API pe_status pe_image_from_f32(const float *data, int width, int height, int channels, pe_image **out);
/* data is C x H x W. */
PE_API pe_status pe_image_from_planar(const double *data, int channels, int height, int width, pe_image **out);
PE_API pe_status pe_image_clone(const pe_image *image, pe_image **out);
PE_API void pe_image_destroy(pe_image *image);

PE_API int pe_image_width(const pe_image *image);
PE_API int pe_image_height(const pe_image *image);
PE_API int pe_image_channels(const pe_image *image);
/* Number of doubles, W * H * C. */
PE_API size_t pe_image_size(const pe_image *image);
PE_API double *pe_image_data(pe_image *image);
PE_API const double *pe_image_cdata(const pe_image *image);
PE_API pe_status pe_image_to_f32(const pe_image *image, float *out, size_t count);
PE_API pe_status pe_image_to_planar(const pe_image *image, double *out, size_t count);
PE_API pe_status pe_image_equal(const pe_image *a, const pe_image *b, int *equal);

/* PNG (8-bit sRGB decoded to linear; 16-bit files are read at 8 bit) or PFM,
 * chosen by extension. */
PE_API pe_status pe_image_load(const char *path, pe_image **out);
PE_API pe_status pe_image_save(const pe_image *image, const char *path);
/* PSNR in dB with peak 1; weight is an optional single-channel mask. */
PE_API pe_status pe_psnr(const pe_image *a, const pe_image *b, const pe_image *weight, double *out);

/* ---- sphere geometry ---------------------------------------------------
 * lon = 2*pi*col/W - pi, lat = pi/2 - pi*row/H; +z front, +x right, +y up.
 */

typedef struct pe_camera {
  double yaw;   /* radians, view-center longitude */
  double pitch; /* radians, view-center latitude */
  double roll;  /* radians */
  double hfov;  /* radians, (0, pi) */
  int out_width;
  int out_height;
} pe_camera;

typedef struct pe_bbox {
  double x0, y0, x1, y1; /* x0 > x1 wraps across the seam */
} pe_bbox;

PE_API pe_status pe_erp_to_direction(double col, double row, int width, int height, double *lon, double *lat);
PE_API pe_status pe_direction_to_erp(double lon, double lat, int width, int height, double *col, double *row);
PE_API pe_status pe_project_to_perspective(const pe_image *erp, const pe_camera *camera, pe_image **out);
/* footprint may be NULL. */
PE_API pe_status pe_backproject_to_erp(const pe_image *persp, const pe_camera *camera, int width, int height,
                                       pe_image **patch, pe_image **footprint);
/* Faces in order front, right, back, left, up, down. */
PE_API pe_status pe_erp_to_cubemap(const pe_image *erp, int face_size, pe_image *faces[6]);
PE_API pe_status pe_cubemap_to_erp(const pe_image *const faces[6], int width, int height, pe_image **out);
PE_API const char *pe_cube_face_name(int face);
PE_API pe_status pe_bbox_of_mask(const pe_image *mask, double threshold, pe_bbox *out);

/* ---- distortion --------------------------------------------------------- */

typedef enum pe_noise_norm { PE_NOISE_PER_CHANNEL = 0, PE_NOISE_PER_ROW = 1, PE_NOISE_NONE = 2 } pe_noise_norm;

PE_API pe_status pe_scale_factor(double y, int height, double *out);
PE_API pe_status pe_alpha_at(double y, int height, double *out);
/* W x H x 1 map of alpha at raster row y = row. */
PE_API pe_status pe_distortion_map(int width, int height, pe_image **out);
/* Planar C x H x W; count must equal C * H * W. */
PE_API pe_status pe_gaussian_field(int channels, int height, int width, uint64_t seed, double *out, size_t count);
PE_API pe_status pe_distorted_noise(int channels, int height, int width, uint64_t seed, pe_noise_norm norm,
                                    double *out, size_t count);

/* ---- attention modulation ---------------------------------------------- */

/* residual and degenerate may be NULL. */
PE_API pe_status pe_modulate(const pe_image *attention, const pe_image *mask, pe_image **modulated,
                             pe_image **residual, int *degenerate);

/* ---- layered losses ----------------------------------------------------- */

typedef struct pe_loss pe_loss;

typedef struct pe_loss_report {
  int layers;
  int no_layers;
  double shape_mean;
  double recon;
  double total;
} pe_loss_report;

typedef struct pe_grad_check {
  double max_rel_error;
  size_t checked;
  size_t skipped_kinks;
} pe_grad_check;

PE_API pe_status pe_soft_iou(const pe_image *pred, const pe_image *gt, double *out);
PE_API pe_status pe_extract_alpha(const pe_image *rgb, double whiteness, pe_image **mask, int *empty);

PE_API pe_status pe_loss_create(const pe_image *src, const pe_image *tgt, pe_loss **out);
PE_API void pe_loss_destroy(pe_loss *loss);
/* use_bbox_center selects the latitude weight from the box center instead
 * of the ground-truth mask centroid. */
PE_API pe_status pe_loss_add_layer(pe_loss *loss, const pe_image *rgb, const pe_image *alpha, const pe_bbox *bbox,
                                   const pe_image *gt_mask, int use_bbox_center);
PE_API pe_status pe_loss_set_full_frame(pe_loss *loss, int full_frame);
PE_API pe_status pe_loss_evaluate(const pe_loss *loss, pe_loss_report *out);
PE_API pe_status pe_loss_shape_term(const pe_loss *loss, int layer, double *out);
/* Gradients of the total loss for one layer; d_rgb and tie_points may be NULL. */
PE_API pe_status pe_loss_gradients(const pe_loss *loss, int layer, pe_image **d_alpha, pe_image **d_rgb,
                                   size_t *tie_points);
PE_API pe_status pe_loss_grad_check(const pe_loss *loss, double step, pe_grad_check *out);

/* ---- boundary-consistent inference ------------------------------------- */

typedef struct pe_seam_config {
  int extension;   /* b */
  int shift;       /* s */
  int shift_steps; /* K */
  int steps;       /* T */
  double strength; /* (0, 1] */
  int baseline;    /* nonzero disables extension, roll and blending */
} pe_seam_config;

typedef struct pe_step_info {
  int t;
  int steps;
  double tau;
  double dt;
} pe_step_info;

/* Velocity callback over planar buffers of the (extended) latent. Returns 0
 * on success. Called from the calling thread only, once per step. */
typedef int (*pe_denoiser_fn)(void *user, const double *z, int channels, int height, int width,
                              const pe_step_info *step, const double *cond, int cond_channels, double *velocity);

PE_API void pe_seam_config_default(pe_seam_config *cfg);
/* z_src and out are C x H x W; cond is cond_channels x H x W. */
PE_API pe_status pe_seam_inference(pe_denoiser_fn denoiser, void *user, const double *z_src, int channels,
                                   int height, int width, const double *cond, int cond_channels,
                                   const pe_seam_config *cfg, uint64_t seed, double *out);
/* Same with the built-in toy denoiser pulling toward cond. */
PE_API pe_status pe_seam_inference_toy(double edge_leak, int edge_width, const double *z_src, int channels,
                                       int height, int width, const double *cond, int cond_channels,
                                       const pe_seam_config *cfg, uint64_t seed, double *out);
PE_API pe_status pe_seam_discontinuity(const double *z, int channels, int height, int width, double *out);

/* ---- curriculum ----------------------------------------------------------- */

typedef enum pe_mix_phase { PE_PHASE_STAGE2_RAMP = 0, PE_PHASE_STAGE3 = 1 } pe_mix_phase;

typedef struct pe_mix_schedule {
  pe_mix_phase phase;
  long long ramp_steps;
  double target_new;
  double retained_old;
  double stage3[3];
} pe_mix_schedule;

typedef struct pe_sampler pe_sampler;

PE_API void pe_mix_schedule_default(pe_mix_schedule *schedule);
/* Writes *count (2 in the ramp phase, 3 in stage 3) probabilities. */
PE_API pe_status pe_mix_probabilities(long long step, const pe_mix_schedule *schedule, double out[3], int *count);
PE_API pe_status pe_sampler_create(uint64_t seed, uint32_t worker, pe_sampler **out);
PE_API void pe_sampler_destroy(pe_sampler *sampler);
/* Stage in 1..3. */
PE_API pe_status pe_sampler_sample(pe_sampler *sampler, long long step, const pe_mix_schedule *schedule, int *stage);
PE_API pe_status pe_sampler_counts(const pe_sampler *sampler, uint64_t counts[3], uint64_t *total);

/* ---- token layout --------------------------------------------------------- */

typedef enum pe_downsample_mode { PE_DOWNSAMPLE_MAX = 0, PE_DOWNSAMPLE_AVERAGE = 1 } pe_downsample_mode;

typedef struct pe_bundle pe_bundle;

/* Returns a (W/f) x (H/f) x 1 mask. */
PE_API pe_status pe_downsample_mask(const pe_image *mask, int factor, pe_downsample_mode mode, double threshold,
                                    pe_image **out);
/* z_t, z_0: channels x H x W; m: 1 x H x W. */
PE_API pe_status pe_bundle_stage1(const double *z_t, const double *z_0, int channels, const double *m, int height,
                                  int width, pe_bundle **out);
/* Layer arrays hold `layers` planar buffers each; writes layers + 1
 * bundles (global first) into out. */
PE_API pe_status pe_bundle_stage2(const double *z_tgt_t, const double *z_src, int channels, int height, int width,
                                  int layers, const double *const *layer_latents, const double *const *ref_latents,
                                  const double *const *box_masks, pe_bundle **out);
PE_API void pe_bundle_destroy(pe_bundle *bundle);
PE_API int pe_bundle_channels(const pe_bundle *bundle);
PE_API int pe_bundle_height(const pe_bundle *bundle);
PE_API int pe_bundle_width(const pe_bundle *bundle);
PE_API int pe_bundle_layer_id(const pe_bundle *bundle);
/* C x H x W concatenated tensor. */
PE_API const double *pe_bundle_data(const pe_bundle *bundle);
/* One "name offset length layer_id" line per block. */
PE_API const char *pe_bundle_manifest(const pe_bundle *bundle);
PE_API pe_status pe_bundle_dropout(const pe_bundle *bundle, double context_rate, double mask_rate, uint64_t seed,
                                   pe_bundle **out);
/* split is {layer, y, x} or NULL for the default split of dim. */
PE_API pe_status pe_rope3d_apply(const double *vec, int dim, int layer_id, double y, double x, const int *split,
                                 double base, double *out);

/* ---- edit pairs ------------------------------------------------------------ */

typedef enum pe_edit_type {
  PE_EDIT_ADDITION = 0,
  PE_EDIT_REMOVAL = 1,
  PE_EDIT_REPLACEMENT = 2,
  PE_EDIT_MOVEMENT = 3,
  PE_EDIT_MODIFICATION = 4,
  PE_EDIT_GLOBAL_MODIFICATION = 5
} pe_edit_type;

typedef struct pe_pair pe_pair;
typedef struct pe_manifest pe_manifest;

typedef struct pe_dataset_config {
  const char *src_dir;
  const char *refs_dir;
  const char *out_dir;
  const char *manifest; /* NULL: <out_dir>/manifest.tsv */
  uint64_t seed;
  const char *types;    /* comma-separated, NULL for all five */
  double lat_min_deg;
  double lat_max_deg;
  double fov_min_deg;
  double fov_max_deg;
  const char *format;   /* "png" or "pfm", NULL for png */
} pe_dataset_config;

PE_API const char *pe_edit_type_name(pe_edit_type type);
PE_API pe_status pe_parse_edit_type(const char *name, pe_edit_type *out);
/* ref is RGBA (or RGB on white, alpha extracted). shape may be NULL. */
PE_API pe_status pe_place_object(const pe_image *src, const pe_bbox *bbox, const pe_image *ref, pe_image **tgt,
                                 pe_image **footprint, pe_image **shape);
/* Boxes and references per type:
 *   addition, removal: 1 box, 1 ref
 *   replacement:       1 box, 2 refs
 *   movement:          2 boxes, 1 ref
 *   modification:      1 box, 1 ref (recolored variant) or 2 refs */
PE_API pe_status pe_pair_make(pe_edit_type type, const pe_image *src, const pe_bbox *boxes, int box_count,
                              const pe_image *const *refs, const char *const *ref_ids, int ref_count,
                              pe_pair **out);
PE_API void pe_pair_destroy(pe_pair *pair);
/* Borrowed images, valid for the pair's lifetime. */
PE_API const pe_image *pe_pair_src(const pe_pair *pair);
PE_API const pe_image *pe_pair_tgt(const pe_pair *pair);
PE_API int pe_pair_footprint_count(const pe_pair *pair);
PE_API const pe_image *pe_pair_footprint(const pe_pair *pair, int index);
PE_API const char *pe_pair_instruction(const pe_pair *pair);
/* Encoded manifest record with the given image paths. */
PE_API pe_status pe_pair_record(pe_pair *pair, const char *src_path, const char *tgt_path, const char **line);
/* box2 may be NULL except for movement; object2 may be NULL. */
PE_API pe_status pe_render_instruction(pe_edit_type type, const char *object, const char *object2,
                                       const pe_bbox *box, const pe_bbox *box2, int width, int height,
                                       const char **out);
PE_API void pe_dataset_config_default(pe_dataset_config *cfg);
PE_API pe_status pe_dataset_run(const pe_dataset_config *cfg, size_t *sources, size_t *triplets);
PE_API pe_status pe_manifest_read(const char *path, pe_manifest **out);
PE_API void pe_manifest_destroy(pe_manifest *manifest);
PE_API size_t pe_manifest_count(const pe_manifest *manifest);
PE_API const char *pe_manifest_record(const pe_manifest *manifest, size_t index);

#ifdef __cplusplus
}
#endif

#endif /* PANOEDIT_PANOEDIT_H */
