// Copyright 2026 The panoedit Authors
// SPDX-License-Identifier: Apache-2.0
#include "panoedit/panoedit.h"

#include <cstring>
#include <memory>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "core/attention_mod.hpp"
#include "core/curriculum.hpp"
#include "core/distortion.hpp"
#include "core/error.hpp"
#include "core/image_io.hpp"
#include "core/layered_loss.hpp"
#include "core/pair_builder.hpp"
#include "core/seam_inference.hpp"
#include "core/sphere_geom.hpp"
#include "core/token_layout.hpp"

using namespace panoedit;

struct pe_image {
  Image image;
};

struct pe_loss {
  loss::LossInputs inputs;
};

struct pe_sampler {
  curriculum::StageSampler sampler;
};

struct pe_bundle {
  layout::ConditioningBundle bundle;
  std::string manifest;
};

struct pe_pair {
  pairs::EditPair pair;
  std::vector<pe_image> images; // src, tgt, footprints...
  std::string line;
};

struct pe_manifest {
  std::vector<std::string> lines;
};

namespace {

thread_local std::string g_last_error;
thread_local std::string g_string_result;

struct CallbackFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NullPointer : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class F> pe_status guarded(F &&body) {
  try {
    body();
    g_last_error.clear();
    return PE_OK;
  } catch (const Error &e) {
    g_last_error = e.what();
    return static_cast<pe_status>(static_cast<int>(e.code()));
  } catch (const NullPointer &e) {
    g_last_error = e.what();
    return PE_ERR_NULL_POINTER;
  } catch (const CallbackFailure &e) {
    g_last_error = e.what();
    return PE_ERR_CALLBACK;
  } catch (const std::bad_alloc &) {
    g_last_error = "out of memory";
    return PE_ERR_INTERNAL;
  } catch (const std::exception &e) {
    g_last_error = e.what();
    return PE_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return PE_ERR_INTERNAL;
  }
}

template <class T> T &deref(T *p, const char *name) {
  if (!p)
    throw NullPointer(std::string(name) + " is NULL");
  return *p;
}

const char *cstr(const char *p, const char *name) {
  if (!p)
    throw NullPointer(std::string(name) + " is NULL");
  return p;
}

pe_image *wrap(Image img) { return new pe_image{std::move(img)}; }

void check_count(size_t count, size_t expected, const char *what) {
  if (count != expected)
    fail(ErrorCode::Shape, std::string(what) + " buffer holds " + std::to_string(count) + " values, expected " +
                               std::to_string(expected));
}

void check_dims(int c, int h, int w) {
  if (c <= 0 || h <= 0 || w <= 0)
    fail(ErrorCode::InvalidArgument, "dimensions must be positive, got " + std::to_string(c) + "x" +
                                         std::to_string(h) + "x" + std::to_string(w));
}

Latent planar(const double *data, int c, int h, int w, const char *name) {
  check_dims(c, h, w);
  deref(data, name);
  Latent z(c, h, w);
  std::memcpy(z.values().data(), data, z.size() * sizeof(double));
  return z;
}

geom::CameraPose camera_of(const pe_camera *c) {
  const auto &cam = deref(c, "camera");
  return {cam.yaw, cam.pitch, cam.roll, cam.hfov, cam.out_width, cam.out_height};
}

geom::BBox box_of(const pe_bbox *b) {
  const auto &box = deref(b, "bbox");
  return {box.x0, box.y0, box.x1, box.y1};
}

pe_bbox to_c(const geom::BBox &b) { return {b.x0, b.y0, b.x1, b.y1}; }

seam::SeamConfig seam_cfg(const pe_seam_config *c) {
  seam::SeamConfig cfg;
  if (c) {
    cfg.extension = c->extension;
    cfg.shift = c->shift;
    cfg.shift_steps = c->shift_steps;
    cfg.steps = c->steps;
    cfg.strength = c->strength;
    cfg.baseline = c->baseline != 0;
  }
  return cfg;
}

curriculum::MixSchedule schedule_of(const pe_mix_schedule *s) {
  curriculum::MixSchedule out;
  if (s) {
    out.phase = s->phase == PE_PHASE_STAGE3 ? curriculum::MixPhase::Stage3Steady : curriculum::MixPhase::Stage2Ramp;
    out.ramp_steps = s->ramp_steps;
    out.target_new = s->target_new;
    out.retained_old = s->retained_old;
    out.stage3 = {s->stage3[0], s->stage3[1], s->stage3[2]};
  }
  return out;
}

const char *keep(std::string s) {
  g_string_result = std::move(s);
  return g_string_result.c_str();
}

pairs::EditType edit_type_of(pe_edit_type t) {
  switch (t) {
  case PE_EDIT_ADDITION: return pairs::EditType::Addition;
  case PE_EDIT_REMOVAL: return pairs::EditType::Removal;
  case PE_EDIT_REPLACEMENT: return pairs::EditType::Replacement;
  case PE_EDIT_MOVEMENT: return pairs::EditType::Movement;
  case PE_EDIT_MODIFICATION: return pairs::EditType::Modification;
  case PE_EDIT_GLOBAL_MODIFICATION: return pairs::EditType::GlobalModification;
  }
  fail(ErrorCode::InvalidArgument, "unknown edit type " + std::to_string(static_cast<int>(t)));
}

std::vector<pairs::EditType> parse_types(const char *list) {
  std::vector<pairs::EditType> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty())
      out.push_back(pairs::parse_edit_type(item));
  if (out.empty())
    fail(ErrorCode::InvalidArgument, "empty edit type list");
  return out;
}

} // namespace

extern "C" {

const char *pe_version(void) { return PANOEDIT_VERSION_STRING; }

const char *pe_status_name(pe_status status) {
  switch (status) {
  case PE_OK: return "ok";
  case PE_ERR_NULL_POINTER: return "null-pointer";
  case PE_ERR_CALLBACK: return "callback";
  case PE_ERR_INTERNAL: return "internal";
  default: break;
  }
  const int v = static_cast<int>(status);
  if (v >= 1 && v <= 10)
    return error_code_name(static_cast<ErrorCode>(v));
  return "unknown";
}

const char *pe_last_error(void) { return g_last_error.c_str(); }

// ---- images

pe_status pe_image_create(int width, int height, int channels, double fill, pe_image **out) {
  return guarded([&] {
    deref(out, "out");
    check_dims(channels, height, width);
    *out = wrap(Image(width, height, channels, fill));
  });
}

pe_status pe_image_from_f64(const double *data, int width, int height, int channels, pe_image **out) {
  return guarded([&] {
    deref(out, "out");
    deref(data, "data");
    check_dims(channels, height, width);
    Image img(width, height, channels);
    std::memcpy(img.values().data(), data, img.size() * sizeof(double));
    *out = wrap(std::move(img));
  });
}

pe_status pe_image_from_f32(const float *data, int width, int height, int channels, pe_image **out) {
  return guarded([&] {
    deref(out, "out");
    deref(data, "data");
    check_dims(channels, height, width);
    Image img(width, height, channels);
    auto v = img.values();
    for (size_t i = 0; i < v.size(); ++i)
      v[i] = static_cast<double>(data[i]);
    *out = wrap(std::move(img));
  });
}

pe_status pe_image_from_planar(const double *data, int channels, int height, int width, pe_image **out) {
  return guarded([&] {
    deref(out, "out");
    *out = wrap(to_image(planar(data, channels, height, width, "data")));
  });
}

pe_status pe_image_clone(const pe_image *image, pe_image **out) {
  return guarded([&] {
    deref(out, "out");
    *out = wrap(deref(image, "image").image);
  });
}

void pe_image_destroy(pe_image *image) { delete image; }

int pe_image_width(const pe_image *image) { return image ? image->image.width() : 0; }
int pe_image_height(const pe_image *image) { return image ? image->image.height() : 0; }
int pe_image_channels(const pe_image *image) { return image ? image->image.channels() : 0; }
size_t pe_image_size(const pe_image *image) { return image ? image->image.size() : 0; }
double *pe_image_data(pe_image *image) { return image ? image->image.values().data() : nullptr; }
const double *pe_image_cdata(const pe_image *image) { return image ? image->image.values().data() : nullptr; }

pe_status pe_image_to_f32(const pe_image *image, float *out, size_t count) {
  return guarded([&] {
    const auto &img = deref(image, "image").image;
    deref(out, "out");
    check_count(count, img.size(), "output");
    auto v = img.values();
    for (size_t i = 0; i < v.size(); ++i)
      out[i] = static_cast<float>(v[i]);
  });
}

pe_status pe_image_to_planar(const pe_image *image, double *out, size_t count) {
  return guarded([&] {
    const auto z = to_latent(deref(image, "image").image);
    deref(out, "out");
    check_count(count, z.size(), "output");
    std::memcpy(out, z.values().data(), z.size() * sizeof(double));
  });
}

pe_status pe_image_equal(const pe_image *a, const pe_image *b, int *equal) {
  return guarded([&] { deref(equal, "equal") = deref(a, "a").image == deref(b, "b").image ? 1 : 0; });
}

pe_status pe_image_load(const char *path, pe_image **out) {
  return guarded([&] {
    deref(out, "out");
    *out = wrap(io::load_image(cstr(path, "path")));
  });
}

pe_status pe_image_save(const pe_image *image, const char *path) {
  return guarded([&] { io::save_image(deref(image, "image").image, cstr(path, "path")); });
}

pe_status pe_psnr(const pe_image *a, const pe_image *b, const pe_image *weight, double *out) {
  return guarded([&] {
    deref(out, "out") = psnr(deref(a, "a").image, deref(b, "b").image, weight ? &weight->image : nullptr);
  });
}

// ---- geometry

pe_status pe_erp_to_direction(double col, double row, int width, int height, double *lon, double *lat) {
  return guarded([&] {
    const auto d = geom::erp_to_direction(col, row, width, height);
    deref(lon, "lon") = d.lon;
    deref(lat, "lat") = d.lat;
  });
}

pe_status pe_direction_to_erp(double lon, double lat, int width, int height, double *col, double *row) {
  return guarded([&] {
    const auto c = geom::direction_to_erp({lon, lat}, width, height);
    deref(col, "col") = c.col;
    deref(row, "row") = c.row;
  });
}

pe_status pe_project_to_perspective(const pe_image *erp, const pe_camera *camera, pe_image **out) {
  return guarded([&] {
    deref(out, "out");
    *out = wrap(geom::project_to_perspective(deref(erp, "erp").image, camera_of(camera)));
  });
}

pe_status pe_backproject_to_erp(const pe_image *persp, const pe_camera *camera, int width, int height,
                                pe_image **patch, pe_image **footprint) {
  return guarded([&] {
    deref(patch, "patch");
    auto bp = geom::backproject_to_erp(deref(persp, "persp").image, camera_of(camera), width, height);
    std::unique_ptr<pe_image> p(wrap(std::move(bp.patch)));
    if (footprint)
      *footprint = wrap(std::move(bp.footprint));
    *patch = p.release();
  });
}

pe_status pe_erp_to_cubemap(const pe_image *erp, int face_size, pe_image *faces[6]) {
  return guarded([&] {
    deref(faces, "faces");
    auto cube = geom::erp_to_cubemap(deref(erp, "erp").image, face_size);
    for (int i = 0; i < 6; ++i)
      faces[i] = wrap(std::move(cube.faces[static_cast<size_t>(i)]));
  });
}

pe_status pe_cubemap_to_erp(const pe_image *const faces[6], int width, int height, pe_image **out) {
  return guarded([&] {
    deref(out, "out");
    deref(faces, "faces");
    geom::CubeMap cube;
    for (int i = 0; i < 6; ++i)
      cube.faces[static_cast<size_t>(i)] = deref(faces[i], "face").image;
    cube.face_size = cube.faces[0].width();
    for (const auto &f : cube.faces)
      if (f.width() != cube.face_size || f.height() != cube.face_size)
        fail(ErrorCode::Shape, "cube faces must be square and equal in size");
    *out = wrap(geom::cubemap_to_erp(cube, width, height));
  });
}

const char *pe_cube_face_name(int face) {
  if (face < 0 || face > 5)
    return "?";
  return geom::cube_face_name(static_cast<geom::CubeFace>(face));
}

pe_status pe_bbox_of_mask(const pe_image *mask, double threshold, pe_bbox *out) {
  return guarded([&] { deref(out, "out") = to_c(geom::bbox_of_mask(deref(mask, "mask").image, threshold)); });
}

// ---- distortion

pe_status pe_scale_factor(double y, int height, double *out) {
  return guarded([&] { deref(out, "out") = distortion::scale_factor(y, height); });
}

pe_status pe_alpha_at(double y, int height, double *out) {
  return guarded([&] { deref(out, "out") = distortion::alpha_at(y, height); });
}

pe_status pe_distortion_map(int width, int height, pe_image **out) {
  return guarded([&] {
    deref(out, "out");
    *out = wrap(distortion::distortion_map(width, height));
  });
}

pe_status pe_gaussian_field(int channels, int height, int width, uint64_t seed, double *out, size_t count) {
  return guarded([&] {
    deref(out, "out");
    check_dims(channels, height, width);
    const auto z = distortion::gaussian_field(channels, height, width, seed);
    check_count(count, z.size(), "output");
    std::memcpy(out, z.values().data(), z.size() * sizeof(double));
  });
}

pe_status pe_distorted_noise(int channels, int height, int width, uint64_t seed, pe_noise_norm norm, double *out,
                             size_t count) {
  return guarded([&] {
    deref(out, "out");
    check_dims(channels, height, width);
    distortion::NoiseNormalization mode;
    switch (norm) {
    case PE_NOISE_PER_CHANNEL: mode = distortion::NoiseNormalization::PerChannel; break;
    case PE_NOISE_PER_ROW: mode = distortion::NoiseNormalization::PerRow; break;
    case PE_NOISE_NONE: mode = distortion::NoiseNormalization::None; break;
    default: fail(ErrorCode::InvalidArgument, "unknown noise normalization");
    }
    const auto field = distortion::distorted_noise(channels, height, width, seed, mode);
    check_count(count, field.values.size(), "output");
    std::memcpy(out, field.values.values().data(), field.values.size() * sizeof(double));
  });
}

// ---- attention

pe_status pe_modulate(const pe_image *attention, const pe_image *mask, pe_image **modulated, pe_image **residual,
                      int *degenerate) {
  return guarded([&] {
    deref(modulated, "modulated");
    auto m = attn::modulate(attn::AttentionMap::from_values(deref(attention, "attention").image),
                            deref(mask, "mask").image);
    std::unique_ptr<pe_image> a(wrap(std::move(m.map.values)));
    if (residual)
      *residual = wrap(std::move(m.residual.residual));
    if (degenerate)
      *degenerate = m.residual.degenerate ? 1 : 0;
    *modulated = a.release();
  });
}

// ---- losses

pe_status pe_soft_iou(const pe_image *pred, const pe_image *gt, double *out) {
  return guarded([&] { deref(out, "out") = loss::soft_iou(deref(pred, "pred").image, deref(gt, "gt").image); });
}

pe_status pe_extract_alpha(const pe_image *rgb, double whiteness, pe_image **mask, int *empty) {
  return guarded([&] {
    deref(mask, "mask");
    auto a = loss::extract_alpha_white_bg(deref(rgb, "rgb").image, whiteness);
    if (empty)
      *empty = a.empty ? 1 : 0;
    *mask = wrap(std::move(a.mask));
  });
}

pe_status pe_loss_create(const pe_image *src, const pe_image *tgt, pe_loss **out) {
  return guarded([&] {
    deref(out, "out");
    const auto &s = deref(src, "src").image;
    const auto &t = deref(tgt, "tgt").image;
    if (!s.same_shape(t))
      fail(ErrorCode::Shape, "src " + s.shape_string() + " and tgt " + t.shape_string() + " differ");
    auto l = std::make_unique<pe_loss>();
    l->inputs.src = s;
    l->inputs.tgt = t;
    *out = l.release();
  });
}

void pe_loss_destroy(pe_loss *loss) { delete loss; }

pe_status pe_loss_add_layer(pe_loss *loss, const pe_image *rgb, const pe_image *alpha, const pe_bbox *bbox,
                            const pe_image *gt_mask, int use_bbox_center) {
  return guarded([&] {
    auto &in = deref(loss, "loss").inputs;
    loss::ObjectLayer layer{deref(rgb, "rgb").image, deref(alpha, "alpha").image, box_of(bbox)};
    if (!layer.consistent() || !layer.rgb.same_shape(in.src))
      fail(ErrorCode::Shape, "layer rgb " + layer.rgb.shape_string() + " / alpha " + layer.alpha.shape_string() +
                                 " do not match source " + in.src.shape_string());
    layer.bbox.validate(in.src.width(), in.src.height());
    auto target = loss::ShapeTarget::from_mask(deref(gt_mask, "gt_mask").image,
                                               use_bbox_center ? loss::AlphaLocation::BBoxCenter
                                                               : loss::AlphaLocation::Centroid);
    if (!target.mask.same_shape(layer.alpha))
      fail(ErrorCode::Shape, "ground-truth mask " + target.mask.shape_string() + " does not match alpha " +
                                 layer.alpha.shape_string());
    in.layers.push_back(std::move(layer));
    in.targets.push_back(std::move(target));
  });
}

pe_status pe_loss_set_full_frame(pe_loss *loss, int full_frame) {
  return guarded([&] {
    deref(loss, "loss").inputs.region = full_frame ? loss::ReconRegion::FullFrame : loss::ReconRegion::BoxUnion;
  });
}

pe_status pe_loss_evaluate(const pe_loss *loss, pe_loss_report *out) {
  return guarded([&] {
    auto &o = deref(out, "out");
    const auto r = loss::total_shape_loss(deref(loss, "loss").inputs);
    o.layers = static_cast<int>(r.shape_losses.size());
    o.no_layers = r.no_layers ? 1 : 0;
    o.recon = r.recon;
    o.total = r.total;
    o.shape_mean = r.total - r.recon;
  });
}

pe_status pe_loss_shape_term(const pe_loss *loss, int layer, double *out) {
  return guarded([&] {
    const auto &in = deref(loss, "loss").inputs;
    if (layer < 0 || static_cast<size_t>(layer) >= in.layers.size())
      fail(ErrorCode::InvalidArgument, "layer index " + std::to_string(layer) + " out of range");
    const auto k = static_cast<size_t>(layer);
    deref(out, "out") = loss::shape_loss_k(in.layers[k].alpha, in.targets[k]);
  });
}

pe_status pe_loss_gradients(const pe_loss *loss, int layer, pe_image **d_alpha, pe_image **d_rgb,
                            size_t *tie_points) {
  return guarded([&] {
    const auto &in = deref(loss, "loss").inputs;
    deref(d_alpha, "d_alpha");
    if (layer < 0 || static_cast<size_t>(layer) >= in.layers.size())
      fail(ErrorCode::InvalidArgument, "layer index " + std::to_string(layer) + " out of range");
    auto g = loss::loss_gradients(in);
    const auto k = static_cast<size_t>(layer);
    std::unique_ptr<pe_image> a(wrap(std::move(g.d_alpha[k])));
    if (d_rgb)
      *d_rgb = wrap(std::move(g.d_rgb[k]));
    if (tie_points)
      *tie_points = g.tie_points;
    *d_alpha = a.release();
  });
}

pe_status pe_loss_grad_check(const pe_loss *loss, double step, pe_grad_check *out) {
  return guarded([&] {
    auto &o = deref(out, "out");
    const auto r = loss::finite_difference_check(deref(loss, "loss").inputs, step);
    o.max_rel_error = r.max_rel_error;
    o.checked = r.checked;
    o.skipped_kinks = r.skipped_kinks;
  });
}

// ---- seam

void pe_seam_config_default(pe_seam_config *cfg) {
  if (!cfg)
    return;
  const seam::SeamConfig d;
  *cfg = {d.extension, d.shift, d.shift_steps, d.steps, d.strength, d.baseline ? 1 : 0};
}

pe_status pe_seam_inference(pe_denoiser_fn denoiser, void *user, const double *z_src, int channels, int height,
                            int width, const double *cond, int cond_channels, const pe_seam_config *cfg,
                            uint64_t seed, double *out) {
  return guarded([&] {
    deref(out, "out");
    if (!denoiser)
      throw NullPointer("denoiser is NULL");
    const Latent z = planar(z_src, channels, height, width, "z_src");
    const Latent c = planar(cond, cond_channels, height, width, "cond");
    seam::Denoiser fn = [&](const Latent &zt, const seam::StepInfo &step, const Latent &ct) {
      Latent v(zt.channels(), zt.height(), zt.width());
      const pe_step_info info{step.t, step.steps, step.tau, step.dt};
      const int rc = denoiser(user, zt.values().data(), zt.channels(), zt.height(), zt.width(), &info,
                              ct.values().data(), ct.channels(), v.values().data());
      if (rc != 0)
        throw CallbackFailure("denoiser callback returned " + std::to_string(rc) + " at step " +
                              std::to_string(step.t));
      return v;
    };
    const auto r = seam::run_seam_inference(fn, z, c, seam_cfg(cfg), seed);
    std::memcpy(out, r.values().data(), r.size() * sizeof(double));
  });
}

pe_status pe_seam_inference_toy(double edge_leak, int edge_width, const double *z_src, int channels, int height,
                                int width, const double *cond, int cond_channels, const pe_seam_config *cfg,
                                uint64_t seed, double *out) {
  return guarded([&] {
    deref(out, "out");
    const Latent z = planar(z_src, channels, height, width, "z_src");
    const Latent c = planar(cond, cond_channels, height, width, "cond");
    const seam::ToyDenoiser toy(edge_leak, edge_width);
    const auto r = seam::run_seam_inference(toy, z, c, seam_cfg(cfg), seed);
    std::memcpy(out, r.values().data(), r.size() * sizeof(double));
  });
}

pe_status pe_seam_discontinuity(const double *z, int channels, int height, int width, double *out) {
  return guarded([&] { deref(out, "out") = seam::seam_discontinuity(planar(z, channels, height, width, "z")); });
}

// ---- curriculum

void pe_mix_schedule_default(pe_mix_schedule *schedule) {
  if (!schedule)
    return;
  const curriculum::MixSchedule d;
  *schedule = {PE_PHASE_STAGE2_RAMP, d.ramp_steps, d.target_new, d.retained_old, {d.stage3[0], d.stage3[1], d.stage3[2]}};
}

pe_status pe_mix_probabilities(long long step, const pe_mix_schedule *schedule, double out[3], int *count) {
  return guarded([&] {
    deref(out, "out");
    const auto p = curriculum::mix_probabilities(step, schedule_of(schedule));
    for (size_t i = 0; i < p.size(); ++i)
      out[i] = p[i];
    if (count)
      *count = static_cast<int>(p.size());
  });
}

pe_status pe_sampler_create(uint64_t seed, uint32_t worker, pe_sampler **out) {
  return guarded([&] {
    deref(out, "out");
    *out = new pe_sampler{curriculum::StageSampler(seed, worker)};
  });
}

void pe_sampler_destroy(pe_sampler *sampler) { delete sampler; }

pe_status pe_sampler_sample(pe_sampler *sampler, long long step, const pe_mix_schedule *schedule, int *stage) {
  return guarded([&] {
    deref(stage, "stage") = deref(sampler, "sampler").sampler.sample(step, schedule_of(schedule));
  });
}

pe_status pe_sampler_counts(const pe_sampler *sampler, uint64_t counts[3], uint64_t *total) {
  return guarded([&] {
    const auto &log = deref(sampler, "sampler").sampler.log();
    deref(counts, "counts");
    for (size_t i = 0; i < 3; ++i)
      counts[i] = log.counts[i];
    if (total)
      *total = log.total;
  });
}

// ---- layout

pe_status pe_downsample_mask(const pe_image *mask, int factor, pe_downsample_mode mode, double threshold,
                             pe_image **out) {
  return guarded([&] {
    deref(out, "out");
    const auto m = layout::downsample_mask(deref(mask, "mask").image, factor,
                                           mode == PE_DOWNSAMPLE_AVERAGE ? layout::DownsampleMode::AverageThreshold
                                                                         : layout::DownsampleMode::MaxPool,
                                           threshold);
    *out = wrap(to_image(m));
  });
}

pe_status pe_bundle_stage1(const double *z_t, const double *z_0, int channels, const double *m, int height,
                           int width, pe_bundle **out) {
  return guarded([&] {
    deref(out, "out");
    auto b = layout::build_stage1_input(planar(z_t, channels, height, width, "z_t"),
                                        planar(z_0, channels, height, width, "z_0"),
                                        planar(m, 1, height, width, "m"));
    auto text = b.manifest_text();
    *out = new pe_bundle{std::move(b), std::move(text)};
  });
}

pe_status pe_bundle_stage2(const double *z_tgt_t, const double *z_src, int channels, int height, int width,
                           int layers, const double *const *layer_latents, const double *const *ref_latents,
                           const double *const *box_masks, pe_bundle **out) {
  return guarded([&] {
    deref(out, "out");
    if (layers < 0)
      fail(ErrorCode::InvalidArgument, "layer count must be nonnegative");
    layout::Stage2Inputs in;
    in.z_tgt_t = planar(z_tgt_t, channels, height, width, "z_tgt_t");
    in.z_src = planar(z_src, channels, height, width, "z_src");
    if (layers > 0) {
      deref(layer_latents, "layer_latents");
      deref(ref_latents, "ref_latents");
      deref(box_masks, "box_masks");
    }
    for (int k = 0; k < layers; ++k) {
      in.layer_latents.push_back(planar(layer_latents[k], channels, height, width, "layer latent"));
      in.ref_latents.push_back(planar(ref_latents[k], channels, height, width, "reference latent"));
      in.box_masks.push_back(planar(box_masks[k], 1, height, width, "box mask"));
    }
    auto bundles = layout::build_stage2_inputs(in);
    std::vector<std::unique_ptr<pe_bundle>> made;
    for (auto &b : bundles) {
      auto text = b.manifest_text();
      made.push_back(std::make_unique<pe_bundle>(pe_bundle{std::move(b), std::move(text)}));
    }
    for (size_t i = 0; i < made.size(); ++i)
      out[i] = made[i].release();
  });
}

void pe_bundle_destroy(pe_bundle *bundle) { delete bundle; }
int pe_bundle_channels(const pe_bundle *b) { return b ? b->bundle.tensor().channels() : 0; }
int pe_bundle_height(const pe_bundle *b) { return b ? b->bundle.tensor().height() : 0; }
int pe_bundle_width(const pe_bundle *b) { return b ? b->bundle.tensor().width() : 0; }
int pe_bundle_layer_id(const pe_bundle *b) { return b ? b->bundle.layer_id() : -1; }
const double *pe_bundle_data(const pe_bundle *b) { return b ? b->bundle.tensor().values().data() : nullptr; }
const char *pe_bundle_manifest(const pe_bundle *b) { return b ? b->manifest.c_str() : ""; }

pe_status pe_bundle_dropout(const pe_bundle *bundle, double context_rate, double mask_rate, uint64_t seed,
                            pe_bundle **out) {
  return guarded([&] {
    deref(out, "out");
    auto b = layout::apply_conditioning_dropout(deref(bundle, "bundle").bundle, {context_rate, mask_rate}, seed);
    auto text = b.manifest_text();
    *out = new pe_bundle{std::move(b), std::move(text)};
  });
}

pe_status pe_rope3d_apply(const double *vec, int dim, int layer_id, double y, double x, const int *split,
                          double base, double *out) {
  return guarded([&] {
    deref(vec, "vec");
    deref(out, "out");
    if (dim <= 0)
      fail(ErrorCode::InvalidArgument, "dim must be positive");
    const auto s = split ? layout::RopeSplit{split[0], split[1], split[2]} : layout::RopeSplit::default_for(dim);
    const auto r = layout::rope3d_apply(std::span<const double>(vec, static_cast<size_t>(dim)), {layer_id, y, x},
                                        s, base);
    std::memcpy(out, r.data(), r.size() * sizeof(double));
  });
}

// ---- pairs

const char *pe_edit_type_name(pe_edit_type type) {
  if (type < PE_EDIT_ADDITION || type > PE_EDIT_GLOBAL_MODIFICATION)
    return "?";
  return pairs::edit_type_name(edit_type_of(type));
}

pe_status pe_parse_edit_type(const char *name, pe_edit_type *out) {
  return guarded([&] {
    const auto t = pairs::parse_edit_type(cstr(name, "name"));
    deref(out, "out") = static_cast<pe_edit_type>(static_cast<int>(t));
  });
}

pe_status pe_place_object(const pe_image *src, const pe_bbox *bbox, const pe_image *ref, pe_image **tgt,
                          pe_image **footprint, pe_image **shape) {
  return guarded([&] {
    deref(tgt, "tgt");
    deref(footprint, "footprint");
    auto r = pairs::ReferenceObject::from_image(deref(ref, "ref").image, "ref");
    auto p = pairs::place_object(deref(src, "src").image, box_of(bbox), r);
    std::unique_ptr<pe_image> t(wrap(std::move(p.tgt)));
    std::unique_ptr<pe_image> f(wrap(std::move(p.footprint)));
    if (shape)
      *shape = wrap(std::move(p.shape));
    *tgt = t.release();
    *footprint = f.release();
  });
}

pe_status pe_pair_make(pe_edit_type type, const pe_image *src, const pe_bbox *boxes, int box_count,
                       const pe_image *const *refs, const char *const *ref_ids, int ref_count, pe_pair **out) {
  return guarded([&] {
    deref(out, "out");
    const auto &s = deref(src, "src").image;
    if (box_count < 1 || ref_count < 1)
      fail(ErrorCode::InvalidArgument, "a pair needs at least one box and one reference");
    deref(boxes, "boxes");
    deref(refs, "refs");
    std::vector<pairs::ReferenceObject> r;
    for (int i = 0; i < ref_count; ++i) {
      std::string id = ref_ids && ref_ids[i] ? ref_ids[i] : "object" + std::to_string(i);
      r.push_back(pairs::ReferenceObject::from_image(deref(refs[i], "ref").image, std::move(id)));
    }
    auto need = [&](int nb, int nr) {
      if (box_count != nb || ref_count != nr)
        fail(ErrorCode::InvalidArgument, std::string(pe_edit_type_name(type)) + " expects " + std::to_string(nb) +
                                             " box(es) and " + std::to_string(nr) + " reference(s)");
    };
    const auto b0 = box_of(&boxes[0]);
    pairs::EditPair pair;
    switch (edit_type_of(type)) {
    case pairs::EditType::Addition: need(1, 1); pair = pairs::make_addition(s, b0, r[0]); break;
    case pairs::EditType::Removal: need(1, 1); pair = pairs::make_removal(s, b0, r[0]); break;
    case pairs::EditType::Replacement: need(1, 2); pair = pairs::make_replacement(s, b0, r[0], r[1]); break;
    case pairs::EditType::Movement: need(2, 1); pair = pairs::make_movement(s, b0, box_of(&boxes[1]), r[0]); break;
    case pairs::EditType::Modification:
      if (box_count != 1 || ref_count > 2)
        need(1, 2);
      pair = pairs::make_modification(s, b0, r[0], ref_count == 2 ? r[1] : pairs::make_variant(r[0]));
      break;
    case pairs::EditType::GlobalModification:
      fail(ErrorCode::Unsupported, "global_modification is reserved and not produced by the compositor");
    }
    auto h = std::make_unique<pe_pair>();
    h->images.push_back(pe_image{pair.src});
    h->images.push_back(pe_image{pair.tgt});
    for (const auto &f : pair.footprints)
      h->images.push_back(pe_image{f});
    h->pair = std::move(pair);
    *out = h.release();
  });
}

void pe_pair_destroy(pe_pair *pair) { delete pair; }
const pe_image *pe_pair_src(const pe_pair *p) { return p ? &p->images[0] : nullptr; }
const pe_image *pe_pair_tgt(const pe_pair *p) { return p ? &p->images[1] : nullptr; }
int pe_pair_footprint_count(const pe_pair *p) { return p ? static_cast<int>(p->images.size()) - 2 : 0; }

const pe_image *pe_pair_footprint(const pe_pair *p, int index) {
  if (!p || index < 0 || index >= pe_pair_footprint_count(p))
    return nullptr;
  return &p->images[static_cast<size_t>(index) + 2];
}

const char *pe_pair_instruction(const pe_pair *p) { return p ? p->pair.record.instruction.c_str() : ""; }

pe_status pe_pair_record(pe_pair *pair, const char *src_path, const char *tgt_path, const char **line) {
  return guarded([&] {
    auto &p = deref(pair, "pair");
    deref(line, "line");
    auto rec = p.pair.record;
    rec.src = src_path ? src_path : "";
    rec.tgt = tgt_path ? tgt_path : "";
    p.line = pairs::encode_record(rec);
    *line = p.line.c_str();
  });
}

pe_status pe_render_instruction(pe_edit_type type, const char *object, const char *object2, const pe_bbox *box,
                                const pe_bbox *box2, int width, int height, const char **out) {
  return guarded([&] {
    deref(out, "out");
    pairs::InstructionSlots slots;
    slots.object = cstr(object, "object");
    slots.object2 = object2 ? object2 : "";
    if (type != PE_EDIT_GLOBAL_MODIFICATION)
      slots.box = box_of(box);
    if (box2)
      slots.box2 = box_of(box2);
    slots.width = width;
    slots.height = height;
    *out = keep(pairs::render_instruction(edit_type_of(type), slots));
  });
}

void pe_dataset_config_default(pe_dataset_config *cfg) {
  if (!cfg)
    return;
  const pairs::DatasetConfig d;
  *cfg = {nullptr, nullptr,         nullptr,        nullptr,        d.seed, nullptr,
          d.lat_min_deg, d.lat_max_deg, d.fov_min_deg, d.fov_max_deg, nullptr};
}

pe_status pe_dataset_run(const pe_dataset_config *cfg, size_t *sources, size_t *triplets) {
  return guarded([&] {
    const auto &c = deref(cfg, "cfg");
    pairs::DatasetConfig d;
    d.src_dir = cstr(c.src_dir, "src_dir");
    d.refs_dir = cstr(c.refs_dir, "refs_dir");
    d.out_dir = cstr(c.out_dir, "out_dir");
    if (c.manifest)
      d.manifest = c.manifest;
    d.seed = c.seed;
    if (c.types)
      d.types = parse_types(c.types);
    d.lat_min_deg = c.lat_min_deg;
    d.lat_max_deg = c.lat_max_deg;
    d.fov_min_deg = c.fov_min_deg;
    d.fov_max_deg = c.fov_max_deg;
    if (c.format)
      d.format = c.format;
    const auto s = pairs::build_dataset(d);
    if (sources)
      *sources = s.sources;
    if (triplets)
      *triplets = s.triplets;
  });
}

pe_status pe_manifest_read(const char *path, pe_manifest **out) {
  return guarded([&] {
    deref(out, "out");
    auto m = std::make_unique<pe_manifest>();
    for (const auto &t : pairs::read_manifest(cstr(path, "path")))
      m->lines.push_back(pairs::encode_record(t));
    *out = m.release();
  });
}

void pe_manifest_destroy(pe_manifest *manifest) { delete manifest; }
size_t pe_manifest_count(const pe_manifest *m) { return m ? m->lines.size() : 0; }

const char *pe_manifest_record(const pe_manifest *m, size_t index) {
  if (!m || index >= m->lines.size())
    return nullptr;
  return m->lines[index].c_str();
}

} // extern "C"
