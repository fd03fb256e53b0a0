// Copyright 2026 The panoedit Authors
// SPDX-License-Identifier: Apache-2.0
//
// panoedit command-line tool. Links only the C API.
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "panoedit/panoedit.h"

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

struct OpError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(pe_status s, const std::string &what) {
  if (s != PE_OK)
    throw OpError(what + ": " + pe_last_error());
}

struct ImageDeleter {
  void operator()(pe_image *p) const { pe_image_destroy(p); }
};
using ImagePtr = std::unique_ptr<pe_image, ImageDeleter>;

struct BundleDeleter {
  void operator()(pe_bundle *p) const { pe_bundle_destroy(p); }
};
using BundlePtr = std::unique_ptr<pe_bundle, BundleDeleter>;

ImagePtr load(const std::string &path) {
  pe_image *img = nullptr;
  check(pe_image_load(path.c_str(), &img), "load");
  return ImagePtr(img);
}

void save(const pe_image *img, const std::string &path) { check(pe_image_save(img, path.c_str()), "save"); }

std::vector<double> planar_of(const pe_image *img) {
  std::vector<double> v(pe_image_size(img));
  check(pe_image_to_planar(img, v.data(), v.size()), "convert");
  return v;
}

ImagePtr image_of_planar(const std::vector<double> &v, int c, int h, int w) {
  pe_image *img = nullptr;
  check(pe_image_from_planar(v.data(), c, h, w, &img), "convert");
  return ImagePtr(img);
}

void parse_size(const std::string &text, int &h, int &w) {
  const auto x = text.find('x');
  if (x == std::string::npos)
    throw CLI::ValidationError("--size", "expected HxW, got '" + text + "'");
  try {
    h = std::stoi(text.substr(0, x));
    w = std::stoi(text.substr(x + 1));
  } catch (const std::exception &) {
    throw CLI::ValidationError("--size", "expected HxW, got '" + text + "'");
  }
  if (h <= 0 || w <= 0)
    throw CLI::ValidationError("--size", "dimensions must be positive");
}

pe_bbox parse_bbox(const std::string &text) {
  pe_bbox b{};
  if (std::sscanf(text.c_str(), "%lf,%lf,%lf,%lf", &b.x0, &b.y0, &b.x1, &b.y1) != 4)
    throw CLI::ValidationError("--bbox", "expected x0,y0,x1,y1, got '" + text + "'");
  return b;
}

void field(const char *name, double v) { std::printf("%s=%.17g\n", name, v); }
void field(const char *name, long long v) { std::printf("%s=%lld\n", name, v); }

// ---- subcommands

struct ProjectArgs {
  std::string input, output;
  double yaw = 0, pitch = 0, roll = 0, hfov = 90;
  int width = 256, height = 256;
};

int run_project(const ProjectArgs &a) {
  auto erp = load(a.input);
  const pe_camera cam{a.yaw * kDeg, a.pitch * kDeg, a.roll * kDeg, a.hfov * kDeg, a.width, a.height};
  pe_image *out = nullptr;
  check(pe_project_to_perspective(erp.get(), &cam, &out), "project");
  ImagePtr view(out);
  save(view.get(), a.output);
  return 0;
}

struct CubemapArgs {
  std::string input, out_dir, ext = "png";
  int face_size = 0;
};

int run_cubemap(const CubemapArgs &a) {
  auto erp = load(a.input);
  const int f = a.face_size > 0 ? a.face_size : pe_image_height(erp.get()) / 2;
  pe_image *faces[6] = {};
  check(pe_erp_to_cubemap(erp.get(), f, faces), "cubemap");
  std::vector<ImagePtr> owned;
  for (auto *face : faces)
    owned.emplace_back(face);
  std::filesystem::create_directories(a.out_dir);
  for (int i = 0; i < 6; ++i)
    save(faces[i], (std::filesystem::path(a.out_dir) / (std::string(pe_cube_face_name(i)) + "." + a.ext)).string());
  pe_image *back = nullptr;
  check(pe_cubemap_to_erp(faces, pe_image_width(erp.get()), pe_image_height(erp.get()), &back), "cubemap");
  ImagePtr round(back);
  double psnr = 0.0;
  check(pe_psnr(erp.get(), round.get(), nullptr, &psnr), "psnr");
  field("face_size", static_cast<long long>(f));
  field("roundtrip_psnr", psnr);
  return 0;
}

struct NoiseArgs {
  std::string output, size = "64x128", norm = "per-channel";
  int channels = 4;
  std::uint64_t seed = 0;
};

int run_noise(const NoiseArgs &a) {
  int h = 0, w = 0;
  parse_size(a.size, h, w);
  const pe_noise_norm norm = a.norm == "per-row" ? PE_NOISE_PER_ROW : a.norm == "none" ? PE_NOISE_NONE
                                                                                        : PE_NOISE_PER_CHANNEL;
  std::vector<double> v(static_cast<size_t>(a.channels) * h * w);
  check(pe_distorted_noise(a.channels, h, w, a.seed, norm, v.data(), v.size()), "noise");
  save(image_of_planar(v, a.channels, h, w).get(), a.output);
  return 0;
}

struct ModulateArgs {
  std::string attention, mask, output, residual;
};

int run_modulate(const ModulateArgs &a) {
  auto att = load(a.attention);
  auto mask = load(a.mask);
  pe_image *mod = nullptr, *res = nullptr;
  int degenerate = 0;
  check(pe_modulate(att.get(), mask.get(), &mod, &res, &degenerate), "modulate");
  ImagePtr m(mod), r(res);
  save(m.get(), a.output);
  if (!a.residual.empty())
    save(r.get(), a.residual);
  field("degenerate", static_cast<long long>(degenerate));
  return 0;
}

struct LossArgs {
  std::string src, tgt;
  std::vector<std::string> layers, bboxes;
  bool full_frame = false, grad_check = false, bbox_center = false;
  double step = 1e-4;
};

int run_loss(const LossArgs &a) {
  auto src = load(a.src);
  auto tgt = load(a.tgt);
  pe_loss *raw = nullptr;
  check(pe_loss_create(src.get(), tgt.get(), &raw), "loss");
  std::unique_ptr<pe_loss, void (*)(pe_loss *)> loss(raw, pe_loss_destroy);
  if (!a.bboxes.empty() && a.bboxes.size() != a.layers.size())
    throw CLI::ValidationError("--bbox", "give one --bbox per --layer or none");
  for (size_t k = 0; k < a.layers.size(); ++k) {
    const auto &layer_arg = a.layers[k];
    const auto p1 = layer_arg.find(':');
    const auto p2 = p1 == std::string::npos ? p1 : layer_arg.find(':', p1 + 1);
    if (p2 == std::string::npos)
      throw CLI::ValidationError("--layer", "expected RGB:ALPHA:GT, got '" + layer_arg + "'");
    auto rgb = load(layer_arg.substr(0, p1));
    auto alpha = load(layer_arg.substr(p1 + 1, p2 - p1 - 1));
    auto gt = load(layer_arg.substr(p2 + 1));
    pe_bbox box{};
    if (a.bboxes.empty())
      check(pe_bbox_of_mask(gt.get(), 0.5, &box), "layer " + std::to_string(k) + " bbox");
    else
      box = parse_bbox(a.bboxes[k]);
    check(pe_loss_add_layer(loss.get(), rgb.get(), alpha.get(), &box, gt.get(), a.bbox_center ? 1 : 0),
          "layer " + std::to_string(k));
  }
  check(pe_loss_set_full_frame(loss.get(), a.full_frame ? 1 : 0), "loss");
  pe_loss_report rep{};
  check(pe_loss_evaluate(loss.get(), &rep), "loss");
  field("layers", static_cast<long long>(rep.layers));
  for (int k = 0; k < rep.layers; ++k) {
    double s = 0.0;
    check(pe_loss_shape_term(loss.get(), k, &s), "loss");
    std::printf("shape[%d]=%.17g\n", k, s);
  }
  field("shape_mean", rep.shape_mean);
  field("recon", rep.recon);
  field("total", rep.total);
  field("no_layers", static_cast<long long>(rep.no_layers));
  if (!a.grad_check)
    return 0;
  pe_grad_check gc{};
  check(pe_loss_grad_check(loss.get(), a.step, &gc), "grad-check");
  field("grad_check_max_rel_error", gc.max_rel_error);
  field("grad_check_checked", static_cast<long long>(gc.checked));
  field("grad_check_skipped_kinks", static_cast<long long>(gc.skipped_kinks));
  const bool pass = gc.max_rel_error < 1e-4;
  field("grad_check_pass", static_cast<long long>(pass ? 1 : 0));
  if (!pass)
    std::fprintf(stderr, "panoedit: loss: gradient check exceeded 1e-4\n");
  return pass ? 0 : 1;
}

struct SeamArgs {
  std::string input, output;
  pe_seam_config cfg{};
  bool baseline = false;
  double edge_leak = 0.8;
  int edge_width = 2;
  std::uint64_t seed = 0;
};

int run_seamfix(SeamArgs a) {
  auto img = load(a.input);
  const int c = pe_image_channels(img.get());
  const int h = pe_image_height(img.get());
  const int w = pe_image_width(img.get());
  const auto z = planar_of(img.get());
  a.cfg.baseline = a.baseline ? 1 : 0;
  std::vector<double> out(z.size());
  check(pe_seam_inference_toy(a.edge_leak, a.edge_width, z.data(), c, h, w, z.data(), c, &a.cfg, a.seed, out.data()),
        "seamfix");
  double before = 0.0, after = 0.0;
  check(pe_seam_discontinuity(z.data(), c, h, w, &before), "seamfix");
  check(pe_seam_discontinuity(out.data(), c, h, w, &after), "seamfix");
  save(image_of_planar(out, c, h, w).get(), a.output);
  std::printf("seam_before=%.17g seam_after=%.17g\n", before, after);
  return 0;
}

struct ScheduleArgs {
  std::string phase = "ramp";
  long long ramp_steps = 1000, steps = 1000, every = 100;
  double target_new = 0.8, retained_old = 0.2;
  std::uint64_t seed = 0;
  long long draws = 0;
};

int run_schedule(const ScheduleArgs &a) {
  pe_mix_schedule s{};
  pe_mix_schedule_default(&s);
  if (a.phase != "ramp" && a.phase != "stage3")
    throw CLI::ValidationError("--phase", "expected ramp or stage3");
  s.phase = a.phase == "stage3" ? PE_PHASE_STAGE3 : PE_PHASE_STAGE2_RAMP;
  s.ramp_steps = a.ramp_steps;
  s.target_new = a.target_new;
  s.retained_old = a.retained_old;
  if (a.every <= 0)
    throw CLI::ValidationError("--every", "must be positive");
  std::printf("step p_stage1 p_stage2 p_stage3\n");
  for (long long t = 0; t <= a.steps; t += a.every) {
    double p[3] = {0, 0, 0};
    int n = 0;
    check(pe_mix_probabilities(t, &s, p, &n), "schedule");
    std::printf("%lld %.17g %.17g %.17g\n", t, p[0], p[1], p[2]);
  }
  if (a.draws > 0) {
    pe_sampler *raw = nullptr;
    check(pe_sampler_create(a.seed, 0, &raw), "schedule");
    std::unique_ptr<pe_sampler, void (*)(pe_sampler *)> sampler(raw, pe_sampler_destroy);
    for (long long i = 0; i < a.draws; ++i) {
      int stage = 0;
      check(pe_sampler_sample(sampler.get(), a.steps, &s, &stage), "schedule");
    }
    uint64_t counts[3] = {0, 0, 0}, total = 0;
    check(pe_sampler_counts(sampler.get(), counts, &total), "schedule");
    std::printf("draws step=%lld total=%llu stage1=%llu stage2=%llu stage3=%llu\n", a.steps,
                static_cast<unsigned long long>(total), static_cast<unsigned long long>(counts[0]),
                static_cast<unsigned long long>(counts[1]), static_cast<unsigned long long>(counts[2]));
  }
  return 0;
}

struct PairsArgs {
  std::string src_dir, refs_dir, out_dir, manifest, types, format = "png";
  std::uint64_t seed = 0;
  double lat_min = -45, lat_max = 45, fov_min = 20, fov_max = 50;
};

int run_pairs(const PairsArgs &a) {
  pe_dataset_config cfg{};
  pe_dataset_config_default(&cfg);
  cfg.src_dir = a.src_dir.c_str();
  cfg.refs_dir = a.refs_dir.c_str();
  cfg.out_dir = a.out_dir.c_str();
  cfg.manifest = a.manifest.empty() ? nullptr : a.manifest.c_str();
  cfg.seed = a.seed;
  cfg.types = a.types.empty() ? nullptr : a.types.c_str();
  cfg.lat_min_deg = a.lat_min;
  cfg.lat_max_deg = a.lat_max;
  cfg.fov_min_deg = a.fov_min;
  cfg.fov_max_deg = a.fov_max;
  cfg.format = a.format.c_str();
  size_t sources = 0, triplets = 0;
  check(pe_dataset_run(&cfg, &sources, &triplets), "pairs");
  field("sources", static_cast<long long>(sources));
  field("triplets", static_cast<long long>(triplets));
  return 0;
}

struct LayoutArgs {
  int stage = 1, channels = 4, layers = 2;
  std::string size = "8x16", mask, output;
  int factor = 8;
  double context_drop = 0.0, mask_drop = 0.0;
  std::uint64_t seed = 0;
};

std::vector<double> noise_block(int c, int h, int w, std::uint64_t seed) {
  std::vector<double> v(static_cast<size_t>(c) * h * w);
  check(pe_gaussian_field(c, h, w, seed, v.data(), v.size()), "layout");
  return v;
}

int run_layout(const LayoutArgs &a) {
  int h = 0, w = 0;
  parse_size(a.size, h, w);
  std::vector<BundlePtr> bundles;
  const int c = a.channels;
  if (a.stage == 1) {
    std::vector<double> m(static_cast<size_t>(h) * w, 1.0);
    if (!a.mask.empty()) {
      auto full = load(a.mask);
      pe_image *down = nullptr;
      check(pe_downsample_mask(full.get(), a.factor, PE_DOWNSAMPLE_MAX, 0.5, &down), "layout");
      ImagePtr d(down);
      h = pe_image_height(d.get());
      w = pe_image_width(d.get());
      m = planar_of(d.get());
    }
    const auto zt = noise_block(c, h, w, a.seed);
    const auto z0 = noise_block(c, h, w, a.seed + 1);
    pe_bundle *b = nullptr;
    check(pe_bundle_stage1(zt.data(), z0.data(), c, m.data(), h, w, &b), "layout");
    bundles.emplace_back(b);
  } else if (a.stage == 2) {
    if (a.layers < 0)
      throw CLI::ValidationError("--layers", "must be nonnegative");
    const auto zt = noise_block(c, h, w, a.seed);
    const auto zs = noise_block(c, h, w, a.seed + 1);
    std::vector<std::vector<double>> lat, ref, box;
    std::vector<const double *> lp, rp, bp;
    for (int k = 0; k < a.layers; ++k) {
      lat.push_back(noise_block(c, h, w, a.seed + 2 + 2 * k));
      ref.push_back(noise_block(c, h, w, a.seed + 3 + 2 * k));
      // Vertical strips, one per layer.
      std::vector<double> m(static_cast<size_t>(h) * w, 0.0);
      for (int y = 0; y < h; ++y)
        for (int x = k * w / a.layers; x < (k + 1) * w / a.layers; ++x)
          m[static_cast<size_t>(y) * w + x] = 1.0;
      box.push_back(std::move(m));
    }
    for (int k = 0; k < a.layers; ++k) {
      lp.push_back(lat[k].data());
      rp.push_back(ref[k].data());
      bp.push_back(box[k].data());
    }
    std::vector<pe_bundle *> raw(static_cast<size_t>(a.layers) + 1, nullptr);
    check(pe_bundle_stage2(zt.data(), zs.data(), c, h, w, a.layers, lp.data(), rp.data(), bp.data(), raw.data()),
          "layout");
    for (auto *b : raw)
      bundles.emplace_back(b);
  } else {
    throw CLI::ValidationError("--stage", "expected 1 or 2");
  }
  if (a.context_drop > 0.0 || a.mask_drop > 0.0)
    for (auto &b : bundles) {
      pe_bundle *d = nullptr;
      check(pe_bundle_dropout(b.get(), a.context_drop, a.mask_drop, a.seed, &d), "layout");
      b.reset(d);
    }
  for (size_t i = 0; i < bundles.size(); ++i) {
    std::printf("# bundle %zu layer_id=%d channels=%d size=%dx%d\n", i, pe_bundle_layer_id(bundles[i].get()),
                pe_bundle_channels(bundles[i].get()), pe_bundle_height(bundles[i].get()),
                pe_bundle_width(bundles[i].get()));
    std::fputs(pe_bundle_manifest(bundles[i].get()), stdout);
  }
  if (!a.output.empty()) {
    const auto *b = bundles.front().get();
    const int bc = pe_bundle_channels(b), bh = pe_bundle_height(b), bw = pe_bundle_width(b);
    std::vector<double> v(pe_bundle_data(b), pe_bundle_data(b) + static_cast<size_t>(bc) * bh * bw);
    save(image_of_planar(v, bc, bh, bw).get(), a.output);
  }
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"panoedit: geometry toolkit for 360-degree panorama editing", "panoedit"};
  app.set_version_flag("--version", std::string(pe_version()));
  app.require_subcommand(1);
  std::uint64_t seed = 0;

  auto add_seed = [&](CLI::App *sub, std::uint64_t &target) { sub->add_option("--seed", target, "Random seed"); };

  ProjectArgs pa;
  auto *project = app.add_subcommand("project", "Render a perspective view from an ERP panorama");
  project->add_option("--input,-i", pa.input, "ERP image (PNG or PFM)")->required();
  project->add_option("--output,-o", pa.output, "Output image")->required();
  project->add_option("--yaw", pa.yaw, "Yaw in degrees");
  project->add_option("--pitch", pa.pitch, "Pitch in degrees");
  project->add_option("--roll", pa.roll, "Roll in degrees");
  project->add_option("--hfov", pa.hfov, "Horizontal field of view in degrees");
  project->add_option("--width", pa.width, "Output width");
  project->add_option("--height", pa.height, "Output height");
  add_seed(project, seed);

  CubemapArgs ca;
  auto *cubemap = app.add_subcommand("cubemap", "Split an ERP panorama into six cube faces");
  cubemap->add_option("--input,-i", ca.input, "ERP image")->required();
  cubemap->add_option("--out-dir", ca.out_dir, "Directory for the faces")->required();
  cubemap->add_option("--face-size", ca.face_size, "Face size in pixels (default H/2)");
  cubemap->add_option("--ext", ca.ext, "Face file extension")->check(CLI::IsMember({"png", "pfm"}));
  add_seed(cubemap, seed);

  NoiseArgs na;
  auto *noise = app.add_subcommand("noise", "Write latitude-distorted Gaussian noise as PFM");
  noise->add_option("--output,-o", na.output, "Output PFM")->required();
  noise->add_option("--size", na.size, "Latent size HxW");
  noise->add_option("--channels", na.channels, "Latent channels")->check(CLI::PositiveNumber);
  noise->add_option("--norm", na.norm, "Normalization")->check(CLI::IsMember({"per-channel", "per-row", "none"}));
  add_seed(noise, na.seed);

  ModulateArgs ma;
  auto *modulate = app.add_subcommand("modulate", "Apply distortion-aware attention modulation");
  modulate->add_option("--attention", ma.attention, "Attention map")->required();
  modulate->add_option("--mask", ma.mask, "Layout mask")->required();
  modulate->add_option("--output,-o", ma.output, "Modulated map")->required();
  modulate->add_option("--residual", ma.residual, "Optional residual output");
  add_seed(modulate, seed);

  LossArgs la;
  auto *loss = app.add_subcommand("loss", "Report layered shape and reconstruction losses");
  loss->add_option("--src", la.src, "Source image")->required();
  loss->add_option("--tgt", la.tgt, "Target image")->required();
  loss->add_option("--layer", la.layers, "Layer as RGB:ALPHA:GT image paths (repeatable)");
  loss->add_option("--bbox", la.bboxes, "Layer box x0,y0,x1,y1 (repeatable, default from GT mask)");
  loss->add_flag("--full-frame", la.full_frame, "Reconstruction over the whole frame");
  loss->add_flag("--bbox-center", la.bbox_center, "Latitude weight at the box center");
  loss->add_flag("--grad-check", la.grad_check, "Run the finite-difference gradient check");
  loss->add_option("--step", la.step, "Finite-difference step");
  add_seed(loss, seed);

  SeamArgs sa;
  pe_seam_config_default(&sa.cfg);
  auto *seamfix = app.add_subcommand("seamfix", "Boundary-consistent inference with the toy denoiser");
  seamfix->add_option("--input,-i", sa.input, "Circularly continuous target image")->required();
  seamfix->add_option("--output,-o", sa.output, "Output image")->required();
  seamfix->add_option("--b", sa.cfg.extension, "Boundary extension width");
  seamfix->add_option("--s", sa.cfg.shift, "Cyclic shift per early step");
  seamfix->add_option("--K", sa.cfg.shift_steps, "Number of shifted steps");
  seamfix->add_option("--T", sa.cfg.steps, "Number of denoising steps");
  seamfix->add_option("--strength", sa.cfg.strength, "Initial noise level");
  seamfix->add_flag("--baseline", sa.baseline, "Disable extension, roll and blending");
  seamfix->add_option("--edge-leak", sa.edge_leak, "Toy denoiser edge leak");
  seamfix->add_option("--edge-width", sa.edge_width, "Toy denoiser edge width in columns");
  add_seed(seamfix, sa.seed);

  ScheduleArgs sc;
  auto *schedule = app.add_subcommand("schedule", "Print the curriculum mixing table");
  schedule->add_option("--phase", sc.phase, "ramp or stage3");
  schedule->add_option("--ramp-steps", sc.ramp_steps, "Ramp length");
  schedule->add_option("--steps", sc.steps, "Last step in the table");
  schedule->add_option("--every", sc.every, "Table stride");
  schedule->add_option("--target-new", sc.target_new, "Stage-2 share at the end of the ramp");
  schedule->add_option("--retained-old", sc.retained_old, "Stage-1 share kept after the ramp");
  schedule->add_option("--draws", sc.draws, "Also draw this many stages at --steps");
  add_seed(schedule, sc.seed);

  PairsArgs pp;
  auto *pairs = app.add_subcommand("pairs", "Build synthetic edit pairs and a manifest");
  pairs->add_option("--src-dir", pp.src_dir, "Directory of ERP sources")->required();
  pairs->add_option("--refs-dir", pp.refs_dir, "Directory of reference objects")->required();
  pairs->add_option("--out-dir", pp.out_dir, "Output directory")->required();
  pairs->add_option("--manifest", pp.manifest, "Manifest path (default <out-dir>/manifest.tsv)");
  pairs->add_option("--types", pp.types, "Comma-separated edit types");
  pairs->add_option("--lat-min", pp.lat_min, "Lowest box-center latitude in degrees");
  pairs->add_option("--lat-max", pp.lat_max, "Highest box-center latitude in degrees");
  pairs->add_option("--fov-min", pp.fov_min, "Smallest box width in degrees");
  pairs->add_option("--fov-max", pp.fov_max, "Largest box width in degrees");
  pairs->add_option("--format", pp.format, "Image format")->check(CLI::IsMember({"png", "pfm"}));
  add_seed(pairs, pp.seed);

  LayoutArgs ly;
  auto *layout = app.add_subcommand("layout", "Dump conditioning bundle manifests");
  layout->add_option("--stage", ly.stage, "1 or 2");
  layout->add_option("--channels", ly.channels, "Latent channels")->check(CLI::PositiveNumber);
  layout->add_option("--size", ly.size, "Latent size HxW");
  layout->add_option("--layers", ly.layers, "Object layers for stage 2");
  layout->add_option("--mask", ly.mask, "Stage-1 edit mask image");
  layout->add_option("--factor", ly.factor, "Mask downsampling factor");
  layout->add_option("--context-drop", ly.context_drop, "Context dropout rate");
  layout->add_option("--mask-drop", ly.mask_drop, "Mask dropout rate");
  layout->add_option("--output,-o", ly.output, "Write the first bundle tensor as PFM");
  add_seed(layout, ly.seed);

  if (argc > 1 && argv[1][0] != '-') {
    bool known = false;
    for (const auto *sub : app.get_subcommands({}))
      known = known || sub->get_name() == argv[1];
    if (!known) {
      std::cerr << "panoedit: unknown subcommand '" << argv[1] << "'\n\n" << app.help();
      return 2;
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    if (e.get_exit_code() == 0)
      return app.exit(e);
    app.exit(e, std::cerr, std::cerr);
    return 2;
  }

  try {
    if (*project)
      return run_project(pa);
    if (*cubemap)
      return run_cubemap(ca);
    if (*noise)
      return run_noise(na);
    if (*modulate)
      return run_modulate(ma);
    if (*loss)
      return run_loss(la);
    if (*seamfix)
      return run_seamfix(sa);
    if (*schedule)
      return run_schedule(sc);
    if (*pairs)
      return run_pairs(pp);
    if (*layout)
      return run_layout(ly);
  } catch (const CLI::ValidationError &e) {
    std::cerr << "panoedit: " << e.what() << "\n";
    return 2;
  } catch (const OpError &e) {
    std::cerr << "panoedit: " << e.what() << "\n";
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "panoedit: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
