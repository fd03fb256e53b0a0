// Copyright 2026 The panoedit Authors
// SPDX-License-Identifier: Apache-2.0
#include "core/pair_builder.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "core/error.hpp"
#include "core/image_io.hpp"
#include "core/layered_loss.hpp"
#include "core/philox.hpp"

namespace panoedit::pairs {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kPairStream = 0x7061697200000000ull;

struct TypeName {
  EditType type;
  const char *name;
};

constexpr TypeName kTypeNames[] = {
    {EditType::Addition, "addition"},         {EditType::Removal, "removal"},
    {EditType::Replacement, "replacement"},   {EditType::Movement, "movement"},
    {EditType::Modification, "modification"}, {EditType::GlobalModification, "global_modification"},
};

bool any_positive(const Image &mask) {
  return std::any_of(mask.values().begin(), mask.values().end(), [](double v) { return v > 0.0; });
}

std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char ch : s) {
    switch (ch) {
    case '\\': out += "\\\\"; break;
    case '\t': out += "\\t"; break;
    case '\n': out += "\\n"; break;
    case '\r': out += "\\r"; break;
    case ';': out += "\\;"; break;
    default: out += ch;
    }
  }
  return out;
}

[[noreturn]] void parse_fail(std::size_t line, const char *field, const std::string &why) {
  fail(ErrorCode::Parse, "manifest line " + std::to_string(line) + " field " + field + ": " + why);
}

// Splits on unescaped `sep`; pieces keep their escapes.
std::vector<std::string> split_escaped(std::string_view s, char sep) {
  std::vector<std::string> parts(1);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size()) {
      parts.back() += s[i];
      parts.back() += s[++i];
    } else if (s[i] == sep) {
      parts.emplace_back();
    } else {
      parts.back() += s[i];
    }
  }
  return parts;
}

std::string unescape(std::string_view s, std::size_t line, const char *field) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\') {
      out += s[i];
      continue;
    }
    if (i + 1 >= s.size())
      parse_fail(line, field, "dangling escape");
    switch (s[++i]) {
    case '\\': out += '\\'; break;
    case 't': out += '\t'; break;
    case 'n': out += '\n'; break;
    case 'r': out += '\r'; break;
    case ';': out += ';'; break;
    default: parse_fail(line, field, std::string("unknown escape \\") + s[i]);
    }
  }
  return out;
}

double parse_number(std::string_view s, std::size_t line) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty())
    parse_fail(line, "bboxes", "bad number '" + std::string(s) + "'");
  return v;
}

void require_distinct(const ReferenceObject &a, const ReferenceObject &b, const char *what) {
  if (a.id == b.id || a.rgba == b.rgba)
    fail(ErrorCode::InvalidArgument, std::string(what) + " needs two different references, got '" + a.id +
                                         "' twice");
}

EditPair pair_from(const Placement &a, const Placement &b, EditType type, std::vector<std::string> ids,
                   InstructionSlots slots) {
  // Instructions describe the recorded footprint boxes.
  slots.box = a.footprint_box;
  if (slots.box2)
    slots.box2 = b.footprint_box;
  EditPair pair;
  pair.src = a.tgt;
  pair.tgt = b.tgt;
  pair.footprints = {a.footprint, b.footprint};
  pair.record.type = type;
  pair.record.bboxes = {a.footprint_box, b.footprint_box};
  pair.record.object_ids = std::move(ids);
  pair.record.instruction = render_instruction(type, slots);
  return pair;
}

std::string object_name(const std::string &id) {
  std::string name = id;
  std::replace(name.begin(), name.end(), '_', ' ');
  return name;
}

} // namespace

const char *edit_type_name(EditType type) noexcept {
  for (const auto &t : kTypeNames)
    if (t.type == type)
      return t.name;
  return "?";
}

EditType parse_edit_type(std::string_view name) {
  for (const auto &t : kTypeNames)
    if (name == t.name)
      return t.type;
  fail(ErrorCode::InvalidArgument, "unknown edit type '" + std::string(name) + "'");
}

void ReferenceObject::validate(bool require_support) const {
  require(rgba.channels() >= 2, ErrorCode::Shape, "reference needs color channels plus alpha");
  require(!rgba.empty(), ErrorCode::InvalidArgument, "reference image is empty");
  const int a = rgba.channels() - 1;
  bool support = false;
  for (int row = 0; row < rgba.height(); ++row)
    for (int col = 0; col < rgba.width(); ++col) {
      const double v = rgba.at(col, row, a);
      if (!(v >= 0.0 && v <= 1.0))
        fail(ErrorCode::Domain, "reference '" + id + "' alpha outside [0, 1]");
      support = support || v > 0.0;
    }
  require(support || !require_support, ErrorCode::EmptyMask, ("reference '" + id + "' has empty alpha support").c_str());
}

ReferenceObject ReferenceObject::from_image(Image image, std::string id) {
  if (image.channels() == 2 || image.channels() == 4)
    return {std::move(image), std::move(id)};
  require(image.channels() == 3, ErrorCode::Shape, "reference must be RGB or RGBA");
  auto alpha = loss::extract_alpha_white_bg(image);
  if (alpha.empty)
    fail(ErrorCode::EmptyMask, "reference '" + id + "' has no foreground on white");
  Image rgba(image.width(), image.height(), 4);
  for (int row = 0; row < image.height(); ++row)
    for (int col = 0; col < image.width(); ++col) {
      for (int c = 0; c < 3; ++c)
        rgba.at(col, row, c) = image.at(col, row, c);
      rgba.at(col, row, 3) = alpha.mask.at(col, row);
    }
  return {std::move(rgba), std::move(id)};
}

geom::CameraPose camera_for_bbox(const geom::BBox &bbox, int width, int height, const ReferenceObject &ref) {
  geom::check_erp_extent(width, height);
  bbox.validate(width, height);
  if (bbox.y0 < 1.0 || bbox.y1 > height - 1.0)
    fail(ErrorCode::PoleBBox, "bbox rows [" + fmt_double(bbox.y0) + ", " + fmt_double(bbox.y1) +
                                  ") reach a pole row");
  const auto c = bbox.center(width);
  const auto dir = geom::erp_to_direction(c.col, c.row, width, height);
  geom::CameraPose cam;
  cam.yaw = dir.lon;
  cam.pitch = dir.lat;
  cam.roll = 0.0;
  cam.hfov = std::min(2.0 * kPi * bbox.width(width) / width, kMaxPlacementFov);
  cam.out_width = ref.rgba.width();
  cam.out_height = ref.rgba.height();
  cam.validate();
  const double half_v = std::atan(cam.tan_half_vfov());
  if (std::abs(cam.pitch) + half_v >= kPi / 2.0)
    fail(ErrorCode::PoleBBox, "camera frustum for bbox would contain a pole");
  return cam;
}

Placement place_object(const Image &src, const geom::BBox &bbox, const ReferenceObject &ref) {
  ref.validate(false);
  const int colors = src.channels();
  if (ref.rgba.channels() != colors + 1)
    fail(ErrorCode::Shape, "reference " + ref.rgba.shape_string() + " does not match source channels " +
                               std::to_string(colors) + " + alpha");
  Placement out;
  out.camera = camera_for_bbox(bbox, src.width(), src.height(), ref);
  auto bp = geom::backproject_to_erp(ref.rgba, out.camera, src.width(), src.height());
  out.tgt = src;
  out.shape = Image(src.width(), src.height(), 1);
  for (int row = 0; row < src.height(); ++row)
    for (int col = 0; col < src.width(); ++col) {
      if (bp.footprint.at(col, row) == 0.0)
        continue;
      const double a = bp.patch.at(col, row, colors);
      out.shape.at(col, row) = a;
      if (a == 0.0)
        continue;
      for (int ch = 0; ch < colors; ++ch)
        out.tgt.at(col, row, ch) = a * bp.patch.at(col, row, ch) + (1.0 - a) * src.at(col, row, ch);
    }
  out.footprint = std::move(bp.footprint);
  out.footprint_box = any_positive(out.footprint) ? geom::bbox_of_mask(out.footprint, 0.5) : bbox;
  return out;
}

EditPair make_addition(const Image &src, const geom::BBox &bbox, const ReferenceObject &ref) {
  auto p = place_object(src, bbox, ref);
  EditPair pair;
  pair.src = src;
  pair.tgt = std::move(p.tgt);
  pair.footprints = {p.footprint};
  pair.record.type = EditType::Addition;
  pair.record.bboxes = {p.footprint_box};
  pair.record.object_ids = {ref.id};
  pair.record.instruction =
      render_instruction(EditType::Addition, {object_name(ref.id), {}, p.footprint_box, {}, src.width(), src.height()});
  return pair;
}

EditPair make_removal(const EditPair &addition) {
  require(addition.record.type == EditType::Addition, ErrorCode::InvalidArgument,
          "removal is built from an addition pair");
  EditPair pair = addition;
  std::swap(pair.src, pair.tgt);
  pair.record.type = EditType::Removal;
  const int w = pair.src.width();
  const int h = pair.src.height();
  const std::string obj = addition.record.object_ids.empty() ? std::string("object")
                                                             : object_name(addition.record.object_ids.front());
  pair.record.instruction = render_instruction(EditType::Removal, {obj, {}, addition.record.bboxes.front(), {}, w, h});
  return pair;
}

EditPair make_removal(const Image &src, const geom::BBox &bbox, const ReferenceObject &ref) {
  return make_removal(make_addition(src, bbox, ref));
}

EditPair make_replacement(const Image &src, const geom::BBox &bbox, const ReferenceObject &first,
                          const ReferenceObject &second) {
  require_distinct(first, second, "replacement");
  const auto a = place_object(src, bbox, first);
  const auto b = place_object(src, bbox, second);
  return pair_from(a, b, EditType::Replacement, {first.id, second.id},
                   {object_name(first.id), object_name(second.id), bbox, {}, src.width(), src.height()});
}

EditPair make_movement(const Image &src, const geom::BBox &from, const geom::BBox &to, const ReferenceObject &ref) {
  const auto a = place_object(src, from, ref);
  const auto b = place_object(src, to, ref);
  return pair_from(a, b, EditType::Movement, {ref.id},
                   {object_name(ref.id), {}, from, to, src.width(), src.height()});
}

EditPair make_modification(const Image &src, const geom::BBox &bbox, const ReferenceObject &ref,
                           const ReferenceObject &variant) {
  require_distinct(ref, variant, "modification");
  const auto a = place_object(src, bbox, ref);
  const auto b = place_object(src, bbox, variant);
  return pair_from(a, b, EditType::Modification, {ref.id, variant.id},
                   {object_name(ref.id), object_name(variant.id), bbox, {}, src.width(), src.height()});
}

ReferenceObject make_variant(const ReferenceObject &ref) {
  ReferenceObject out{ref.rgba, ref.id + "_recolored"};
  const int colors = ref.rgba.channels() - 1;
  for (int row = 0; row < ref.rgba.height(); ++row)
    for (int col = 0; col < ref.rgba.width(); ++col)
      for (int c = 0; c < colors; ++c) {
        // Rotated, slightly compressed colors.
        const double v = ref.rgba.at(col, row, (c + 1) % colors);
        out.rgba.at(col, row, c) = 0.8 * v + 0.1;
      }
  return out;
}

std::string region_phrase(const geom::BBox &box, int width, int height) {
  const auto c = box.center(width);
  const char *vertical = c.row < height / 2.0 ? "upper" : "lower";
  const char *horizontal = c.col < width / 3.0 ? "left" : (c.col < 2.0 * width / 3.0 ? "center" : "right");
  return std::string(vertical) + " " + horizontal;
}

std::string render_instruction(EditType type, const InstructionSlots &s) {
  if (s.object.empty())
    fail(ErrorCode::InvalidArgument, "instruction needs an object slot");
  const bool needs_geometry = type != EditType::GlobalModification;
  if (needs_geometry && (s.width <= 0 || s.height <= 0))
    fail(ErrorCode::InvalidArgument, "instruction needs the panorama extent");
  auto region = [&] { return region_phrase(s.box, s.width, s.height); };
  auto need_object2 = [&] {
    if (s.object2.empty())
      fail(ErrorCode::InvalidArgument, std::string(edit_type_name(type)) + " instruction needs a second object");
  };
  switch (type) {
  case EditType::Addition: return "Add a " + s.object + " to the " + region() + " of the panorama.";
  case EditType::Removal: return "Remove the " + s.object + " from the " + region() + " of the panorama.";
  case EditType::Replacement:
    need_object2();
    return "Replace the " + s.object + " in the " + region() + " with a " + s.object2 + ".";
  case EditType::Movement:
    if (!s.box2)
      fail(ErrorCode::InvalidArgument, "movement instruction needs a destination box");
    return "Move the " + s.object + " from the " + region() + " to the " +
           region_phrase(*s.box2, s.width, s.height) + ".";
  case EditType::Modification:
    need_object2();
    return "Change the " + s.object + " in the " + region() + " into a " + s.object2 + ".";
  case EditType::GlobalModification: return "Edit the whole scene: " + s.object + ".";
  }
  fail(ErrorCode::InvalidArgument, "unknown edit type");
}

std::string encode_record(const EditTriplet &t) {
  std::string out = edit_type_name(t.type);
  out += '\t';
  out += escape(t.src);
  out += '\t';
  out += escape(t.tgt);
  out += '\t';
  out += escape(t.instruction);
  out += '\t';
  for (std::size_t i = 0; i < t.bboxes.size(); ++i) {
    const auto &b = t.bboxes[i];
    if (i)
      out += ';';
    out += fmt_double(b.x0) + ',' + fmt_double(b.y0) + ',' + fmt_double(b.x1) + ',' + fmt_double(b.y1);
  }
  out += '\t';
  for (std::size_t i = 0; i < t.object_ids.size(); ++i) {
    if (t.object_ids[i].empty())
      fail(ErrorCode::InvalidArgument, "object ids must be nonempty");
    if (i)
      out += ';';
    out += escape(t.object_ids[i]);
  }
  return out;
}

EditTriplet decode_record(std::string_view line, std::size_t n) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i)
    if (i == line.size() || line[i] == '\t') {
      fields.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  static const char *names[] = {"edit_type", "src", "tgt", "instruction", "bboxes", "object_ids"};
  if (fields.size() != 6)
    parse_fail(n, fields.size() < 6 ? names[fields.size()] : "object_ids",
               "expected 6 tab-separated fields, got " + std::to_string(fields.size()));
  EditTriplet t;
  bool known = false;
  for (const auto &tn : kTypeNames)
    if (fields[0] == tn.name) {
      t.type = tn.type;
      known = true;
    }
  if (!known)
    parse_fail(n, "edit_type", "unknown edit type '" + std::string(fields[0]) + "'");
  t.src = unescape(fields[1], n, "src");
  t.tgt = unescape(fields[2], n, "tgt");
  t.instruction = unescape(fields[3], n, "instruction");
  if (!fields[4].empty()) {
    for (const auto &box : split_escaped(fields[4], ';')) {
      std::vector<double> v;
      std::size_t s = 0;
      for (std::size_t i = 0; i <= box.size(); ++i)
        if (i == box.size() || box[i] == ',') {
          v.push_back(parse_number(std::string_view(box).substr(s, i - s), n));
          s = i + 1;
        }
      if (v.size() != 4)
        parse_fail(n, "bboxes", "expected 4 coordinates, got " + std::to_string(v.size()));
      t.bboxes.push_back({v[0], v[1], v[2], v[3]});
    }
  }
  if (!fields[5].empty()) {
    for (const auto &id : split_escaped(fields[5], ';')) {
      if (id.empty())
        parse_fail(n, "object_ids", "empty object id");
      t.object_ids.push_back(unescape(id, n, "object_ids"));
    }
  }
  return t;
}

void write_manifest(std::span<const EditTriplet> triplets, const std::filesystem::path &path) {
  std::string text;
  for (const auto &t : triplets)
    text += encode_record(t) + '\n';
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    fail(ErrorCode::Io, "cannot write manifest " + path.string());
  out << text;
  if (!out)
    fail(ErrorCode::Io, "failed writing manifest " + path.string());
}

std::vector<EditTriplet> read_manifest(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    fail(ErrorCode::Io, "cannot open manifest " + path.string());
  std::vector<EditTriplet> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    out.push_back(decode_record(line, n));
  }
  return out;
}

namespace {

std::vector<std::filesystem::path> list_images(const std::filesystem::path &dir) {
  if (!std::filesystem::is_directory(dir))
    fail(ErrorCode::Io, "not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto &e : std::filesystem::directory_iterator(dir)) {
    if (!e.is_regular_file())
      continue;
    const auto ext = e.path().extension().string();
    if (ext == ".png" || ext == ".pfm")
      files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

constexpr int kMoveRedraws = 32;

double deg(double d) { return d * kPi / 180.0; }

geom::BBox sample_box(PhiloxStream &rng, const DatasetConfig &cfg, const ReferenceObject &ref, int w, int h) {
  const double hfov = deg(cfg.fov_min_deg) + rng.uniform() * deg(cfg.fov_max_deg - cfg.fov_min_deg);
  const double half_v = std::atan(std::tan(hfov / 2.0) * ref.rgba.height() / ref.rgba.width());
  // Keep the frustum and the box clear of the pole rows.
  const double limit = kPi / 2.0 - half_v - deg(2.0);
  const double lo = std::max(deg(cfg.lat_min_deg), -limit);
  const double hi = std::min(deg(cfg.lat_max_deg), limit);
  if (!(lo <= hi))
    fail(ErrorCode::PoleBBox, "latitude band leaves no room for a " + fmt_double(hfov * 180.0 / kPi) +
                                  " degree view");
  const double lat = lo + rng.uniform() * (hi - lo);
  const double lon = -kPi + rng.uniform() * 2.0 * kPi;
  const auto c = geom::direction_to_erp({lon, lat}, w, h);
  const double bw = hfov / (2.0 * kPi) * w;
  const double bh = 2.0 * half_v / kPi * h;
  auto wrap = [w](double x) {
    double v = std::fmod(x, static_cast<double>(w));
    return v < 0.0 ? v + w : v;
  };
  return {wrap(c.col - bw / 2.0), std::max(1.0, c.row - bh / 2.0), wrap(c.col + bw / 2.0),
          std::min(h - 1.0, c.row + bh / 2.0)};
}

} // namespace

DatasetSummary build_dataset(const DatasetConfig &cfg) {
  require(cfg.fov_min_deg > 0.0 && cfg.fov_min_deg <= cfg.fov_max_deg && cfg.fov_max_deg < 180.0,
          ErrorCode::InvalidArgument, "fov range must satisfy 0 < min <= max < 180");
  require(cfg.lat_min_deg <= cfg.lat_max_deg && cfg.lat_min_deg >= -90.0 && cfg.lat_max_deg <= 90.0,
          ErrorCode::InvalidArgument, "latitude band must lie in [-90, 90] with min <= max");
  require(cfg.format == "png" || cfg.format == "pfm", ErrorCode::InvalidArgument, "format must be png or pfm");
  for (auto t : cfg.types)
    if (t == EditType::GlobalModification)
      fail(ErrorCode::Unsupported, "global_modification is reserved and not produced by the compositor");

  const auto sources = list_images(cfg.src_dir);
  const auto ref_paths = list_images(cfg.refs_dir);
  require(!ref_paths.empty(), ErrorCode::InvalidArgument, "reference directory has no images");
  std::vector<ReferenceObject> refs;
  for (const auto &p : ref_paths) {
    refs.push_back(ReferenceObject::from_image(io::load_image(p), p.stem().string()));
    refs.back().validate();
  }
  const bool needs_two = std::find(cfg.types.begin(), cfg.types.end(), EditType::Replacement) != cfg.types.end();
  require(!needs_two || refs.size() >= 2, ErrorCode::InvalidArgument, "replacement needs at least two references");

  std::filesystem::create_directories(cfg.out_dir);
  std::vector<EditTriplet> records;
  for (std::size_t si = 0; si < sources.size(); ++si) {
    Image src = io::load_image(sources[si]);
    geom::check_erp_extent(src.width(), src.height());
    if (src.channels() == 4)
      src = [&] {
        Image rgb(src.width(), src.height(), 3);
        for (int r = 0; r < src.height(); ++r)
          for (int c = 0; c < src.width(); ++c)
            for (int ch = 0; ch < 3; ++ch)
              rgb.at(c, r, ch) = src.at(c, r, ch);
        return rgb;
      }();
    require(src.channels() == 3, ErrorCode::Shape, "source panoramas must be RGB");
    PhiloxStream rng(cfg.seed, kPairStream + si);
    auto pick = [&] { return std::min(refs.size() - 1, static_cast<std::size_t>(rng.uniform() * refs.size())); };
    const int w = src.width();
    const int h = src.height();
    for (std::size_t ti = 0; ti < cfg.types.size(); ++ti) {
      const EditType type = cfg.types[ti];
      const auto &ref = refs[pick()];
      const auto box = sample_box(rng, cfg, ref, w, h);
      EditPair pair;
      switch (type) {
      case EditType::Addition: pair = make_addition(src, box, ref); break;
      case EditType::Removal: pair = make_removal(src, box, ref); break;
      case EditType::Replacement: {
        std::size_t j = pick();
        const auto &first = ref;
        if (&refs[j] == &first)
          j = (j + 1) % refs.size();
        pair = make_replacement(src, box, first, refs[j]);
        break;
      }
      case EditType::Movement: {
        // Redraw the destination until the instruction names a different region.
        auto dest = sample_box(rng, cfg, ref, w, h);
        for (int tries = 1; tries < kMoveRedraws && region_phrase(dest, w, h) == region_phrase(box, w, h); ++tries)
          dest = sample_box(rng, cfg, ref, w, h);
        pair = make_movement(src, box, dest, ref);
        break;
      }
      case EditType::Modification: pair = make_modification(src, box, ref, make_variant(ref)); break;
      case EditType::GlobalModification: break;
      }
      char stem[64];
      std::snprintf(stem, sizeof(stem), "%04zu_%02zu_%s", si, ti, edit_type_name(type));
      const auto src_path = cfg.out_dir / (std::string(stem) + "_src." + cfg.format);
      const auto tgt_path = cfg.out_dir / (std::string(stem) + "_tgt." + cfg.format);
      io::save_image(pair.src, src_path);
      io::save_image(pair.tgt, tgt_path);
      pair.record.src = src_path.generic_string();
      pair.record.tgt = tgt_path.generic_string();
      records.push_back(std::move(pair.record));
    }
  }
  write_manifest(records, cfg.manifest.empty() ? cfg.out_dir / "manifest.tsv" : cfg.manifest);
  return {sources.size(), records.size()};
}

} // namespace panoedit::pairs
