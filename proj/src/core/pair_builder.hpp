// Copyright 2026 The panoedit Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "core/grid.hpp"
#include "core/sphere_geom.hpp"

namespace panoedit::pairs {

enum class EditType { Addition, Removal, Replacement, Movement, Modification, GlobalModification };

const char *edit_type_name(EditType type) noexcept;
EditType parse_edit_type(std::string_view name);

/// Perspective reference: color channels plus a trailing alpha channel.
struct ReferenceObject {
  Image rgba;
  std::string id;

  /// Alpha in [0, 1]; with `require_support`, at least one pixel visible.
  void validate(bool require_support = true) const;
  /// Reference with alpha taken from a white-background rendering when the
  /// image has no alpha channel.
  static ReferenceObject from_image(Image image, std::string id);
};

/// Largest camera field of view used for placement.
inline constexpr double kMaxPlacementFov = 150.0 * 3.14159265358979323846 / 180.0;

/// Camera looking at the bbox center with hfov = the bbox's longitude span
/// (capped) and the reference's aspect ratio. Rejects boxes touching a pole
/// row or frusta that would contain a pole.
geom::CameraPose camera_for_bbox(const geom::BBox &bbox, int width, int height, const ReferenceObject &ref);

struct Placement {
  Image tgt;
  Image footprint; // frustum footprint in ERP, {0, 1}
  Image shape;     // back-projected reference alpha
  geom::CameraPose camera;
  geom::BBox footprint_box;
};

/// Back-projects `ref` through camera_for_bbox() and over-composites it.
/// Pixels outside the footprint are copied from src unchanged.
Placement place_object(const Image &src, const geom::BBox &bbox, const ReferenceObject &ref);

struct EditTriplet {
  EditType type = EditType::Addition;
  std::string src;
  std::string tgt;
  std::string instruction;
  std::vector<geom::BBox> bboxes;
  std::vector<std::string> object_ids;

  friend bool operator==(const EditTriplet &, const EditTriplet &) = default;
};

/// An edit pair in memory; record paths are filled in when written.
struct EditPair {
  Image src;
  Image tgt;
  std::vector<Image> footprints;
  EditTriplet record;
};

EditPair make_addition(const Image &src, const geom::BBox &bbox, const ReferenceObject &ref);
/// Roles of an addition pair swapped.
EditPair make_removal(const EditPair &addition);
EditPair make_removal(const Image &src, const geom::BBox &bbox, const ReferenceObject &ref);
EditPair make_replacement(const Image &src, const geom::BBox &bbox, const ReferenceObject &first,
                          const ReferenceObject &second);
EditPair make_movement(const Image &src, const geom::BBox &from, const geom::BBox &to, const ReferenceObject &ref);
EditPair make_modification(const Image &src, const geom::BBox &bbox, const ReferenceObject &ref,
                           const ReferenceObject &variant);

/// Deterministic recolored copy used as a modification variant.
ReferenceObject make_variant(const ReferenceObject &ref);

struct InstructionSlots {
  std::string object;
  std::string object2;
  geom::BBox box;
  std::optional<geom::BBox> box2;
  int width = 0;
  int height = 0;
};

/// "upper left", "lower center", ...: vertical half by the bbox-center row,
/// horizontal third by the bbox-center column.
std::string region_phrase(const geom::BBox &box, int width, int height);

//   type          | template
//   --------------+-----------------------------------------------------
//   addition      | Add a {object} to the {region} of the panorama.
//   removal       | Remove the {object} from the {region} of the panorama.
//   replacement   | Replace the {object} in the {region} with a {object2}.
//   movement      | Move the {object} from the {region} to the {region2}.
//   modification  | Change the {object} in the {region} into a {object2}.
//   global_modif. | Edit the whole scene: {object}.
std::string render_instruction(EditType type, const InstructionSlots &slots);

/// One record per line, tab-separated:
///   edit_type  src  tgt  instruction  bboxes  object_ids
/// bboxes are "x0,y0,x1,y1" joined by ';' (x0 > x1 marks a seam-wrapping
/// box; numbers use shortest round-trip form); object ids are joined by ';'.
/// Text fields escape '\\', tab, newline, carriage return and ';' with a
/// backslash.
std::string encode_record(const EditTriplet &t);
EditTriplet decode_record(std::string_view line, std::size_t line_number);
void write_manifest(std::span<const EditTriplet> triplets, const std::filesystem::path &path);
std::vector<EditTriplet> read_manifest(const std::filesystem::path &path);

struct DatasetConfig {
  std::filesystem::path src_dir;
  std::filesystem::path refs_dir;
  std::filesystem::path out_dir;
  std::filesystem::path manifest;
  std::uint64_t seed = 0;
  std::vector<EditType> types = {EditType::Addition, EditType::Removal, EditType::Replacement, EditType::Movement,
                                 EditType::Modification};
  double lat_min_deg = -45.0; // bbox-center latitude band
  double lat_max_deg = 45.0;
  double fov_min_deg = 20.0; // bbox longitude span
  double fov_max_deg = 50.0;
  std::string format = "png";
};

struct DatasetSummary {
  std::size_t sources = 0;
  std::size_t triplets = 0;
};

/// For every source panorama (sorted by name) and every requested type,
/// samples boxes and references from a (seed, source index) stream, builds
/// the pair, writes both images and appends a manifest record.
DatasetSummary build_dataset(const DatasetConfig &cfg);

} // namespace panoedit::pairs
