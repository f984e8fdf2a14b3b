#include "boxforge/coco_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "boxforge/error.hpp"
#include "boxforge/geometry.hpp"

namespace boxforge::coco {

using nlohmann::json;

namespace {

json parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("malformed JSON in " + path.string() + " at byte " +
                     std::to_string(e.byte) + ": " + e.what());
  }
}

const json& require_field(const json& obj, const char* name,
                          const std::string& where) {
  const auto it = obj.find(name);
  if (it == obj.end()) {
    throw DataError(where + ": missing field '" + name + "'");
  }
  return *it;
}

PixelRect read_bbox(const json& arr, const std::string& where) {
  if (!arr.is_array() || arr.size() != 4) {
    throw DataError(where + ": bbox must be a 4-element array");
  }
  return {arr[0].get<double>(), arr[1].get<double>(), arr[2].get<double>(),
          arr[3].get<double>()};
}

void report_dangling(const std::set<std::int64_t>& images,
                     const std::set<std::int64_t>& categories,
                     const std::string& where) {
  if (images.empty() && categories.empty()) return;
  std::ostringstream msg;
  msg << where << ": referential integrity violated;";
  if (!images.empty()) {
    msg << " unknown image ids:";
    for (std::int64_t id : images) msg << ' ' << id;
    msg << ';';
  }
  if (!categories.empty()) {
    msg << " unknown category ids:";
    for (std::int64_t id : categories) msg << ' ' << id;
  }
  throw DataError(msg.str());
}

}  // namespace

DatasetIndex load_annotations(const std::filesystem::path& path) {
  const json j = parse_file(path);
  if (!j.is_object()) {
    throw DataError(path.string() + ": instances file must be a JSON object");
  }

  DatasetIndex index;
  for (const json& im : require_field(j, "images", path.string())) {
    ImageMeta meta;
    meta.image_id = require_field(im, "id", "images").get<std::int64_t>();
    meta.width = require_field(im, "width", "images").get<int>();
    meta.height = require_field(im, "height", "images").get<int>();
    meta.file_name = require_field(im, "file_name", "images").get<std::string>();
    if (meta.width <= 0 || meta.height <= 0) {
      throw DataError("image " + std::to_string(meta.image_id) +
                      ": non-positive dimensions");
    }
    index.images[meta.image_id] = std::move(meta);
  }
  for (const json& cat : require_field(j, "categories", path.string())) {
    const auto id = require_field(cat, "id", "categories").get<std::int64_t>();
    index.categories[id] =
        cat.contains("name") ? cat["name"].get<std::string>() : std::string{};
  }

  std::set<std::int64_t> dangling_images;
  std::set<std::int64_t> dangling_categories;
  for (const json& ann : require_field(j, "annotations", path.string())) {
    GroundTruth gt;
    gt.image_id = require_field(ann, "image_id", "annotations").get<std::int64_t>();
    gt.category_id =
        require_field(ann, "category_id", "annotations").get<std::int64_t>();
    gt.ignore = ann.value("iscrowd", 0) != 0;
    const PixelRect rect = read_bbox(require_field(ann, "bbox", "annotations"),
                                     "annotations");

    const auto img = index.images.find(gt.image_id);
    if (img == index.images.end()) dangling_images.insert(gt.image_id);
    if (!index.categories.count(gt.category_id)) {
      dangling_categories.insert(gt.category_id);
    }
    if (img != index.images.end()) {
      const BBox raw = from_pixels(rect, img->second);
      gt.bbox = clamp_to_unit(raw);
      if (gt.bbox != raw) ++index.load_report.clamped_boxes;
    }
    index.annotations.push_back(gt);
    index.annotation_weights.push_back(ann.value("weight", 1.0));
  }
  report_dangling(dangling_images, dangling_categories, path.string());

  for (const GroundTruth& gt : index.annotations) {
    ++index.instance_counts[gt.category_id];
  }
  return index;
}

void save_annotations(const DatasetIndex& index,
                      const std::filesystem::path& path) {
  json j;
  j["images"] = json::array();
  for (const auto& [id, meta] : index.images) {
    j["images"].push_back({{"id", id},
                           {"width", meta.width},
                           {"height", meta.height},
                           {"file_name", meta.file_name}});
  }
  j["categories"] = json::array();
  for (const auto& [id, name] : index.categories) {
    j["categories"].push_back({{"id", id}, {"name", name}});
  }
  j["annotations"] = json::array();
  for (std::size_t i = 0; i < index.annotations.size(); ++i) {
    const GroundTruth& gt = index.annotations[i];
    const ImageMeta& meta = index.images.at(gt.image_id);
    const PixelRect rect = to_pixels(gt.bbox, meta);
    json ann = {{"id", static_cast<std::int64_t>(i) + 1},
                {"image_id", gt.image_id},
                {"category_id", gt.category_id},
                {"bbox", {rect.x, rect.y, rect.w, rect.h}},
                {"area", rect.w * rect.h},
                {"iscrowd", gt.ignore ? 1 : 0}};
    if (i < index.annotation_weights.size() &&
        index.annotation_weights[i] != 1.0) {
      ann["weight"] = index.annotation_weights[i];
    }
    j["annotations"].push_back(std::move(ann));
  }

  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump();
  if (!out) throw IoError("write failed for " + path.string());
}

namespace {

std::vector<Detection> load_results_impl(const std::filesystem::path& path,
                                         const DatasetIndex& index,
                                         const ImageMeta* fixed_dims,
                                         int model_id) {
  const json j = parse_file(path);
  if (!j.is_array()) {
    throw DataError(path.string() + ": results file must be a JSON array");
  }

  std::vector<Detection> dets;
  std::set<std::int64_t> dangling;
  dets.reserve(j.size());
  for (const json& row : j) {
    Detection d;
    d.image_id = require_field(row, "image_id", "results").get<std::int64_t>();
    d.category_id =
        require_field(row, "category_id", "results").get<std::int64_t>();
    d.score = require_field(row, "score", "results").get<double>();
    if (!(d.score >= 0.0 && d.score <= 1.0)) {
      throw DataError(path.string() + ": score " + std::to_string(d.score) +
                      " outside [0, 1] for image " + std::to_string(d.image_id));
    }
    d.model_id = model_id;
    const PixelRect rect = read_bbox(require_field(row, "bbox", "results"),
                                     "results");

    const auto img = index.images.find(d.image_id);
    if (img == index.images.end()) {
      dangling.insert(d.image_id);
      continue;
    }
    const ImageMeta& dims = fixed_dims != nullptr ? *fixed_dims : img->second;
    d.bbox = clamp_to_unit(from_pixels(rect, dims));
    dets.push_back(d);
  }
  report_dangling(dangling, {}, path.string());
  return dets;
}

}  // namespace

std::vector<Detection> load_results(const std::filesystem::path& path,
                                    const DatasetIndex& index, int model_id) {
  return load_results_impl(path, index, nullptr, model_id);
}

std::vector<Detection> load_results_scaled(const std::filesystem::path& path,
                                           const DatasetIndex& index,
                                           int width, int height,
                                           int model_id) {
  if (width <= 0 || height <= 0) {
    throw ConfigError("load_results_scaled: dimensions must be positive");
  }
  ImageMeta dims;
  dims.width = width;
  dims.height = height;
  return load_results_impl(path, index, &dims, model_id);
}

void save_results(const std::vector<Detection>& dets,
                  const DatasetIndex& index,
                  const std::filesystem::path& path) {
  json j = json::array();
  for (const Detection& d : dets) {
    const auto img = index.images.find(d.image_id);
    if (img == index.images.end()) {
      throw DataError("save_results: unknown image id " +
                      std::to_string(d.image_id));
    }
    const PixelRect rect = to_pixels(d.bbox, img->second);
    j.push_back({{"image_id", d.image_id},
                 {"category_id", d.category_id},
                 {"bbox", {rect.x, rect.y, rect.w, rect.h}},
                 {"score", d.score}});
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump();
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace boxforge::coco
