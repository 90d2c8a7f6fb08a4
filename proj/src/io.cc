// Copyright 2026 The propeval Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "propeval/io.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "json.hpp"
#include "propeval/errors.h"

namespace propeval {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;
using json = nlohmann::json;

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::string& path, const std::string& content) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError(path, "cannot open file for writing");
  out << content;
  if (!out) throw InputError(path, "write failed");
}

namespace {

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool ParseNumber(const std::string& text, double* out) {
  const std::string t = Trim(text);
  if (t.empty()) return false;
  const char* first = t.data();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), *out);
  return ec == std::errc() && ptr == t.data() + t.size() && std::isfinite(*out);
}

int LineOfOffset(const std::string& text, size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + offset, '\n'));
}

json ParseJson(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(source, std::string("malformed JSON: ") + e.what(),
                     LineOfOffset(text, e.byte));
  }
}

// Clips to the image, warning when that changes the box. Throws if nothing
// remains.
BoundingBox ClipOrReject(double x0, double y0, double x1, double y1,
                         const ImageRecord& im, const std::string& source,
                         const std::string& what) {
  auto raw = BoundingBox::TryMake(x0, y0, x1, y1);
  if (!raw) throw InputError(source, what + ": degenerate box");
  auto clipped = raw->ClipTo(static_cast<double>(im.width),
                             static_cast<double>(im.height));
  if (!clipped) {
    throw InputError(source, what + ": box outside image '" + im.image_id + "'");
  }
  if (!(*clipped == *raw)) {
    Warn(source + ": " + what + ": box clipped to bounds of image '" +
         im.image_id + "'");
  }
  return *clipped;
}

// ---- VOC ----

namespace pt = boost::property_tree;

const pt::ptree& RequireChild(const pt::ptree& node, const std::string& key,
                              const std::string& source,
                              const std::string& path) {
  auto it = node.find(key);
  if (it == node.not_found()) {
    throw InputError(source, "missing element <" + path + key + ">");
  }
  return it->second;
}

double RequireNumber(const pt::ptree& node, const std::string& key,
                     const std::string& source, const std::string& path) {
  const std::string text = RequireChild(node, key, source, path).data();
  double v;
  if (!ParseNumber(text, &v)) {
    throw InputError(source, "element <" + path + key +
                                 "> is not a number: '" + Trim(text) + "'");
  }
  return v;
}

}  // namespace

Dataset ParseVocAnnotations(std::vector<VocDocument> documents,
                            const VocOptions& options) {
  std::sort(documents.begin(), documents.end(),
            [](const VocDocument& a, const VocDocument& b) {
              return a.name < b.name;
            });
  std::vector<ImageRecord> images;
  std::vector<Category> categories;
  std::map<std::string, int64_t> category_ids;
  std::vector<GroundTruthInstance> instances;
  const double max_offset = options.exclusive_coordinates ? 0.0 : 1.0;

  for (const VocDocument& doc : documents) {
    pt::ptree tree;
    std::istringstream in(doc.xml);
    try {
      pt::read_xml(in, tree);
    } catch (const pt::xml_parser_error& e) {
      throw InputError(doc.name, "malformed XML: " + e.message(),
                       static_cast<int>(e.line()));
    }
    const pt::ptree& root =
        RequireChild(tree, "annotation", doc.name, "");
    const std::string filename =
        Trim(RequireChild(root, "filename", doc.name, "annotation/").data());
    if (filename.empty()) {
      throw InputError(doc.name, "empty <annotation/filename>");
    }
    const pt::ptree& size = RequireChild(root, "size", doc.name, "annotation/");
    const double width = RequireNumber(size, "width", doc.name, "annotation/size/");
    const double height =
        RequireNumber(size, "height", doc.name, "annotation/size/");
    ImageRecord im{fs::path(filename).stem().string(),
                   static_cast<int64_t>(std::llround(width)),
                   static_cast<int64_t>(std::llround(height))};
    if (im.width <= 0 || im.height <= 0) {
      throw InputError(doc.name, "non-positive image size");
    }
    images.push_back(im);

    int object_index = 0;
    for (const auto& [key, obj] : root) {
      if (key != "object") continue;
      const std::string path =
          "annotation/object[" + std::to_string(object_index) + "]/";
      ++object_index;
      const std::string name =
          Trim(RequireChild(obj, "name", doc.name, path).data());
      if (name.empty()) throw InputError(doc.name, "empty <" + path + "name>");
      const pt::ptree& bb = RequireChild(obj, "bndbox", doc.name, path);
      const std::string bpath = path + "bndbox/";
      const double xmin = RequireNumber(bb, "xmin", doc.name, bpath);
      const double ymin = RequireNumber(bb, "ymin", doc.name, bpath);
      const double xmax = RequireNumber(bb, "xmax", doc.name, bpath) + max_offset;
      const double ymax = RequireNumber(bb, "ymax", doc.name, bpath) + max_offset;

      auto [it, inserted] = category_ids.emplace(
          name, static_cast<int64_t>(categories.size()));
      if (inserted) categories.push_back({it->second, name, std::nullopt});

      const int64_t instance_id = static_cast<int64_t>(instances.size());
      instances.push_back(
          {instance_id, im.image_id, it->second,
           ClipOrReject(xmin, ymin, xmax, ymax, im, doc.name,
                        "<" + path.substr(0, path.size() - 1) + ">")});
    }
  }
  std::set<int64_t> annotated;
  for (const auto& c : categories) annotated.insert(c.id);
  const std::string source =
      documents.size() == 1 ? documents.front().name : "voc annotations";
  return Dataset::Create(std::move(images), std::move(categories),
                         std::move(instances), std::move(annotated), source);
}

// ---- COCO ----

namespace {

const json& RequireKey(const json& obj, const char* key,
                       const std::string& source, const std::string& what) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw InputError(source, what + ": missing \"" + key + "\"");
  }
  return obj.at(key);
}

int64_t RequireInt(const json& obj, const char* key, const std::string& source,
                   const std::string& what) {
  const json& v = RequireKey(obj, key, source, what);
  if (!v.is_number_integer()) {
    throw InputError(source, what + ": \"" + key + "\" must be an integer");
  }
  return v.get<int64_t>();
}

double RequireDouble(const json& v, const std::string& source,
                     const std::string& what) {
  if (!v.is_number()) throw InputError(source, what + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw InputError(source, what + " must be finite");
  return d;
}

std::string RequireString(const json& obj, const char* key,
                          const std::string& source, const std::string& what) {
  const json& v = RequireKey(obj, key, source, what);
  if (!v.is_string()) {
    throw InputError(source, what + ": \"" + key + "\" must be a string");
  }
  return v.get<std::string>();
}

std::string ImageIdToString(const json& v, const std::string& source,
                            const std::string& what) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<int64_t>());
  throw InputError(source, what + ": image id must be integer or string");
}

const json& RequireArray(const json& doc, const char* key,
                         const std::string& source) {
  const json& v = RequireKey(doc, key, source, "document");
  if (!v.is_array()) {
    throw InputError(source, std::string("\"") + key + "\" must be an array");
  }
  return v;
}

}  // namespace

Dataset ParseCocoAnnotations(const std::string& json_text,
                             const std::string& source) {
  const json doc = ParseJson(json_text, source);

  std::vector<ImageRecord> images;
  std::map<std::string, size_t> image_pos;
  for (const json& j : RequireArray(doc, "images", source)) {
    const std::string what = "image";
    ImageRecord im{ImageIdToString(RequireKey(j, "id", source, what), source, what),
                   RequireInt(j, "width", source, what),
                   RequireInt(j, "height", source, what)};
    if (!image_pos.emplace(im.image_id, images.size()).second) {
      throw InputError(source, "duplicate image id " + im.image_id);
    }
    if (im.width <= 0 || im.height <= 0) {
      throw InputError(source, "image " + im.image_id + ": non-positive size");
    }
    images.push_back(im);
  }

  std::vector<Category> categories;
  std::map<int64_t, int64_t> category_remap;
  std::set<std::string> names;
  for (const json& j : RequireArray(doc, "categories", source)) {
    const int64_t src_id = RequireInt(j, "id", source, "category");
    const std::string what = "category " + std::to_string(src_id);
    Category c;
    c.id = static_cast<int64_t>(categories.size());
    c.name = RequireString(j, "name", source, what);
    if (j.contains("supercategory") && !j.at("supercategory").is_null()) {
      c.supercategory = RequireString(j, "supercategory", source, what);
    }
    if (!category_remap.emplace(src_id, c.id).second) {
      throw InputError(source, "duplicate category id " + std::to_string(src_id));
    }
    if (!names.insert(c.name).second) {
      throw InputError(source, "duplicate category name '" + c.name + "'");
    }
    categories.push_back(std::move(c));
  }

  std::vector<GroundTruthInstance> instances;
  std::set<int64_t> seen_ids;
  for (const json& j : RequireArray(doc, "annotations", source)) {
    const int64_t id = RequireInt(j, "id", source, "annotation");
    const std::string what = "annotation " + std::to_string(id);
    if (!seen_ids.insert(id).second) {
      throw InputError(source, "duplicate annotation id " + std::to_string(id));
    }
    const std::string image_id =
        ImageIdToString(RequireKey(j, "image_id", source, what), source, what);
    auto im = image_pos.find(image_id);
    if (im == image_pos.end()) {
      throw InputError(source, what + " references unknown image_id " + image_id);
    }
    const int64_t cat = RequireInt(j, "category_id", source, what);
    auto c = category_remap.find(cat);
    if (c == category_remap.end()) {
      throw InputError(source, what + " references unknown category_id " +
                                   std::to_string(cat));
    }
    const json& bbox = RequireKey(j, "bbox", source, what);
    if (!bbox.is_array() || bbox.size() != 4) {
      throw InputError(source, what + ": bbox must be [x, y, w, h]");
    }
    const double x = RequireDouble(bbox[0], source, what + " bbox x");
    const double y = RequireDouble(bbox[1], source, what + " bbox y");
    const double w = RequireDouble(bbox[2], source, what + " bbox w");
    const double h = RequireDouble(bbox[3], source, what + " bbox h");
    if (!(w > 0.0) || !(h > 0.0)) {
      throw InputError(source, what + ": zero or negative bbox width/height");
    }
    instances.push_back({id, image_id, c->second,
                         ClipOrReject(x, y, x + w, y + h, images[im->second],
                                      source, what)});
  }
  std::set<int64_t> annotated;
  for (const auto& c : categories) annotated.insert(c.id);
  return Dataset::Create(std::move(images), std::move(categories),
                         std::move(instances), std::move(annotated), source);
}

// ---- Canonical ----

std::string DatasetToCanonicalJson(const Dataset& d) {
  ordered_json doc;
  ordered_json images = ordered_json::array();
  for (const auto& im : d.images()) {
    ordered_json j;
    j["id"] = im.image_id;
    j["width"] = im.width;
    j["height"] = im.height;
    images.push_back(std::move(j));
  }
  ordered_json cats = ordered_json::array();
  for (const auto& c : d.categories()) {
    ordered_json j;
    j["id"] = c.id;
    j["name"] = c.name;
    j["supercategory"] =
        c.supercategory ? ordered_json(*c.supercategory) : ordered_json(nullptr);
    cats.push_back(std::move(j));
  }
  ordered_json anns = ordered_json::array();
  for (const auto& g : d.instances()) {
    ordered_json j;
    j["id"] = g.instance_id;
    j["image_id"] = g.image_id;
    j["category_id"] = g.category_id;
    j["bbox"] = {g.box.x_min(), g.box.y_min(), g.box.x_max(), g.box.y_max()};
    anns.push_back(std::move(j));
  }
  doc["images"] = std::move(images);
  doc["categories"] = std::move(cats);
  doc["annotated_categories"] = d.annotated_categories();
  doc["annotations"] = std::move(anns);
  return doc.dump(2) + "\n";
}

Dataset DatasetFromCanonicalJson(const std::string& json_text,
                                 const std::string& source) {
  const json doc = ParseJson(json_text, source);
  std::vector<ImageRecord> images;
  for (const json& j : RequireArray(doc, "images", source)) {
    images.push_back({RequireString(j, "id", source, "image"),
                      RequireInt(j, "width", source, "image"),
                      RequireInt(j, "height", source, "image")});
  }
  std::vector<Category> categories;
  for (const json& j : RequireArray(doc, "categories", source)) {
    Category c;
    c.id = RequireInt(j, "id", source, "category");
    const std::string what = "category " + std::to_string(c.id);
    c.name = RequireString(j, "name", source, what);
    if (j.contains("supercategory") && !j.at("supercategory").is_null()) {
      c.supercategory = RequireString(j, "supercategory", source, what);
    }
    categories.push_back(std::move(c));
  }
  std::set<int64_t> annotated;
  for (const json& v : RequireArray(doc, "annotated_categories", source)) {
    if (!v.is_number_integer()) {
      throw InputError(source, "annotated_categories must hold integers");
    }
    annotated.insert(v.get<int64_t>());
  }
  std::vector<GroundTruthInstance> instances;
  for (const json& j : RequireArray(doc, "annotations", source)) {
    const int64_t id = RequireInt(j, "id", source, "annotation");
    const std::string what = "annotation " + std::to_string(id);
    const json& bbox = RequireKey(j, "bbox", source, what);
    if (!bbox.is_array() || bbox.size() != 4) {
      throw InputError(source, what + ": bbox must be [x_min, y_min, x_max, y_max]");
    }
    auto box = BoundingBox::TryMake(RequireDouble(bbox[0], source, what),
                                    RequireDouble(bbox[1], source, what),
                                    RequireDouble(bbox[2], source, what),
                                    RequireDouble(bbox[3], source, what));
    if (!box) throw InputError(source, what + ": degenerate box");
    instances.push_back({id, RequireString(j, "image_id", source, what),
                         RequireInt(j, "category_id", source, what), *box});
  }
  return Dataset::Create(std::move(images), std::move(categories),
                         std::move(instances), std::move(annotated), source);
}

json ParseJsonDocument(const std::string& text, const std::string& source) {
  return ParseJson(text, source);
}

DatasetFormat DetectDatasetFormat(const std::string& path) {
  if (fs::is_directory(path) || fs::path(path).extension() == ".xml") {
    return DatasetFormat::kVoc;
  }
  const json doc = ParseJson(ReadFile(path), path);
  return doc.is_object() && doc.contains("annotated_categories")
             ? DatasetFormat::kCanonical
             : DatasetFormat::kCoco;
}

DatasetFormat ParseDatasetFormat(const std::string& name) {
  if (name == "canonical" || name == "json") return DatasetFormat::kCanonical;
  if (name == "coco") return DatasetFormat::kCoco;
  if (name == "voc") return DatasetFormat::kVoc;
  throw InputError("format", "unknown dataset format '" + name + "'");
}

Dataset LoadDataset(const std::string& path, DatasetFormat format,
                    const VocOptions& voc_options) {
  switch (format) {
    case DatasetFormat::kCanonical:
      return DatasetFromCanonicalJson(ReadFile(path), path);
    case DatasetFormat::kCoco:
      return ParseCocoAnnotations(ReadFile(path), path);
    case DatasetFormat::kVoc: {
      std::vector<VocDocument> docs;
      if (fs::is_directory(path)) {
        for (const auto& entry : fs::directory_iterator(path)) {
          if (entry.is_regular_file() && entry.path().extension() == ".xml") {
            docs.push_back({entry.path().string(), ReadFile(entry.path().string())});
          }
        }
        if (docs.empty()) throw InputError(path, "no .xml files in directory");
      } else {
        docs.push_back({path, ReadFile(path)});
      }
      return ParseVocAnnotations(std::move(docs), voc_options);
    }
  }
  throw InputError(path, "unsupported dataset format");
}

// ---- Proposals ----

ProposalFormat ParseProposalFormat(const std::string& name) {
  if (name == "csv") return ProposalFormat::kCsv;
  if (name == "json") return ProposalFormat::kJson;
  throw InputError("format", "unknown proposal format '" + name + "'");
}

ProposalFormat ProposalFormatFromPath(const std::string& path) {
  return fs::path(path).extension() == ".json" ? ProposalFormat::kJson
                                               : ProposalFormat::kCsv;
}

namespace {
constexpr char kCsvHeader[] = "image_id,x_min,y_min,x_max,y_max,score";
}  // namespace

std::string ProposalsToCsv(const ProposalSet& set) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& [image_id, list] : set.per_image()) {
    for (const auto& p : list) {
      out += image_id;
      for (double v : {p.box.x_min(), p.box.y_min(), p.box.x_max(),
                       p.box.y_max(), p.score}) {
        out += ',';
        out += FormatDouble(v);
      }
      out += '\n';
    }
  }
  return out;
}

ProposalSet ProposalsFromCsv(const std::string& text, const std::string& source,
                             const std::string& method_name) {
  ProposalSet set(method_name);
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    if (!header_seen) {
      if (Trim(line) != kCsvHeader) {
        throw InputError(source, std::string("expected header '") + kCsvHeader + "'",
                         line_no);
      }
      header_seen = true;
      continue;
    }
    std::vector<std::string> fields;
    std::string field;
    std::istringstream row(line);
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    if (fields.size() != 6) {
      throw InputError(source, "expected 6 fields, got " +
                                   std::to_string(fields.size()), line_no);
    }
    const std::string image_id = Trim(fields[0]);
    if (image_id.empty()) throw InputError(source, "empty image_id", line_no);
    double v[5];
    static const char* kNames[] = {"x_min", "y_min", "x_max", "y_max", "score"};
    for (int k = 0; k < 5; ++k) {
      if (!ParseNumber(fields[k + 1], &v[k])) {
        throw InputError(source, std::string("non-numeric ") + kNames[k] +
                                     " '" + Trim(fields[k + 1]) + "'", line_no);
      }
    }
    auto box = BoundingBox::TryMake(v[0], v[1], v[2], v[3]);
    if (!box) throw InputError(source, "invalid box", line_no);
    set.Add(image_id, *box, v[4]);
  }
  if (!header_seen) throw InputError(source, "missing CSV header", 1);
  set.Normalize();
  return set;
}

std::string ProposalsToJson(const ProposalSet& set) {
  ordered_json doc;
  doc["method"] = set.method_name();
  ordered_json images = ordered_json::array();
  for (const auto& [image_id, list] : set.per_image()) {
    ordered_json im;
    im["image_id"] = image_id;
    ordered_json boxes = ordered_json::array();
    for (const auto& p : list) {
      boxes.push_back({p.box.x_min(), p.box.y_min(), p.box.x_max(),
                       p.box.y_max(), p.score});
    }
    im["boxes"] = std::move(boxes);
    images.push_back(std::move(im));
  }
  doc["images"] = std::move(images);
  return doc.dump(1) + "\n";
}

ProposalSet ProposalsFromJson(const std::string& text,
                              const std::string& source) {
  const json doc = ParseJson(text, source);
  ProposalSet set(RequireString(doc, "method", source, "document"));
  for (const json& im : RequireArray(doc, "images", source)) {
    const std::string image_id = RequireString(im, "image_id", source, "image");
    const std::string what = "image '" + image_id + "'";
    const json& boxes = RequireKey(im, "boxes", source, what);
    if (!boxes.is_array()) throw InputError(source, what + ": boxes must be an array");
    set.SetImage(image_id, {});
    size_t k = 0;
    for (const json& b : boxes) {
      const std::string bwhat = what + " box " + std::to_string(k++);
      if (!b.is_array() || b.size() != 5) {
        throw InputError(source, bwhat + ": expected [x_min, y_min, x_max, y_max, score]");
      }
      double v[5];
      for (int i = 0; i < 5; ++i) v[i] = RequireDouble(b[i], source, bwhat);
      auto box = BoundingBox::TryMake(v[0], v[1], v[2], v[3]);
      if (!box) throw InputError(source, bwhat + ": invalid box");
      set.Add(image_id, *box, v[4]);
    }
  }
  set.Normalize();
  return set;
}

ProposalSet LoadProposals(const std::string& path, ProposalFormat format) {
  const std::string text = ReadFile(path);
  if (format == ProposalFormat::kJson) return ProposalsFromJson(text, path);
  return ProposalsFromCsv(text, path, fs::path(path).stem().string());
}

void SaveProposals(const ProposalSet& set, const std::string& path,
                   ProposalFormat format) {
  WriteFile(path, format == ProposalFormat::kJson ? ProposalsToJson(set)
                                                  : ProposalsToCsv(set));
}

std::vector<std::string> ReadNameList(const std::string& spec) {
  std::vector<std::string> names;
  std::error_code ec;
  if (fs::is_regular_file(spec, ec)) {
    std::istringstream in(ReadFile(spec));
    std::string line;
    while (std::getline(in, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = Trim(line);
      if (!line.empty()) names.push_back(line);
    }
  } else {
    std::istringstream in(spec);
    std::string item;
    while (std::getline(in, item, ',')) {
      item = Trim(item);
      if (!item.empty()) names.push_back(item);
    }
  }
  return names;
}

}  // namespace propeval
