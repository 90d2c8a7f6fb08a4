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

#ifndef PROPEVAL_IO_H_
#define PROPEVAL_IO_H_

#include <string>
#include <vector>

#include "json.hpp"
#include "propeval/data_model.h"
#include "propeval/format.h"

namespace propeval {

// Throws InputError naming the path if it cannot be read.
std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, const std::string& content);

// Parses JSON; syntax errors become InputError with the offending line.
nlohmann::json ParseJsonDocument(const std::string& text,
                                 const std::string& source);

// ---- Annotation parsers ---------------------------------------------------

struct VocDocument {
  std::string name;  // reported in errors; documents are merged in name order
  std::string xml;
};

struct VocOptions {
  // VOC boxes are inclusive 1-based pixel indices and are converted with
  // x_max := xmax + 1. Set for sources that already use exclusive maxima.
  bool exclusive_coordinates = false;
};

// Merges VOC detection XML documents into one Dataset. Category ids are
// assigned by first appearance of each name; instance ids count up from 0 in
// document order. Boxes reaching past the image are clipped with a warning;
// boxes entirely outside are an error.
Dataset ParseVocAnnotations(std::vector<VocDocument> documents,
                            const VocOptions& options = {});

// COCO-style detection JSON. bbox = [x, y, w, h] becomes
// (x, y, x + w, y + h); category ids are remapped densely in the order of the
// categories[] array; image ids become strings.
Dataset ParseCocoAnnotations(const std::string& json_text,
                             const std::string& source = "coco");

// Canonical dataset document: images, categories, annotated_categories,
// annotations, keys in that order, arrays sorted by id.
std::string DatasetToCanonicalJson(const Dataset& d);
Dataset DatasetFromCanonicalJson(const std::string& json_text,
                                 const std::string& source = "dataset");

enum class DatasetFormat { kCanonical, kCoco, kVoc };

DatasetFormat ParseDatasetFormat(const std::string& name);
// Directories and .xml files are VOC; JSON with an annotated_categories key
// is canonical, any other JSON is COCO.
DatasetFormat DetectDatasetFormat(const std::string& path);
// VOC input may be one XML file or a directory of them (all *.xml files,
// merged in sorted path order).
Dataset LoadDataset(const std::string& path, DatasetFormat format,
                    const VocOptions& voc_options = {});

// ---- Proposal files -------------------------------------------------------

enum class ProposalFormat { kCsv, kJson };

ProposalFormat ParseProposalFormat(const std::string& name);
// By extension: ".json" -> kJson, anything else -> kCsv.
ProposalFormat ProposalFormatFromPath(const std::string& path);

// CSV layout: header `image_id,x_min,y_min,x_max,y_max,score`, one row per
// box, rows of one image need not be contiguous.
std::string ProposalsToCsv(const ProposalSet& set);
ProposalSet ProposalsFromCsv(const std::string& text,
                             const std::string& source,
                             const std::string& method_name);

// {"method": ..., "images": [{"image_id": ..., "boxes":
//   [[x_min, y_min, x_max, y_max, score], ...]}, ...]}
std::string ProposalsToJson(const ProposalSet& set);
ProposalSet ProposalsFromJson(const std::string& text,
                              const std::string& source);

// Method name defaults to the file stem for CSV input.
ProposalSet LoadProposals(const std::string& path, ProposalFormat format);
void SaveProposals(const ProposalSet& set, const std::string& path,
                   ProposalFormat format);

// Category-name list: an existing file (one name per line, '#' comments) or
// an inline comma-separated list.
std::vector<std::string> ReadNameList(const std::string& spec);

}  // namespace propeval

#endif  // PROPEVAL_IO_H_
