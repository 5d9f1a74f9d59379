#pragma once

#include "ft/classify_types.hpp"
#include "ft/ftd.hpp"
#include "ft/tensor.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace ft::io {

// Binary tensor file, format "DTF1": magic, uint8 order, little-endian uint64
// extents, float64 little-endian column-major payload.
void write_tensor(const std::filesystem::path& path, const DenseTensor& t);
DenseTensor read_tensor(const std::filesystem::path& path);

std::string encode_base64(const std::vector<unsigned char>& bytes);
std::vector<unsigned char> decode_base64(const std::string& text);

// DTF1 serialization to/from a byte buffer (used for base64 embedding).
std::vector<unsigned char> tensor_to_bytes(const DenseTensor& t);
DenseTensor tensor_from_bytes(const std::vector<unsigned char>& bytes);

struct DatasetManifest {
    struct ClassEntry {
        std::string label;
        std::vector<std::string> samples;  // tensor file paths, relative to the manifest
    };
    std::vector<double> grid;
    std::vector<ClassEntry> classes;
};

void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest);
DatasetManifest read_manifest(const std::filesystem::path& path);

// Loads every referenced tensor; labels are assigned 0..C-1 in manifest order.
LabeledDataset load_dataset(const std::filesystem::path& manifest_path);

// Self-describing JSON model file with base64-embedded DTF1 blocks.
void write_ftd_model(const std::filesystem::path& path, const FtdModel& model);
FtdModel read_ftd_model(const std::filesystem::path& path);

void write_class_bases(const std::filesystem::path& path, const std::vector<ClassBasis>& bases);
std::vector<ClassBasis> read_class_bases(const std::filesystem::path& path);

KernelSpec kernel_from_json_text(const std::string& text);

// Deterministic shortest-round-trip formatting used by all CSV emitters.
std::string format_double(double v);

}  // namespace ft::io
