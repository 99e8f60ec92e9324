#pragma once

// JSON persistence for cluster models, the build manifest, sense
// embedding tables and attention parameters.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "senseforge/clustering.hpp"
#include "senseforge/config.hpp"
#include "senseforge/sense_select.hpp"

namespace senseforge {

// {key, init_mode, dim, clusters: [{label, count, centroid}]}
void write_model(std::ostream& out, const ClusterModel& model);
ClusterModel read_model(std::istream& in, const std::string& source_name = "<model>");
void save_model(const std::filesystem::path& path, const ClusterModel& model);
ClusterModel load_model(const std::filesystem::path& path);

// File name for a word type's model, safe for any lemma.
std::string model_file_name(const WordKey& key);

struct ManifestEntry {
    WordKey key;
    std::string file;
    std::size_t clusters = 0;
    std::size_t tokens = 0;
};

struct SkippedWord {
    WordKey key;
    std::string reason;
};

struct Manifest {
    Method method = Method::kmeans;
    InitMode init_mode = InitMode::definitions;
    std::vector<ManifestEntry> models;  // sorted by key
    std::vector<SkippedWord> skipped;   // sorted by key
};

inline constexpr const char* kManifestFile = "manifest.json";

void save_manifest(const std::filesystem::path& dir, const Manifest& manifest);
Manifest load_manifest(const std::filesystem::path& dir);
// Loads every model listed in the manifest.
std::map<WordKey, ClusterModel> load_models(const std::filesystem::path& dir, const Manifest& manifest);

// {key: {labels: [...], vectors: [[...]]}}
void write_sense_table(std::ostream& out, const SenseEmbeddingTable& table);
SenseEmbeddingTable read_sense_table(std::istream& in, std::size_t max_senses = 5);

// {variant, W: {rows, cols, data}, U: ..., v: [...]} with row-major data
void write_attention_params(std::ostream& out, const AttentionParams& params);
AttentionParams read_attention_params(std::istream& in);
AttentionParams load_attention_params(const std::filesystem::path& path);

}  // namespace senseforge
