#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "senseforge/clustering.hpp"
#include "senseforge/embeddings.hpp"
#include "senseforge/sense_graph.hpp"
#include "senseforge/sense_select.hpp"

namespace senseforge {

enum class Method { kmeans, crp, graph };
std::string_view method_name(Method m);
Method parse_method(std::string_view name);

enum class SelectionMode { top, avg_linear, avg_logistic, att_tanh, att_bilinear };
std::string_view selection_mode_name(SelectionMode m);
SelectionMode parse_selection_mode(std::string_view name);

struct PipelineConfig {
    std::filesystem::path inventory;
    std::filesystem::path embeddings;
    std::filesystem::path stopwords;
    std::filesystem::path corpus;
    std::filesystem::path models;            // directory of per-word model files + manifest.json
    std::filesystem::path output;            // labelled corpus / trace output
    std::filesystem::path edges;             // optional weighted sense-graph edges (TSV)
    std::filesystem::path attention_params;  // optional JSON; random when empty

    Method method = Method::kmeans;
    InitMode init_mode = InitMode::definitions;
    ContextSpec context;
    std::size_t min_cluster_size = 10;
    std::size_t max_iters = 100;
    CrpParams crp;
    PageRankParams pagerank;

    SelectionMode selection = SelectionMode::avg_logistic;
    std::size_t max_senses = 5;
    MonosemousLabel monosemous = MonosemousLabel::word;
    bool renormalize_linear = false;
    std::size_t attention_dim = 100;
    std::size_t word_dim = 0;  // 0: use the embedding dimension
    double pad_range = 0.1;

    std::uint64_t seed = 0;
    std::size_t threads = 1;

    // Sets one key ("window", "crp.lambda1", "pagerank.damping", ...).
    // Relative paths are resolved against base_dir. Throws InputError.
    void set(std::string_view key, std::string_view value, const std::filesystem::path& base_dir = {});
    void validate() const;
};

// "key = value" lines, '#' comments, optional [section] headers that prefix
// keys with "section.", optionally double-quoted values.
PipelineConfig parse_config(std::istream& in, const std::string& source_name = "<config>",
                            const std::filesystem::path& base_dir = {});
PipelineConfig load_config(const std::filesystem::path& path);

}  // namespace senseforge
