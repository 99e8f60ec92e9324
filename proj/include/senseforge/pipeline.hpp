#pragma once

// End-to-end workflows behind the CLI subcommands.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "senseforge/clustering.hpp"
#include "senseforge/config.hpp"
#include "senseforge/corpus.hpp"
#include "senseforge/embeddings.hpp"
#include "senseforge/eval.hpp"
#include "senseforge/lexicon.hpp"
#include "senseforge/model_io.hpp"

namespace senseforge {

// Reads SENSEFORGE_LOG (trace, debug, info, warn, error, off; default warn).
void init_logging();

// Embeddings with the configured stopword list attached (none when the
// stopwords path is empty).
EmbeddingStore load_embedding_store(const PipelineConfig& config);

// Sentence positions of every ambiguous noun/verb occurrence.
struct Occurrence {
    std::size_t sentence = 0;
    std::size_t token = 0;
};
std::map<WordKey, std::vector<Occurrence>> ambiguous_occurrences(const TaggedCorpus& corpus, const SenseInventory& inv);

// Label of the i-th sense of a word type for induced clusters: "lemma.n.i".
std::string cluster_label(const WordKey& key, std::size_t sense_index);

struct WordModelResult {
    WordKey key;
    std::optional<ClusterModel> model;
    std::string skip_reason;
    std::vector<std::string> events;  // skipped tokens and senses, for the log
};

// Clusters the occurrences of one word type with the configured method.
WordModelResult build_word_model(const PipelineConfig& config, const SenseInventory& inv, const EmbeddingStore& store,
                                 const TaggedCorpus& corpus, const std::vector<std::vector<std::string>>& lemmas,
                                 const WordKey& key, const std::vector<Occurrence>& occurrences,
                                 const SenseGraph* graph);

struct BuildSummary {
    Manifest manifest;
};

// Writes one model file per ambiguous word type found in the corpus plus
// manifest.json into config.models.
BuildSummary cmd_build(const PipelineConfig& config);

struct LabelSummary {
    std::size_t sentences = 0;
    std::size_t tokens = 0;
    std::size_t sense_labelled = 0;
    std::size_t fallbacks = 0;
};

// Labels config.corpus into config.output (four-field tokens) and writes the
// sense-labelled instances to <output>.instances.tsv, ids "lemma.n.S_T".
LabelSummary cmd_label(const PipelineConfig& config);

// Instance id of a labelled token: "<lemma>.<n|v>.<sentence>_<token>".
std::string instance_id(const WordKey& key, std::size_t sentence, std::size_t token);

// "instance_id \t label" rows; duplicate ids are an error.
std::vector<std::pair<std::string, std::string>> load_label_tsv(const std::filesystem::path& path);

// Pairs predictions with gold labels by instance id and groups them per word
// type (taken from the id prefix). Throws InputError on the first id that is
// missing on either side.
std::vector<WordEvaluation> join_instances(const std::vector<std::pair<std::string, std::string>>& predicted,
                                           const std::vector<std::pair<std::string, std::string>>& gold,
                                           const std::map<WordKey, std::size_t>& model_cluster_counts = {});

// Writes <out_prefix>.json / .csv / .tsv.
WsiReport cmd_eval_wsi(const PipelineConfig& config, const std::filesystem::path& predicted_tsv,
                       const std::filesystem::path& gold_tsv, const std::filesystem::path& out_prefix,
                       const std::string& system_name);

struct RhoInputs {
    std::filesystem::path source;  // tagged (optionally labelled) source corpus
    std::filesystem::path system, baseline, reference;  // tokenised target text
    std::filesystem::path align_system, align_baseline, align_reference;  // Pharaoh alignments
};

// Tokens of interest are source nouns/verbs of ambiguous inventory types
// (all nouns/verbs when no inventory is configured). The aligned target
// token is the one with the lowest target index.
std::vector<AlignedTriple> build_triples(const PipelineConfig& config, const RhoInputs& inputs);

struct LexicalChoiceReport {
    RhoResult rho;
    ConfusionMatrix confusion;
};

LexicalChoiceReport cmd_eval_rho(const PipelineConfig& config, const RhoInputs& inputs,
                                 const std::filesystem::path& out_prefix);

// One JSON object per ambiguous token with its sense labels, distances or
// attention scores, and weights under config.selection. Returns the number
// of traced tokens.
std::size_t cmd_demo_select(const PipelineConfig& config, std::ostream& out);

}  // namespace senseforge
