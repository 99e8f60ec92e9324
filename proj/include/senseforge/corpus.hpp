#pragma once

// Pre-tagged, pre-lemmatised corpus: one sentence per line, tokens
// "surface|lemma|TAG" (optionally "|label"), with '|' escaped as "\|".

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "senseforge/lexicon.hpp"

namespace senseforge {

struct CorpusToken {
    std::string surface;
    std::string lemma;  // lowercased on load
    std::string tag;    // Penn Treebank
    std::optional<std::string> label;

    friend bool operator==(const CorpusToken&, const CorpusToken&) = default;
};

using CorpusSentence = std::vector<CorpusToken>;

struct TaggedCorpus {
    std::vector<CorpusSentence> sentences;

    std::size_t token_count() const;
};

bool is_known_tag(std::string_view tag);
bool is_proper_noun_tag(std::string_view tag);
// NN/NNS -> noun, VB* -> verb, anything else (including proper nouns) -> nullopt.
std::optional<Pos> content_pos(std::string_view tag);

struct CorpusOptions {
    bool drop_proper_nouns = true;
    bool allow_labels = false;  // accept the four-field labelled form
};

TaggedCorpus parse_corpus(std::istream& in, const std::string& source_name = "<corpus>", const CorpusOptions& options = {});
TaggedCorpus load_corpus(const std::filesystem::path& path, const CorpusOptions& options = {});

std::string escape_field(std::string_view text);
// Writes one sentence as a line; tokens with a label get four fields.
void write_sentence(std::ostream& out, const CorpusSentence& sentence);

}  // namespace senseforge
