#pragma once

// Pre-trained word vectors and the averaged vectors built from them:
// gloss (definition) vectors, usage-example vectors and token context vectors.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "senseforge/lexicon.hpp"
#include "senseforge/linalg.hpp"

namespace senseforge {

class EmbeddingStore {
public:
    explicit EmbeddingStore(std::size_t dim);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return vectors_.size(); }

    // Replaces an existing entry. Throws std::invalid_argument on a length mismatch.
    void add(std::string token, Vec vector);

    // nullptr when the token has no vector.
    const Vec* find(std::string_view token) const;

    void set_stopwords(std::unordered_set<std::string> stopwords) { stopwords_ = std::move(stopwords); }
    const std::unordered_set<std::string>& stopwords() const noexcept { return stopwords_; }
    bool is_stopword(std::string_view token) const { return stopwords_.contains(std::string(token)); }

    const std::unordered_map<std::string, Vec>& vectors() const noexcept { return vectors_; }

private:
    std::size_t dim_;
    std::unordered_map<std::string, Vec> vectors_;
    std::unordered_set<std::string> stopwords_;
};

// Window size c: c/2 tokens on each side of the centre word.
struct ContextSpec {
    std::size_t window = 8;

    std::size_t half() const noexcept { return window / 2; }
    void validate() const;  // throws InputError unless window is even and >= 2
};

// Text format: optional "N D" header, then "token v1 ... vD" rows.
EmbeddingStore parse_embeddings(std::istream& in, const std::string& source_name = "<embeddings>");
EmbeddingStore load_embeddings(const std::filesystem::path& path);

// One token per line; blank lines and '#' comments are ignored.
std::unordered_set<std::string> parse_stopwords(std::istream& in);
std::unordered_set<std::string> load_stopwords(const std::filesystem::path& path);

// Mean of the vectors of tokens that are not stopwords and have an
// embedding; nullopt if none qualifies.
std::optional<Vec> average_vector(std::span<const std::string> tokens, const EmbeddingStore& store);

std::optional<Vec> definition_vector(const Sense& sense, const EmbeddingStore& store);

// Averages the window of the first example centred on the first occurrence
// of `lemma`; falls back to the whole example when the lemma does not occur.
std::optional<Vec> example_vector(const Sense& sense, std::string_view lemma, const ContextSpec& spec,
                                  const EmbeddingStore& store);

// Half-open token ranges around `index`, target excluded, clipped at the sentence.
struct ContextWindow {
    std::size_t left_begin, left_end;    // [left_begin, index)
    std::size_t right_begin, right_end;  // (index, right_end)
};
ContextWindow context_window(std::size_t length, std::size_t index, const ContextSpec& spec);

// Throws std::out_of_range when index is outside the sentence.
std::optional<Vec> context_vector(std::span<const std::string> sentence, std::size_t index,
                                  const ContextSpec& spec, const EmbeddingStore& store);

}  // namespace senseforge
