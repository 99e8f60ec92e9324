#pragma once

// Sense inventory: WordNet-style word types with their senses, glosses,
// usage examples and sense-graph neighbors, read from a JSON Lines file.

#include <compare>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace senseforge {

enum class Pos { noun, verb };

std::string_view pos_name(Pos pos);         // "noun" / "verb"
std::string_view pos_short_name(Pos pos);   // "n" / "v"
std::optional<Pos> parse_pos_name(std::string_view name);
std::optional<Pos> parse_pos_short_name(std::string_view name);

using TokenList = std::vector<std::string>;

struct Sense {
    std::string id;
    TokenList definition;
    std::vector<TokenList> examples;
    std::vector<std::string> neighbors;

    bool has_definition() const noexcept { return !definition.empty(); }
    bool has_example() const noexcept { return !examples.empty() && !examples.front().empty(); }

    friend bool operator==(const Sense&, const Sense&) = default;
};

struct WordKey {
    std::string lemma;
    Pos pos = Pos::noun;

    friend auto operator<=>(const WordKey&, const WordKey&) = default;
    friend bool operator==(const WordKey&, const WordKey&) = default;
};

// "lemma.n" / "lemma.v"; the inverse splits on the last '.'.
std::string to_string(const WordKey& key);
std::optional<WordKey> parse_word_key(std::string_view text);

struct WordType {
    std::string lemma;
    Pos pos = Pos::noun;
    std::vector<Sense> senses;  // inventory order, most frequent first

    WordKey key() const { return {lemma, pos}; }

    friend bool operator==(const WordType&, const WordType&) = default;
};

class SenseInventory {
public:
    struct SenseRef {
        WordKey word;
        std::size_t index = 0;  // position in WordType::senses
    };

    SenseInventory() = default;

    // Validates the records and builds the global sense index. Throws
    // InputError on duplicate word types, duplicate sense ids, self-loops,
    // empty tokens or neighbors that do not resolve.
    static SenseInventory from_word_types(std::vector<WordType> words);

    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }

    const std::map<WordKey, WordType>& entries() const noexcept { return entries_; }

    const WordType* find(const WordKey& key) const;
    const WordType& at(const WordKey& key) const;

    std::optional<SenseRef> find_sense(std::string_view global_id) const;
    const Sense& sense(const SenseRef& ref) const;

    friend bool operator==(const SenseInventory& a, const SenseInventory& b) { return a.entries_ == b.entries_; }

private:
    std::map<WordKey, WordType> entries_;
    std::unordered_map<std::string, SenseRef> sense_index_;
};

SenseInventory parse_inventory(std::istream& in, const std::string& source_name = "<inventory>");
SenseInventory load_inventory(const std::filesystem::path& path);

void write_inventory(std::ostream& out, const SenseInventory& inv);

// Word types with at least min_senses senses, ordered by (lemma, pos).
std::vector<const WordType*> ambiguous_types(const SenseInventory& inv, std::size_t min_senses = 2);

std::vector<const Sense*> senses_with_definition(const WordType& wt);
std::vector<const Sense*> senses_with_example(const WordType& wt);

}  // namespace senseforge
