#include "senseforge/lexicon.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "senseforge/error.hpp"

namespace senseforge {

using nlohmann::json;

std::string_view pos_name(Pos pos) { return pos == Pos::noun ? "noun" : "verb"; }
std::string_view pos_short_name(Pos pos) { return pos == Pos::noun ? "n" : "v"; }

std::optional<Pos> parse_pos_name(std::string_view name) {
    if (name == "noun") return Pos::noun;
    if (name == "verb") return Pos::verb;
    return std::nullopt;
}

std::optional<Pos> parse_pos_short_name(std::string_view name) {
    if (name == "n") return Pos::noun;
    if (name == "v") return Pos::verb;
    return std::nullopt;
}

std::string to_string(const WordKey& key) {
    std::string s = key.lemma;
    s += '.';
    s += pos_short_name(key.pos);
    return s;
}

std::optional<WordKey> parse_word_key(std::string_view text) {
    const auto dot = text.rfind('.');
    if (dot == std::string_view::npos || dot == 0) return std::nullopt;
    auto pos = parse_pos_short_name(text.substr(dot + 1));
    if (!pos) return std::nullopt;
    return WordKey{std::string(text.substr(0, dot)), *pos};
}

namespace {

void check_tokens(const TokenList& tokens, const std::string& where) {
    for (const auto& t : tokens)
        if (t.empty()) throw InputError("empty token in " + where);
}

TokenList token_list(const json& j, const char* field) {
    if (!j.is_array()) throw std::invalid_argument(std::string("'") + field + "' must be an array of strings");
    TokenList out;
    out.reserve(j.size());
    for (const auto& t : j) {
        if (!t.is_string()) throw std::invalid_argument(std::string("'") + field + "' must contain strings");
        out.push_back(t.get<std::string>());
    }
    return out;
}

WordType word_type_from_json(const json& rec) {
    if (!rec.is_object()) throw std::invalid_argument("record is not a JSON object");
    WordType wt;
    wt.lemma = rec.at("lemma").get<std::string>();
    const auto pos_text = rec.at("pos").get<std::string>();
    auto pos = parse_pos_name(pos_text);
    if (!pos) throw std::invalid_argument("unsupported pos '" + pos_text + "' (expected noun or verb)");
    wt.pos = *pos;

    const auto& senses = rec.at("senses");
    if (!senses.is_array()) throw std::invalid_argument("'senses' must be an array");
    for (const auto& s : senses) {
        Sense sense;
        sense.id = s.at("id").get<std::string>();
        if (s.contains("definition")) sense.definition = token_list(s["definition"], "definition");
        if (s.contains("examples")) {
            if (!s["examples"].is_array()) throw std::invalid_argument("'examples' must be an array");
            for (const auto& ex : s["examples"]) sense.examples.push_back(token_list(ex, "examples"));
        }
        if (s.contains("neighbors")) sense.neighbors = token_list(s["neighbors"], "neighbors");
        wt.senses.push_back(std::move(sense));
    }
    return wt;
}

json word_type_to_json(const WordType& wt) {
    json senses = json::array();
    for (const auto& s : wt.senses) {
        senses.push_back({{"id", s.id},
                          {"definition", s.definition},
                          {"examples", s.examples},
                          {"neighbors", s.neighbors}});
    }
    return {{"lemma", wt.lemma}, {"pos", std::string(pos_name(wt.pos))}, {"senses", std::move(senses)}};
}

}  // namespace

SenseInventory SenseInventory::from_word_types(std::vector<WordType> words) {
    SenseInventory inv;
    for (auto& wt : words) {
        const auto key = wt.key();
        if (wt.lemma.empty()) throw InputError("word type with empty lemma");
        if (wt.senses.empty()) throw InputError("word type " + to_string(key) + " has no senses");
        if (inv.entries_.contains(key)) throw InputError("duplicate word type " + to_string(key));

        std::set<std::string> local_ids;
        for (std::size_t i = 0; i < wt.senses.size(); ++i) {
            const auto& s = wt.senses[i];
            if (s.id.empty()) throw InputError("empty sense id in " + to_string(key));
            if (!local_ids.insert(s.id).second) throw InputError("duplicate sense id " + s.id + " in " + to_string(key));
            if (inv.sense_index_.contains(s.id)) throw InputError("sense id " + s.id + " is defined by more than one word type");
            check_tokens(s.definition, "definition of " + s.id);
            for (const auto& ex : s.examples) check_tokens(ex, "example of " + s.id);
            for (const auto& n : s.neighbors) {
                if (n.empty()) throw InputError("empty neighbor id in " + s.id);
                if (n == s.id) throw InputError("sense " + s.id + " lists itself as a neighbor");
            }
            inv.sense_index_.emplace(s.id, SenseRef{key, i});
        }
        inv.entries_.emplace(key, std::move(wt));
    }

    std::vector<std::string> dangling;
    for (const auto& [key, wt] : inv.entries_)
        for (const auto& s : wt.senses)
            for (const auto& n : s.neighbors)
                if (!inv.sense_index_.contains(n)) dangling.push_back(n);
    if (!dangling.empty()) {
        std::string msg = "undefined neighbor sense id(s):";
        for (const auto& d : dangling) msg += " " + d;
        throw InputError(msg);
    }
    return inv;
}

const WordType* SenseInventory::find(const WordKey& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
}

const WordType& SenseInventory::at(const WordKey& key) const {
    const auto* wt = find(key);
    if (!wt) throw InputError("word type " + to_string(key) + " is not in the inventory");
    return *wt;
}

std::optional<SenseInventory::SenseRef> SenseInventory::find_sense(std::string_view global_id) const {
    auto it = sense_index_.find(std::string(global_id));
    if (it == sense_index_.end()) return std::nullopt;
    return it->second;
}

const Sense& SenseInventory::sense(const SenseRef& ref) const { return at(ref.word).senses.at(ref.index); }

SenseInventory parse_inventory(std::istream& in, const std::string& source_name) {
    std::vector<WordType> words;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            words.push_back(word_type_from_json(json::parse(line)));
        } catch (const std::exception& e) {
            throw ParseError(source_name, line_no, e.what());
        }
    }
    return SenseInventory::from_word_types(std::move(words));
}

SenseInventory load_inventory(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open inventory file " + path.string());
    return parse_inventory(in, path.string());
}

void write_inventory(std::ostream& out, const SenseInventory& inv) {
    for (const auto& [key, wt] : inv.entries()) out << word_type_to_json(wt).dump() << '\n';
}

std::vector<const WordType*> ambiguous_types(const SenseInventory& inv, std::size_t min_senses) {
    if (min_senses < 2) throw std::invalid_argument("ambiguous_types: min_senses must be at least 2");
    std::vector<const WordType*> out;
    // std::map iteration is already (lemma, pos) order
    for (const auto& [key, wt] : inv.entries())
        if (wt.senses.size() >= min_senses) out.push_back(&wt);
    return out;
}

std::vector<const Sense*> senses_with_definition(const WordType& wt) {
    std::vector<const Sense*> out;
    for (const auto& s : wt.senses)
        if (s.has_definition()) out.push_back(&s);
    return out;
}

std::vector<const Sense*> senses_with_example(const WordType& wt) {
    std::vector<const Sense*> out;
    for (const auto& s : wt.senses)
        if (s.has_example()) out.push_back(&s);
    return out;
}

}  // namespace senseforge
