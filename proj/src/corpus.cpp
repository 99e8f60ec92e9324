#include "senseforge/corpus.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>

#include "senseforge/error.hpp"

namespace senseforge {

namespace {

constexpr std::array<std::string_view, 48> kPennTags = {
    "CC",  "CD",  "DT",   "EX",  "FW",  "IN",  "JJ",  "JJR", "JJS", "LS",    "MD",    "NN",
    "NNS", "NNP", "NNPS", "PDT", "POS", "PRP", "PRP$", "RB", "RBR", "RBS",   "RP",    "SYM",
    "TO",  "UH",  "VB",   "VBD", "VBG", "VBN", "VBP", "VBZ", "WDT", "WP",    "WP$",   "WRB",
    ".",   ",",   ":",    "``",  "''",  "$",   "#",   "-LRB-", "-RRB-", "HYPH", "NFP", "ADD"};

}  // namespace

std::size_t TaggedCorpus::token_count() const {
    std::size_t n = 0;
    for (const auto& s : sentences) n += s.size();
    return n;
}

bool is_known_tag(std::string_view tag) {
    return std::find(kPennTags.begin(), kPennTags.end(), tag) != kPennTags.end();
}

bool is_proper_noun_tag(std::string_view tag) { return tag == "NNP" || tag == "NNPS"; }

std::optional<Pos> content_pos(std::string_view tag) {
    if (tag == "NN" || tag == "NNS") return Pos::noun;
    if (tag == "VB" || tag == "VBD" || tag == "VBG" || tag == "VBN" || tag == "VBP" || tag == "VBZ") return Pos::verb;
    return std::nullopt;
}

namespace {

// Splits on unescaped '|'; "\|" and "\\" decode to '|' and '\'.
std::vector<std::string> split_token(std::string_view token) {
    std::vector<std::string> fields(1);
    for (std::size_t i = 0; i < token.size(); ++i) {
        const char c = token[i];
        if (c == '\\' && i + 1 < token.size() && (token[i + 1] == '|' || token[i + 1] == '\\')) {
            fields.back() += token[++i];
        } else if (c == '|') {
            fields.emplace_back();
        } else {
            fields.back() += c;
        }
    }
    return fields;
}

std::string lowercase(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

}  // namespace

TaggedCorpus parse_corpus(std::istream& in, const std::string& source_name, const CorpusOptions& options) {
    TaggedCorpus corpus;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        CorpusSentence sentence;
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && line[i] == ' ') ++i;
            if (i >= line.size()) break;
            const std::size_t start = i;
            while (i < line.size() && line[i] != ' ') ++i;
            const std::string_view raw(line.data() + start, i - start);
            const std::string where = "column " + std::to_string(start + 1);

            auto fields = split_token(raw);
            const std::size_t max_fields = options.allow_labels ? 4 : 3;
            if (fields.size() < 3 || fields.size() > max_fields)
                throw ParseError(source_name, line_no,
                                 where + ": malformed token '" + std::string(raw) + "' (expected surface|lemma|TAG" +
                                     (options.allow_labels ? "[|label])" : ")"));
            for (const auto& f : fields)
                if (f.empty()) throw ParseError(source_name, line_no, where + ": empty field in token '" + std::string(raw) + "'");
            if (!is_known_tag(fields[2]))
                throw ParseError(source_name, line_no, where + ": unknown POS tag '" + fields[2] + "'");
            if (options.drop_proper_nouns && is_proper_noun_tag(fields[2])) continue;

            CorpusToken tok{std::move(fields[0]), lowercase(std::move(fields[1])), std::move(fields[2]), std::nullopt};
            if (fields.size() == 4) tok.label = std::move(fields[3]);
            sentence.push_back(std::move(tok));
        }
        corpus.sentences.push_back(std::move(sentence));
    }
    return corpus;
}

TaggedCorpus load_corpus(const std::filesystem::path& path, const CorpusOptions& options) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open corpus file " + path.string());
    return parse_corpus(in, path.string(), options);
}

std::string escape_field(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        if (c == '|' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

void write_sentence(std::ostream& out, const CorpusSentence& sentence) {
    for (std::size_t i = 0; i < sentence.size(); ++i) {
        const auto& t = sentence[i];
        if (i) out << ' ';
        out << escape_field(t.surface) << '|' << escape_field(t.lemma) << '|' << t.tag;
        if (t.label) out << '|' << escape_field(*t.label);
    }
    out << '\n';
}

}  // namespace senseforge
