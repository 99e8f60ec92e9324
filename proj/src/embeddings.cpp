#include "senseforge/embeddings.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "senseforge/error.hpp"

namespace senseforge {

EmbeddingStore::EmbeddingStore(std::size_t dim) : dim_(dim) {
    if (dim == 0) throw std::invalid_argument("EmbeddingStore: dim must be positive");
}

void EmbeddingStore::add(std::string token, Vec vector) {
    if (vector.size() != dim_)
        throw std::invalid_argument("vector for '" + token + "' has " + std::to_string(vector.size()) +
                                    " values, expected " + std::to_string(dim_));
    vectors_.insert_or_assign(std::move(token), std::move(vector));
}

const Vec* EmbeddingStore::find(std::string_view token) const {
    auto it = vectors_.find(std::string(token));
    return it == vectors_.end() ? nullptr : &it->second;
}

void ContextSpec::validate() const {
    if (window < 2 || window % 2 != 0)
        throw InputError("context window must be an even integer >= 2, got " + std::to_string(window));
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

bool parse_size(std::string_view s, std::size_t& out) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size();
}

bool parse_double(std::string_view s, double& out) {
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size();
}

}  // namespace

EmbeddingStore parse_embeddings(std::istream& in, const std::string& source_name) {
    std::optional<EmbeddingStore> store;
    std::string line;
    std::size_t line_no = 0;
    bool first_content_line = true;
    while (std::getline(in, line)) {
        ++line_no;
        const auto fields = split_fields(line);
        if (fields.empty()) continue;

        if (first_content_line) {
            first_content_line = false;
            std::size_t n = 0, d = 0;
            if (fields.size() == 2 && parse_size(fields[0], n) && parse_size(fields[1], d)) {
                if (d == 0) throw ParseError(source_name, line_no, "header declares dimension 0");
                store.emplace(d);
                continue;
            }
        }

        if (fields.size() < 2) throw ParseError(source_name, line_no, "row has a token but no values");
        const std::string token(fields[0]);
        if (!store) store.emplace(fields.size() - 1);
        if (fields.size() - 1 != store->dim())
            throw ParseError(source_name, line_no,
                             "vector for token '" + token + "' has " + std::to_string(fields.size() - 1) +
                                 " values, expected " + std::to_string(store->dim()));
        Vec v(store->dim());
        for (std::size_t k = 0; k < v.size(); ++k) {
            if (!parse_double(fields[k + 1], v[k]))
                throw ParseError(source_name, line_no,
                                 "non-numeric value '" + std::string(fields[k + 1]) + "' for token '" + token + "'");
        }
        store->add(token, std::move(v));
    }
    if (!store) throw InputError(source_name + ": embedding file is empty");
    return std::move(*store);
}

EmbeddingStore load_embeddings(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open embedding file " + path.string());
    return parse_embeddings(in, path.string());
}

std::unordered_set<std::string> parse_stopwords(std::istream& in) {
    std::unordered_set<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto fields = split_fields(line);
        if (!fields.empty()) out.emplace(fields.front());
    }
    return out;
}

std::unordered_set<std::string> load_stopwords(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open stopword file " + path.string());
    return parse_stopwords(in);
}

namespace {

// Accumulates qualifying tokens; shared by every averaging path.
class Averager {
public:
    explicit Averager(const EmbeddingStore& store) : store_(store), sum_(store.dim(), 0.0) {}

    void add(std::string_view token) {
        if (store_.is_stopword(token)) return;
        const Vec* v = store_.find(token);
        if (!v) return;
        axpy(sum_, 1.0, *v);
        ++count_;
    }

    std::optional<Vec> result() && {
        if (count_ == 0) return std::nullopt;
        for (double& x : sum_) x /= static_cast<double>(count_);
        return std::move(sum_);
    }

private:
    const EmbeddingStore& store_;
    Vec sum_;
    std::size_t count_ = 0;
};

}  // namespace

std::optional<Vec> average_vector(std::span<const std::string> tokens, const EmbeddingStore& store) {
    Averager avg(store);
    for (const auto& t : tokens) avg.add(t);
    return std::move(avg).result();
}

std::optional<Vec> definition_vector(const Sense& sense, const EmbeddingStore& store) {
    return average_vector(sense.definition, store);
}

ContextWindow context_window(std::size_t length, std::size_t index, const ContextSpec& spec) {
    if (index >= length) throw std::out_of_range("context index " + std::to_string(index) + " outside sentence of length " + std::to_string(length));
    const std::size_t half = spec.half();
    ContextWindow w{};
    w.left_begin = index >= half ? index - half : 0;
    w.left_end = index;
    w.right_begin = index + 1;
    w.right_end = std::min(length, index + 1 + half);
    return w;
}

namespace {

std::optional<Vec> window_average(std::span<const std::string> tokens, std::size_t index, const ContextSpec& spec,
                                  const EmbeddingStore& store) {
    const auto w = context_window(tokens.size(), index, spec);
    Averager avg(store);
    for (std::size_t k = w.left_begin; k < w.left_end; ++k) avg.add(tokens[k]);
    for (std::size_t k = w.right_begin; k < w.right_end; ++k) avg.add(tokens[k]);
    return std::move(avg).result();
}

}  // namespace

std::optional<Vec> example_vector(const Sense& sense, std::string_view lemma, const ContextSpec& spec,
                                  const EmbeddingStore& store) {
    if (!sense.has_example()) return std::nullopt;
    const auto& example = sense.examples.front();
    auto it = std::find(example.begin(), example.end(), lemma);
    if (it == example.end()) return average_vector(example, store);
    return window_average(example, static_cast<std::size_t>(it - example.begin()), spec, store);
}

std::optional<Vec> context_vector(std::span<const std::string> sentence, std::size_t index, const ContextSpec& spec,
                                  const EmbeddingStore& store) {
    return window_average(sentence, index, spec, store);
}

}  // namespace senseforge
