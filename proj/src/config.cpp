#include "senseforge/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>

#include "senseforge/error.hpp"

namespace senseforge {

std::string_view method_name(Method m) {
    switch (m) {
        case Method::kmeans: return "kmeans";
        case Method::crp: return "crp";
        case Method::graph: return "graph";
    }
    return "?";
}

Method parse_method(std::string_view name) {
    if (name == "kmeans") return Method::kmeans;
    if (name == "crp") return Method::crp;
    if (name == "graph") return Method::graph;
    throw InputError("unknown method '" + std::string(name) + "' (expected kmeans, crp or graph)");
}

std::string_view selection_mode_name(SelectionMode m) {
    switch (m) {
        case SelectionMode::top: return "top";
        case SelectionMode::avg_linear: return "avg_linear";
        case SelectionMode::avg_logistic: return "avg_logistic";
        case SelectionMode::att_tanh: return "att_tanh";
        case SelectionMode::att_bilinear: return "att_bilinear";
    }
    return "?";
}

SelectionMode parse_selection_mode(std::string_view name) {
    if (name == "top") return SelectionMode::top;
    if (name == "avg_linear") return SelectionMode::avg_linear;
    if (name == "avg_logistic") return SelectionMode::avg_logistic;
    if (name == "att_tanh") return SelectionMode::att_tanh;
    if (name == "att_bilinear") return SelectionMode::att_bilinear;
    throw InputError("unknown selection mode '" + std::string(name) + "'");
}

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
    T out{};
    auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || p != value.data() + value.size())
        throw InputError("invalid value '" + std::string(value) + "' for " + std::string(key));
    return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw InputError("invalid boolean '" + std::string(value) + "' for " + std::string(key));
}

std::filesystem::path resolve(std::string_view value, const std::filesystem::path& base_dir) {
    std::filesystem::path p{std::string(value)};
    if (p.empty() || p.is_absolute() || base_dir.empty()) return p;
    return base_dir / p;
}

}  // namespace

void PipelineConfig::set(std::string_view key, std::string_view value, const std::filesystem::path& base_dir) {
    if (key == "inventory") inventory = resolve(value, base_dir);
    else if (key == "embeddings") embeddings = resolve(value, base_dir);
    else if (key == "stopwords") stopwords = resolve(value, base_dir);
    else if (key == "corpus") corpus = resolve(value, base_dir);
    else if (key == "models") models = resolve(value, base_dir);
    else if (key == "output") output = resolve(value, base_dir);
    else if (key == "edges") edges = resolve(value, base_dir);
    else if (key == "attention_params") attention_params = resolve(value, base_dir);
    else if (key == "method") method = parse_method(value);
    else if (key == "init_mode") init_mode = parse_init_mode(value);
    else if (key == "window") context.window = parse_number<std::size_t>(key, value);
    else if (key == "min_cluster_size") min_cluster_size = parse_number<std::size_t>(key, value);
    else if (key == "max_iters") max_iters = parse_number<std::size_t>(key, value);
    else if (key == "crp.lambda1") crp.lambda1 = parse_number<double>(key, value);
    else if (key == "crp.lambda2") crp.lambda2 = parse_number<double>(key, value);
    else if (key == "crp.gamma") crp.gamma = parse_number<double>(key, value);
    else if (key == "pagerank.damping") pagerank.damping = parse_number<double>(key, value);
    else if (key == "pagerank.tolerance") pagerank.tolerance = parse_number<double>(key, value);
    else if (key == "pagerank.max_iterations") pagerank.max_iterations = parse_number<std::size_t>(key, value);
    else if (key == "selection") selection = parse_selection_mode(value);
    else if (key == "max_senses") max_senses = parse_number<std::size_t>(key, value);
    else if (key == "monosemous_label") {
        if (value == "word") monosemous = MonosemousLabel::word;
        else if (value == "null") monosemous = MonosemousLabel::null;
        else throw InputError("monosemous_label must be 'word' or 'null'");
    }
    else if (key == "renormalize_linear") renormalize_linear = parse_bool(key, value);
    else if (key == "attention_dim") attention_dim = parse_number<std::size_t>(key, value);
    else if (key == "word_dim") word_dim = parse_number<std::size_t>(key, value);
    else if (key == "pad_range") pad_range = parse_number<double>(key, value);
    else if (key == "seed") seed = parse_number<std::uint64_t>(key, value);
    else if (key == "threads") threads = parse_number<std::size_t>(key, value);
    else throw InputError("unknown configuration key '" + std::string(key) + "'");
}

void PipelineConfig::validate() const {
    context.validate();
    crp.validate();
    pagerank.validate();
    if (max_iters == 0) throw InputError("max_iters must be positive");
    if (max_senses == 0) throw InputError("max_senses must be positive");
    if (attention_dim == 0) throw InputError("attention_dim must be positive");
    if (!(pad_range >= 0.0)) throw InputError("pad_range must be non-negative");
    if (threads == 0) throw InputError("threads must be positive");
}

PipelineConfig parse_config(std::istream& in, const std::string& source_name, const std::filesystem::path& base_dir) {
    PipelineConfig cfg;
    std::string line;
    std::string section;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view text = line;
        // '#' starts a comment unless it sits inside a quoted value
        bool quoted = false;
        for (std::size_t i = 0; i < text.size(); ++i) {
            if (text[i] == '"') quoted = !quoted;
            if (text[i] == '#' && !quoted) {
                text = text.substr(0, i);
                break;
            }
        }
        text = trim(text);
        if (text.empty()) continue;
        if (text.front() == '[') {
            if (text.back() != ']') throw ParseError(source_name, line_no, "unterminated section header");
            section = std::string(trim(text.substr(1, text.size() - 2)));
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string_view::npos) throw ParseError(source_name, line_no, "expected 'key = value'");
        std::string key(trim(text.substr(0, eq)));
        std::string_view value = trim(text.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        if (!section.empty()) key = section + "." + key;
        try {
            cfg.set(key, value, base_dir);
        } catch (const InputError& e) {
            throw ParseError(source_name, line_no, e.what());
        }
    }
    return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config file " + path.string());
    return parse_config(in, path.string(), path.parent_path());
}

}  // namespace senseforge
