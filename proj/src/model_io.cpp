#include "senseforge/model_io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "senseforge/error.hpp"

namespace senseforge {

using nlohmann::json;

namespace {

json model_to_json(const ClusterModel& model) {
    json clusters = json::array();
    for (const auto& c : model.clusters)
        clusters.push_back({{"label", c.label}, {"count", c.count}, {"centroid", c.centroid}});
    return {{"key", to_string(model.key)},
            {"init_mode", std::string(init_mode_name(model.init_mode))},
            {"dim", model.dim},
            {"clusters", std::move(clusters)}};
}

WordKey key_from_json(const json& j) {
    const auto text = j.get<std::string>();
    auto key = parse_word_key(text);
    if (!key) throw std::invalid_argument("invalid word key '" + text + "'");
    return *key;
}

ClusterModel model_from_json(const json& j) {
    ClusterModel m;
    m.key = key_from_json(j.at("key"));
    m.init_mode = parse_init_mode(j.at("init_mode").get<std::string>());
    m.dim = j.at("dim").get<std::size_t>();
    for (const auto& c : j.at("clusters")) {
        Cluster cl{c.at("label").get<std::string>(), c.at("centroid").get<Vec>(), c.at("count").get<std::size_t>()};
        if (cl.centroid.size() != m.dim) throw std::invalid_argument("centroid of " + cl.label + " has the wrong dimension");
        m.clusters.push_back(std::move(cl));
    }
    return m;
}

json parse_json(std::istream& in, const std::string& source_name) {
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw InputError(source_name + ": " + e.what());
    }
}

void write_file(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    out << j.dump(1) << '\n';
}

json matrix_to_json(const Matrix& m) { return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.data()}}; }

Matrix matrix_from_json(const json& j) {
    return Matrix(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>(), j.at("data").get<std::vector<double>>());
}

}  // namespace

void write_model(std::ostream& out, const ClusterModel& model) { out << model_to_json(model).dump(1) << '\n'; }

ClusterModel read_model(std::istream& in, const std::string& source_name) {
    const auto j = parse_json(in, source_name);
    try {
        return model_from_json(j);
    } catch (const InputError&) {
        throw;
    } catch (const std::exception& e) {
        throw InputError(source_name + ": " + e.what());
    }
}

void save_model(const std::filesystem::path& path, const ClusterModel& model) { write_file(path, model_to_json(model)); }

ClusterModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open model file " + path.string());
    return read_model(in, path.string());
}

std::string model_file_name(const WordKey& key) {
    std::string out;
    for (unsigned char c : to_string(key)) {
        if (std::isalnum(c) || c == '.' || c == '_' || c == '-') {
            out += static_cast<char>(c);
        } else {
            char buf[4];
            std::snprintf(buf, sizeof buf, "%%%02X", c);
            out += buf;
        }
    }
    return out + ".json";
}

void save_manifest(const std::filesystem::path& dir, const Manifest& manifest) {
    json models = json::array();
    for (const auto& e : manifest.models)
        models.push_back({{"key", to_string(e.key)}, {"file", e.file}, {"clusters", e.clusters}, {"tokens", e.tokens}});
    json skipped = json::array();
    for (const auto& s : manifest.skipped) skipped.push_back({{"key", to_string(s.key)}, {"reason", s.reason}});
    write_file(dir / kManifestFile, {{"method", std::string(method_name(manifest.method))},
                                     {"init_mode", std::string(init_mode_name(manifest.init_mode))},
                                     {"models", std::move(models)},
                                     {"skipped", std::move(skipped)}});
}

Manifest load_manifest(const std::filesystem::path& dir) {
    const auto path = dir / kManifestFile;
    std::ifstream in(path);
    if (!in) throw InputError("cannot open manifest " + path.string() + " (run 'build' first)");
    const auto j = parse_json(in, path.string());
    try {
        Manifest m;
        m.method = parse_method(j.at("method").get<std::string>());
        m.init_mode = parse_init_mode(j.at("init_mode").get<std::string>());
        for (const auto& e : j.at("models"))
            m.models.push_back({key_from_json(e.at("key")), e.at("file").get<std::string>(),
                                e.at("clusters").get<std::size_t>(), e.at("tokens").get<std::size_t>()});
        if (j.contains("skipped"))
            for (const auto& s : j.at("skipped"))
                m.skipped.push_back({key_from_json(s.at("key")), s.at("reason").get<std::string>()});
        return m;
    } catch (const InputError&) {
        throw;
    } catch (const std::exception& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

std::map<WordKey, ClusterModel> load_models(const std::filesystem::path& dir, const Manifest& manifest) {
    std::map<WordKey, ClusterModel> out;
    for (const auto& e : manifest.models) out.emplace(e.key, load_model(dir / e.file));
    return out;
}

void write_sense_table(std::ostream& out, const SenseEmbeddingTable& table) {
    json j = json::object();
    for (const auto& [key, entry] : table.entries()) j[key] = {{"labels", entry.labels}, {"vectors", entry.vectors}};
    out << j.dump(1) << '\n';
}

SenseEmbeddingTable read_sense_table(std::istream& in, std::size_t max_senses) {
    const auto j = parse_json(in, "<sense table>");
    try {
        std::size_t dim = 0;
        for (const auto& [key, entry] : j.items())
            if (!entry.at("vectors").empty()) {
                dim = entry.at("vectors").front().size();
                break;
            }
        SenseEmbeddingTable table(dim, max_senses);
        for (const auto& [key, entry] : j.items())
            table.add(key, entry.at("labels").get<std::vector<std::string>>(), entry.at("vectors").get<std::vector<Vec>>());
        return table;
    } catch (const std::exception& e) {
        throw InputError(std::string("sense table: ") + e.what());
    }
}

void write_attention_params(std::ostream& out, const AttentionParams& params) {
    json j = {{"variant", std::string(attention_variant_name(params.variant))}, {"W", matrix_to_json(params.W)}};
    if (params.variant == AttentionVariant::tanh) {
        j["U"] = matrix_to_json(params.U);
        j["v"] = params.v;
    }
    out << j.dump(1) << '\n';
}

AttentionParams read_attention_params(std::istream& in) {
    const auto j = parse_json(in, "<attention params>");
    try {
        AttentionParams p;
        p.variant = parse_attention_variant(j.at("variant").get<std::string>());
        p.W = matrix_from_json(j.at("W"));
        if (p.variant == AttentionVariant::tanh) {
            p.U = matrix_from_json(j.at("U"));
            p.v = j.at("v").get<Vec>();
        }
        p.validate();
        return p;
    } catch (const InputError&) {
        throw;
    } catch (const std::exception& e) {
        throw InputError(std::string("attention params: ") + e.what());
    }
}

AttentionParams load_attention_params(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open attention parameter file " + path.string());
    return read_attention_params(in);
}

}  // namespace senseforge
