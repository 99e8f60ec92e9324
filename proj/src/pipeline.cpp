#include "senseforge/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "senseforge/error.hpp"
#include "senseforge/sense_graph.hpp"
#include "senseforge/sense_select.hpp"

namespace senseforge {

void init_logging() {
    static const bool configured = [] {
        auto logger = spdlog::stderr_color_mt("senseforge");
        logger->set_pattern("[%l] %v");
        spdlog::set_default_logger(logger);
        return true;
    }();
    (void)configured;
    const char* env = std::getenv("SENSEFORGE_LOG");
    auto level = spdlog::level::warn;
    if (env && *env) {
        level = spdlog::level::from_str(env);
        // from_str maps unknown names to off
        if (level == spdlog::level::off && std::string_view(env) != "off") level = spdlog::level::warn;
    }
    spdlog::set_level(level);
}

EmbeddingStore load_embedding_store(const PipelineConfig& config) {
    if (config.embeddings.empty()) throw InputError("no embeddings file configured");
    auto store = load_embeddings(config.embeddings);
    if (!config.stopwords.empty()) store.set_stopwords(load_stopwords(config.stopwords));
    return store;
}

std::map<WordKey, std::vector<Occurrence>> ambiguous_occurrences(const TaggedCorpus& corpus, const SenseInventory& inv) {
    std::map<WordKey, std::vector<Occurrence>> out;
    for (std::size_t s = 0; s < corpus.sentences.size(); ++s) {
        const auto& sentence = corpus.sentences[s];
        for (std::size_t t = 0; t < sentence.size(); ++t) {
            auto pos = content_pos(sentence[t].tag);
            if (!pos) continue;
            WordKey key{sentence[t].lemma, *pos};
            const auto* wt = inv.find(key);
            if (wt && wt->senses.size() >= 2) out[key].push_back({s, t});
        }
    }
    return out;
}

std::string cluster_label(const WordKey& key, std::size_t sense_index) {
    return to_string(key) + "." + std::to_string(sense_index);
}

namespace {

std::string coords(std::size_t sentence, std::size_t token) {
    return "sentence " + std::to_string(sentence) + ", token " + std::to_string(token);
}

std::vector<std::vector<std::string>> sentence_lemmas(const TaggedCorpus& corpus) {
    std::vector<std::vector<std::string>> out;
    out.reserve(corpus.sentences.size());
    for (const auto& s : corpus.sentences) {
        std::vector<std::string> lemmas;
        lemmas.reserve(s.size());
        for (const auto& t : s) lemmas.push_back(t.lemma);
        out.push_back(std::move(lemmas));
    }
    return out;
}

// Lemmas of a sentence without its proper nouns, and where each original
// position landed (npos for the dropped ones).
struct FilteredSentence {
    std::vector<std::string> lemmas;
    std::vector<std::size_t> position;
};

FilteredSentence filter_proper_nouns(const CorpusSentence& sentence) {
    FilteredSentence f;
    f.position.assign(sentence.size(), std::string::npos);
    for (std::size_t t = 0; t < sentence.size(); ++t) {
        if (is_proper_noun_tag(sentence[t].tag)) continue;
        f.position[t] = f.lemmas.size();
        f.lemmas.push_back(sentence[t].lemma);
    }
    return f;
}

// Noun/verb tokens with an inventory entry, and where each sentence position landed.
struct ContentWords {
    std::vector<WordKey> keys;
    std::vector<std::size_t> position;  // sentence index -> index in keys, or npos
};

ContentWords content_words(const CorpusSentence& sentence, const SenseInventory& inv) {
    ContentWords cw;
    cw.position.assign(sentence.size(), std::string::npos);
    for (std::size_t t = 0; t < sentence.size(); ++t) {
        if (is_proper_noun_tag(sentence[t].tag)) continue;
        auto pos = content_pos(sentence[t].tag);
        if (!pos) continue;
        WordKey key{sentence[t].lemma, *pos};
        if (!inv.find(key)) continue;
        cw.position[t] = cw.keys.size();
        cw.keys.push_back(std::move(key));
    }
    return cw;
}

SenseGraph make_graph(const PipelineConfig& config, const SenseInventory& inv) {
    auto graph = build_sense_graph(inv, config.pagerank);
    if (!config.edges.empty()) load_weighted_edges(graph, config.edges);
    return graph;
}

void require_path(const std::filesystem::path& p, const char* what) {
    if (p.empty()) throw InputError(std::string("no ") + what + " configured");
}

template <typename Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn) {
    threads = std::max<std::size_t>(1, std::min(threads, n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(threads);
    {
        std::vector<std::jthread> workers;
        for (std::size_t w = 0; w < threads; ++w) {
            workers.emplace_back([&, w] {
                try {
                    for (std::size_t i = next++; i < n; i = next++) fn(i);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace

WordModelResult build_word_model(const PipelineConfig& config, const SenseInventory& inv, const EmbeddingStore& store,
                                 const TaggedCorpus& corpus, const std::vector<std::vector<std::string>>& lemmas,
                                 const WordKey& key, const std::vector<Occurrence>& occurrences,
                                 const SenseGraph* graph) {
    WordModelResult r;
    r.key = key;
    const WordType& wt = inv.at(key);

    std::vector<Vec> contexts;
    std::vector<std::size_t> context_owner;  // index into occurrences
    for (std::size_t i = 0; i < occurrences.size(); ++i) {
        const auto& occ = occurrences[i];
        auto u = context_vector(lemmas[occ.sentence], occ.token, config.context, store);
        if (!u) {
            r.events.push_back(to_string(key) + ": no usable context at " + coords(occ.sentence, occ.token) +
                               "; excluded from clustering");
            continue;
        }
        contexts.push_back(std::move(*u));
        context_owner.push_back(i);
    }

    if (config.method == Method::graph) {
        if (!graph) throw std::logic_error("graph method without a sense graph");
        std::vector<std::size_t> chosen(occurrences.size());
        for (std::size_t i = 0; i < occurrences.size(); ++i) {
            const auto& occ = occurrences[i];
            const auto cw = content_words(corpus.sentences[occ.sentence], inv);
            const auto id = random_walk_disambiguate(*graph, inv, cw.keys, cw.position[occ.token]);
            chosen[i] = inv.find_sense(id)->index;
        }
        ClusterModel m;
        m.key = key;
        m.init_mode = config.init_mode;
        m.dim = store.dim();
        std::vector<Vec> sums(wt.senses.size(), Vec(store.dim(), 0.0));
        std::vector<std::size_t> with_context(wt.senses.size(), 0), members(wt.senses.size(), 0);
        for (std::size_t i : chosen) ++members[i];
        for (std::size_t c = 0; c < contexts.size(); ++c) {
            const std::size_t j = chosen[context_owner[c]];
            axpy(sums[j], 1.0, contexts[c]);
            ++with_context[j];
        }
        for (std::size_t j = 0; j < wt.senses.size(); ++j) {
            if (members[j] == 0) continue;
            if (with_context[j] > 0)
                for (double& x : sums[j]) x /= static_cast<double>(with_context[j]);
            m.clusters.push_back({wt.senses[j].id, std::move(sums[j]), members[j]});
        }
        r.model = std::move(m);
        return r;
    }

    if (contexts.empty()) {
        r.skip_reason = "no occurrence has a usable context vector";
        return r;
    }

    std::vector<Vec> init;
    std::vector<std::string> labels;
    for (std::size_t j = 0; j < wt.senses.size(); ++j) {
        const auto& sense = wt.senses[j];
        std::optional<Vec> v;
        if (config.init_mode == InitMode::definitions) {
            if (!sense.has_definition()) continue;
            v = definition_vector(sense, store);
        } else {
            if (!sense.has_example()) continue;
            v = example_vector(sense, key.lemma, config.context, store);
        }
        if (!v) {
            r.events.push_back(to_string(key) + ": sense " + sense.id + " has no embeddable " +
                               std::string(config.init_mode == InitMode::definitions ? "definition" : "example") +
                               "; not used for initialisation");
            continue;
        }
        init.push_back(std::move(*v));
        labels.push_back(cluster_label(key, j));
    }
    if (init.empty()) {
        r.skip_reason = std::string("no sense can be initialised from ") + std::string(init_mode_name(config.init_mode));
        return r;
    }

    ClusterModel model;
    if (config.method == Method::kmeans) {
        model = kmeans_adaptive(contexts, init, labels, {config.min_cluster_size, config.max_iters}).model;
    } else {
        model = crp_cluster(contexts, init, labels, config.crp).model;
    }
    model.key = key;
    model.init_mode = config.init_mode;
    r.model = std::move(model);
    return r;
}

BuildSummary cmd_build(const PipelineConfig& config) {
    config.validate();
    require_path(config.inventory, "inventory");
    require_path(config.corpus, "corpus");
    require_path(config.models, "models directory");

    const auto inv = load_inventory(config.inventory);
    const auto store = load_embedding_store(config);
    const auto corpus = load_corpus(config.corpus);
    const auto lemmas = sentence_lemmas(corpus);
    const auto occurrences = ambiguous_occurrences(corpus, inv);

    std::optional<SenseGraph> graph;
    if (config.method == Method::graph) graph = make_graph(config, inv);

    std::vector<const std::pair<const WordKey, std::vector<Occurrence>>*> work;
    for (const auto& entry : occurrences) work.push_back(&entry);
    std::vector<WordModelResult> results(work.size());
    parallel_for(work.size(), config.threads, [&](std::size_t i) {
        results[i] = build_word_model(config, inv, store, corpus, lemmas, work[i]->first, work[i]->second,
                                      graph ? &*graph : nullptr);
    });

    std::filesystem::create_directories(config.models);
    BuildSummary summary;
    summary.manifest.method = config.method;
    summary.manifest.init_mode = config.init_mode;
    for (const auto& r : results) {
        for (const auto& e : r.events) spdlog::info("{}", e);
        if (!r.model) {
            spdlog::info("{}: skipped ({})", to_string(r.key), r.skip_reason);
            summary.manifest.skipped.push_back({r.key, r.skip_reason});
            continue;
        }
        const auto file = model_file_name(r.key);
        save_model(config.models / file, *r.model);
        summary.manifest.models.push_back({r.key, file, r.model->clusters.size(), r.model->total_count()});
    }
    save_manifest(config.models, summary.manifest);
    spdlog::info("build: {} models written, {} word types skipped", summary.manifest.models.size(),
                 summary.manifest.skipped.size());
    return summary;
}

std::string instance_id(const WordKey& key, std::size_t sentence, std::size_t token) {
    return to_string(key) + "." + std::to_string(sentence) + "_" + std::to_string(token);
}

LabelSummary cmd_label(const PipelineConfig& config) {
    config.validate();
    require_path(config.inventory, "inventory");
    require_path(config.corpus, "corpus");
    require_path(config.output, "output path");

    const auto inv = load_inventory(config.inventory);
    CorpusOptions copts;
    copts.drop_proper_nouns = false;
    const auto corpus = load_corpus(config.corpus, copts);

    std::optional<EmbeddingStore> store;
    std::map<WordKey, ClusterModel> models;
    std::optional<SenseGraph> graph;
    if (config.method == Method::graph) {
        graph = make_graph(config, inv);
    } else {
        require_path(config.models, "models directory");
        const auto manifest = load_manifest(config.models);
        if (manifest.method != config.method)
            throw InputError("models in " + config.models.string() + " were built with method " +
                             std::string(method_name(manifest.method)) + ", not " + std::string(method_name(config.method)));
        models = load_models(config.models, manifest);
        store = load_embedding_store(config);
    }

    std::ofstream out(config.output, std::ios::binary);
    if (!out) throw InputError("cannot write " + config.output.string());
    const auto instances_path = std::filesystem::path(config.output.string() + ".instances.tsv");
    std::ofstream instances(instances_path, std::ios::binary);
    if (!instances) throw InputError("cannot write " + instances_path.string());

    LabelSummary summary;
    for (std::size_t s = 0; s < corpus.sentences.size(); ++s) {
        CorpusSentence sentence = corpus.sentences[s];
        const auto filtered = filter_proper_nouns(sentence);
        std::optional<ContentWords> cw;
        if (graph) cw = content_words(sentence, inv);

        for (std::size_t t = 0; t < sentence.size(); ++t) {
            auto& tok = sentence[t];
            tok.label = tok.surface;
            ++summary.tokens;
            if (is_proper_noun_tag(tok.tag)) continue;
            auto pos = content_pos(tok.tag);
            if (!pos) continue;
            const WordKey key{tok.lemma, *pos};
            const auto* wt = inv.find(key);
            if (!wt || wt->senses.size() < 2) continue;

            const std::string& first_sense = wt->senses.front().id;
            if (graph) {
                tok.label = random_walk_disambiguate(*graph, inv, cw->keys, cw->position[t]);
            } else if (auto it = models.find(key); it == models.end()) {
                tok.label = first_sense;
                ++summary.fallbacks;
                spdlog::info("{}: no model at {}; labelled with first-listed sense", to_string(key), coords(s, t));
            } else if (auto u = context_vector(filtered.lemmas, filtered.position[t], config.context, *store); !u) {
                tok.label = first_sense;
                ++summary.fallbacks;
                spdlog::info("{}: no usable context at {}; labelled with first-listed sense", to_string(key), coords(s, t));
            } else {
                const auto a = kmeans_assign(it->second, *u);
                tok.label = a.label;
                if (a.fallback) {
                    ++summary.fallbacks;
                    spdlog::info("{}: zero context vector at {}; first cluster used", to_string(key), coords(s, t));
                }
            }
            ++summary.sense_labelled;
            instances << instance_id(key, s, t) << '\t' << *tok.label << '\n';
        }
        write_sentence(out, sentence);
        ++summary.sentences;
    }
    spdlog::info("label: {} sentences, {} tokens, {} sense labels, {} fallbacks", summary.sentences, summary.tokens,
                 summary.sense_labelled, summary.fallbacks);
    return summary;
}

std::vector<std::pair<std::string, std::string>> load_label_tsv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open label file " + path.string());
    std::vector<std::pair<std::string, std::string>> rows;
    std::set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0 || tab + 1 == line.size())
            throw ParseError(path.string(), line_no, "expected 'instance_id<TAB>label'");
        std::string id = line.substr(0, tab);
        if (!seen.insert(id).second) throw ParseError(path.string(), line_no, "duplicate instance id '" + id + "'");
        rows.emplace_back(std::move(id), line.substr(tab + 1));
    }
    return rows;
}

std::vector<WordEvaluation> join_instances(const std::vector<std::pair<std::string, std::string>>& predicted,
                                           const std::vector<std::pair<std::string, std::string>>& gold,
                                           const std::map<WordKey, std::size_t>& model_cluster_counts) {
    std::map<std::string, std::string> gold_by_id(gold.begin(), gold.end());
    std::set<std::string> matched;
    std::map<WordKey, WordEvaluation> words;
    for (const auto& [id, label] : predicted) {
        auto g = gold_by_id.find(id);
        if (g == gold_by_id.end()) throw InputError("instance '" + id + "' is predicted but has no gold label");
        const auto dot = id.rfind('.');
        auto key = dot == std::string::npos ? std::nullopt : parse_word_key(std::string_view(id).substr(0, dot));
        if (!key) throw InputError("instance id '" + id + "' does not start with a lemma.pos key");
        auto& w = words[*key];
        w.key = *key;
        w.data.push_back(id, label, g->second);
        matched.insert(id);
    }
    for (const auto& [id, label] : gold)
        if (!matched.contains(id)) throw InputError("instance '" + id + "' has a gold label but no prediction");

    std::vector<WordEvaluation> out;
    for (auto& [key, w] : words) {
        if (auto it = model_cluster_counts.find(key); it != model_cluster_counts.end()) {
            w.cluster_count = it->second;
        } else {
            w.cluster_count = std::set<std::string>(w.data.predicted.begin(), w.data.predicted.end()).size();
        }
        out.push_back(std::move(w));
    }
    return out;
}

namespace {

std::ofstream open_output(const std::filesystem::path& prefix, const char* extension) {
    const auto path = std::filesystem::path(prefix.string() + extension);
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    return out;
}

}  // namespace

WsiReport cmd_eval_wsi(const PipelineConfig& config, const std::filesystem::path& predicted_tsv,
                       const std::filesystem::path& gold_tsv, const std::filesystem::path& out_prefix,
                       const std::string& system_name) {
    const auto predicted = load_label_tsv(predicted_tsv);
    const auto gold = load_label_tsv(gold_tsv);
    std::map<WordKey, std::size_t> counts;
    if (!config.models.empty() && std::filesystem::exists(config.models / kManifestFile)) {
        for (const auto& e : load_manifest(config.models).models) counts[e.key] = e.clusters;
    }
    const auto words = join_instances(predicted, gold, counts);
    if (words.empty()) throw InputError("no instances to evaluate");
    const auto report = wsi_report(words);

    auto json_out = open_output(out_prefix, ".json");
    write_wsi_json(json_out, report, system_name);
    auto csv_out = open_output(out_prefix, ".csv");
    write_wsi_csv(csv_out, report, system_name);
    auto tsv_out = open_output(out_prefix, ".tsv");
    write_wsi_tsv(tsv_out, report, system_name);
    return report;
}

namespace {

std::vector<std::vector<std::string>> read_token_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path.string());
    std::vector<std::vector<std::string>> lines;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ss(line);
        std::vector<std::string> toks;
        for (std::string t; ss >> t;) toks.push_back(t);
        lines.push_back(std::move(toks));
    }
    return lines;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path.string());
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) lines.push_back(std::move(line));
    return lines;
}

// Source index -> lowest aligned target index.
std::map<std::size_t, std::size_t> first_targets(const std::string& line, std::size_t target_len,
                                                 const std::filesystem::path& path, std::size_t line_no) {
    std::map<std::size_t, std::size_t> out;
    try {
        for (auto [s, t] : parse_alignment_line(line)) {
            if (t >= target_len)
                throw InputError("target index " + std::to_string(t) + " beyond sentence of length " + std::to_string(target_len));
            auto [it, inserted] = out.emplace(s, t);
            if (!inserted) it->second = std::min(it->second, t);
        }
    } catch (const InputError& e) {
        throw ParseError(path.string(), line_no, e.what());
    }
    return out;
}

}  // namespace

std::vector<AlignedTriple> build_triples(const PipelineConfig& config, const RhoInputs& in) {
    CorpusOptions copts;
    copts.drop_proper_nouns = false;
    copts.allow_labels = true;
    const auto source = load_corpus(in.source, copts);
    std::optional<SenseInventory> inv;
    if (!config.inventory.empty()) inv = load_inventory(config.inventory);

    const std::filesystem::path* target_paths[] = {&in.system, &in.baseline, &in.reference};
    const std::filesystem::path* align_paths[] = {&in.align_system, &in.align_baseline, &in.align_reference};
    std::vector<std::vector<std::vector<std::string>>> targets;
    std::vector<std::vector<std::string>> aligns;
    for (int k = 0; k < 3; ++k) {
        targets.push_back(read_token_lines(*target_paths[k]));
        aligns.push_back(read_lines(*align_paths[k]));
        if (targets.back().size() != source.sentences.size() || aligns.back().size() != source.sentences.size())
            throw InputError("line count of " + target_paths[k]->string() + " / " + align_paths[k]->string() +
                             " differs from the source corpus (" + std::to_string(source.sentences.size()) + " lines)");
    }

    std::vector<AlignedTriple> triples;
    for (std::size_t s = 0; s < source.sentences.size(); ++s) {
        std::map<std::size_t, std::size_t> links[3];
        for (int k = 0; k < 3; ++k) links[k] = first_targets(aligns[k][s], targets[k][s].size(), *align_paths[k], s + 1);

        const auto& sentence = source.sentences[s];
        for (std::size_t t = 0; t < sentence.size(); ++t) {
            auto pos = content_pos(sentence[t].tag);
            if (!pos) continue;
            if (inv) {
                const auto* wt = inv->find({sentence[t].lemma, *pos});
                if (!wt || wt->senses.size() < 2) continue;
            }
            std::optional<std::string> tok[3];
            for (int k = 0; k < 3; ++k)
                if (auto it = links[k].find(t); it != links[k].end()) tok[k] = targets[k][s][it->second];
            triples.push_back({tok[0], tok[1], tok[2]});
        }
    }
    return triples;
}

LexicalChoiceReport cmd_eval_rho(const PipelineConfig& config, const RhoInputs& inputs,
                                 const std::filesystem::path& out_prefix) {
    const auto triples = build_triples(config, inputs);
    if (triples.empty()) throw InputError("no source tokens of interest found");
    LexicalChoiceReport r{rho(triples), confusion_matrix(triples)};
    auto json_out = open_output(out_prefix, ".json");
    write_lexical_choice_json(json_out, r.rho, r.confusion);
    auto csv_out = open_output(out_prefix, ".csv");
    write_lexical_choice_csv(csv_out, r.rho, r.confusion);
    auto tsv_out = open_output(out_prefix, ".tsv");
    write_lexical_choice_tsv(tsv_out, r.rho, r.confusion);
    return r;
}

std::size_t cmd_demo_select(const PipelineConfig& config, std::ostream& out) {
    config.validate();
    require_path(config.inventory, "inventory");
    require_path(config.corpus, "corpus");
    require_path(config.models, "models directory");

    const auto inv = load_inventory(config.inventory);
    const auto store = load_embedding_store(config);
    CorpusOptions copts;
    copts.drop_proper_nouns = false;
    const auto corpus = load_corpus(config.corpus, copts);
    std::vector<FilteredSentence> filtered;
    for (const auto& sentence : corpus.sentences) filtered.push_back(filter_proper_nouns(sentence));
    const auto models = load_models(config.models, load_manifest(config.models));

    const bool attention = config.selection == SelectionMode::att_tanh || config.selection == SelectionMode::att_bilinear;
    std::optional<AttIniTables> tables;
    std::optional<AttentionParams> params;
    if (attention) {
        std::vector<std::string> vocabulary;
        for (const auto& f : filtered) vocabulary.insert(vocabulary.end(), f.lemmas.begin(), f.lemmas.end());
        AttIniOptions opts;
        opts.target_word_dim = config.word_dim == 0 ? store.dim() : config.word_dim;
        opts.pad_range = config.pad_range;
        opts.seed = config.seed;
        opts.max_senses = config.max_senses;
        opts.monosemous = config.monosemous;
        tables = init_att_ini(store, vocabulary, models, opts);

        const auto variant = config.selection == SelectionMode::att_tanh ? AttentionVariant::tanh : AttentionVariant::bilinear;
        if (!config.attention_params.empty()) {
            params = load_attention_params(config.attention_params);
            if (params->variant != variant) throw InputError("attention parameter file holds the other attention variant");
        } else {
            params = AttentionParams::random(variant, opts.target_word_dim, tables->senses.dim(), config.attention_dim,
                                             config.seed + 1);
        }
    }

    std::size_t traced = 0;
    for (std::size_t s = 0; s < corpus.sentences.size(); ++s) {
        const auto& sentence = corpus.sentences[s];
        std::vector<Vec> sentence_embeddings;
        if (attention)
            for (const auto& l : filtered[s].lemmas) sentence_embeddings.push_back(tables->words.at(l));

        for (std::size_t t = 0; t < sentence.size(); ++t) {
            auto pos = content_pos(sentence[t].tag);
            if (!pos) continue;
            const std::size_t ft = filtered[s].position[t];
            const WordKey key{sentence[t].lemma, *pos};
            const auto* wt = inv.find(key);
            if (!wt || wt->senses.size() < 2) continue;
            auto it = models.find(key);
            if (it == models.end()) {
                spdlog::info("{}: no model at {}; not traced", to_string(key), coords(s, t));
                continue;
            }
            const auto& model = it->second;

            nlohmann::json rec = {{"sentence", s},
                                  {"token", t},
                                  {"key", to_string(key)},
                                  {"mode", std::string(selection_mode_name(config.selection))}};
            Vec weights;
            if (model.clusters.size() == 1) {
                rec["labels"] = model.labels();
                weights = {1.0};
            } else if (attention) {
                const auto* entry = tables->senses.find(to_string(key));
                const Vec u = att_context_or_zero(sentence_embeddings, ft);
                const Vec scores = att_scores(u, entry->vectors, *params);
                weights = att_weights(scores).weights;
                rec["labels"] = entry->labels;
                rec["scores"] = scores;
            } else {
                auto u = context_vector(filtered[s].lemmas, ft, config.context, store);
                if (!u) {
                    spdlog::info("{}: no usable context at {}; not traced", to_string(key), coords(s, t));
                    continue;
                }
                const std::size_t k = config.selection == SelectionMode::top
                                          ? model.clusters.size()
                                          : std::min(config.max_senses, model.clusters.size());
                Vec distances(k);
                std::vector<std::string> labels(k);
                for (std::size_t j = 0; j < k; ++j) {
                    distances[j] = cosine_distance(*u, model.clusters[j].centroid);
                    labels[j] = model.clusters[j].label;
                }
                if (config.selection == SelectionMode::top) {
                    weights.assign(k, 0.0);
                    weights[kmeans_assign(model, *u).index] = 1.0;
                } else {
                    const auto mode = config.selection == SelectionMode::avg_linear ? WeightMode::avg_linear
                                                                                    : WeightMode::avg_logistic;
                    try {
                        weights = avg_weights(distances, mode, config.renormalize_linear).weights;
                    } catch (const std::domain_error& e) {
                        spdlog::info("{}: {} at {}; not traced", to_string(key), e.what(), coords(s, t));
                        continue;
                    }
                }
                rec["labels"] = labels;
                rec["distances"] = distances;
            }
            double sum = 0.0;
            for (double w : weights) sum += w;
            rec["weights"] = weights;
            rec["weight_sum"] = sum;
            out << rec.dump() << '\n';
            ++traced;
        }
    }
    return traced;
}

}  // namespace senseforge
