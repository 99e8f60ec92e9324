#include "senseforge/sense_graph.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "senseforge/error.hpp"

namespace senseforge {

void PageRankParams::validate() const {
    if (!(damping > 0.0 && damping < 1.0)) throw InputError("PageRank damping must lie in (0, 1)");
    if (!(tolerance > 0.0)) throw InputError("PageRank tolerance must be positive");
    if (max_iterations == 0) throw InputError("PageRank max_iterations must be positive");
}

std::size_t SenseGraph::add_node(const std::string& id) {
    auto [it, inserted] = index_.try_emplace(id, nodes_.size());
    if (inserted) {
        nodes_.push_back(id);
        adjacency_.emplace_back();
    }
    return it->second;
}

void SenseGraph::set_edge(const std::string& a, const std::string& b, double weight) {
    if (!(weight > 0.0) || !std::isfinite(weight))
        throw InputError("edge " + a + " - " + b + " must have a positive finite weight");
    auto ia = index_of(a);
    auto ib = index_of(b);
    if (!ia) throw InputError("edge endpoint " + a + " is not a graph node");
    if (!ib) throw InputError("edge endpoint " + b + " is not a graph node");
    adjacency_[*ia][*ib] = weight;
    adjacency_[*ib][*ia] = weight;
}

std::optional<std::size_t> SenseGraph::index_of(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

SenseGraph build_sense_graph(const SenseInventory& inv, PageRankParams params) {
    SenseGraph g(params);
    for (const auto& [key, wt] : inv.entries())
        for (const auto& s : wt.senses) g.add_node(s.id);
    for (const auto& [key, wt] : inv.entries())
        for (const auto& s : wt.senses)
            for (const auto& n : s.neighbors) g.set_edge(s.id, n, 1.0);
    return g;
}

void apply_weighted_edges(SenseGraph& graph, std::istream& in, const std::string& source_name) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        std::istringstream fields(line);
        std::string src, dst, weight_text;
        if (!std::getline(fields, src, '\t') || !std::getline(fields, dst, '\t') || !std::getline(fields, weight_text))
            throw ParseError(source_name, line_no, "expected 'src<TAB>dst<TAB>weight'");
        double weight = 0.0;
        try {
            std::size_t used = 0;
            weight = std::stod(weight_text, &used);
            if (used != weight_text.size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw ParseError(source_name, line_no, "invalid edge weight '" + weight_text + "'");
        }
        try {
            graph.set_edge(src, dst, weight);
        } catch (const InputError& e) {
            throw ParseError(source_name, line_no, e.what());
        }
    }
}

void load_weighted_edges(SenseGraph& graph, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open edge file " + path.string());
    apply_weighted_edges(graph, in, path.string());
}

PageRankResult personalized_pagerank(const SenseGraph& graph, std::span<const double> teleport) {
    const std::size_t n = graph.size();
    if (n == 0) throw std::invalid_argument("personalized_pagerank: empty graph");
    if (teleport.size() != n) throw std::invalid_argument("personalized_pagerank: teleport size differs from node count");
    graph.params().validate();

    double mass = 0.0;
    for (double w : teleport) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("personalized_pagerank: teleport weights must be finite and >= 0");
        mass += w;
    }
    if (!(mass > 0.0)) throw std::invalid_argument("personalized_pagerank: teleport has no positive weight");
    std::vector<double> t(teleport.begin(), teleport.end());
    for (double& x : t) x /= mass;

    const auto& adj = graph.adjacency();
    std::vector<double> out_weight(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& [j, w] : adj[i]) out_weight[i] += w;

    const double d = graph.params().damping;
    PageRankResult result;
    std::vector<double> p = t;
    std::vector<double> next(n);
    for (std::size_t it = 1; it <= graph.params().max_iterations; ++it) {
        double dangling = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            next[i] = (1.0 - d) * t[i];
            if (out_weight[i] == 0.0) dangling += p[i];
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (out_weight[i] == 0.0 || p[i] == 0.0) continue;
            const double share = d * p[i] / out_weight[i];
            for (const auto& [j, w] : adj[i]) next[j] += share * w;
        }
        if (dangling > 0.0)
            for (std::size_t i = 0; i < n; ++i) next[i] += d * dangling * t[i];

        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i) change += std::abs(next[i] - p[i]);
        p.swap(next);
        result.iterations = it;
        if (change < graph.params().tolerance) {
            result.converged = true;
            break;
        }
    }

    double total = 0.0;
    for (double x : p) total += x;
    for (double& x : p) x /= total;
    result.probabilities = std::move(p);
    return result;
}

PageRankResult personalized_pagerank(const SenseGraph& graph, const std::map<std::string, double>& teleport) {
    std::vector<double> t(graph.size(), 0.0);
    for (const auto& [id, w] : teleport) {
        auto idx = graph.index_of(id);
        if (!idx) throw std::invalid_argument("personalized_pagerank: unknown teleport node " + id);
        t[*idx] += w;
    }
    return personalized_pagerank(graph, t);
}

std::string random_walk_disambiguate(const SenseGraph& graph, const SenseInventory& inv,
                                     std::span<const WordKey> sentence_lemmas, std::size_t target_index) {
    if (target_index >= sentence_lemmas.size()) throw std::out_of_range("random_walk_disambiguate: target index out of range");
    const WordKey& target_key = sentence_lemmas[target_index];
    const WordType* target = inv.find(target_key);
    if (!target) throw InputError("word type " + to_string(target_key) + " is not in the inventory");
    if (target->senses.size() == 1) return target->senses.front().id;

    std::vector<double> teleport(graph.size(), 0.0);
    bool any = false;
    for (std::size_t k = 0; k < sentence_lemmas.size(); ++k) {
        if (k == target_index || sentence_lemmas[k] == target_key) continue;
        const WordType* wt = inv.find(sentence_lemmas[k]);
        if (!wt) continue;
        for (const auto& s : wt->senses) {
            if (auto idx = graph.index_of(s.id)) {
                teleport[*idx] = 1.0;
                any = true;
            }
        }
    }
    if (!any) std::fill(teleport.begin(), teleport.end(), 1.0);

    const auto pr = personalized_pagerank(graph, teleport);
    std::size_t best = 0;
    double best_p = -1.0;
    for (std::size_t j = 0; j < target->senses.size(); ++j) {
        auto idx = graph.index_of(target->senses[j].id);
        const double p = idx ? pr.probabilities[*idx] : 0.0;
        if (p > best_p) {
            best_p = p;
            best = j;
        }
    }
    return target->senses[best].id;
}

}  // namespace senseforge
