#pragma once

// Knowledge-graph sense disambiguation: personalized PageRank over the
// sense graph, teleporting to the senses of the surrounding content words.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "senseforge/lexicon.hpp"

namespace senseforge {

struct PageRankParams {
    double damping = 0.85;
    double tolerance = 1e-8;  // on the L1 change between iterates
    std::size_t max_iterations = 200;

    void validate() const;
};

// Weighted undirected graph over global sense ids.
class SenseGraph {
public:
    SenseGraph() = default;
    explicit SenseGraph(PageRankParams params) : params_(params) {}

    std::size_t add_node(const std::string& id);  // idempotent
    // Sets the weight of the undirected edge {a, b}; a == b is a self-loop.
    void set_edge(const std::string& a, const std::string& b, double weight = 1.0);

    std::size_t size() const noexcept { return nodes_.size(); }
    bool empty() const noexcept { return nodes_.empty(); }
    const std::vector<std::string>& nodes() const noexcept { return nodes_; }
    std::optional<std::size_t> index_of(std::string_view id) const;

    // Neighbor lists with weights, per node index.
    const std::vector<std::map<std::size_t, double>>& adjacency() const noexcept { return adjacency_; }

    const PageRankParams& params() const noexcept { return params_; }
    void set_params(PageRankParams params) { params_ = params; }

private:
    PageRankParams params_;
    std::vector<std::string> nodes_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::map<std::size_t, double>> adjacency_;
};

// Every inventory sense becomes a node; each neighbor link is an edge of weight 1.
SenseGraph build_sense_graph(const SenseInventory& inv, PageRankParams params = {});

// "src \t dst \t weight" rows overriding or adding edge weights. Both ends
// must already be nodes.
void apply_weighted_edges(SenseGraph& graph, std::istream& in, const std::string& source_name = "<edges>");
void load_weighted_edges(SenseGraph& graph, const std::filesystem::path& path);

struct PageRankResult {
    std::vector<double> probabilities;  // indexed like graph.nodes()
    std::size_t iterations = 0;
    bool converged = false;
};

// p <- (1 - d) t + d M^T p with row-stochastic M; dangling mass follows the
// teleport vector t (normalised from `teleport`, indexed like the nodes).
PageRankResult personalized_pagerank(const SenseGraph& graph, std::span<const double> teleport);
PageRankResult personalized_pagerank(const SenseGraph& graph, const std::map<std::string, double>& teleport);

// Disambiguates sentence_lemmas[target_index]: teleport mass is spread over
// the senses of all other context lemmas found in the inventory (uniform
// over the whole graph if there are none) and the target's most probable
// sense is returned, ties resolved in inventory order.
std::string random_walk_disambiguate(const SenseGraph& graph, const SenseInventory& inv,
                                     std::span<const WordKey> sentence_lemmas, std::size_t target_index);

}  // namespace senseforge
