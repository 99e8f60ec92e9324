#pragma once

// Sense clustering of token context vectors: adaptive k-means with
// small-cluster absorption and a bounded, knowledge-initialised Chinese
// restaurant process. Everything here is deterministic.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "senseforge/lexicon.hpp"
#include "senseforge/linalg.hpp"

namespace senseforge {

enum class InitMode { definitions, examples };

std::string_view init_mode_name(InitMode mode);
InitMode parse_init_mode(std::string_view name);

struct Cluster {
    std::string label;
    Vec centroid;
    std::size_t count = 0;

    friend bool operator==(const Cluster&, const Cluster&) = default;
};

struct ClusterModel {
    WordKey key;
    InitMode init_mode = InitMode::definitions;
    std::size_t dim = 0;
    std::vector<Cluster> clusters;

    std::size_t total_count() const;
    std::vector<std::string> labels() const;

    friend bool operator==(const ClusterModel&, const ClusterModel&) = default;
};

struct KmeansOptions {
    std::size_t min_cluster_size = 10;
    std::size_t max_iters = 100;
};

struct KmeansResult {
    ClusterModel model;
    std::vector<std::size_t> assignments;  // per context, index into model.clusters
    // Within-cluster sum of squared distances, recorded after every
    // assignment step and every centroid update of the Lloyd phase.
    std::vector<double> objective_trace;
    std::size_t iterations = 0;
    bool converged = false;
};

// Lloyd iterations (squared-Euclidean assignment, mean update) from the
// given sense centroids, followed by reduce_small_clusters. Only `clusters`,
// `dim` of the returned model are set; key and init_mode are the caller's.
KmeansResult kmeans_adaptive(std::span<const Vec> contexts, std::span<const Vec> init_centroids,
                             std::span<const std::string> labels, const KmeansOptions& options = {});

// Sum of squared distances from each context to its assigned centroid.
double kmeans_objective(std::span<const Vec> contexts, std::span<const Vec> centroids,
                        std::span<const std::size_t> assignments);

// Removes clusters with fewer than min_cluster_size tokens (smallest first)
// and moves their tokens to the cosine-nearest cluster that was large to
// begin with. Centroids of the survivors are left as they are. If no
// cluster is large, the biggest one takes every token. Empty clusters are
// always dropped. `assignments` is rewritten to index the returned model.
ClusterModel reduce_small_clusters(const ClusterModel& model, std::size_t min_cluster_size,
                                   std::span<const Vec> contexts, std::vector<std::size_t>& assignments);

struct Assignment {
    std::size_t index = 0;
    std::string label;
    bool fallback = false;  // zero context vector: first cluster chosen without a comparison
};

// Nearest centroid by cosine distance; ties go to the lowest index.
Assignment kmeans_assign(const ClusterModel& model, std::span<const double> context);

struct CrpParams {
    double lambda1 = 0.5;
    double lambda2 = 0.5;
    double gamma = 1.0;

    void validate() const;
};

struct CrpResult {
    ClusterModel model;                    // non-empty senses only, in sense order
    std::vector<std::size_t> assignments;  // per context, index into model.clusters
    std::vector<std::size_t> sense_of;     // per context, index into the input senses
    std::vector<std::size_t> counts;       // N_j for every input sense
};

// Score of each sense for one token: N_j (l1 s(u,d_j) + l2 s(u,mu_j)) when
// sense j already holds tokens, gamma s(u,d_j) when it is empty.
std::vector<double> crp_scores(std::span<const double> context, std::span<const Vec> def_vectors,
                               std::span<const Vec> running_means, std::span<const std::size_t> counts,
                               const CrpParams& params);

// One sequential pass in input order, each token going to the argmax sense.
CrpResult crp_cluster(std::span<const Vec> contexts, std::span<const Vec> def_vectors,
                      std::span<const std::string> labels, const CrpParams& params);

}  // namespace senseforge
