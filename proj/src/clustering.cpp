#include "senseforge/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "senseforge/error.hpp"

namespace senseforge {

std::string_view init_mode_name(InitMode mode) { return mode == InitMode::definitions ? "definitions" : "examples"; }

InitMode parse_init_mode(std::string_view name) {
    if (name == "definitions") return InitMode::definitions;
    if (name == "examples") return InitMode::examples;
    throw InputError("unknown init mode '" + std::string(name) + "' (expected definitions or examples)");
}

std::size_t ClusterModel::total_count() const {
    std::size_t n = 0;
    for (const auto& c : clusters) n += c.count;
    return n;
}

std::vector<std::string> ClusterModel::labels() const {
    std::vector<std::string> out;
    out.reserve(clusters.size());
    for (const auto& c : clusters) out.push_back(c.label);
    return out;
}

namespace {

void require_dim(std::span<const Vec> vectors, std::size_t dim, const char* what) {
    for (const auto& v : vectors)
        if (v.size() != dim)
            throw std::invalid_argument(std::string(what) + ": dimension mismatch (expected " + std::to_string(dim) +
                                        ", got " + std::to_string(v.size()) + ")");
}

std::size_t nearest_euclidean(std::span<const double> x, std::span<const Vec> centroids) {
    std::size_t best = 0;
    double best_d = squared_distance(x, centroids[0]);
    for (std::size_t j = 1; j < centroids.size(); ++j) {
        const double d = squared_distance(x, centroids[j]);
        if (d < best_d) {
            best_d = d;
            best = j;
        }
    }
    return best;
}

std::vector<std::size_t> assign_all(std::span<const Vec> contexts, std::span<const Vec> centroids) {
    std::vector<std::size_t> out(contexts.size());
    for (std::size_t i = 0; i < contexts.size(); ++i) out[i] = nearest_euclidean(contexts[i], centroids);
    return out;
}

// Mean update; a cluster that lost all its members keeps its previous centroid.
void update_centroids(std::span<const Vec> contexts, std::span<const std::size_t> assignments,
                      std::vector<Vec>& centroids) {
    const std::size_t dim = centroids.front().size();
    std::vector<Vec> sums(centroids.size(), Vec(dim, 0.0));
    std::vector<std::size_t> counts(centroids.size(), 0);
    for (std::size_t i = 0; i < contexts.size(); ++i) {
        axpy(sums[assignments[i]], 1.0, contexts[i]);
        ++counts[assignments[i]];
    }
    for (std::size_t j = 0; j < centroids.size(); ++j) {
        if (counts[j] == 0) continue;
        for (double& x : sums[j]) x /= static_cast<double>(counts[j]);
        centroids[j] = std::move(sums[j]);
    }
}

}  // namespace

double kmeans_objective(std::span<const Vec> contexts, std::span<const Vec> centroids,
                        std::span<const std::size_t> assignments) {
    double total = 0.0;
    for (std::size_t i = 0; i < contexts.size(); ++i) total += squared_distance(contexts[i], centroids[assignments[i]]);
    return total;
}

KmeansResult kmeans_adaptive(std::span<const Vec> contexts, std::span<const Vec> init_centroids,
                             std::span<const std::string> labels, const KmeansOptions& options) {
    if (init_centroids.empty()) throw std::invalid_argument("kmeans_adaptive: no initial centroids");
    if (labels.size() != init_centroids.size())
        throw std::invalid_argument("kmeans_adaptive: label count differs from centroid count");
    if (contexts.empty()) throw std::invalid_argument("kmeans_adaptive: no contexts to cluster");
    const std::size_t dim = init_centroids.front().size();
    if (dim == 0) throw std::invalid_argument("kmeans_adaptive: zero-dimensional centroids");
    require_dim(init_centroids, dim, "kmeans_adaptive");
    require_dim(contexts, dim, "kmeans_adaptive");

    KmeansResult result;
    std::vector<Vec> centroids(init_centroids.begin(), init_centroids.end());
    auto assignments = assign_all(contexts, centroids);
    result.objective_trace.push_back(kmeans_objective(contexts, centroids, assignments));

    for (std::size_t it = 1; it <= options.max_iters; ++it) {
        update_centroids(contexts, assignments, centroids);
        result.objective_trace.push_back(kmeans_objective(contexts, centroids, assignments));
        auto next = assign_all(contexts, centroids);
        result.objective_trace.push_back(kmeans_objective(contexts, centroids, next));
        result.iterations = it;
        const bool stable = next == assignments;
        assignments = std::move(next);
        if (stable) {
            result.converged = true;
            break;
        }
    }
    if (!result.converged) {
        // leave centroids as the means of the final partition
        update_centroids(contexts, assignments, centroids);
        result.objective_trace.push_back(kmeans_objective(contexts, centroids, assignments));
    }

    ClusterModel raw;
    raw.dim = dim;
    raw.clusters.resize(centroids.size());
    for (std::size_t j = 0; j < centroids.size(); ++j) {
        raw.clusters[j].label = labels[j];
        raw.clusters[j].centroid = std::move(centroids[j]);
    }
    for (std::size_t a : assignments) ++raw.clusters[a].count;

    result.model = reduce_small_clusters(raw, options.min_cluster_size, contexts, assignments);
    result.assignments = std::move(assignments);
    return result;
}

ClusterModel reduce_small_clusters(const ClusterModel& model, std::size_t min_cluster_size,
                                   std::span<const Vec> contexts, std::vector<std::size_t>& assignments) {
    const std::size_t k = model.clusters.size();
    if (assignments.size() != contexts.size())
        throw std::invalid_argument("reduce_small_clusters: assignments do not match contexts");

    std::vector<std::size_t> counts(k, 0);
    for (std::size_t a : assignments) {
        if (a >= k) throw std::invalid_argument("reduce_small_clusters: assignment out of range");
        ++counts[a];
    }

    std::vector<std::size_t> large;
    for (std::size_t j = 0; j < k; ++j)
        if (counts[j] > 0 && counts[j] >= min_cluster_size) large.push_back(j);

    std::vector<bool> survives(k, false);
    if (large.empty()) {
        if (!contexts.empty()) {
            const auto biggest = static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
            survives[biggest] = true;
            std::fill(assignments.begin(), assignments.end(), biggest);
        }
    } else {
        for (std::size_t j : large) survives[j] = true;

        std::vector<std::size_t> small;
        for (std::size_t j = 0; j < k; ++j)
            if (counts[j] > 0 && !survives[j]) small.push_back(j);
        std::stable_sort(small.begin(), small.end(),
                         [&](std::size_t a, std::size_t b) { return counts[a] < counts[b]; });

        std::vector<std::vector<std::size_t>> members(k);
        for (std::size_t i = 0; i < assignments.size(); ++i) members[assignments[i]].push_back(i);

        for (std::size_t j : small) {
            for (std::size_t i : members[j]) {
                std::size_t best = large.front();
                double best_d = cosine_distance(contexts[i], model.clusters[best].centroid);
                for (std::size_t c = 1; c < large.size(); ++c) {
                    const double d = cosine_distance(contexts[i], model.clusters[large[c]].centroid);
                    if (d < best_d) {
                        best_d = d;
                        best = large[c];
                    }
                }
                assignments[i] = best;
            }
        }
    }

    std::vector<std::size_t> remap(k, 0);
    ClusterModel out;
    out.key = model.key;
    out.init_mode = model.init_mode;
    out.dim = model.dim;
    for (std::size_t j = 0; j < k; ++j) {
        if (!survives[j]) continue;
        remap[j] = out.clusters.size();
        out.clusters.push_back({model.clusters[j].label, model.clusters[j].centroid, 0});
    }
    for (auto& a : assignments) {
        a = remap[a];
        ++out.clusters[a].count;
    }
    return out;
}

Assignment kmeans_assign(const ClusterModel& model, std::span<const double> context) {
    if (model.clusters.empty()) throw std::invalid_argument("kmeans_assign: model has no clusters");
    if (context.size() != model.dim) throw std::invalid_argument("kmeans_assign: dimension mismatch");
    if (is_zero(context)) return {0, model.clusters.front().label, true};

    std::size_t best = 0;
    double best_d = cosine_distance(context, model.clusters[0].centroid);
    for (std::size_t j = 1; j < model.clusters.size(); ++j) {
        const double d = cosine_distance(context, model.clusters[j].centroid);
        if (d < best_d) {
            best_d = d;
            best = j;
        }
    }
    return {best, model.clusters[best].label, false};
}

void CrpParams::validate() const {
    for (double p : {lambda1, lambda2, gamma})
        if (!std::isfinite(p) || p < 0.0) throw InputError("CRP hyper-parameters must be finite and non-negative");
    if (lambda1 == 0.0 && lambda2 == 0.0 && gamma == 0.0)
        throw InputError("CRP hyper-parameters must not all be zero");
}

std::vector<double> crp_scores(std::span<const double> context, std::span<const Vec> def_vectors,
                               std::span<const Vec> running_means, std::span<const std::size_t> counts,
                               const CrpParams& params) {
    std::vector<double> scores(def_vectors.size());
    for (std::size_t j = 0; j < def_vectors.size(); ++j) {
        const double s_def = cosine_similarity(context, def_vectors[j]);
        if (counts[j] == 0) {
            scores[j] = params.gamma * s_def;
        } else {
            const double s_mean = cosine_similarity(context, running_means[j]);
            scores[j] = static_cast<double>(counts[j]) * (params.lambda1 * s_def + params.lambda2 * s_mean);
        }
    }
    return scores;
}

CrpResult crp_cluster(std::span<const Vec> contexts, std::span<const Vec> def_vectors,
                      std::span<const std::string> labels, const CrpParams& params) {
    params.validate();
    if (def_vectors.empty()) throw std::invalid_argument("crp_cluster: no senses");
    if (labels.size() != def_vectors.size()) throw std::invalid_argument("crp_cluster: label count differs from sense count");
    if (contexts.empty()) throw std::invalid_argument("crp_cluster: no contexts to cluster");
    const std::size_t dim = def_vectors.front().size();
    require_dim(def_vectors, dim, "crp_cluster");
    require_dim(contexts, dim, "crp_cluster");

    const std::size_t k = def_vectors.size();
    std::vector<Vec> means(k, Vec(dim, 0.0));
    std::vector<std::size_t> counts(k, 0);
    CrpResult result;
    result.sense_of.reserve(contexts.size());

    for (const auto& u : contexts) {
        const auto scores = crp_scores(u, def_vectors, means, counts, params);
        const auto j = static_cast<std::size_t>(std::max_element(scores.begin(), scores.end()) - scores.begin());
        ++counts[j];
        const double inv_n = 1.0 / static_cast<double>(counts[j]);
        for (std::size_t d = 0; d < dim; ++d) means[j][d] += (u[d] - means[j][d]) * inv_n;
        result.sense_of.push_back(j);
    }

    std::vector<std::size_t> remap(k, 0);
    result.model.dim = dim;
    for (std::size_t j = 0; j < k; ++j) {
        if (counts[j] == 0) continue;
        remap[j] = result.model.clusters.size();
        result.model.clusters.push_back({labels[j], means[j], counts[j]});
    }
    result.assignments.reserve(contexts.size());
    for (std::size_t j : result.sense_of) result.assignments.push_back(remap[j]);
    result.counts = std::move(counts);
    return result;
}

}  // namespace senseforge
