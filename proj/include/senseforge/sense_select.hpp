#pragma once

// Sense-integration layer for a translation encoder: a token vector is the
// concatenation of its word embedding and a sense embedding, where the sense
// embedding is either the selected sense (TOP), a distance-weighted average
// of the word's senses (AVG) or an attention-weighted average (ATT).

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "senseforge/clustering.hpp"
#include "senseforge/embeddings.hpp"
#include "senseforge/linalg.hpp"

namespace senseforge {

enum class WeightMode { avg_linear, avg_logistic, att_softmax };
std::string_view weight_mode_name(WeightMode mode);

struct SenseWeights {
    Vec weights;
    WeightMode mode = WeightMode::avg_logistic;
};

// [word ; sense]
Vec concat_token(std::span<const double> word_vec, std::span<const double> sense_vec);

// How tokens that were not sense-labelled are represented in the sense dictionary.
enum class MonosemousLabel { word, null };
inline constexpr std::string_view kNullSenseLabel = "<null>";
std::string monosemous_label(std::string_view surface, MonosemousLabel mode);

class SenseEmbeddingTable {
public:
    struct Entry {
        std::vector<std::string> labels;
        std::vector<Vec> vectors;

        friend bool operator==(const Entry&, const Entry&) = default;
    };

    explicit SenseEmbeddingTable(std::size_t dim, std::size_t max_senses = 5);

    // Keeps the first max_senses senses. Throws std::invalid_argument on an
    // empty entry, a label/vector count mismatch, a wrong dimension or
    // duplicate labels.
    void add(std::string key, std::vector<std::string> labels, std::vector<Vec> vectors);

    const Entry* find(std::string_view key) const;
    std::size_t dim() const noexcept { return dim_; }
    std::size_t max_senses() const noexcept { return max_senses_; }
    const std::map<std::string, Entry, std::less<>>& entries() const noexcept { return entries_; }

    friend bool operator==(const SenseEmbeddingTable&, const SenseEmbeddingTable&) = default;

private:
    std::size_t dim_;
    std::size_t max_senses_;
    std::map<std::string, Entry, std::less<>> entries_;
};

// The stored vector for `label`; InputError if key or label is unknown.
const Vec& top_sense(const SenseEmbeddingTable& table, std::string_view key, std::string_view label);

// Linear: w_j = (1 - d_j) / sum_l d_l, exactly as written, so the weights
// need not sum to one. `renormalize` clamps them at 0 and rescales.
// Logistic: w_j = exp(-d_j^2) / sum_l exp(-d_l^2).
SenseWeights avg_weights(std::span<const double> distances, WeightMode mode, bool renormalize = false);

// sum_j w_j mu_j
Vec weighted_sense(const SenseWeights& weights, std::span<const Vec> senses);

// Mean of every embedding except position i; needs at least two tokens.
Vec att_context(std::span<const Vec> sentence_embeddings, std::size_t i);
// Same, but a one-token sentence yields the zero vector.
Vec att_context_or_zero(std::span<const Vec> sentence_embeddings, std::size_t i);

enum class AttentionVariant { tanh, bilinear };
std::string_view attention_variant_name(AttentionVariant variant);
AttentionVariant parse_attention_variant(std::string_view name);

// tanh:     f(u, mu) = v^T tanh(W u + U mu),  W: a x d_c, U: a x d_s, v: a
// bilinear: f(u, mu) = u^T W mu,              W: d_c x d_s
struct AttentionParams {
    AttentionVariant variant = AttentionVariant::tanh;
    Matrix W;
    Matrix U;
    Vec v;

    std::size_t context_dim() const;
    std::size_t sense_dim() const;
    void validate() const;  // std::invalid_argument on inconsistent shapes or non-finite entries

    // Entries uniform in [-scale, scale].
    static AttentionParams random(AttentionVariant variant, std::size_t context_dim, std::size_t sense_dim,
                                  std::size_t attention_dim, std::uint64_t seed, double scale = 0.1);

    friend bool operator==(const AttentionParams&, const AttentionParams&) = default;
};

Vec att_scores(std::span<const double> context, std::span<const Vec> senses, const AttentionParams& params);

// Softmax with max subtraction.
SenseWeights att_weights(std::span<const double> scores);

struct AttIniOptions {
    std::size_t target_word_dim = 500;
    std::size_t target_sense_dim = 0;  // 0: same as target_word_dim
    double pad_range = 0.1;
    std::uint64_t seed = 0;
    std::size_t max_senses = 5;
    MonosemousLabel monosemous = MonosemousLabel::word;
};

struct AttIniTables {
    std::map<std::string, Vec> words;
    SenseEmbeddingTable senses;
};

// Word entries: the pre-trained vector padded with uniform noise in
// [-pad_range, pad_range] up to target_word_dim, or a fully random vector
// for words without one. Sense entries: k-means centroids padded the same
// way, keyed by to_string(WordKey), plus one entry per vocabulary word
// carrying its monosemous label. Deterministic for a given seed.
AttIniTables init_att_ini(const EmbeddingStore& word_vectors, std::span<const std::string> vocabulary,
                          const std::map<WordKey, ClusterModel>& kmeans_models, const AttIniOptions& options = {});

// Scalar loss on the weighted sense output.
struct LossFunction {
    std::function<double(const Vec&)> value;
    std::function<Vec(const Vec&)> gradient;

    static LossFunction squared_l2();
    static LossFunction zero();
};

struct AttentionGradients {
    Matrix W;
    Matrix U;
    Vec v;
    Vec context;
    std::vector<Vec> senses;
};

// Forward pass att_scores -> att_weights -> weighted_sense -> loss, then
// back-propagation to every parameter and input.
double attention_loss(const AttentionParams& params, std::span<const double> context, std::span<const Vec> senses,
                      const LossFunction& loss);
AttentionGradients attention_gradients(const AttentionParams& params, std::span<const double> context,
                                       std::span<const Vec> senses, const LossFunction& loss);
AttentionGradients numeric_attention_gradients(const AttentionParams& params, std::span<const double> context,
                                               std::span<const Vec> senses, const LossFunction& loss,
                                               double step = 1e-5);

struct GradCheckResult {
    double max_relative_error = 0.0;
    AttentionGradients analytic;
    AttentionGradients numeric;
};

// Max over all partials of |analytic - numeric| / max(1, |numeric|), with
// central differences of the given step. Throws std::runtime_error if any
// gradient is not finite.
GradCheckResult grad_check(const AttentionParams& params, std::span<const double> context,
                           std::span<const Vec> senses, const LossFunction& loss = LossFunction::squared_l2(),
                           double step = 1e-5);

}  // namespace senseforge
