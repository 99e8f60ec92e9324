#include "senseforge/sense_select.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "senseforge/error.hpp"
#include "senseforge/random.hpp"

namespace senseforge {

std::string_view weight_mode_name(WeightMode mode) {
    switch (mode) {
        case WeightMode::avg_linear: return "avg_linear";
        case WeightMode::avg_logistic: return "avg_logistic";
        case WeightMode::att_softmax: return "att_softmax";
    }
    return "?";
}

Vec concat_token(std::span<const double> word_vec, std::span<const double> sense_vec) {
    Vec out;
    out.reserve(word_vec.size() + sense_vec.size());
    out.insert(out.end(), word_vec.begin(), word_vec.end());
    out.insert(out.end(), sense_vec.begin(), sense_vec.end());
    return out;
}

std::string monosemous_label(std::string_view surface, MonosemousLabel mode) {
    return mode == MonosemousLabel::word ? std::string(surface) : std::string(kNullSenseLabel);
}

SenseEmbeddingTable::SenseEmbeddingTable(std::size_t dim, std::size_t max_senses) : dim_(dim), max_senses_(max_senses) {
    if (max_senses == 0) throw std::invalid_argument("SenseEmbeddingTable: max_senses must be positive");
}

void SenseEmbeddingTable::add(std::string key, std::vector<std::string> labels, std::vector<Vec> vectors) {
    if (labels.empty()) throw std::invalid_argument("sense table entry " + key + " has no senses");
    if (labels.size() != vectors.size()) throw std::invalid_argument("sense table entry " + key + ": label/vector count mismatch");
    if (labels.size() > max_senses_) {
        labels.resize(max_senses_);
        vectors.resize(max_senses_);
    }
    std::set<std::string_view> seen;
    for (std::size_t j = 0; j < labels.size(); ++j) {
        if (vectors[j].size() != dim_) throw std::invalid_argument("sense table entry " + key + ": wrong vector dimension");
        if (!seen.insert(labels[j]).second) throw std::invalid_argument("sense table entry " + key + ": duplicate label " + labels[j]);
    }
    entries_.insert_or_assign(std::move(key), Entry{std::move(labels), std::move(vectors)});
}

const SenseEmbeddingTable::Entry* SenseEmbeddingTable::find(std::string_view key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
}

const Vec& top_sense(const SenseEmbeddingTable& table, std::string_view key, std::string_view label) {
    const auto* entry = table.find(key);
    if (!entry) throw InputError("no sense embeddings for '" + std::string(key) + "'");
    for (std::size_t j = 0; j < entry->labels.size(); ++j)
        if (entry->labels[j] == label) return entry->vectors[j];
    throw InputError("unknown sense label '" + std::string(label) + "' for '" + std::string(key) + "'");
}

namespace {

SenseWeights softmax(std::span<const double> scores, WeightMode mode) {
    if (scores.empty()) throw std::invalid_argument("softmax over an empty score vector");
    const double top = *std::max_element(scores.begin(), scores.end());
    SenseWeights out{Vec(scores.size()), mode};
    double total = 0.0;
    for (std::size_t j = 0; j < scores.size(); ++j) {
        out.weights[j] = std::exp(scores[j] - top);
        total += out.weights[j];
    }
    for (double& w : out.weights) w /= total;
    return out;
}

}  // namespace

SenseWeights avg_weights(std::span<const double> distances, WeightMode mode, bool renormalize) {
    if (distances.empty()) throw std::invalid_argument("avg_weights: no distances");
    if (mode == WeightMode::avg_logistic) {
        Vec neg_sq(distances.size());
        for (std::size_t j = 0; j < distances.size(); ++j) neg_sq[j] = -distances[j] * distances[j];
        return softmax(neg_sq, mode);
    }
    if (mode != WeightMode::avg_linear) throw std::invalid_argument("avg_weights: mode must be avg_linear or avg_logistic");

    double total = 0.0;
    for (double d : distances) total += d;
    if (total == 0.0) throw std::domain_error("avg_weights: linear normalisation with all distances zero");
    SenseWeights out{Vec(distances.size()), mode};
    for (std::size_t j = 0; j < distances.size(); ++j) out.weights[j] = (1.0 - distances[j]) / total;
    if (renormalize) {
        double kept = 0.0;
        for (double& w : out.weights) {
            w = std::max(w, 0.0);
            kept += w;
        }
        if (kept == 0.0) throw std::domain_error("avg_weights: every linear weight is non-positive");
        for (double& w : out.weights) w /= kept;
    }
    return out;
}

Vec weighted_sense(const SenseWeights& weights, std::span<const Vec> senses) {
    if (weights.weights.size() != senses.size()) throw std::invalid_argument("weighted_sense: weight/sense count mismatch");
    if (senses.empty()) throw std::invalid_argument("weighted_sense: no senses");
    Vec out(senses.front().size(), 0.0);
    for (std::size_t j = 0; j < senses.size(); ++j) axpy(out, weights.weights[j], senses[j]);
    return out;
}

Vec att_context(std::span<const Vec> sentence_embeddings, std::size_t i) {
    const std::size_t n = sentence_embeddings.size();
    if (n < 2) throw std::invalid_argument("att_context: sentence needs at least two tokens");
    if (i >= n) throw std::out_of_range("att_context: index out of range");
    Vec out(sentence_embeddings.front().size(), 0.0);
    for (std::size_t l = 0; l < n; ++l)
        if (l != i) axpy(out, 1.0, sentence_embeddings[l]);
    for (double& x : out) x /= static_cast<double>(n - 1);
    return out;
}

Vec att_context_or_zero(std::span<const Vec> sentence_embeddings, std::size_t i) {
    if (sentence_embeddings.size() == 1) {
        if (i != 0) throw std::out_of_range("att_context: index out of range");
        return Vec(sentence_embeddings.front().size(), 0.0);
    }
    return att_context(sentence_embeddings, i);
}

std::string_view attention_variant_name(AttentionVariant variant) {
    return variant == AttentionVariant::tanh ? "tanh" : "bilinear";
}

AttentionVariant parse_attention_variant(std::string_view name) {
    if (name == "tanh") return AttentionVariant::tanh;
    if (name == "bilinear") return AttentionVariant::bilinear;
    throw InputError("unknown attention variant '" + std::string(name) + "'");
}

std::size_t AttentionParams::context_dim() const {
    return variant == AttentionVariant::tanh ? W.cols() : W.rows();
}

std::size_t AttentionParams::sense_dim() const {
    return variant == AttentionVariant::tanh ? U.cols() : W.cols();
}

void AttentionParams::validate() const {
    if (variant == AttentionVariant::tanh) {
        if (W.rows() == 0 || W.cols() == 0 || U.cols() == 0) throw std::invalid_argument("tanh attention: empty W or U");
        if (U.rows() != W.rows() || v.size() != W.rows())
            throw std::invalid_argument("tanh attention: W, U and v must share the attention width");
        if (!all_finite(U.data()) || !all_finite(v)) throw std::invalid_argument("attention parameters must be finite");
    } else {
        if (W.rows() == 0 || W.cols() == 0) throw std::invalid_argument("bilinear attention: empty W");
    }
    if (!all_finite(W.data())) throw std::invalid_argument("attention parameters must be finite");
}

AttentionParams AttentionParams::random(AttentionVariant variant, std::size_t context_dim, std::size_t sense_dim,
                                        std::size_t attention_dim, std::uint64_t seed, double scale) {
    UniformRng rng(seed);
    auto fill = [&](std::vector<double>& xs) {
        for (double& x : xs) x = rng.uniform(-scale, scale);
    };
    AttentionParams p;
    p.variant = variant;
    if (variant == AttentionVariant::tanh) {
        p.W = Matrix(attention_dim, context_dim);
        p.U = Matrix(attention_dim, sense_dim);
        p.v = Vec(attention_dim);
        fill(p.W.data());
        fill(p.U.data());
        fill(p.v);
    } else {
        p.W = Matrix(context_dim, sense_dim);
        fill(p.W.data());
    }
    return p;
}

namespace {

void check_shapes(std::span<const double> context, std::span<const Vec> senses, const AttentionParams& params) {
    params.validate();
    if (senses.empty()) throw std::invalid_argument("attention: no senses");
    if (context.size() != params.context_dim()) throw std::invalid_argument("attention: context dimension mismatch");
    for (const auto& s : senses)
        if (s.size() != params.sense_dim()) throw std::invalid_argument("attention: sense dimension mismatch");
}

}  // namespace

Vec att_scores(std::span<const double> context, std::span<const Vec> senses, const AttentionParams& params) {
    check_shapes(context, senses, params);
    Vec scores(senses.size());
    if (params.variant == AttentionVariant::tanh) {
        const Vec wu = params.W.multiply(context);
        for (std::size_t j = 0; j < senses.size(); ++j) {
            Vec z = params.U.multiply(senses[j]);
            double f = 0.0;
            for (std::size_t a = 0; a < z.size(); ++a) f += params.v[a] * std::tanh(wu[a] + z[a]);
            scores[j] = f;
        }
    } else {
        const Vec wtu = params.W.multiply_transposed(context);  // u^T W
        for (std::size_t j = 0; j < senses.size(); ++j) scores[j] = dot(wtu, senses[j]);
    }
    return scores;
}

SenseWeights att_weights(std::span<const double> scores) { return softmax(scores, WeightMode::att_softmax); }

AttIniTables init_att_ini(const EmbeddingStore& word_vectors, std::span<const std::string> vocabulary,
                          const std::map<WordKey, ClusterModel>& kmeans_models, const AttIniOptions& options) {
    const std::size_t word_dim = options.target_word_dim;
    const std::size_t sense_dim = options.target_sense_dim == 0 ? word_dim : options.target_sense_dim;
    if (word_dim < word_vectors.dim())
        throw InputError("target word dimension " + std::to_string(word_dim) + " is smaller than the embedding dimension " +
                         std::to_string(word_vectors.dim()));
    if (!(options.pad_range >= 0.0)) throw InputError("pad range must be non-negative");

    std::vector<std::string> words;
    if (vocabulary.empty()) {
        for (const auto& [token, vec] : word_vectors.vectors()) words.push_back(token);
    } else {
        words.assign(vocabulary.begin(), vocabulary.end());
    }
    std::sort(words.begin(), words.end());
    words.erase(std::unique(words.begin(), words.end()), words.end());

    UniformRng rng(options.seed);
    const double r = options.pad_range;
    auto padded = [&](std::span<const double> prefix, std::size_t dim) {
        Vec out(prefix.begin(), prefix.end());
        out.reserve(dim);
        while (out.size() < dim) out.push_back(rng.uniform(-r, r));
        return out;
    };

    AttIniTables tables{{}, SenseEmbeddingTable(sense_dim, options.max_senses)};
    for (const auto& w : words) {
        const Vec* v = word_vectors.find(w);
        tables.words.emplace(w, v ? padded(*v, word_dim) : padded({}, word_dim));
    }

    for (const auto& [key, model] : kmeans_models) {
        if (model.clusters.empty()) continue;
        std::vector<std::string> labels;
        std::vector<Vec> vectors;
        for (const auto& c : model.clusters) {
            if (labels.size() == options.max_senses) break;
            if (c.centroid.size() > sense_dim)
                throw InputError("centroid of " + c.label + " is wider than the sense dimension");
            labels.push_back(c.label);
            vectors.push_back(padded(c.centroid, sense_dim));
        }
        tables.senses.add(to_string(key), std::move(labels), std::move(vectors));
    }

    if (options.monosemous == MonosemousLabel::null) {
        std::string null_label(kNullSenseLabel);
        tables.senses.add(null_label, {null_label}, {padded({}, sense_dim)});
    } else {
        for (const auto& w : words) {
            if (tables.senses.find(w)) continue;
            tables.senses.add(w, {w}, {padded({}, sense_dim)});
        }
    }
    return tables;
}

LossFunction LossFunction::squared_l2() {
    return {[](const Vec& y) { return dot(y, y); },
            [](const Vec& y) {
                Vec g(y);
                for (double& x : g) x *= 2.0;
                return g;
            }};
}

LossFunction LossFunction::zero() {
    return {[](const Vec&) { return 0.0; }, [](const Vec& y) { return Vec(y.size(), 0.0); }};
}

double attention_loss(const AttentionParams& params, std::span<const double> context, std::span<const Vec> senses,
                      const LossFunction& loss) {
    const auto weights = att_weights(att_scores(context, senses, params));
    return loss.value(weighted_sense(weights, senses));
}

AttentionGradients attention_gradients(const AttentionParams& params, std::span<const double> context,
                                       std::span<const Vec> senses, const LossFunction& loss) {
    check_shapes(context, senses, params);
    const std::size_t k = senses.size();
    const std::size_t ds = params.sense_dim();

    const auto omega = att_weights(att_scores(context, senses, params)).weights;
    const Vec y = weighted_sense({omega, WeightMode::att_softmax}, senses);
    const Vec g = loss.gradient(y);

    AttentionGradients grad;
    grad.W = Matrix(params.W.rows(), params.W.cols());
    grad.U = Matrix(params.U.rows(), params.U.cols());
    grad.v = Vec(params.v.size(), 0.0);
    grad.context = Vec(context.size(), 0.0);
    grad.senses.assign(k, Vec(ds, 0.0));

    // dL/dw_j = g . mu_j ; through the softmax dL/df_j = w_j (a_j - sum_l w_l a_l)
    Vec a(k);
    double mean_a = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        a[j] = dot(g, senses[j]);
        mean_a += omega[j] * a[j];
    }
    Vec b(k);
    for (std::size_t j = 0; j < k; ++j) {
        b[j] = omega[j] * (a[j] - mean_a);
        axpy(grad.senses[j], omega[j], g);
    }

    if (params.variant == AttentionVariant::tanh) {
        const std::size_t width = params.W.rows();
        const Vec wu = params.W.multiply(context);
        for (std::size_t j = 0; j < k; ++j) {
            const Vec z = params.U.multiply(senses[j]);
            Vec q(width);  // b_j * v (1 - tanh^2)
            for (std::size_t r = 0; r < width; ++r) {
                const double h = std::tanh(wu[r] + z[r]);
                grad.v[r] += b[j] * h;
                q[r] = b[j] * params.v[r] * (1.0 - h * h);
            }
            for (std::size_t r = 0; r < width; ++r) {
                for (std::size_t c = 0; c < context.size(); ++c) grad.W(r, c) += q[r] * context[c];
                for (std::size_t c = 0; c < ds; ++c) grad.U(r, c) += q[r] * senses[j][c];
            }
            axpy(grad.context, 1.0, params.W.multiply_transposed(q));
            axpy(grad.senses[j], 1.0, params.U.multiply_transposed(q));
        }
    } else {
        const Vec wtu = params.W.multiply_transposed(context);
        for (std::size_t j = 0; j < k; ++j) {
            for (std::size_t r = 0; r < context.size(); ++r)
                for (std::size_t c = 0; c < ds; ++c) grad.W(r, c) += b[j] * context[r] * senses[j][c];
            axpy(grad.context, b[j], params.W.multiply(senses[j]));
            axpy(grad.senses[j], b[j], wtu);
        }
    }
    return grad;
}

AttentionGradients numeric_attention_gradients(const AttentionParams& params, std::span<const double> context,
                                               std::span<const Vec> senses, const LossFunction& loss, double step) {
    check_shapes(context, senses, params);
    AttentionParams p = params;
    Vec u(context.begin(), context.end());
    std::vector<Vec> mu(senses.begin(), senses.end());

    auto central = [&](double& x) {
        const double saved = x;
        x = saved + step;
        const double up = attention_loss(p, u, mu, loss);
        x = saved - step;
        const double down = attention_loss(p, u, mu, loss);
        x = saved;
        return (up - down) / (2.0 * step);
    };

    AttentionGradients grad;
    grad.W = Matrix(p.W.rows(), p.W.cols());
    for (std::size_t i = 0; i < p.W.data().size(); ++i) grad.W.data()[i] = central(p.W.data()[i]);
    grad.U = Matrix(p.U.rows(), p.U.cols());
    for (std::size_t i = 0; i < p.U.data().size(); ++i) grad.U.data()[i] = central(p.U.data()[i]);
    grad.v.resize(p.v.size());
    for (std::size_t i = 0; i < p.v.size(); ++i) grad.v[i] = central(p.v[i]);
    grad.context.resize(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) grad.context[i] = central(u[i]);
    grad.senses.assign(mu.size(), Vec{});
    for (std::size_t j = 0; j < mu.size(); ++j) {
        grad.senses[j].resize(mu[j].size());
        for (std::size_t i = 0; i < mu[j].size(); ++i) grad.senses[j][i] = central(mu[j][i]);
    }
    return grad;
}

namespace {

void fold_errors(std::span<const double> analytic, std::span<const double> numeric, double& worst) {
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        if (!std::isfinite(analytic[i]) || !std::isfinite(numeric[i]))
            throw std::runtime_error("grad_check: non-finite gradient");
        const double err = std::abs(analytic[i] - numeric[i]) / std::max(1.0, std::abs(numeric[i]));
        worst = std::max(worst, err);
    }
}

}  // namespace

GradCheckResult grad_check(const AttentionParams& params, std::span<const double> context,
                           std::span<const Vec> senses, const LossFunction& loss, double step) {
    GradCheckResult r;
    r.analytic = attention_gradients(params, context, senses, loss);
    r.numeric = numeric_attention_gradients(params, context, senses, loss, step);
    fold_errors(r.analytic.W.data(), r.numeric.W.data(), r.max_relative_error);
    fold_errors(r.analytic.U.data(), r.numeric.U.data(), r.max_relative_error);
    fold_errors(r.analytic.v, r.numeric.v, r.max_relative_error);
    fold_errors(r.analytic.context, r.numeric.context, r.max_relative_error);
    for (std::size_t j = 0; j < senses.size(); ++j)
        fold_errors(r.analytic.senses[j], r.numeric.senses[j], r.max_relative_error);
    return r;
}

}  // namespace senseforge
