#pragma once

// Synthetic datasets with planted senses: every sense of an ambiguous word
// owns a set of cue words whose vectors sit around a random sense centre.
// Sentences of a sense are built from its cue words, so context vectors and
// gloss vectors of the same sense land close together.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "senseforge/linalg.hpp"
#include "senseforge/random.hpp"

namespace senseforge::testing {

struct SynthOptions {
    std::size_t words = 3;
    std::size_t min_senses = 2;
    std::size_t max_senses = 3;
    std::size_t sentences_per_sense = 20;
    std::size_t dim = 10;
    std::size_t cues_per_sense = 8;
    std::size_t cues_per_side = 3;
    double centre_scale = 3.0;
    double cue_noise = 0.3;
    bool verbs = true;
    bool proper_nouns = true;
    std::uint64_t seed = 1;
};

struct SynthFiles {
    std::filesystem::path dir;
    std::filesystem::path inventory;
    std::filesystem::path embeddings;
    std::filesystem::path stopwords;
    std::filesystem::path corpus;
    std::filesystem::path gold;    // instance id <TAB> sense id
    std::filesystem::path config;  // relative paths, models in dir/models
    std::size_t instances = 0;
    std::size_t sentences = 0;
};

SynthFiles write_synth_dataset(const std::filesystem::path& dir, const SynthOptions& options = {});

// Draws from N(0, sigma^2) with Box-Muller on top of UniformRng.
class GaussianRng {
public:
    explicit GaussianRng(std::uint64_t seed);
    double next(double sigma = 1.0);
    Vec vector(std::size_t dim, double sigma = 1.0);
    double uniform(double lo, double hi);
    std::size_t index(std::size_t n);  // uniform in [0, n)

private:
    UniformRng uniform_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// Fresh scratch directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& name);

}  // namespace senseforge::testing
