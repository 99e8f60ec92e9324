#include "synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

namespace senseforge::testing {

GaussianRng::GaussianRng(std::uint64_t seed) : uniform_(seed) {}

double GaussianRng::next(double sigma) {
    if (has_spare_) {
        has_spare_ = false;
        return sigma * spare_;
    }
    double u1 = 0.0;
    while (u1 <= 0.0) u1 = uniform_.unit();
    const double u2 = uniform_.unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return sigma * r * std::cos(2.0 * std::numbers::pi * u2);
}

Vec GaussianRng::vector(std::size_t dim, double sigma) {
    Vec v(dim);
    for (double& x : v) x = next(sigma);
    return v;
}

double GaussianRng::uniform(double lo, double hi) { return uniform_.uniform(lo, hi); }

std::size_t GaussianRng::index(std::size_t n) {
    const auto i = static_cast<std::size_t>(uniform_.unit() * static_cast<double>(n));
    return i < n ? i : n - 1;
}

std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("senseforge_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

namespace {

using nlohmann::json;

std::ofstream open(const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    return out;
}

std::string cue_name(std::size_t word, std::size_t sense, std::size_t cue) {
    return "w" + std::to_string(word) + "s" + std::to_string(sense) + "c" + std::to_string(cue);
}

}  // namespace

SynthFiles write_synth_dataset(const std::filesystem::path& dir, const SynthOptions& o) {
    if (o.min_senses < 2 || o.max_senses < o.min_senses) throw std::invalid_argument("bad sense range");
    if (o.cues_per_sense < 4) throw std::invalid_argument("need at least four cue words per sense");
    std::filesystem::create_directories(dir);
    SynthFiles f;
    f.dir = dir;
    f.inventory = dir / "inventory.jsonl";
    f.embeddings = dir / "vectors.txt";
    f.stopwords = dir / "stopwords.txt";
    f.corpus = dir / "corpus.txt";
    f.gold = dir / "gold.tsv";
    f.config = dir / "senseforge.toml";

    GaussianRng rng(o.seed);

    struct Word {
        std::string lemma;
        bool verb;
        std::vector<std::string> sense_ids;
    };
    std::vector<Word> words;
    std::vector<std::pair<std::string, Vec>> vectors;
    json inventory_lines = json::array();

    for (std::size_t i = 0; i < o.words; ++i) {
        Word w;
        w.lemma = "word" + std::to_string(i);
        w.verb = o.verbs && i % 2 == 1;
        const std::string p = w.verb ? "v" : "n";
        const std::size_t k = o.min_senses + rng.index(o.max_senses - o.min_senses + 1);
        json senses = json::array();
        for (std::size_t j = 0; j < k; ++j) {
            const std::string id = w.lemma + "#" + p + "#" + std::to_string(j + 1);
            w.sense_ids.push_back(id);
            const Vec centre = rng.vector(o.dim, o.centre_scale);
            std::vector<std::string> cues;
            for (std::size_t c = 0; c < o.cues_per_sense; ++c) {
                cues.push_back(cue_name(i, j, c));
                Vec v = centre;
                for (double& x : v) x += rng.next(o.cue_noise);
                vectors.emplace_back(cues.back(), std::move(v));
            }
            senses.push_back({{"id", id},
                              {"definition", {"the", cues[0], cues[1], cues[2], cues[3]}},
                              {"examples", json::array({json::array({"the", w.lemma, cues[1], cues[2]})})},
                              {"neighbors", json::array()}});
            // cue words are monosemous nouns pointing at the sense they signal
            for (const auto& cue : cues) {
                json sense = {{"id", cue + "#n#1"}, {"definition", json::array({cue})}, {"neighbors", json::array({id})}};
                inventory_lines.push_back({{"lemma", cue}, {"pos", "noun"}, {"senses", json::array({sense})}});
            }
        }
        inventory_lines.push_back({{"lemma", w.lemma}, {"pos", w.verb ? "verb" : "noun"}, {"senses", senses}});
        vectors.emplace_back(w.lemma, rng.vector(o.dim, o.centre_scale));
        words.push_back(std::move(w));
    }
    vectors.emplace_back("the", rng.vector(o.dim, o.centre_scale));
    vectors.emplace_back("paris", rng.vector(o.dim, o.centre_scale));

    {
        auto out = open(f.inventory);
        for (const auto& line : inventory_lines) out << line.dump() << '\n';
    }
    {
        auto out = open(f.embeddings);
        out << vectors.size() << ' ' << o.dim << '\n';
        char buf[32];
        for (const auto& [token, v] : vectors) {
            out << token;
            for (double x : v) {
                std::snprintf(buf, sizeof buf, " %.6f", x);
                out << buf;
            }
            out << '\n';
        }
    }
    {
        auto out = open(f.stopwords);
        out << "# synthetic stopwords\nthe\na\n";
    }

    // Sentences cycle through (word, sense) pairs so senses interleave.
    struct Planned {
        std::size_t word, sense;
    };
    std::vector<Planned> plan;
    std::size_t max_k = 0;
    for (const auto& w : words) max_k = std::max(max_k, w.sense_ids.size());
    for (std::size_t r = 0; r < o.sentences_per_sense; ++r)
        for (std::size_t j = 0; j < max_k; ++j)
            for (std::size_t i = 0; i < words.size(); ++i)
                if (j < words[i].sense_ids.size()) plan.push_back({i, j});

    auto corpus = open(f.corpus);
    auto gold = open(f.gold);
    for (std::size_t s = 0; s < plan.size(); ++s) {
        const auto& w = words[plan[s].word];
        std::vector<std::string> tokens;
        if (o.proper_nouns && s % 5 == 0) tokens.push_back("Paris|Paris|NNP");
        auto push_cues = [&] {
            for (std::size_t c = 0; c < o.cues_per_side; ++c) {
                const auto cue = cue_name(plan[s].word, plan[s].sense, rng.index(o.cues_per_sense));
                tokens.push_back(cue + "|" + cue + "|NN");
            }
        };
        push_cues();
        tokens.push_back("the|the|DT");
        const std::size_t target = tokens.size();
        if (w.verb) {
            tokens.push_back(w.lemma + (s % 2 ? "ed|" : "s|") + w.lemma + (s % 2 ? "|VBD" : "|VBZ"));
        } else {
            tokens.push_back(w.lemma + (s % 3 == 0 ? "s|" : "|") + w.lemma + (s % 3 == 0 ? "|NNS" : "|NN"));
        }
        push_cues();
        tokens.push_back(".|.|.");
        for (std::size_t t = 0; t < tokens.size(); ++t) corpus << (t ? " " : "") << tokens[t];
        corpus << '\n';
        gold << w.lemma << '.' << (w.verb ? 'v' : 'n') << '.' << s << '_' << target << '\t'
             << w.sense_ids[plan[s].sense] << '\n';
        ++f.instances;
    }
    f.sentences = plan.size();

    {
        auto out = open(f.config);
        out << "# synthetic dataset\n"
            << "inventory = \"inventory.jsonl\"\n"
            << "embeddings = \"vectors.txt\"\n"
            << "stopwords = \"stopwords.txt\"\n"
            << "corpus = \"corpus.txt\"\n"
            << "models = \"models\"\n"
            << "output = \"labelled.txt\"\n"
            << "method = kmeans\n"
            << "init_mode = definitions\n"
            << "window = 8\n"
            << "seed = " << o.seed << "\n";
    }
    return f;
}

}  // namespace senseforge::testing
