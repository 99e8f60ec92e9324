// Writes a synthetic dataset with planted senses (inventory, vectors,
// stopwords, tagged corpus, gold labels and a config) into a directory.

#include <iostream>

#include <CLI11.hpp>

#include "synth.hpp"

int main(int argc, char** argv) {
    CLI::App app{"senseforge-synth: synthetic dataset with planted senses"};
    senseforge::testing::SynthOptions o;
    std::string dir;
    app.add_option("dir", dir, "output directory")->required();
    app.add_option("--words", o.words, "ambiguous word types");
    app.add_option("--min-senses", o.min_senses, "fewest senses per word");
    app.add_option("--max-senses", o.max_senses, "most senses per word");
    app.add_option("--sentences-per-sense", o.sentences_per_sense, "sentences per planted sense");
    app.add_option("--dim", o.dim, "vector dimension");
    app.add_option("--seed", o.seed, "random seed");
    CLI11_PARSE(app, argc, argv);
    try {
        const auto f = senseforge::testing::write_synth_dataset(dir, o);
        std::cout << f.sentences << " sentences, " << f.instances << " instances; config: " << f.config.string() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
