// senseforge: build / label / eval-wsi / eval-rho / demo-select

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "senseforge/error.hpp"
#include "senseforge/pipeline.hpp"

using namespace senseforge;

namespace {

struct Override {
    const char* flag;
    const char* key;
    const char* help;
};

constexpr Override kOverrides[] = {
    {"--inventory", "inventory", "sense inventory (JSONL)"},
    {"--embeddings", "embeddings", "word embeddings (text format)"},
    {"--stopwords", "stopwords", "stopword list, one per line"},
    {"--corpus", "corpus", "tagged corpus"},
    {"--models", "models", "model directory"},
    {"--output", "output", "output file"},
    {"--edges", "edges", "weighted sense-graph edges (TSV)"},
    {"--attention-params", "attention_params", "attention parameters (JSON)"},
    {"--method", "method", "kmeans | crp | graph"},
    {"--init-mode", "init_mode", "definitions | examples"},
    {"--window", "window", "context window size (even)"},
    {"--min-cluster-size", "min_cluster_size", "k-means merge threshold"},
    {"--max-iters", "max_iters", "k-means iteration cap"},
    {"--crp-lambda1", "crp.lambda1", "CRP weight of the sense vector"},
    {"--crp-lambda2", "crp.lambda2", "CRP weight of the running mean"},
    {"--crp-gamma", "crp.gamma", "CRP new-sense weight"},
    {"--pagerank-damping", "pagerank.damping", "PageRank damping"},
    {"--pagerank-tolerance", "pagerank.tolerance", "PageRank L1 tolerance"},
    {"--pagerank-max-iterations", "pagerank.max_iterations", "PageRank iteration cap"},
    {"--selection", "selection", "top | avg_linear | avg_logistic | att_tanh | att_bilinear"},
    {"--max-senses", "max_senses", "senses per word for AVG/ATT"},
    {"--monosemous-label", "monosemous_label", "word | null"},
    {"--renormalize-linear", "renormalize_linear", "clamp and rescale linear AVG weights"},
    {"--attention-dim", "attention_dim", "attention hidden size"},
    {"--word-dim", "word_dim", "padded word dimension (0: embedding dim)"},
    {"--pad-range", "pad_range", "padding range for ATT_ini"},
    {"--seed", "seed", "random seed"},
    {"--threads", "threads", "worker threads for build"},
};

struct CommonArgs {
    std::string config_path;
    std::vector<std::optional<std::string>> values = std::vector<std::optional<std::string>>(std::size(kOverrides));
    std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("-c,--config", args.config_path, "configuration file");
    for (std::size_t i = 0; i < std::size(kOverrides); ++i)
        cmd->add_option(kOverrides[i].flag, args.values[i], kOverrides[i].help);
    cmd->add_option("--set", args.sets, "extra key=value override (repeatable)");
}

PipelineConfig resolve_config(const CommonArgs& args) {
    PipelineConfig cfg = args.config_path.empty() ? PipelineConfig{} : load_config(args.config_path);
    for (std::size_t i = 0; i < std::size(kOverrides); ++i)
        if (args.values[i]) cfg.set(kOverrides[i].key, *args.values[i]);
    for (const auto& kv : args.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw InputError("--set expects key=value, got '" + kv + "'");
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    cfg.validate();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"senseforge: sense induction, disambiguation and evaluation"};
    app.require_subcommand(1);

    CommonArgs common;

    auto* build = app.add_subcommand("build", "cluster every ambiguous word type of the corpus");
    add_common(build, common);

    auto* label = app.add_subcommand("label", "label a corpus with sense labels");
    add_common(label, common);

    auto* eval_wsi = app.add_subcommand("eval-wsi", "V-measure and paired F-score against gold labels");
    add_common(eval_wsi, common);
    std::string predicted, gold, wsi_out, system_name = "senseforge";
    eval_wsi->add_option("--predicted", predicted, "predicted labels (id<TAB>label)")->required();
    eval_wsi->add_option("--gold", gold, "gold labels (id<TAB>label)")->required();
    eval_wsi->add_option("--out", wsi_out, "output prefix for .json/.csv/.tsv")->required();
    eval_wsi->add_option("--system", system_name, "system name written to the reports");

    auto* eval_rho = app.add_subcommand("eval-rho", "lexical-choice coefficient and confusion matrix");
    add_common(eval_rho, common);
    RhoInputs rho_in;
    std::string rho_out;
    eval_rho->add_option("--source", rho_in.source, "tagged source corpus")->required();
    eval_rho->add_option("--system-text", rho_in.system, "system translation, tokenised")->required();
    eval_rho->add_option("--baseline", rho_in.baseline, "baseline translation, tokenised")->required();
    eval_rho->add_option("--reference", rho_in.reference, "reference translation, tokenised")->required();
    eval_rho->add_option("--align-system", rho_in.align_system, "source-system alignments")->required();
    eval_rho->add_option("--align-baseline", rho_in.align_baseline, "source-baseline alignments")->required();
    eval_rho->add_option("--align-reference", rho_in.align_reference, "source-reference alignments")->required();
    eval_rho->add_option("--out", rho_out, "output prefix for .json/.csv/.tsv")->required();

    auto* demo = app.add_subcommand("demo-select", "trace sense-selection weights per ambiguous token");
    add_common(demo, common);
    std::string trace_path;
    demo->add_option("--trace", trace_path, "write the trace here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        init_logging();
        const auto cfg = resolve_config(common);
        if (build->parsed()) {
            const auto summary = cmd_build(cfg);
            std::cout << "models: " << summary.manifest.models.size()
                      << ", skipped: " << summary.manifest.skipped.size() << '\n';
        } else if (label->parsed()) {
            const auto s = cmd_label(cfg);
            std::cout << "sentences: " << s.sentences << ", sense labels: " << s.sense_labelled
                      << ", fallbacks: " << s.fallbacks << '\n';
        } else if (eval_wsi->parsed()) {
            const auto r = cmd_eval_wsi(cfg, predicted, gold, wsi_out, system_name);
            std::cout << "V: " << r.all.v_score << "  F1: " << r.all.f1 << "  Avg: " << r.all.average
                      << "  C: " << r.mean_clusters << '\n';
        } else if (eval_rho->parsed()) {
            const auto r = cmd_eval_rho(cfg, rho_in, rho_out);
            std::cout << "rho: " << r.rho.rho << " (T = " << r.rho.t << ")\n";
        } else if (demo->parsed()) {
            if (trace_path.empty()) {
                cmd_demo_select(cfg, std::cout);
            } else {
                std::ofstream out(trace_path, std::ios::binary);
                if (!out) throw InputError("cannot write " + trace_path);
                const auto n = cmd_demo_select(cfg, out);
                std::cout << "traced tokens: " << n << '\n';
            }
        }
        return 0;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 2;
    }
}
