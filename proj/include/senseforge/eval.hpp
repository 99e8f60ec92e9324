#pragma once

// Sense-induction scores (V-measure, paired F-score, cluster counts) and
// lexical-choice scores for translations (rho coefficient, confusion matrix).

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "senseforge/lexicon.hpp"

namespace senseforge {

struct LabeledInstances {
    std::vector<std::string> ids;
    std::vector<std::string> predicted;
    std::vector<std::string> gold;

    std::size_t size() const noexcept { return gold.size(); }
    void push_back(std::string id, std::string pred, std::string gold_label);
    void validate() const;  // equal lengths, no empty labels
};

struct VScore {
    double homogeneity = 0.0;
    double completeness = 0.0;
    double v = 0.0;
};

struct PairedF1 {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// Entropies use the natural logarithm.
VScore v_score(const LabeledInstances& data);
PairedF1 paired_f1(const LabeledInstances& data);

struct WordEvaluation {
    WordKey key;
    LabeledInstances data;
    std::size_t cluster_count = 0;
};

struct CategoryScores {
    double v_score = 0.0;
    double f1 = 0.0;
    double average = 0.0;
    std::size_t instances = 0;
    std::size_t word_types = 0;
};

struct WsiReport {
    CategoryScores all;
    CategoryScores nouns;
    CategoryScores verbs;
    double mean_clusters = 0.0;  // unweighted mean over word types
};

// Per-word scores averaged with instance-count weights inside each category.
WsiReport wsi_report(std::span<const WordEvaluation> words);

void write_wsi_json(std::ostream& out, const WsiReport& report, const std::string& system_name);
// Header: system,V_all,V_nouns,V_verbs,F1_all,F1_nouns,F1_verbs,Avg_all,Avg_nouns,Avg_verbs,C
// Scores in percent.
void write_wsi_csv(std::ostream& out, const WsiReport& report, const std::string& system_name);
// "system \t metric \t value" rows for plotting.
void write_wsi_tsv(std::ostream& out, const WsiReport& report, const std::string& system_name);

struct AlignedTriple {
    std::optional<std::string> system;
    std::optional<std::string> baseline;
    std::optional<std::string> reference;
};

struct RhoResult {
    std::size_t n_improved = 0;
    std::size_t n_degraded = 0;
    std::size_t t = 0;
    double rho = 0.0;
};

// Triples without a reference token count toward T only. Throws
// std::invalid_argument on empty input.
RhoResult rho(std::span<const AlignedTriple> triples);

struct ConfusionMatrix {
    std::size_t both_correct = 0;       // (C, C)
    std::size_t system_only = 0;        // (C, I): system right, baseline wrong
    std::size_t baseline_only = 0;      // (I, C)
    std::size_t both_incorrect = 0;     // (I, I)

    std::size_t total() const noexcept { return both_correct + system_only + baseline_only + both_incorrect; }
};

// Over triples that have a reference token; rows are the system, columns the baseline.
ConfusionMatrix confusion_matrix(std::span<const AlignedTriple> triples);

void write_lexical_choice_json(std::ostream& out, const RhoResult& r, const ConfusionMatrix& m);
void write_lexical_choice_csv(std::ostream& out, const RhoResult& r, const ConfusionMatrix& m);
void write_lexical_choice_tsv(std::ostream& out, const RhoResult& r, const ConfusionMatrix& m);

// "i-j" pairs separated by spaces (0-based source-target indices).
std::vector<std::pair<std::size_t, std::size_t>> parse_alignment_line(std::string_view line);

}  // namespace senseforge
