#include "senseforge/eval.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "senseforge/error.hpp"

namespace senseforge {

void LabeledInstances::push_back(std::string id, std::string pred, std::string gold_label) {
    ids.push_back(std::move(id));
    predicted.push_back(std::move(pred));
    gold.push_back(std::move(gold_label));
}

void LabeledInstances::validate() const {
    if (ids.size() != gold.size() || predicted.size() != gold.size())
        throw std::invalid_argument("labeled instances: ids, predictions and gold labels differ in length");
    for (std::size_t i = 0; i < gold.size(); ++i)
        if (predicted[i].empty() || gold[i].empty())
            throw std::invalid_argument("labeled instances: missing label for instance " + ids[i]);
}

namespace {

struct Contingency {
    std::map<std::pair<std::string, std::string>, std::size_t> joint;  // (pred, gold)
    std::map<std::string, std::size_t> pred;
    std::map<std::string, std::size_t> gold;
    double n = 0.0;
};

Contingency tabulate(const LabeledInstances& data) {
    data.validate();
    if (data.size() == 0) throw std::invalid_argument("evaluation needs at least one instance");
    Contingency t;
    for (std::size_t i = 0; i < data.size(); ++i) {
        ++t.joint[{data.predicted[i], data.gold[i]}];
        ++t.pred[data.predicted[i]];
        ++t.gold[data.gold[i]];
    }
    t.n = static_cast<double>(data.size());
    return t;
}

double entropy(const std::map<std::string, std::size_t>& counts, double n) {
    double h = 0.0;
    for (const auto& [label, c] : counts) {
        const double p = static_cast<double>(c) / n;
        h -= p * std::log(p);
    }
    return h;
}

double pairs(std::size_t c) { return 0.5 * static_cast<double>(c) * static_cast<double>(c == 0 ? 0 : c - 1); }

double harmonic(double a, double b) { return a + b == 0.0 ? 0.0 : 2.0 * a * b / (a + b); }

}  // namespace

VScore v_score(const LabeledInstances& data) {
    const auto t = tabulate(data);
    double h_gold_given_pred = 0.0;
    double h_pred_given_gold = 0.0;
    for (const auto& [key, c] : t.joint) {
        const double nck = static_cast<double>(c);
        h_gold_given_pred -= nck / t.n * std::log(nck / static_cast<double>(t.pred.at(key.first)));
        h_pred_given_gold -= nck / t.n * std::log(nck / static_cast<double>(t.gold.at(key.second)));
    }
    const double h_gold = entropy(t.gold, t.n);
    const double h_pred = entropy(t.pred, t.n);

    VScore s;
    s.homogeneity = h_gold == 0.0 ? 1.0 : 1.0 - h_gold_given_pred / h_gold;
    s.completeness = h_pred == 0.0 ? 1.0 : 1.0 - h_pred_given_gold / h_pred;
    s.v = harmonic(s.homogeneity, s.completeness);
    return s;
}

PairedF1 paired_f1(const LabeledInstances& data) {
    const auto t = tabulate(data);
    double same_pred = 0.0, same_gold = 0.0, same_both = 0.0;
    for (const auto& [label, c] : t.pred) same_pred += pairs(c);
    for (const auto& [label, c] : t.gold) same_gold += pairs(c);
    for (const auto& [key, c] : t.joint) same_both += pairs(c);

    PairedF1 s;
    s.precision = same_pred == 0.0 ? 0.0 : same_both / same_pred;
    s.recall = same_gold == 0.0 ? 0.0 : same_both / same_gold;
    s.f1 = harmonic(s.precision, s.recall);
    return s;
}

WsiReport wsi_report(std::span<const WordEvaluation> words) {
    struct Acc {
        double v = 0.0, f1 = 0.0;
        std::size_t n = 0, words = 0;
        void add(double v_word, double f1_word, std::size_t count) {
            v += v_word * static_cast<double>(count);
            f1 += f1_word * static_cast<double>(count);
            n += count;
            ++words;
        }
        CategoryScores finish() const {
            CategoryScores c;
            c.instances = n;
            c.word_types = words;
            if (n > 0) {
                c.v_score = v / static_cast<double>(n);
                c.f1 = f1 / static_cast<double>(n);
                c.average = 0.5 * (c.v_score + c.f1);
            }
            return c;
        }
    };

    Acc all, nouns, verbs;
    double clusters = 0.0;
    for (const auto& w : words) {
        if (w.data.size() == 0) continue;
        const double v = v_score(w.data).v;
        const double f = paired_f1(w.data).f1;
        all.add(v, f, w.data.size());
        (w.key.pos == Pos::noun ? nouns : verbs).add(v, f, w.data.size());
        clusters += static_cast<double>(w.cluster_count);
    }
    WsiReport r;
    r.all = all.finish();
    r.nouns = nouns.finish();
    r.verbs = verbs.finish();
    r.mean_clusters = all.words == 0 ? 0.0 : clusters / static_cast<double>(all.words);
    return r;
}

namespace {

nlohmann::json category_json(const CategoryScores& c) {
    return {{"v_score", c.v_score}, {"f1", c.f1}, {"average", c.average}, {"instances", c.instances}, {"word_types", c.word_types}};
}

std::string percent(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", 100.0 * x);
    return buf;
}

std::string fixed(double x, int digits) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

}  // namespace

void write_wsi_json(std::ostream& out, const WsiReport& r, const std::string& system_name) {
    nlohmann::json j = {{"system", system_name},
                        {"all", category_json(r.all)},
                        {"nouns", category_json(r.nouns)},
                        {"verbs", category_json(r.verbs)},
                        {"mean_clusters", r.mean_clusters}};
    out << j.dump(2) << '\n';
}

void write_wsi_csv(std::ostream& out, const WsiReport& r, const std::string& system_name) {
    out << "system,V_all,V_nouns,V_verbs,F1_all,F1_nouns,F1_verbs,Avg_all,Avg_nouns,Avg_verbs,C\n";
    out << system_name << ',' << percent(r.all.v_score) << ',' << percent(r.nouns.v_score) << ','
        << percent(r.verbs.v_score) << ',' << percent(r.all.f1) << ',' << percent(r.nouns.f1) << ','
        << percent(r.verbs.f1) << ',' << percent(r.all.average) << ',' << percent(r.nouns.average) << ','
        << percent(r.verbs.average) << ',' << fixed(r.mean_clusters, 2) << '\n';
}

void write_wsi_tsv(std::ostream& out, const WsiReport& r, const std::string& system_name) {
    const std::pair<const char*, const CategoryScores*> cats[] = {{"all", &r.all}, {"nouns", &r.nouns}, {"verbs", &r.verbs}};
    for (const auto& [name, c] : cats) {
        out << system_name << "\tv_score_" << name << '\t' << fixed(c->v_score, 6) << '\n';
        out << system_name << "\tf1_" << name << '\t' << fixed(c->f1, 6) << '\n';
        out << system_name << "\taverage_" << name << '\t' << fixed(c->average, 6) << '\n';
    }
    out << system_name << "\tmean_clusters\t" << fixed(r.mean_clusters, 6) << '\n';
}

RhoResult rho(std::span<const AlignedTriple> triples) {
    if (triples.empty()) throw std::invalid_argument("rho: no tokens");
    RhoResult r;
    r.t = triples.size();
    for (const auto& tr : triples) {
        if (!tr.reference) continue;
        const bool sys_ok = tr.system == tr.reference;
        const bool base_ok = tr.baseline == tr.reference;
        if (sys_ok && !base_ok) ++r.n_improved;
        if (base_ok && !sys_ok) ++r.n_degraded;
    }
    r.rho = (static_cast<double>(r.n_improved) - static_cast<double>(r.n_degraded)) / static_cast<double>(r.t);
    return r;
}

ConfusionMatrix confusion_matrix(std::span<const AlignedTriple> triples) {
    ConfusionMatrix m;
    for (const auto& tr : triples) {
        if (!tr.reference) continue;
        const bool sys_ok = tr.system == tr.reference;
        const bool base_ok = tr.baseline == tr.reference;
        if (sys_ok && base_ok) ++m.both_correct;
        else if (sys_ok) ++m.system_only;
        else if (base_ok) ++m.baseline_only;
        else ++m.both_incorrect;
    }
    return m;
}

void write_lexical_choice_json(std::ostream& out, const RhoResult& r, const ConfusionMatrix& m) {
    nlohmann::json j = {{"n_improved", r.n_improved},
                        {"n_degraded", r.n_degraded},
                        {"t", r.t},
                        {"rho", r.rho},
                        {"confusion",
                         {{"system_correct_baseline_correct", m.both_correct},
                          {"system_correct_baseline_incorrect", m.system_only},
                          {"system_incorrect_baseline_correct", m.baseline_only},
                          {"system_incorrect_baseline_incorrect", m.both_incorrect}}}};
    out << j.dump(2) << '\n';
}

void write_lexical_choice_csv(std::ostream& out, const RhoResult& r, const ConfusionMatrix& m) {
    out << "n_improved,n_degraded,t,rho,cc,ci,ic,ii\n";
    out << r.n_improved << ',' << r.n_degraded << ',' << r.t << ',' << fixed(r.rho, 6) << ',' << m.both_correct << ','
        << m.system_only << ',' << m.baseline_only << ',' << m.both_incorrect << '\n';
}

void write_lexical_choice_tsv(std::ostream& out, const RhoResult& r, const ConfusionMatrix& m) {
    out << "rho\t" << fixed(r.rho, 6) << '\n'
        << "n_improved\t" << r.n_improved << '\n'
        << "n_degraded\t" << r.n_degraded << '\n'
        << "t\t" << r.t << '\n'
        << "cc\t" << m.both_correct << '\n'
        << "ci\t" << m.system_only << '\n'
        << "ic\t" << m.baseline_only << '\n'
        << "ii\t" << m.both_incorrect << '\n';
}

std::vector<std::pair<std::size_t, std::size_t>> parse_alignment_line(std::string_view line) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        if (i >= line.size()) break;
        std::size_t end = i;
        while (end < line.size() && line[end] != ' ' && line[end] != '\t' && line[end] != '\r') ++end;
        const std::string_view pair = line.substr(i, end - i);
        const auto dash = pair.find('-');
        std::size_t s = 0, t = 0;
        auto ok = [](std::string_view text, std::size_t& v) {
            auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
            return !text.empty() && ec == std::errc() && p == text.data() + text.size();
        };
        if (dash == std::string_view::npos || !ok(pair.substr(0, dash), s) || !ok(pair.substr(dash + 1), t))
            throw InputError("malformed alignment pair '" + std::string(pair) + "'");
        out.emplace_back(s, t);
        i = end;
    }
    return out;
}

}  // namespace senseforge
