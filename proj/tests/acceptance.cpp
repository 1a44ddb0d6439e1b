// Acceptance suite: one PASS/FAIL line per criterion, each with its own
// tolerance and wall-clock budget. Exit status is non-zero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "adp/cli.hpp"
#include "adp/error.hpp"
#include "adp/eval.hpp"
#include "adp/learners.hpp"
#include "adp/porter.hpp"
#include "adp/synth.hpp"
#include "feature_oracle.hpp"
#include "support.hpp"

using namespace adp;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    const char* name;
    double budget_seconds;  // 0: no time limit
    std::function<Outcome()> run;
};

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

class Workdir {
public:
    Workdir() {
        std::random_device rd;
        path_ = fs::temp_directory_path() / ("adp_accept_" + std::to_string(rd()) + std::to_string(rd()));
        fs::create_directories(path_);
    }
    ~Workdir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    std::string operator/(const std::string& name) const { return (path_ / name).string(); }

private:
    fs::path path_;
};

// Runs the command-line front end in-process; throws with its stderr on failure.
std::string adpredict(std::vector<std::string> args) {
    args.insert(args.begin(), {"--config", test::data_path("adpredict.conf")});
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    if (code != 0) throw std::runtime_error("adpredict " + args[2] + " exited " + std::to_string(code) + ": " + err.str());
    return out.str();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Dataset load_dataset(const std::string& features_path, const std::string& labels_path) {
    const auto features = read_features_file(features_path);
    const auto labels = load_labels_file(labels_path);
    Dataset d;
    for (const auto& [user, fv] : features) d.rows.push_back({user, fv, labels.at(user)});
    return d;
}

// ---------------------------------------------------------------------------

Outcome contrast_oracle() {
    std::mt19937_64 gen(20190301);
    std::uniform_int_distribution<std::int64_t> count(0, 400);
    std::uniform_real_distribution<double> delta(0.25, 8.0);
    double worst = 0.0;
    int property_failures = 0;
    for (int i = 0; i < 10000; ++i) {
        ContrastInputs in{count(gen), count(gen), count(gen), count(gen), delta(gen)};
        if (i % 10 == 0) in.positive_words = in.positive_posts = 0;
        if (i % 10 == 1) in.negative_words = in.negative_posts = 0;
        if (i % 50 == 2) in = {0, 0, 0, 0, in.delta};
        const long double d = in.delta;
        const long double pos = d * in.positive_posts + in.positive_words;
        const long double neg = d * in.negative_posts + in.negative_words;
        const long double direct = pos + neg == 0 ? 0.0L : (pos - neg) / (pos + neg);
        const double c = contrast_score(in);
        worst = std::max(worst, static_cast<double>(std::fabs(static_cast<long double>(c) - direct)));

        bool ok = c >= -1.0 && c <= 1.0;
        ContrastInputs mirrored{in.negative_words, in.positive_words, in.negative_posts, in.positive_posts, in.delta};
        ok = ok && std::fabs(contrast_score(mirrored) + c) <= 1e-12;
        ContrastInputs balanced{in.positive_words, in.positive_words, in.positive_posts, in.positive_posts, in.delta};
        ok = ok && contrast_score(balanced) == 0.0;
        if (pos > 0 && neg == 0) ok = ok && c == 1.0;
        if (neg > 0 && pos == 0) ok = ok && c == -1.0;
        const std::int64_t k = 1 + static_cast<std::int64_t>(gen() % 9);
        ContrastInputs scaled{in.positive_words * k, in.negative_words * k, in.positive_posts * k,
                              in.negative_posts * k, in.delta};
        ok = ok && std::fabs(contrast_score(scaled) - c) <= 1e-12;
        if (!ok) ++property_failures;
    }
    return {worst <= 1e-12 && property_failures == 0,
            "10000 inputs, max |err| " + fmt("%.2e", worst) + ", property failures " + std::to_string(property_failures)};
}

Outcome feature_oracle() {
    const test::TimelineGenerator g;
    std::mt19937_64 gen(3303);
    int mismatches = 0;
    std::size_t max_len = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const auto tweets = g.timeline(gen);
        max_len = std::max(max_len, tweets.size());
        const FeatureConfig cfg = g.config(gen);
        const FeatureVector got = extract(test::analyzed_from(tweets, g.polarity()), g.anxiety(), cfg);
        if (!(got == test::oracle_extract(tweets, g.oracle_lexicon(), cfg))) ++mismatches;
    }
    return {mismatches == 0 && max_len <= 50,
            "500 timelines (<= " + std::to_string(max_len) + " tweets), mismatches " + std::to_string(mismatches)};
}

Outcome planted_round_trip() {
    Workdir dir;
    adpredict({"synth", "--users", "300", "--raw", "--seed", "11", "--out-dir", dir / "synth"});
    adpredict({"featurize", "--corpus", dir / "synth/corpus.jsonl", "--out", dir / "derived.csv"});
    const auto planted = read_features_file(dir / "synth/features.csv");
    const auto derived = read_features_file(dir / "derived.csv");
    std::size_t agree = 0;
    for (const auto& [user, fv] : planted) {
        const auto it = derived.find(user);
        if (it == derived.end()) continue;
        for (std::size_t j = 0; j < kFeatureCount; ++j) agree += it->second[j] == fv[j] ? 1 : 0;
    }
    const std::size_t total = planted.size() * kFeatureCount;
    return {planted.size() >= 200 && derived.size() == planted.size() && agree == total,
            std::to_string(planted.size()) + " users, " + std::to_string(agree) + "/" + std::to_string(total) +
                " bits reproduced"};
}

Outcome exhaustive_learners() {
    const Protocol holdout{Protocol::Kind::holdout, 0.8, 10};
    const EvalReport nonlinear = evaluate(enumerate_feature_space(PlantedRule::parse("w | (t & s)"), 10), holdout, 42);
    const EvalReport linear = evaluate(enumerate_feature_space(PlantedRule::parse("w"), 10), holdout, 42);
    bool ok = true;
    std::string detail = "w|(t&s):";
    for (std::size_t i = 0; i < 4; ++i) {
        detail += std::string(" ") + kClassifierNames[i] + "=" + fmt("%.3f", nonlinear.metrics[i].accuracy);
        if (i > 0) ok = ok && nonlinear.metrics[i].accuracy == 1.0;
    }
    detail += "; w:";
    for (std::size_t i = 0; i < 4; ++i) {
        detail += std::string(" ") + kClassifierNames[i] + "=" + fmt("%.3f", linear.metrics[i].accuracy);
        ok = ok && linear.metrics[i].accuracy == 1.0;
    }
    return {ok, detail};
}

Outcome noise_robustness() {
    SynthOptions opt;
    opt.n_users = 2000;
    opt.noise_rate = 0.10;
    const Dataset d = synth_generate(PlantedRule::parse("w | (t & s)"), opt, 42);
    const EvalReport r = evaluate(d, Protocol{Protocol::Kind::kfold, 0.8, 10}, 42);
    const double acc = r.metrics[3].accuracy;
    return {acc >= 0.85 && acc <= 0.95, "ensemble 10-fold accuracy " + fmt("%.4f", acc) + " (target [0.85, 0.95])"};
}

Outcome mnb_exactness() {
    Dataset d;
    const std::pair<const char*, int> rows[] = {{"11111", 1}, {"11011", 1}, {"00000", 0}, {"00100", 0}};
    for (const auto& [bits, label] : rows) d.rows.push_back({bits, FeatureVector::from_string(bits), label});
    const Prediction p = predict(train_mnb(d), FeatureVector::from_string("11000"));
    // class 1: theta = (count + 1) / (9 + 5); class 0: (count + 1) / (1 + 5); equal priors
    const double hand = (3.0 / 14 * 3.0 / 14) / (3.0 / 14 * 3.0 / 14 + 1.0 / 6 * 1.0 / 6);
    const double err = std::fabs(p.score - hand);
    return {p.label == 1 && err <= 1e-9, "P(1|11000) = " + fmt("%.10f", p.score) + ", |err| " + fmt("%.1e", err)};
}

Outcome metric_arithmetic() {
    std::mt19937 gen(77);
    int failures = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + gen() % 100;
        std::vector<int> pred(n), truth(n);
        for (std::size_t i = 0; i < n; ++i) {
            pred[i] = static_cast<int>(gen() % 2);
            truth[i] = static_cast<int>(gen() % 2);
        }
        std::int64_t cell[2][2] = {};
        for (std::size_t i = 0; i < n; ++i) ++cell[pred[i]][truth[i]];
        const double tp = static_cast<double>(cell[1][1]), fp = static_cast<double>(cell[1][0]);
        const double fn = static_cast<double>(cell[0][1]), tn = static_cast<double>(cell[0][0]);
        const double p = tp + fp > 0 ? tp / (tp + fp) : 0.0;
        const double r = tp + fn > 0 ? tp / (tp + fn) : 0.0;
        const double f = p + r > 0 ? 2 * p * r / (p + r) : 0.0;
        const Metrics m = compute_metrics(pred, truth);
        const bool ok = m.tp == cell[1][1] && m.fp == cell[1][0] && m.fn == cell[0][1] && m.tn == cell[0][0] &&
                        std::fabs(m.accuracy - (tp + tn) / static_cast<double>(n)) <= 1e-12 &&
                        std::fabs(m.precision - p) <= 1e-12 && std::fabs(m.recall - r) <= 1e-12 &&
                        std::fabs(m.f1 - f) <= 1e-12;
        if (!ok) ++failures;
    }
    const std::vector<int> pred{1, 1, 1, 1, 0, 0, 0, 0, 0, 0};
    const std::vector<int> truth{1, 1, 1, 0, 1, 1, 0, 0, 0, 0};
    const Metrics ex = compute_metrics(pred, truth);
    const auto r4 = [](double v) { return std::round(v * 1e4) / 1e4; };
    const bool example = r4(ex.accuracy) == 0.7 && r4(ex.precision) == 0.75 && r4(ex.recall) == 0.6 &&
                         r4(ex.f1) == 0.6667;
    return {failures == 0 && example, "1000 random pairs, oracle failures " + std::to_string(failures) +
                                          "; example acc " + fmt("%.4f", ex.accuracy) + " f1 " + fmt("%.4f", ex.f1)};
}

Outcome stemmer_conformance() {
    std::ifstream voc(test::fixture_path("porter_voc.txt"));
    std::ifstream ref(test::fixture_path("porter_output.txt"));
    if (!voc || !ref) return {false, "reference fixture missing"};
    std::size_t total = 0, agree = 0;
    std::string w, s;
    while (std::getline(voc, w) && std::getline(ref, s)) {
        if (w.empty()) continue;
        ++total;
        agree += porter_stem(w) == s ? 1 : 0;
    }
    const double rate = total ? static_cast<double>(agree) / static_cast<double>(total) : 0.0;
    return {total > 0 && rate >= 0.999,
            std::to_string(agree) + "/" + std::to_string(total) + " = " + fmt("%.4f", 100 * rate) + "%"};
}

Outcome determinism() {
    Workdir dir;
    adpredict({"synth", "--users", "400", "--noise", "0.1", "--seed", "5", "--out-dir", dir / "synth"});
    const std::vector<std::string> eval{"evaluate", "--features", dir / "synth/features.csv", "--labels",
                                        dir / "synth/labels.csv", "--seed", "42", "--report-dir"};
    auto a = eval, b = eval;
    a.push_back(dir / "r1");
    b.push_back(dir / "r2");
    const std::string out_a = adpredict(a), out_b = adpredict(b);
    bool reports_equal = out_a == out_b;
    for (const char* name : {"report.txt", "report.csv", "plot.csv"}) {
        const std::string x = slurp(dir / (std::string("r1/") + name));
        reports_equal = reports_equal && !x.empty() && x == slurp(dir / (std::string("r2/") + name));
    }

    const Dataset d = load_dataset(dir / "synth/features.csv", dir / "synth/labels.csv");
    const std::vector<Model> models{train_mnb(d), train_rf(d, {}, 42), train_gb(d, {}, 42), train_ensemble(d, {}, 42)};
    int mismatches = 0;
    for (const Model& m : models) {
        std::stringstream buf;
        save_model(buf, m);
        const Model back = load_model(buf);
        for (const auto& x : all_feature_vectors()) {
            const Prediction p = predict(m, x), q = predict(back, x);
            if (p.label != q.label || p.score != q.score) ++mismatches;
        }
    }
    return {reports_equal && mismatches == 0,
            std::string("reports ") + (reports_equal ? "byte-identical" : "differ") + ", round-trip mismatches " +
                std::to_string(mismatches) + "/128"};
}

Outcome protocol_replay() {
    Workdir dir;
    adpredict({"synth", "--users", "100", "--noise", "0.1", "--raw", "--seed", "42", "--out-dir", dir / "synth"});
    adpredict({"featurize", "--corpus", dir / "synth/corpus.jsonl", "--out", dir / "features.csv"});
    const std::string table = adpredict({"evaluate", "--features", dir / "features.csv", "--labels",
                                         dir / "synth/labels.csv", "--seed", "42", "--report-dir", dir / "report"});
    std::cout << table;

    // report.csv: header plus one row per classifier, each with an accuracy
    std::istringstream csv(slurp(dir / "report/report.csv"));
    std::string line;
    std::getline(csv, line);
    bool shape = line.rfind("classifier,protocol,accuracy", 0) == 0;
    std::size_t i = 0;
    for (; std::getline(csv, line); ++i) shape = shape && i < 4 && line.rfind(kClassifierNames[i], 0) == 0;
    shape = shape && i == 4;
    for (const char* name : {"Naive Bayes", "Random Forest", "Gradient Boosting", "Ensemble Vote"})
        shape = shape && table.find(name) != std::string::npos;
    const bool fscore = table.find("F-score") != std::string::npos;
    return {shape && fscore, std::string("4 classifiers x accuracy") + (fscore ? " + ensemble F-score" : "") +
                                 " over 100 synthetic users (raw corpus, 10-fold)"};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "polarity contrast oracle", 1.0, contrast_oracle},
        {2, "feature extraction oracle", 10.0, feature_oracle},
        {3, "planted pipeline round trip", 30.0, planted_round_trip},
        {4, "exhaustive learner checks", 60.0, exhaustive_learners},
        {5, "noise robustness", 120.0, noise_robustness},
        {6, "naive Bayes exactness", 0.0, mnb_exactness},
        {7, "metric arithmetic", 0.0, metric_arithmetic},
        {8, "stemmer conformance", 0.0, stemmer_conformance},
        {9, "determinism", 0.0, determinism},
        {10, "full protocol replay", 0.0, protocol_replay},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = c.budget_seconds == 0.0 || secs < c.budget_seconds;
        if (!in_time) o.detail += "; over the " + fmt("%.0f", c.budget_seconds) + " s budget";
        const bool pass = o.pass && in_time;
        failed += pass ? 0 : 1;
        std::printf("%s  %2d  %-30s %7.2fs  %s\n", pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
