#include "adp/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "adp/error.hpp"
#include "adp/rng.hpp"

namespace adp {

namespace {

std::array<std::vector<std::size_t>, 2> shuffled_by_class(const Dataset& data, Rng& rng) {
    std::array<std::vector<std::size_t>, 2> by_class;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const int label = data.rows[i].label;
        if (label != 0 && label != 1) throw ContractError("labels must be 0 or 1");
        by_class[static_cast<std::size_t>(label)].push_back(i);
    }
    for (auto& v : by_class) rng.shuffle(v);
    return by_class;
}

std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

const char* long_name(std::size_t i) {
    static constexpr const char* names[] = {"Multinomial Naive Bayes", "Random Forest", "Gradient Boosting",
                                            "Ensemble Vote Classifier"};
    return names[i];
}

}  // namespace

Metrics compute_metrics(std::span<const int> predictions, std::span<const int> truth) {
    if (predictions.size() != truth.size()) throw ContractError("compute_metrics: predictions and truth differ in length");
    if (truth.empty()) throw ContractError("compute_metrics: no predictions");
    Metrics m;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if ((predictions[i] | truth[i]) & ~1) throw ContractError("compute_metrics: labels must be 0 or 1");
        const bool p = predictions[i] == 1;
        const bool t = truth[i] == 1;
        if (p && t) ++m.tp;
        else if (p && !t) ++m.fp;
        else if (!p && t) ++m.fn;
        else ++m.tn;
    }
    const auto ratio = [](std::int64_t a, std::int64_t b) { return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b); };
    m.accuracy = ratio(m.tp + m.tn, m.tp + m.fp + m.fn + m.tn);
    m.precision = ratio(m.tp, m.tp + m.fp);
    m.recall = ratio(m.tp, m.tp + m.fn);
    m.f1 = m.precision + m.recall == 0.0 ? 0.0 : 2.0 * m.precision * m.recall / (m.precision + m.recall);
    return m;
}

Split split(const Dataset& data, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw ContractError("train_fraction must be in (0,1)");
    Rng rng(seed);
    const auto by_class = shuffled_by_class(data, rng);

    const auto target = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(data.size()) + 1e-9));
    std::array<std::size_t, 2> take{};
    std::array<double, 2> remainder{};
    for (std::size_t c = 0; c < 2; ++c) {
        const double exact = train_fraction * static_cast<double>(by_class[c].size());
        take[c] = static_cast<std::size_t>(std::floor(exact + 1e-9));
        remainder[c] = exact - static_cast<double>(take[c]);
    }
    // leftover rows go to the class with the larger fractional share (ties: class 0)
    std::size_t leftover = target - std::min(target, take[0] + take[1]);
    while (leftover > 0) {
        const std::size_t c = remainder[1] > remainder[0] ? 1 : 0;
        const std::size_t alt = 1 - c;
        const std::size_t pick = take[c] < by_class[c].size() ? c : alt;
        ++take[pick];
        remainder[pick] = -1.0;
        --leftover;
    }

    Split out;
    for (std::size_t c = 0; c < 2; ++c) {
        if (take[c] == 0) throw StratificationError("class " + std::to_string(c) + " is absent from the training split");
        for (std::size_t i = 0; i < by_class[c].size(); ++i)
            (i < take[c] ? out.train : out.test).push_back(by_class[c][i]);
    }
    if (out.test.empty()) throw StratificationError("the test split is empty");
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

std::vector<std::vector<std::size_t>> kfold(const Dataset& data, int k, std::uint64_t seed) {
    if (k < 2) throw ContractError("k-fold needs k >= 2");
    Rng rng(seed);
    const auto by_class = shuffled_by_class(data, rng);
    for (std::size_t c = 0; c < 2; ++c)
        if (by_class[c].size() < static_cast<std::size_t>(k))
            throw StratificationError("class " + std::to_string(c) + " has " + std::to_string(by_class[c].size()) +
                                      " rows, fewer than k = " + std::to_string(k));
    std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(k));
    std::size_t position = 0;
    for (const auto& rows : by_class)
        for (auto r : rows) folds[position++ % folds.size()].push_back(r);
    for (auto& f : folds) std::sort(f.begin(), f.end());
    return folds;
}

std::string Protocol::describe() const {
    if (kind == Kind::holdout) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "holdout-%g", train_fraction);
        return buf;
    }
    return "kfold-" + std::to_string(k);
}

namespace {

std::array<Metrics, 4> score_fold(const Dataset& data, std::span<const std::size_t> train,
                                  std::span<const std::size_t> test, const LearnerParams& params,
                                  std::uint64_t seed) {
    const Dataset train_set = data.subset(train);
    const EnsembleModel model = train_ensemble(train_set, params, seed);
    std::array<std::vector<int>, 4> predicted;
    std::vector<int> truth;
    for (auto i : test) {
        const FeatureVector& fv = data.rows[i].features;
        predicted[0].push_back(predict(model.mnb, fv).label);
        predicted[1].push_back(predict(model.rf, fv).label);
        predicted[2].push_back(predict(model.gb, fv).label);
        predicted[3].push_back(predict(model, fv).label);
        truth.push_back(data.rows[i].label);
    }
    std::array<Metrics, 4> out;
    for (std::size_t c = 0; c < 4; ++c) out[c] = compute_metrics(predicted[c], truth);
    return out;
}

}  // namespace

EvalReport evaluate(const Dataset& data, const Protocol& protocol, std::uint64_t seed, const LearnerParams& params) {
    EvalReport report;
    report.protocol = protocol;
    report.seed = seed;
    report.rows = data.size();
    data.require_trainable();

    if (protocol.kind == Protocol::Kind::holdout) {
        const Split s = split(data, protocol.train_fraction, seed);
        report.metrics = score_fold(data, s.train, s.test, params, seed);
        return report;
    }

    const auto folds = kfold(data, protocol.k, seed);
    std::array<Metrics, 4> sum{};
    for (std::size_t f = 0; f < folds.size(); ++f) {
        std::vector<std::size_t> train;
        for (std::size_t g = 0; g < folds.size(); ++g)
            if (g != f) train.insert(train.end(), folds[g].begin(), folds[g].end());
        std::sort(train.begin(), train.end());
        const auto fold_metrics = score_fold(data, train, folds[f], params, seed + f);
        for (std::size_t c = 0; c < 4; ++c) {
            sum[c].accuracy += fold_metrics[c].accuracy;
            sum[c].precision += fold_metrics[c].precision;
            sum[c].recall += fold_metrics[c].recall;
            sum[c].f1 += fold_metrics[c].f1;
            sum[c].tp += fold_metrics[c].tp;
            sum[c].fp += fold_metrics[c].fp;
            sum[c].fn += fold_metrics[c].fn;
            sum[c].tn += fold_metrics[c].tn;
        }
    }
    const double k = static_cast<double>(folds.size());
    for (std::size_t c = 0; c < 4; ++c) {
        report.metrics[c] = sum[c];
        report.metrics[c].accuracy /= k;
        report.metrics[c].precision /= k;
        report.metrics[c].recall /= k;
        report.metrics[c].f1 /= k;
    }
    return report;
}

void write_report_table(std::ostream& out, const EvalReport& report) {
    out << "Protocol: " << report.protocol.describe() << "  seed: " << report.seed << "  users: " << report.rows
        << '\n';
    out << "Classifier                  Accuracy (%)\n";
    for (std::size_t c = 0; c < 4; ++c) {
        std::string name = long_name(c);
        name.resize(28, ' ');
        out << name << fixed(100.0 * report.metrics[c].accuracy, 2) << '\n';
    }
    out << "Ensemble F-score (%): " << fixed(100.0 * report.metrics[3].f1, 2) << '\n';
}

void write_report_csv(std::ostream& out, const EvalReport& report) {
    out << "classifier,protocol,accuracy,precision,recall,f1,seed\n";
    for (std::size_t c = 0; c < 4; ++c) {
        const Metrics& m = report.metrics[c];
        out << kClassifierNames[c] << ',' << report.protocol.describe() << ',' << fixed(m.accuracy, 6) << ','
            << fixed(m.precision, 6) << ',' << fixed(m.recall, 6) << ',' << fixed(m.f1, 6) << ',' << report.seed
            << '\n';
    }
}

void write_plot_table(std::ostream& out, const EvalReport& report) {
    out << "classifier,metric,value\n";
    for (std::size_t c = 0; c < 4; ++c) {
        const Metrics& m = report.metrics[c];
        out << kClassifierNames[c] << ",accuracy," << fixed(m.accuracy, 6) << '\n';
        out << kClassifierNames[c] << ",precision," << fixed(m.precision, 6) << '\n';
        out << kClassifierNames[c] << ",recall," << fixed(m.recall, 6) << '\n';
        out << kClassifierNames[c] << ",f1," << fixed(m.f1, 6) << '\n';
    }
}

}  // namespace adp
