#include "adp/learners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "adp/error.hpp"
#include "adp/rng.hpp"

namespace adp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double sigmoid(double x) {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double log_sum_exp(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

double gini(double n0, double n1) {
    const double n = n0 + n1;
    if (n == 0) return 0.0;
    const double p0 = n0 / n;
    const double p1 = n1 / n;
    return 1.0 - p0 * p0 - p1 * p1;
}

using FeatureMask = std::array<bool, kFeatureCount>;

// ---- random forest tree ----------------------------------------------------

class ClassificationTreeBuilder {
public:
    ClassificationTreeBuilder(const Dataset& data, int features_per_split, Rng& rng)
        : data_(data), k_(features_per_split), rng_(rng) {}

    TreeModel build(std::vector<std::size_t> sample) {
        TreeModel tree;
        FeatureMask used{};
        grow(tree, sample, used);
        return tree;
    }

private:
    const Dataset& data_;
    int k_;
    Rng& rng_;

    int grow(TreeModel& tree, const std::vector<std::size_t>& rows, FeatureMask used) {
        const int id = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        std::uint32_t c0 = 0;
        std::uint32_t c1 = 0;
        for (auto r : rows) (data_.rows[r].label ? c1 : c0)++;
        {
            TreeNode& node = tree.nodes[static_cast<std::size_t>(id)];
            node.count0 = c0;
            node.count1 = c1;
            node.value = c1 > c0 ? 1.0 : 0.0;
        }
        if (c0 == 0 || c1 == 0) return id;

        std::vector<int> candidates;
        for (int j = 0; j < static_cast<int>(kFeatureCount); ++j)
            if (!used[static_cast<std::size_t>(j)]) candidates.push_back(j);
        if (candidates.empty()) return id;
        rng_.shuffle(candidates);

        const double parent = gini(c0, c1);
        int best = -1;
        double best_gain = -1.0;
        int evaluated = 0;
        for (int j : candidates) {
            if (evaluated >= k_ && best >= 0) break;
            ++evaluated;
            double n[2][2] = {{0, 0}, {0, 0}};  // [feature value][label]
            for (auto r : rows) n[data_.rows[r].features[static_cast<std::size_t>(j)]][data_.rows[r].label] += 1;
            const double left = n[0][0] + n[0][1];
            const double right = n[1][0] + n[1][1];
            if (left == 0 || right == 0) continue;
            const double total = left + right;
            const double gain = parent - (left / total) * gini(n[0][0], n[0][1]) - (right / total) * gini(n[1][0], n[1][1]);
            // equal decreases computed from mirrored counts can differ in the last bit
            const bool tie = std::abs(gain - best_gain) <= 1e-12;
            if ((gain > best_gain && !tie) || (tie && j < best)) {
                best_gain = gain;
                best = j;
            }
        }
        if (best < 0) return id;

        std::vector<std::size_t> zero;
        std::vector<std::size_t> one;
        for (auto r : rows) (data_.rows[r].features[static_cast<std::size_t>(best)] ? one : zero).push_back(r);
        used[static_cast<std::size_t>(best)] = true;
        const int z = grow(tree, zero, used);
        const int o = grow(tree, one, used);
        TreeNode& node = tree.nodes[static_cast<std::size_t>(id)];
        node.feature = best;
        node.zero = z;
        node.one = o;
        return id;
    }
};

// ---- gradient boosting regression tree ---------------------------------------

class RegressionTreeBuilder {
public:
    RegressionTreeBuilder(const Dataset& data, const std::vector<double>& residual, const std::vector<double>& hessian,
                          int max_depth)
        : data_(data), residual_(residual), hessian_(hessian), max_depth_(max_depth) {}

    TreeModel build() {
        TreeModel tree;
        std::vector<std::size_t> all(data_.size());
        std::iota(all.begin(), all.end(), std::size_t{0});
        grow(tree, all, FeatureMask{}, 0);
        return tree;
    }

private:
    const Dataset& data_;
    const std::vector<double>& residual_;
    const std::vector<double>& hessian_;
    int max_depth_;

    int grow(TreeModel& tree, const std::vector<std::size_t>& rows, FeatureMask used, int depth) {
        const int id = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        double sum_r = 0.0;
        double sum_h = 0.0;
        std::uint32_t c0 = 0;
        std::uint32_t c1 = 0;
        for (auto r : rows) {
            sum_r += residual_[r];
            sum_h += hessian_[r];
            (data_.rows[r].label ? c1 : c0)++;
        }
        {
            TreeNode& node = tree.nodes[static_cast<std::size_t>(id)];
            node.count0 = c0;
            node.count1 = c1;
            // one Newton step on the logistic loss
            node.value = sum_h < 1e-150 ? 0.0 : sum_r / sum_h;
        }
        if (depth >= max_depth_ || rows.size() < 2) return id;

        const double n = static_cast<double>(rows.size());
        const double parent = sum_r * sum_r / n;
        int best = -1;
        double best_gain = 1e-12;
        for (int j = 0; j < static_cast<int>(kFeatureCount); ++j) {
            if (used[static_cast<std::size_t>(j)]) continue;
            double s[2] = {0, 0};
            double cnt[2] = {0, 0};
            for (auto r : rows) {
                const auto v = data_.rows[r].features[static_cast<std::size_t>(j)];
                s[v] += residual_[r];
                cnt[v] += 1;
            }
            if (cnt[0] == 0 || cnt[1] == 0) continue;
            const double gain = s[0] * s[0] / cnt[0] + s[1] * s[1] / cnt[1] - parent;
            if (gain > best_gain) {
                best_gain = gain;
                best = j;
            }
        }
        if (best < 0) return id;

        std::vector<std::size_t> zero;
        std::vector<std::size_t> one;
        for (auto r : rows) (data_.rows[r].features[static_cast<std::size_t>(best)] ? one : zero).push_back(r);
        used[static_cast<std::size_t>(best)] = true;
        const int z = grow(tree, zero, used, depth + 1);
        const int o = grow(tree, one, used, depth + 1);
        TreeNode& node = tree.nodes[static_cast<std::size_t>(id)];
        node.feature = best;
        node.zero = z;
        node.one = o;
        return id;
    }
};

double gb_raw_score(const GbModel& model, const FeatureVector& fv) {
    double raw = model.base_score;
    for (const auto& stage : model.stages) raw += model.params.learning_rate * stage.evaluate(fv);
    return raw;
}

}  // namespace

std::size_t Dataset::count(int label) const {
    return static_cast<std::size_t>(
        std::count_if(rows.begin(), rows.end(), [label](const LabeledRow& r) { return r.label == label; }));
}

void Dataset::require_trainable() const {
    if (count(0) == 0 || count(1) == 0)
        throw TrainingError("single-class data: training needs at least one row of each class");
    std::set<std::string> ids;
    for (const auto& r : rows) {
        if (r.label != 0 && r.label != 1) throw TrainingError("label must be 0 or 1 for user '" + r.user_id + "'");
        if (!ids.insert(r.user_id).second) throw TrainingError("duplicate user id '" + r.user_id + "' in dataset");
    }
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
    Dataset out;
    out.rows.reserve(indices.size());
    for (auto i : indices) out.rows.push_back(rows.at(i));
    return out;
}

double TreeModel::evaluate(const FeatureVector& fv) const {
    std::size_t i = 0;
    while (!nodes[i].is_leaf())
        i = static_cast<std::size_t>(fv[static_cast<std::size_t>(nodes[i].feature)] ? nodes[i].one : nodes[i].zero);
    return nodes[i].value;
}

MnbModel train_mnb(const Dataset& data, const MnbParams& params) {
    data.require_trainable();
    if (!(params.alpha >= 0.0)) throw TrainingError("naive Bayes smoothing alpha must be >= 0");
    MnbModel model;
    model.params = params;
    const double n = static_cast<double>(data.size());
    for (int c = 0; c < 2; ++c) {
        std::array<double, kFeatureCount> counts{};
        for (const auto& row : data.rows)
            if (row.label == c)
                for (std::size_t j = 0; j < kFeatureCount; ++j) counts[j] += row.features[j];
        const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
        const double denom = total + params.alpha * static_cast<double>(kFeatureCount);
        for (std::size_t j = 0; j < kFeatureCount; ++j) {
            const double numer = counts[j] + params.alpha;
            model.log_likelihood[static_cast<std::size_t>(c)][j] =
                (numer == 0.0 || denom == 0.0) ? kNegInf : std::log(numer / denom);
        }
        model.log_prior[static_cast<std::size_t>(c)] = std::log(static_cast<double>(data.count(c)) / n);
    }
    return model;
}

Prediction predict(const MnbModel& model, const FeatureVector& fv) {
    std::array<double, 2> joint{};
    for (std::size_t c = 0; c < 2; ++c) {
        double v = model.log_prior[c];
        for (std::size_t j = 0; j < kFeatureCount; ++j)
            if (fv[j]) v += model.log_likelihood[c][j];
        joint[c] = v;
    }
    const double norm = log_sum_exp(joint[0], joint[1]);
    const double score = norm == kNegInf ? 0.5 : std::exp(joint[1] - norm);
    return {joint[1] > joint[0] ? 1 : 0, score};
}

RfModel train_rf(const Dataset& data, const RfParams& params, std::uint64_t seed, const TrainHooks& hooks) {
    data.require_trainable();
    if (params.n_trees < 1) throw TrainingError("random forest needs n_trees >= 1");
    if (params.features_per_split < 1 || params.features_per_split > static_cast<int>(kFeatureCount))
        throw TrainingError("random forest features_per_split must be in [1,5]");
    RfModel model;
    model.params = params;
    model.seed = seed;
    model.bootstrap = !hooks.disable_bootstrap;
    Rng rng(seed);
    ClassificationTreeBuilder builder(data, params.features_per_split, rng);
    const std::size_t n = data.size();
    for (int t = 0; t < params.n_trees; ++t) {
        std::vector<std::size_t> sample(n);
        if (model.bootstrap) {
            for (auto& s : sample) s = static_cast<std::size_t>(rng.below(n));
        } else {
            std::iota(sample.begin(), sample.end(), std::size_t{0});
        }
        model.trees.push_back(builder.build(std::move(sample)));
    }
    return model;
}

Prediction predict(const RfModel& model, const FeatureVector& fv) {
    std::size_t votes = 0;
    for (const auto& tree : model.trees) votes += tree.evaluate(fv) > 0.5 ? 1 : 0;
    const std::size_t n = model.trees.size();
    return {2 * votes > n ? 1 : 0, n == 0 ? 0.0 : static_cast<double>(votes) / static_cast<double>(n)};
}

double logistic_loss(std::span<const double> raw_scores, std::span<const int> labels) {
    if (raw_scores.size() != labels.size() || raw_scores.empty())
        throw ContractError("logistic_loss needs equal, non-zero lengths");
    double total = 0.0;
    for (std::size_t i = 0; i < raw_scores.size(); ++i) {
        const double z = raw_scores[i];
        // log(1 + e^z) - y z, computed stably
        const double softplus = z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
        total += softplus - (labels[i] ? z : 0.0);
    }
    return total / static_cast<double>(raw_scores.size());
}

GbModel train_gb(const Dataset& data, const GbParams& params, std::uint64_t seed, const TrainHooks& hooks) {
    data.require_trainable();
    if (params.n_stages < (hooks.allow_zero_stages ? 0 : 1)) throw TrainingError("gradient boosting needs n_stages >= 1");
    if (!(params.learning_rate > 0.0 && params.learning_rate <= 1.0))
        throw TrainingError("gradient boosting learning_rate must be in (0,1]");
    if (params.max_depth < 1) throw TrainingError("gradient boosting max_depth must be >= 1");

    GbModel model;
    model.params = params;
    model.seed = seed;
    const double p = static_cast<double>(data.count(1)) / static_cast<double>(data.size());
    model.base_score = std::log(p / (1.0 - p));

    const std::size_t n = data.size();
    std::vector<double> raw(n, model.base_score);
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = data.rows[i].label;
    model.loss_trace.push_back(logistic_loss(raw, labels));

    std::vector<double> residual(n);
    std::vector<double> hessian(n);
    for (int stage = 0; stage < params.n_stages; ++stage) {
        for (std::size_t i = 0; i < n; ++i) {
            const double prob = sigmoid(raw[i]);
            residual[i] = labels[i] - prob;
            hessian[i] = prob * (1.0 - prob);
        }
        TreeModel tree = RegressionTreeBuilder(data, residual, hessian, params.max_depth).build();
        for (std::size_t i = 0; i < n; ++i) raw[i] += params.learning_rate * tree.evaluate(data.rows[i].features);
        model.stages.push_back(std::move(tree));
        model.loss_trace.push_back(logistic_loss(raw, labels));
    }
    return model;
}

Prediction predict(const GbModel& model, const FeatureVector& fv) {
    const double score = sigmoid(gb_raw_score(model, fv));
    return {score > 0.5 ? 1 : 0, score};
}

EnsembleModel train_ensemble(const Dataset& data, const LearnerParams& params, std::uint64_t seed) {
    EnsembleModel model;
    model.mnb = train_mnb(data, params.mnb);
    model.rf = train_rf(data, params.rf, seed);
    model.gb = train_gb(data, params.gb, seed);
    return model;
}

int majority_vote(std::span<const int> labels) {
    if (labels.size() != 3) throw ContractError("majority_vote needs exactly three labels");
    int ones = 0;
    for (int l : labels) {
        if (l != 0 && l != 1) throw ContractError("majority_vote labels must be 0 or 1");
        ones += l;
    }
    return ones >= 2 ? 1 : 0;
}

Prediction predict(const EnsembleModel& model, const FeatureVector& fv) {
    const std::array<int, 3> labels{predict(model.mnb, fv).label, predict(model.rf, fv).label,
                                    predict(model.gb, fv).label};
    const int ones = labels[0] + labels[1] + labels[2];
    return {majority_vote(labels), ones / 3.0};
}

Prediction predict(const Model& model, const FeatureVector& fv) {
    return std::visit([&fv](const auto& m) { return predict(m, fv); }, model);
}

const char* model_kind(const Model& model) noexcept {
    switch (model.index()) {
        case 0:
            return "mnb";
        case 1:
            return "rf";
        case 2:
            return "gb";
        default:
            return "ensemble";
    }
}

}  // namespace adp
