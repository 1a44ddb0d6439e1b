#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "adp/features.hpp"

namespace adp {

struct LabeledRow {
    std::string user_id;
    FeatureVector features;
    int label = 0;
};

struct Dataset {
    std::vector<LabeledRow> rows;

    std::size_t size() const noexcept { return rows.size(); }
    std::size_t count(int label) const;
    /// Throws TrainingError unless both classes are present and ids are unique.
    void require_trainable() const;
    Dataset subset(std::span<const std::size_t> indices) const;
};

struct Prediction {
    int label = 0;
    double score = 0.0;  // confidence in class 1
};

/// Multinomial naive Bayes with each feature value taken as a count in {0,1}.
struct MnbParams {
    double alpha = 1.0;
};

struct MnbModel {
    MnbParams params;
    std::array<double, 2> log_prior{};
    /// log P(feature j | class) under the per-class multinomial, Laplace-smoothed.
    std::array<std::array<double, kFeatureCount>, 2> log_likelihood{};
};

/// Binary tree over the five binary features. Children: `zero` for feature
/// value 0, `one` for 1. Leaves carry a class label or a real value.
struct TreeNode {
    int feature = -1;  // -1 for leaves
    int zero = -1;
    int one = -1;
    double value = 0.0;
    std::uint32_t count0 = 0;
    std::uint32_t count1 = 0;

    bool is_leaf() const noexcept { return feature < 0; }
};

struct TreeModel {
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    double evaluate(const FeatureVector& fv) const;
};

struct RfParams {
    int n_trees = 100;
    int features_per_split = 2;
};

struct RfModel {
    RfParams params;
    std::uint64_t seed = 0;
    bool bootstrap = true;
    std::vector<TreeModel> trees;
};

struct GbParams {
    int n_stages = 100;
    double learning_rate = 0.1;
    int max_depth = 2;
};

struct GbModel {
    GbParams params;
    std::uint64_t seed = 0;
    double base_score = 0.0;  // log-odds
    std::vector<TreeModel> stages;
    /// Mean training logistic loss after the base score and after each stage.
    std::vector<double> loss_trace;
};

struct EnsembleModel {
    MnbModel mnb;
    RfModel rf;
    GbModel gb;
};

struct LearnerParams {
    MnbParams mnb;
    RfParams rf;
    GbParams gb;
};

/// Switches used by tests to reach degenerate configurations.
struct TrainHooks {
    bool disable_bootstrap = false;
    bool allow_zero_stages = false;
};

using Model = std::variant<MnbModel, RfModel, GbModel, EnsembleModel>;

MnbModel train_mnb(const Dataset& data, const MnbParams& params = {});
RfModel train_rf(const Dataset& data, const RfParams& params, std::uint64_t seed, const TrainHooks& hooks = {});
GbModel train_gb(const Dataset& data, const GbParams& params, std::uint64_t seed, const TrainHooks& hooks = {});
EnsembleModel train_ensemble(const Dataset& data, const LearnerParams& params, std::uint64_t seed);

Prediction predict(const MnbModel& model, const FeatureVector& fv);
Prediction predict(const RfModel& model, const FeatureVector& fv);
Prediction predict(const GbModel& model, const FeatureVector& fv);
/// Majority vote of the three members; score is the fraction of members voting 1.
Prediction predict(const EnsembleModel& model, const FeatureVector& fv);
Prediction predict(const Model& model, const FeatureVector& fv);

/// Label given by at least two of exactly three labels.
int majority_vote(std::span<const int> labels);

/// Mean logistic loss of raw log-odds scores.
double logistic_loss(std::span<const double> raw_scores, std::span<const int> labels);

/// Model files are line-oriented text; see save_model in model_io.cpp for
/// the field-by-field layout.
inline constexpr int kModelFormatVersion = 1;

void save_model(std::ostream& out, const Model& model);
void save_model_file(const std::string& path, const Model& model);
Model load_model(std::istream& in);
Model load_model_file(const std::string& path);

const char* model_kind(const Model& model) noexcept;

}  // namespace adp
