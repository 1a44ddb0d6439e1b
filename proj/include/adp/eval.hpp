#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "adp/learners.hpp"

namespace adp {

struct Metrics {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    std::int64_t tn = 0;
};

/// Class 1 is the positive class. Zero denominators yield 0.
Metrics compute_metrics(std::span<const int> predictions, std::span<const int> truth);

struct Split {
    std::vector<std::size_t> train;  // row indices, ascending
    std::vector<std::size_t> test;
};

/// Seeded stratified holdout; the train side has floor(train_fraction * n) rows.
Split split(const Dataset& data, double train_fraction, std::uint64_t seed);

/// Seeded stratified k folds (row indices, ascending within each fold).
std::vector<std::vector<std::size_t>> kfold(const Dataset& data, int k, std::uint64_t seed);

struct Protocol {
    enum class Kind { holdout, kfold };
    Kind kind = Kind::kfold;
    double train_fraction = 0.8;
    int k = 10;

    /// "holdout-0.8" or "kfold-10".
    std::string describe() const;
};

inline constexpr std::array<const char*, 4> kClassifierNames{"MNB", "RF", "GB", "Ensemble"};

struct EvalReport {
    Protocol protocol;
    std::uint64_t seed = 0;
    std::size_t rows = 0;
    /// In kClassifierNames order.
    std::array<Metrics, 4> metrics{};
};

/// Trains all four classifiers on identical splits. For k-fold the rates are
/// unweighted means over folds and confusion counts are summed; fold i is
/// trained with seed + i.
EvalReport evaluate(const Dataset& data, const Protocol& protocol, std::uint64_t seed,
                    const LearnerParams& params = {});

/// Human-readable table (accuracy per classifier plus ensemble F-score).
void write_report_table(std::ostream& out, const EvalReport& report);
/// `classifier,protocol,accuracy,precision,recall,f1,seed`
void write_report_csv(std::ostream& out, const EvalReport& report);
/// Long form `classifier,metric,value` for plotting.
void write_plot_table(std::ostream& out, const EvalReport& report);

}  // namespace adp
