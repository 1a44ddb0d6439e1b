#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "adp/corpus.hpp"
#include "adp/features.hpp"
#include "adp/learners.hpp"

namespace adp {

/// Boolean function over the five feature bits, parsed from expressions such
/// as "w | (t & s)". Operators: '!' (not), '&' (and), '|' (or); constants 0/1.
class PlantedRule {
public:
    static PlantedRule parse(std::string_view expression);

    bool operator()(const FeatureVector& fv) const;
    const std::string& expression() const noexcept { return expression_; }

    struct Node;

private:
    std::string expression_;
    std::shared_ptr<const Node> root_;
};

struct SynthOptions {
    std::size_t n_users = 100;
    double noise_rate = 0.0;  // in [0, 0.5)
    /// Probability that each bit is 1.
    std::array<double, kFeatureCount> bit_probability{0.5, 0.5, 0.5, 0.5, 0.5};
};

/// Draws feature vectors with a seeded generator and labels them with the
/// rule, flipping each label independently with probability noise_rate.
Dataset synth_generate(const PlantedRule& rule, const SynthOptions& options, std::uint64_t seed);

/// Every one of the 32 vectors repeated `copies` times, labelled by the rule.
Dataset enumerate_feature_space(const PlantedRule& rule, std::size_t copies);

/// Surface words checked against the loaded resources so that each one plays
/// exactly one role in the feature pipeline.
struct SynthVocabulary {
    std::vector<std::string> neutral;   // no polarity entry, not an anxiety stem
    std::vector<std::string> positive;  // positive-leaning, not an anxiety stem
    std::vector<std::string> negative;  // negative-leaning, not an anxiety stem
    std::vector<std::string> anxiety;   // anxiety stem with no polarity entry

    /// Throws ValidationError if any role ends up with no usable words.
    static SynthVocabulary build(const PrepResources& resources, const Lexicons& lexicons,
                                 const PrepOptions& options = {});
};

/// Emits tweets for every planted vector so that featurization with the
/// default FeatureConfig and a 30-day window anchored at the latest tweet
/// reproduces it. A few stale tweets older than the window are mixed in.
std::vector<Tweet> synth_corpus(const Dataset& planted, const SynthVocabulary& vocabulary, std::uint64_t seed);

}  // namespace adp
