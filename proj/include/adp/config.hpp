#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "adp/eval.hpp"
#include "adp/features.hpp"
#include "adp/learners.hpp"

namespace adp {

/// Everything a pipeline run reads from a config file. Paths are stored as
/// written, or resolved against the config file's directory when loaded from
/// disk. Empty path means "not configured".
struct RunConfig {
    std::string corpus;
    std::string labels;
    std::string features;
    std::string seed_lexicon;
    std::string synonyms;
    std::string anxiety_lexicon;  // expanded lexicon file; built from seed + synonyms when empty
    std::string stopwords;
    std::string slang;
    std::string emoji;
    std::string polarity;
    std::string model_dir = "models";
    std::string report_dir = "reports";

    FeatureConfig feature;
    PrepOptions prep;
    int window_days = 30;
    std::optional<EpochSeconds> anchor_utc;

    LearnerParams learners;
    Protocol protocol;
    std::uint64_t seed = 42;

    /// Throws ValidationError if a value is out of range.
    void validate() const;
};

/// Applies one `key = value` setting; throws ValidationError naming the key
/// when it is unknown or the value does not parse.
void apply_config_setting(RunConfig& config, std::string_view key, std::string_view value);

/// Format: one `key = value` per line, `#` starts a comment, blank lines ignored.
/// Relative paths are resolved against `base_dir` when it is non-empty.
RunConfig parse_config(std::istream& in, const std::string& base_dir = {});
RunConfig load_config_file(const std::string& path);

/// Keys accepted by apply_config_setting, in documentation order.
const std::vector<std::string_view>& config_keys();

}  // namespace adp
