#include "adp/config.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <istream>

#include "adp/error.hpp"

namespace adp {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

template <typename T>
T number(std::string_view key, std::string_view text) {
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
        throw ValidationError("config key '" + std::string(key) + "': cannot parse '" + std::string(text) + "'");
    return value;
}

bool boolean(std::string_view key, std::string_view text) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw ValidationError("config key '" + std::string(key) + "': expected true/false, got '" + std::string(text) + "'");
}

// Keys holding file or directory paths.
std::string RunConfig::*path_member(std::string_view key) {
    if (key == "corpus") return &RunConfig::corpus;
    if (key == "labels") return &RunConfig::labels;
    if (key == "features") return &RunConfig::features;
    if (key == "seed_lexicon") return &RunConfig::seed_lexicon;
    if (key == "synonyms") return &RunConfig::synonyms;
    if (key == "anxiety_lexicon") return &RunConfig::anxiety_lexicon;
    if (key == "stopwords") return &RunConfig::stopwords;
    if (key == "slang") return &RunConfig::slang;
    if (key == "emoji") return &RunConfig::emoji;
    if (key == "polarity") return &RunConfig::polarity;
    if (key == "model_dir") return &RunConfig::model_dir;
    if (key == "report_dir") return &RunConfig::report_dir;
    return nullptr;
}

}  // namespace

const std::vector<std::string_view>& config_keys() {
    static const std::vector<std::string_view> keys{
        "corpus", "labels", "features", "seed_lexicon", "synonyms", "anxiety_lexicon", "stopwords", "slang",
        "emoji", "polarity", "model_dir", "report_dir",
        "keep_hashtag_words", "window_days", "anchor",
        "odd_hour_lo", "odd_hour_hi", "min_odd_posts", "min_hourly_posts", "neg_share_threshold",
        "contrast_threshold", "contrast_window_hours", "contrast_delta", "require_mixed_sign_window",
        "mnb_alpha", "rf_trees", "rf_features_per_split", "gb_stages", "gb_learning_rate", "gb_max_depth",
        "protocol", "train_fraction", "k", "seed",
    };
    return keys;
}

void apply_config_setting(RunConfig& config, std::string_view key, std::string_view raw) {
    const std::string_view value = trim(raw);
    if (auto member = path_member(key)) {
        config.*member = std::string(value);
        return;
    }
    if (apply_feature_setting(config.feature, key, value)) return;

    if (key == "keep_hashtag_words") config.prep.keep_hashtag_words = boolean(key, value);
    else if (key == "window_days") config.window_days = number<int>(key, value);
    else if (key == "anchor") config.anchor_utc = value.empty() ? std::nullopt : std::optional(parse_rfc3339(value).first);
    else if (key == "mnb_alpha") config.learners.mnb.alpha = number<double>(key, value);
    else if (key == "rf_trees") config.learners.rf.n_trees = number<int>(key, value);
    else if (key == "rf_features_per_split") config.learners.rf.features_per_split = number<int>(key, value);
    else if (key == "gb_stages") config.learners.gb.n_stages = number<int>(key, value);
    else if (key == "gb_learning_rate") config.learners.gb.learning_rate = number<double>(key, value);
    else if (key == "gb_max_depth") config.learners.gb.max_depth = number<int>(key, value);
    else if (key == "protocol") {
        if (value == "holdout") config.protocol.kind = Protocol::Kind::holdout;
        else if (value == "kfold") config.protocol.kind = Protocol::Kind::kfold;
        else throw ValidationError("config key 'protocol': expected holdout or kfold, got '" + std::string(value) + "'");
    } else if (key == "train_fraction") config.protocol.train_fraction = number<double>(key, value);
    else if (key == "k") config.protocol.k = number<int>(key, value);
    else if (key == "seed") {
        if (!value.empty() && value.front() == '-')
            throw ValidationError("config key 'seed': must be a non-negative integer");
        config.seed = number<std::uint64_t>(key, value);
    } else throw ValidationError("unknown config key '" + std::string(key) + "'");
}

void RunConfig::validate() const {
    feature.validate();
    if (window_days < 1) throw ValidationError("window_days must be >= 1");
    if (!(protocol.train_fraction > 0.0 && protocol.train_fraction < 1.0))
        throw ValidationError("train_fraction must be in (0,1)");
    if (protocol.k < 2) throw ValidationError("k must be >= 2");
    if (!(learners.mnb.alpha >= 0.0)) throw ValidationError("mnb_alpha must be >= 0");
    if (learners.rf.n_trees < 1) throw ValidationError("rf_trees must be >= 1");
    if (learners.rf.features_per_split < 1 || learners.rf.features_per_split > static_cast<int>(kFeatureCount))
        throw ValidationError("rf_features_per_split must be in [1,5]");
    if (learners.gb.n_stages < 1) throw ValidationError("gb_stages must be >= 1");
    if (!(learners.gb.learning_rate > 0.0 && learners.gb.learning_rate <= 1.0))
        throw ValidationError("gb_learning_rate must be in (0,1]");
    if (learners.gb.max_depth < 1) throw ValidationError("gb_max_depth must be >= 1");
}

RunConfig parse_config(std::istream& in, const std::string& base_dir) {
    RunConfig config;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
        view = trim(view);
        if (view.empty()) continue;
        const auto eq = view.find('=');
        if (eq == std::string_view::npos)
            throw ValidationError("config line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string_view key = trim(view.substr(0, eq));
        try {
            apply_config_setting(config, key, view.substr(eq + 1));
        } catch (const ValidationError& e) {
            throw ValidationError("config line " + std::to_string(line_no) + ": " + e.what());
        } catch (const ParseError& e) {
            throw ValidationError("config line " + std::to_string(line_no) + ": " + e.what());
        }
        if (auto member = path_member(key); member && !base_dir.empty() && !(config.*member).empty()) {
            const std::filesystem::path p(config.*member);
            if (p.is_relative()) config.*member = (std::filesystem::path(base_dir) / p).lexically_normal().string();
        }
    }
    if (in.bad()) throw IoError("cannot read config stream");
    config.validate();
    return config;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    const auto dir = std::filesystem::path(path).parent_path().string();
    return parse_config(in, dir);
}

}  // namespace adp
