#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adp/corpus.hpp"
#include "adp/lexicons.hpp"
#include "adp/textprep.hpp"

namespace adp {

inline constexpr std::size_t kFeatureCount = 5;
inline constexpr std::size_t kFeatureSpaceSize = 32;

/// Binary behavioural/linguistic vector <w, t, f, s, c>:
/// anxiety word, odd-hour posting, hourly burst, negative share, polarity contrast.
struct FeatureVector {
    std::array<std::uint8_t, kFeatureCount> bits{};

    std::uint8_t& w() { return bits[0]; }
    std::uint8_t& t() { return bits[1]; }
    std::uint8_t& f() { return bits[2]; }
    std::uint8_t& s() { return bits[3]; }
    std::uint8_t& c() { return bits[4]; }
    std::uint8_t w() const { return bits[0]; }
    std::uint8_t t() const { return bits[1]; }
    std::uint8_t f() const { return bits[2]; }
    std::uint8_t s() const { return bits[3]; }
    std::uint8_t c() const { return bits[4]; }

    std::uint8_t operator[](std::size_t i) const { return bits[i]; }

    /// w is the most significant bit, so "10000" is 16.
    unsigned index() const;
    static FeatureVector from_index(unsigned index);
    /// Parses a five-character bit string such as "11000".
    static FeatureVector from_string(std::string_view bits);
    std::string to_string() const;

    bool operator==(const FeatureVector&) const = default;
};

/// All 32 vectors in index order.
std::array<FeatureVector, kFeatureSpaceSize> all_feature_vectors();

struct ContrastInputs {
    std::int64_t positive_words = 0;  // pw
    std::int64_t negative_words = 0;  // nw
    std::int64_t positive_posts = 0;  // PP
    std::int64_t negative_posts = 0;  // NP
    double delta = 3.0;
};

struct FeatureConfig {
    int odd_hour_lo = 0;
    int odd_hour_hi = 6;  // exclusive
    int min_odd_posts = 2;
    int min_hourly_posts = 3;
    double neg_share_threshold = 0.25;  // inclusive
    double contrast_threshold = 0.25;   // inclusive, on |c|
    int contrast_window_hours = 24;
    double contrast_delta = 3.0;
    bool require_mixed_sign_window = false;

    /// Throws ValidationError when an invariant is broken.
    void validate() const;
};

/// Applies `key = value` settings whose keys mirror the FeatureConfig fields.
/// Returns false for keys it does not know.
bool apply_feature_setting(FeatureConfig& config, std::string_view key, std::string_view value);

struct Lexicons {
    AnxietyLexicon anxiety;
    PolarityLexicon polarity;
};

/// A windowed tweet after preprocessing and polarity scoring.
struct AnalyzedTweet {
    std::string tweet_id;
    EpochSeconds created_at_utc = 0;
    std::optional<int> utc_offset_minutes;
    std::vector<std::string> stems;
    TweetPolarity polarity;
};

using AnalyzedTimeline = std::vector<AnalyzedTweet>;

AnalyzedTweet analyze_tweet(const Tweet& tweet, const PrepResources& resources, const PolarityLexicon& polarity,
                            const PrepOptions& options = {});
AnalyzedTimeline analyze_timeline(const UserTimeline& timeline, const PrepResources& resources,
                                  const PolarityLexicon& polarity, const PrepOptions& options = {});

std::uint8_t feat_word(const AnalyzedTimeline& timeline, const AnxietyLexicon& lexicon);
std::uint8_t feat_timing(const AnalyzedTimeline& timeline, const FeatureConfig& config);
std::uint8_t feat_frequency(const AnalyzedTimeline& timeline, const FeatureConfig& config);
std::uint8_t feat_sentiment(const AnalyzedTimeline& timeline, const FeatureConfig& config);

/// ((d*PP + pw) - (d*NP + nw)) / ((d*PP + pw) + (d*NP + nw)); 0 when the
/// denominator vanishes.
double contrast_score(const ContrastInputs& inputs);

std::uint8_t feat_contrast(const AnalyzedTimeline& timeline, const FeatureConfig& config);

FeatureVector extract(const AnalyzedTimeline& timeline, const AnxietyLexicon& lexicon, const FeatureConfig& config);

struct FeaturizeOptions {
    FeatureConfig config;
    PrepOptions prep;
    int window_days = 30;
    /// Defaults to the latest tweet in the corpus.
    std::optional<EpochSeconds> anchor_utc;
};

/// Windows, preprocesses and extracts every user's timeline.
std::map<std::string, FeatureVector> featurize_timelines(const std::map<std::string, UserTimeline>& timelines,
                                                         const PrepResources& resources, const Lexicons& lexicons,
                                                         const FeaturizeOptions& options);

/// Feature file rows: `user_id,w,t,f,s,c`, preceded by that header line on write
/// (the header is optional on read).
void write_features(std::ostream& out, const std::map<std::string, FeatureVector>& rows);
std::map<std::string, FeatureVector> read_features(std::istream& in);
std::map<std::string, FeatureVector> read_features_file(const std::string& path);

}  // namespace adp
