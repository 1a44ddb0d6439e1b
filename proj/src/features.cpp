#include "adp/features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <utility>

#include "adp/error.hpp"

namespace adp {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
    const std::string t = trim(text);
    T value{};
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty())
        throw ValidationError("config key '" + std::string(key) + "': cannot parse '" + t + "'");
    return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
    const std::string t = trim(text);
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    throw ValidationError("config key '" + std::string(key) + "': expected true/false, got '" + t + "'");
}

std::vector<const AnalyzedTweet*> sorted_by_time(const AnalyzedTimeline& timeline) {
    std::vector<const AnalyzedTweet*> out;
    out.reserve(timeline.size());
    for (const auto& t : timeline) out.push_back(&t);
    std::sort(out.begin(), out.end(), [](const AnalyzedTweet* a, const AnalyzedTweet* b) {
        if (a->created_at_utc != b->created_at_utc) return a->created_at_utc < b->created_at_utc;
        return a->tweet_id < b->tweet_id;
    });
    return out;
}

}  // namespace

unsigned FeatureVector::index() const {
    unsigned v = 0;
    for (auto b : bits) v = (v << 1) | (b ? 1u : 0u);
    return v;
}

FeatureVector FeatureVector::from_index(unsigned index) {
    FeatureVector fv;
    for (std::size_t i = 0; i < kFeatureCount; ++i)
        fv.bits[i] = static_cast<std::uint8_t>((index >> (kFeatureCount - 1 - i)) & 1u);
    return fv;
}

FeatureVector FeatureVector::from_string(std::string_view s) {
    if (s.size() != kFeatureCount) throw ValidationError("feature bit string must have 5 characters: '" + std::string(s) + "'");
    FeatureVector fv;
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        if (s[i] != '0' && s[i] != '1') throw ValidationError("feature bit string must be 0/1: '" + std::string(s) + "'");
        fv.bits[i] = s[i] == '1' ? 1 : 0;
    }
    return fv;
}

std::string FeatureVector::to_string() const {
    std::string out;
    for (auto b : bits) out += b ? '1' : '0';
    return out;
}

std::array<FeatureVector, kFeatureSpaceSize> all_feature_vectors() {
    std::array<FeatureVector, kFeatureSpaceSize> out{};
    for (unsigned i = 0; i < kFeatureSpaceSize; ++i) out[i] = FeatureVector::from_index(i);
    return out;
}

void FeatureConfig::validate() const {
    if (!(0 <= odd_hour_lo && odd_hour_lo < odd_hour_hi && odd_hour_hi <= 24))
        throw ValidationError("feature config: need 0 <= odd_hour_lo < odd_hour_hi <= 24");
    if (min_odd_posts < 1 || min_hourly_posts < 1) throw ValidationError("feature config: minimum counts must be >= 1");
    if (!(neg_share_threshold > 0.0 && neg_share_threshold <= 1.0))
        throw ValidationError("feature config: neg_share_threshold must be in (0,1]");
    if (!(contrast_threshold > 0.0 && contrast_threshold <= 1.0))
        throw ValidationError("feature config: contrast_threshold must be in (0,1]");
    if (contrast_window_hours < 1) throw ValidationError("feature config: contrast_window_hours must be >= 1");
    if (!(contrast_delta > 0.0)) throw ValidationError("feature config: contrast_delta must be > 0");
}

bool apply_feature_setting(FeatureConfig& config, std::string_view key, std::string_view value) {
    if (key == "odd_hour_lo") config.odd_hour_lo = parse_number<int>(key, value);
    else if (key == "odd_hour_hi") config.odd_hour_hi = parse_number<int>(key, value);
    else if (key == "min_odd_posts") config.min_odd_posts = parse_number<int>(key, value);
    else if (key == "min_hourly_posts") config.min_hourly_posts = parse_number<int>(key, value);
    else if (key == "neg_share_threshold") config.neg_share_threshold = parse_number<double>(key, value);
    else if (key == "contrast_threshold") config.contrast_threshold = parse_number<double>(key, value);
    else if (key == "contrast_window_hours") config.contrast_window_hours = parse_number<int>(key, value);
    else if (key == "contrast_delta") config.contrast_delta = parse_number<double>(key, value);
    else if (key == "require_mixed_sign_window") config.require_mixed_sign_window = parse_bool(key, value);
    else return false;
    return true;
}

AnalyzedTweet analyze_tweet(const Tweet& tweet, const PrepResources& resources, const PolarityLexicon& polarity,
                            const PrepOptions& options) {
    AnalyzedTweet out;
    out.tweet_id = tweet.tweet_id;
    out.created_at_utc = tweet.created_at_utc;
    out.utc_offset_minutes = tweet.utc_offset_minutes;
    out.stems = preprocess(tweet, resources, options).stems;
    out.polarity = score_tweet(out.stems, polarity);
    return out;
}

AnalyzedTimeline analyze_timeline(const UserTimeline& timeline, const PrepResources& resources,
                                  const PolarityLexicon& polarity, const PrepOptions& options) {
    AnalyzedTimeline out;
    out.reserve(timeline.tweets.size());
    for (const Tweet& t : timeline.tweets) out.push_back(analyze_tweet(t, resources, polarity, options));
    return out;
}

std::uint8_t feat_word(const AnalyzedTimeline& timeline, const AnxietyLexicon& lexicon) {
    for (const auto& tweet : timeline)
        for (const auto& s : tweet.stems)
            if (contains_anxiety_stem(lexicon, s)) return 1;
    return 0;
}

std::uint8_t feat_timing(const AnalyzedTimeline& timeline, const FeatureConfig& config) {
    int odd = 0;
    for (const auto& tweet : timeline) {
        const int hour = civil_time(tweet.created_at_utc, tweet.utc_offset_minutes).hour;
        if (hour >= config.odd_hour_lo && hour < config.odd_hour_hi) ++odd;
    }
    return odd >= config.min_odd_posts ? 1 : 0;
}

std::uint8_t feat_frequency(const AnalyzedTimeline& timeline, const FeatureConfig& config) {
    std::map<std::pair<std::int64_t, int>, int> buckets;
    for (const auto& tweet : timeline) {
        const LocalTime lt = civil_time(tweet.created_at_utc, tweet.utc_offset_minutes);
        if (++buckets[{lt.day_number, lt.hour}] >= config.min_hourly_posts) return 1;
    }
    return 0;
}

std::uint8_t feat_sentiment(const AnalyzedTimeline& timeline, const FeatureConfig& config) {
    if (timeline.empty()) return 0;
    const auto negative = std::count_if(timeline.begin(), timeline.end(),
                                        [](const AnalyzedTweet& t) { return t.polarity.verdict == Verdict::negative; });
    const double share = static_cast<double>(negative) / static_cast<double>(timeline.size());
    return share >= config.neg_share_threshold ? 1 : 0;
}

double contrast_score(const ContrastInputs& in) {
    const double positive = in.delta * static_cast<double>(in.positive_posts) + static_cast<double>(in.positive_words);
    const double negative = in.delta * static_cast<double>(in.negative_posts) + static_cast<double>(in.negative_words);
    const double denominator = positive + negative;
    if (denominator == 0.0) return 0.0;
    return (positive - negative) / denominator;
}

std::uint8_t feat_contrast(const AnalyzedTimeline& timeline, const FeatureConfig& config) {
    const auto tweets = sorted_by_time(timeline);
    const std::size_t n = tweets.size();

    // prefix sums of pw, nw, PP, NP
    std::vector<std::array<std::int64_t, 4>> prefix(n + 1, {0, 0, 0, 0});
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = tweets[i]->polarity;
        prefix[i + 1] = prefix[i];
        prefix[i + 1][0] += p.positive_words;
        prefix[i + 1][1] += p.negative_words;
        prefix[i + 1][2] += p.verdict == Verdict::positive ? 1 : 0;
        prefix[i + 1][3] += p.verdict == Verdict::negative ? 1 : 0;
    }

    const EpochSeconds span = static_cast<EpochSeconds>(config.contrast_window_hours) * 3600;
    auto ts_greater = [](EpochSeconds v, const AnalyzedTweet* t) { return v < t->created_at_utc; };

    for (std::size_t i = 0; i < n; ++i) {
        const EpochSeconds end = tweets[i]->created_at_utc;
        // window (end - span, end]
        const auto lo = static_cast<std::size_t>(
            std::upper_bound(tweets.begin(), tweets.end(), end - span, ts_greater) - tweets.begin());
        const auto hi = static_cast<std::size_t>(
            std::upper_bound(tweets.begin(), tweets.end(), end, ts_greater) - tweets.begin());
        ContrastInputs in;
        in.positive_words = prefix[hi][0] - prefix[lo][0];
        in.negative_words = prefix[hi][1] - prefix[lo][1];
        in.positive_posts = prefix[hi][2] - prefix[lo][2];
        in.negative_posts = prefix[hi][3] - prefix[lo][3];
        in.delta = config.contrast_delta;
        if (config.require_mixed_sign_window && (in.positive_posts < 1 || in.negative_posts < 1)) continue;
        if (std::fabs(contrast_score(in)) >= config.contrast_threshold) return 1;
    }
    return 0;
}

FeatureVector extract(const AnalyzedTimeline& timeline, const AnxietyLexicon& lexicon, const FeatureConfig& config) {
    FeatureVector fv;
    fv.w() = feat_word(timeline, lexicon);
    fv.t() = feat_timing(timeline, config);
    fv.f() = feat_frequency(timeline, config);
    fv.s() = feat_sentiment(timeline, config);
    fv.c() = feat_contrast(timeline, config);
    return fv;
}

std::map<std::string, FeatureVector> featurize_timelines(const std::map<std::string, UserTimeline>& timelines,
                                                         const PrepResources& resources, const Lexicons& lexicons,
                                                         const FeaturizeOptions& options) {
    options.config.validate();
    if (options.window_days < 1) throw ValidationError("window_days must be >= 1");
    const ObservationWindow window{options.anchor_utc.value_or(corpus_anchor(timelines)), options.window_days};
    std::map<std::string, FeatureVector> out;
    for (const auto& [user, timeline] : timelines) {
        const auto analyzed =
            analyze_timeline(apply_window(timeline, window), resources, lexicons.polarity, options.prep);
        out[user] = extract(analyzed, lexicons.anxiety, options.config);
    }
    return out;
}

void write_features(std::ostream& out, const std::map<std::string, FeatureVector>& rows) {
    out << "user_id,w,t,f,s,c\n";
    for (const auto& [user, fv] : rows) {
        out << user;
        for (auto b : fv.bits) out << ',' << static_cast<int>(b);
        out << '\n';
    }
}

std::map<std::string, FeatureVector> read_features(std::istream& in) {
    std::map<std::string, FeatureVector> rows;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        const std::string row = trim(line);
        if (row.empty()) continue;
        std::vector<std::string> cols;
        std::size_t start = 0;
        for (;;) {
            const auto comma = row.find(',', start);
            cols.push_back(trim(row.substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (n == 1 && !cols.empty() && cols[0] == "user_id") continue;
        const std::string where = "feature file line " + std::to_string(n);
        if (cols.size() != kFeatureCount + 1 || cols[0].empty())
            throw ValidationError(where + ": expected 'user_id,w,t,f,s,c'");
        std::string bits;
        for (std::size_t i = 1; i < cols.size(); ++i) bits += cols[i].size() == 1 ? cols[i][0] : '?';
        FeatureVector fv;
        try {
            fv = FeatureVector::from_string(bits);
        } catch (const ValidationError&) {
            throw ValidationError(where + ": feature values must be 0 or 1");
        }
        if (!rows.emplace(cols[0], fv).second) throw ValidationError(where + ": duplicate user '" + cols[0] + "'");
    }
    return rows;
}

std::map<std::string, FeatureVector> read_features_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open feature file '" + path + "'");
    return read_features(in);
}

}  // namespace adp
