#pragma once

// Brute-force restatement of the five feature rules, written without the
// library's helpers: gmtime for calendar fields, quadratic window scans and
// its own polarity table.

#include <cstdint>
#include <ctime>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "adp/features.hpp"

namespace adp::test {

struct OracleTweet {
    std::int64_t utc = 0;
    std::optional<int> offset;
    std::vector<std::string> stems;
};

struct OracleLexicon {
    std::set<std::string> anxiety;
    std::map<std::string, std::pair<double, double>> polarity;  // stem -> (pos, neg)
};

inline std::tm oracle_local(const OracleTweet& t) {
    const std::time_t local = static_cast<std::time_t>(t.utc + 60LL * t.offset.value_or(0));
    std::tm out{};
    gmtime_r(&local, &out);
    return out;
}

struct OraclePolarity {
    double pos = 0, neg = 0;
    int pos_words = 0, neg_words = 0;
    int verdict = 0;  // +1 positive, -1 negative
};

inline OraclePolarity oracle_polarity(const OracleTweet& t, const OracleLexicon& lex) {
    OraclePolarity p;
    for (const auto& s : t.stems) {
        const auto it = lex.polarity.find(s);
        if (it == lex.polarity.end()) continue;
        p.pos += it->second.first;
        p.neg += it->second.second;
        if (it->second.first > it->second.second) ++p.pos_words;
        if (it->second.second > it->second.first) ++p.neg_words;
    }
    p.verdict = p.neg > p.pos ? -1 : (p.pos > p.neg ? 1 : 0);
    return p;
}

inline FeatureVector oracle_extract(const std::vector<OracleTweet>& tweets, const OracleLexicon& lex,
                                    const FeatureConfig& cfg) {
    FeatureVector fv;
    for (const auto& t : tweets)
        for (const auto& s : t.stems)
            if (lex.anxiety.count(s)) fv.bits[0] = 1;

    int odd = 0;
    std::map<std::string, int> buckets;
    for (const auto& t : tweets) {
        const std::tm lt = oracle_local(t);
        if (lt.tm_hour >= cfg.odd_hour_lo && lt.tm_hour < cfg.odd_hour_hi) ++odd;
        char key[32];
        std::snprintf(key, sizeof key, "%04d-%02d-%02d %02d", lt.tm_year + 1900, lt.tm_mon + 1, lt.tm_mday, lt.tm_hour);
        ++buckets[key];
    }
    fv.bits[1] = odd >= cfg.min_odd_posts ? 1 : 0;
    for (const auto& [_, n] : buckets)
        if (n >= cfg.min_hourly_posts) fv.bits[2] = 1;

    int negative = 0;
    for (const auto& t : tweets) negative += oracle_polarity(t, lex).verdict < 0 ? 1 : 0;
    fv.bits[3] = !tweets.empty() && static_cast<double>(negative) / static_cast<double>(tweets.size()) >= cfg.neg_share_threshold;

    const std::int64_t span = 3600LL * cfg.contrast_window_hours;
    for (const auto& end : tweets) {
        double pw = 0, nw = 0, pp = 0, np = 0;
        for (const auto& t : tweets) {
            if (!(t.utc > end.utc - span && t.utc <= end.utc)) continue;
            const OraclePolarity p = oracle_polarity(t, lex);
            pw += p.pos_words;
            nw += p.neg_words;
            pp += p.verdict > 0 ? 1 : 0;
            np += p.verdict < 0 ? 1 : 0;
        }
        if (cfg.require_mixed_sign_window && (pp < 1 || np < 1)) continue;
        const double plus = cfg.contrast_delta * pp + pw;
        const double minus = cfg.contrast_delta * np + nw;
        const double c = plus + minus == 0 ? 0.0 : (plus - minus) / (plus + minus);
        if ((c < 0 ? -c : c) >= cfg.contrast_threshold) fv.bits[4] = 1;
    }
    return fv;
}

/// Library-side twin of an oracle timeline.
inline AnalyzedTimeline analyzed_from(const std::vector<OracleTweet>& tweets, const PolarityLexicon& polarity) {
    AnalyzedTimeline out;
    for (std::size_t i = 0; i < tweets.size(); ++i) {
        AnalyzedTweet a;
        a.tweet_id = "t" + std::to_string(i);
        a.created_at_utc = tweets[i].utc;
        a.utc_offset_minutes = tweets[i].offset;
        a.stems = tweets[i].stems;
        a.polarity = score_tweet(a.stems, polarity);
        out.push_back(std::move(a));
    }
    return out;
}

/// Small random-timeline generator shared by the unit and acceptance suites.
class TimelineGenerator {
public:
    TimelineGenerator() {
        lexicon_.anxiety = {"panic", "insomnia", "lone"};
        lexicon_.polarity = {{"happi", {0.875, 0.0}}, {"great", {0.75, 0.125}}, {"sad", {0.0, 0.625}},
                             {"terribl", {0.0, 0.75}}, {"okai", {0.25, 0.25}},  {"panic", {0.125, 0.5}},
                             {"calm", {0.5, 0.125}},   {"bitter", {0.0, 0.5}}};
        for (const auto& [s, score] : lexicon_.polarity) polarity_.add(s, {score.first, score.second});
        for (const auto& s : lexicon_.anxiety) anxiety_.stems.insert(s);
        vocabulary_ = {"happi", "great", "sad", "terribl", "okai", "panic", "calm", "bitter",
                       "insomnia", "lone", "coffe", "train", "book", "music"};
    }

    std::vector<OracleTweet> timeline(std::mt19937_64& gen) const {
        static const std::optional<int> offsets[] = {std::nullopt, 0, 330, -300, 600, -720, 45};
        const std::optional<int> offset = offsets[gen() % std::size(offsets)];
        const std::int64_t base = 1'550'000'000 + static_cast<std::int64_t>(gen() % 86400);
        const int n = static_cast<int>(gen() % 51);
        const std::int64_t spread = 3600LL * (1 + static_cast<std::int64_t>(gen() % 96));
        std::vector<OracleTweet> out;
        for (int i = 0; i < n; ++i) {
            OracleTweet t;
            t.utc = base + static_cast<std::int64_t>(gen() % static_cast<std::uint64_t>(spread));
            if (!out.empty() && gen() % 5 == 0) t.utc = out.back().utc + static_cast<std::int64_t>(gen() % 900);
            t.offset = gen() % 10 == 0 ? offsets[gen() % std::size(offsets)] : offset;
            for (int k = static_cast<int>(gen() % 5); k > 0; --k) t.stems.push_back(vocabulary_[gen() % vocabulary_.size()]);
            out.push_back(std::move(t));
        }
        return out;
    }

    FeatureConfig config(std::mt19937_64& gen) const {
        FeatureConfig cfg;
        if (gen() % 3 == 0) {
            cfg.odd_hour_lo = static_cast<int>(gen() % 12);
            cfg.odd_hour_hi = cfg.odd_hour_lo + 1 + static_cast<int>(gen() % (24 - cfg.odd_hour_lo));
            cfg.min_odd_posts = 1 + static_cast<int>(gen() % 4);
            cfg.min_hourly_posts = 1 + static_cast<int>(gen() % 5);
            cfg.neg_share_threshold = 0.05 * static_cast<double>(1 + gen() % 20);
            cfg.contrast_threshold = 0.05 * static_cast<double>(1 + gen() % 20);
            cfg.contrast_window_hours = 1 + static_cast<int>(gen() % 48);
            cfg.require_mixed_sign_window = gen() % 2 == 0;
        }
        return cfg;
    }

    const OracleLexicon& oracle_lexicon() const { return lexicon_; }
    const PolarityLexicon& polarity() const { return polarity_; }
    const AnxietyLexicon& anxiety() const { return anxiety_; }

private:
    OracleLexicon lexicon_;
    PolarityLexicon polarity_;
    AnxietyLexicon anxiety_;
    std::vector<std::string> vocabulary_;
};

}  // namespace adp::test
