#include "adp/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <istream>
#include <unordered_set>

#include <json.hpp>

#include "adp/error.hpp"

namespace adp {

namespace {

using nlohmann::json;

int parse_digits(std::string_view text, std::size_t pos, std::size_t count) {
    if (pos + count > text.size()) throw ParseError("created_at", "truncated timestamp");
    int value = 0;
    for (std::size_t i = pos; i < pos + count; ++i) {
        const char ch = text[i];
        if (ch < '0' || ch > '9') throw ParseError("created_at", "expected digit in '" + std::string(text) + "'");
        value = value * 10 + (ch - '0');
    }
    return value;
}

void expect_char(std::string_view text, std::size_t pos, char a, char b = '\0') {
    if (pos >= text.size() || (text[pos] != a && (b == '\0' || text[pos] != b)))
        throw ParseError("created_at", "malformed timestamp '" + std::string(text) + "'");
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

const json* find_field(const json& obj, const char* name) {
    const auto it = obj.find(name);
    if (it == obj.end() || it->is_null()) return nullptr;
    return &*it;
}

std::string required_string(const json& obj, const char* name) {
    const json* value = find_field(obj, name);
    if (!value) throw ValidationError(std::string("missing required field '") + name + "'");
    if (!value->is_string()) throw ParseError(name, "expected a string");
    return value->get<std::string>();
}

std::vector<std::string> optional_string_list(const json& obj, const char* name) {
    const json* value = find_field(obj, name);
    if (!value) return {};
    if (!value->is_array()) throw ParseError(name, "expected an array of strings");
    std::vector<std::string> out;
    for (const auto& item : *value) {
        if (!item.is_string()) throw ParseError(name, "expected an array of strings");
        out.push_back(item.get<std::string>());
    }
    return out;
}

bool tweet_order(const Tweet& a, const Tweet& b) {
    if (a.created_at_utc != b.created_at_utc) return a.created_at_utc < b.created_at_utc;
    return a.tweet_id < b.tweet_id;
}

}  // namespace

std::pair<EpochSeconds, std::optional<int>> parse_rfc3339(std::string_view raw) {
    using namespace std::chrono;
    const std::string owned = trim(raw);
    const std::string_view text = owned;

    const int y = parse_digits(text, 0, 4);
    expect_char(text, 4, '-');
    const int mo = parse_digits(text, 5, 2);
    expect_char(text, 7, '-');
    const int d = parse_digits(text, 8, 2);
    expect_char(text, 10, 'T', 't');
    const int hh = parse_digits(text, 11, 2);
    expect_char(text, 13, ':');
    const int mm = parse_digits(text, 14, 2);
    expect_char(text, 16, ':');
    const int ss = parse_digits(text, 17, 2);

    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) throw ParseError("created_at", "invalid calendar date in '" + owned + "'");
    if (hh > 23 || mm > 59 || ss > 60) throw ParseError("created_at", "invalid time of day in '" + owned + "'");

    std::size_t pos = 19;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        const std::size_t start = pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
        if (pos == start) throw ParseError("created_at", "empty fractional seconds in '" + owned + "'");
    }

    std::optional<int> offset;
    if (pos < text.size()) {
        const char designator = text[pos];
        if (designator == 'Z' || designator == 'z') {
            offset = 0;
            ++pos;
        } else if (designator == '+' || designator == '-') {
            const int oh = parse_digits(text, pos + 1, 2);
            expect_char(text, pos + 3, ':');
            const int om = parse_digits(text, pos + 4, 2);
            if (om > 59) throw ParseError("created_at", "invalid offset minutes in '" + owned + "'");
            offset = (designator == '-' ? -1 : 1) * (oh * 60 + om);
            pos += 6;
        } else {
            throw ParseError("created_at", "unexpected offset designator in '" + owned + "'");
        }
    }
    if (pos != text.size()) throw ParseError("created_at", "trailing characters in '" + owned + "'");

    const auto days_since_epoch = sys_days{ymd}.time_since_epoch().count();
    const EpochSeconds local = static_cast<EpochSeconds>(days_since_epoch) * kSecondsPerDay + hh * 3600 + mm * 60 + ss;
    return {local - static_cast<EpochSeconds>(offset.value_or(0)) * 60, offset};
}

std::string format_rfc3339(EpochSeconds utc, std::optional<int> offset_minutes) {
    const LocalTime t = civil_time(utc, offset_minutes);
    const EpochSeconds local = utc + static_cast<EpochSeconds>(offset_minutes.value_or(0)) * 60;
    const auto seconds = static_cast<int>(((local % 60) + 60) % 60);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d", t.year, t.month, t.day, t.hour, t.minute, seconds);
    std::string out = buf;
    if (!offset_minutes) return out;  // no designator: read back as UTC without an offset
    const int off = *offset_minutes;
    const int mag = off < 0 ? -off : off;
    std::snprintf(buf, sizeof buf, "%c%02d:%02d", off < 0 ? '-' : '+', mag / 60, mag % 60);
    return out + buf;
}

Tweet parse_tweet_record(std::string_view line) {
    json obj;
    try {
        obj = json::parse(line);
    } catch (const json::parse_error& e) {
        throw ParseError("record", e.what());
    }
    if (!obj.is_object()) throw ParseError("record", "expected a JSON object");

    Tweet tweet;
    tweet.tweet_id = required_string(obj, "tweet_id");
    tweet.user_id = required_string(obj, "user_id");
    const std::string created = required_string(obj, "created_at");
    tweet.text = required_string(obj, "text");

    if (tweet.tweet_id.empty()) throw ValidationError("field 'tweet_id' is empty");
    if (tweet.user_id.empty()) throw ValidationError("field 'user_id' is empty");
    if (trim(tweet.text).empty()) throw ValidationError("field 'text' is empty");

    const auto [utc, offset] = parse_rfc3339(created);
    if (utc <= 0) throw ValidationError("field 'created_at' must be after the epoch");
    if (offset && (*offset < -kMaxUtcOffsetMinutes || *offset > kMaxUtcOffsetMinutes))
        throw ValidationError("field 'created_at' has an offset outside [-14:00, +14:00]");
    tweet.created_at_utc = utc;
    tweet.utc_offset_minutes = offset;

    if (const json* rt = find_field(obj, "retweet_count")) {
        if (!rt->is_number_integer()) throw ParseError("retweet_count", "expected an integer");
        tweet.retweet_count = rt->get<std::int64_t>();
        if (tweet.retweet_count < 0) throw ValidationError("field 'retweet_count' is negative");
    }
    tweet.hashtags = optional_string_list(obj, "hashtags");
    tweet.mentions = optional_string_list(obj, "mentions");
    return tweet;
}

std::string format_tweet_record(const Tweet& tweet) {
    json obj;
    obj["tweet_id"] = tweet.tweet_id;
    obj["user_id"] = tweet.user_id;
    obj["created_at"] = format_rfc3339(tweet.created_at_utc, tweet.utc_offset_minutes);
    obj["text"] = tweet.text;
    obj["retweet_count"] = tweet.retweet_count;
    obj["hashtags"] = tweet.hashtags;
    obj["mentions"] = tweet.mentions;
    return obj.dump();
}

CorpusLoad load_corpus(std::istream& in) {
    if (!in) throw IoError("corpus stream is not readable");
    CorpusLoad result;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (trim(line).empty()) continue;
        try {
            Tweet tweet = parse_tweet_record(line);
            if (!seen.insert(tweet.tweet_id).second) {
                ++result.duplicates_dropped;
                continue;
            }
            auto& timeline = result.timelines[tweet.user_id];
            timeline.user_id = tweet.user_id;
            timeline.tweets.push_back(std::move(tweet));
            ++result.tweets_loaded;
        } catch (const Error& e) {
            result.skipped.push_back({line_number, e.what()});
        }
    }
    if (in.bad()) throw IoError("read failure in corpus stream at line " + std::to_string(line_number));
    for (auto& [user, timeline] : result.timelines)
        std::sort(timeline.tweets.begin(), timeline.tweets.end(), tweet_order);
    return result;
}

CorpusLoad load_corpus_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open corpus file '" + path + "'");
    return load_corpus(in);
}

UserTimeline apply_window(const UserTimeline& timeline, const ObservationWindow& window) {
    const EpochSeconds lower = window.anchor_utc - static_cast<EpochSeconds>(window.span_days) * kSecondsPerDay;
    UserTimeline out{timeline.user_id, {}};
    for (const Tweet& t : timeline.tweets)
        if (t.created_at_utc > lower && t.created_at_utc <= window.anchor_utc) out.tweets.push_back(t);
    return out;
}

EpochSeconds corpus_anchor(const std::map<std::string, UserTimeline>& timelines) {
    EpochSeconds anchor = 0;
    for (const auto& [user, timeline] : timelines)
        for (const Tweet& t : timeline.tweets) anchor = std::max(anchor, t.created_at_utc);
    return anchor;
}

LocalTime civil_time(EpochSeconds utc, std::optional<int> offset_minutes) {
    using namespace std::chrono;
    const EpochSeconds local = utc + static_cast<EpochSeconds>(offset_minutes.value_or(0)) * 60;
    const sys_seconds tp{seconds{local}};
    const sys_days date = floor<days>(tp);
    const year_month_day ymd{date};
    const auto since_midnight = duration_cast<minutes>(tp - date).count();

    LocalTime out;
    out.year = static_cast<int>(ymd.year());
    out.month = static_cast<unsigned>(ymd.month());
    out.day = static_cast<unsigned>(ymd.day());
    out.hour = static_cast<int>(since_midnight / 60);
    out.minute = static_cast<int>(since_midnight % 60);
    out.day_number = date.time_since_epoch().count();
    return out;
}

LocalTime local_civil_time(const Tweet& tweet) {
    return civil_time(tweet.created_at_utc, tweet.utc_offset_minutes);
}

std::map<std::string, int> load_labels(std::istream& in) {
    if (!in) throw IoError("label stream is not readable");
    std::map<std::string, int> labels;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        const std::string row = trim(line);
        if (row.empty()) continue;
        const auto comma = row.find(',');
        if (comma == std::string::npos)
            throw ValidationError("label file line " + std::to_string(line_number) + ": expected 'user_id,label'");
        const std::string user = trim(row.substr(0, comma));
        const std::string label = trim(row.substr(comma + 1));
        if (line_number == 1 && user == "user_id") continue;
        if (user.empty() || (label != "0" && label != "1"))
            throw ValidationError("label file line " + std::to_string(line_number) + ": label must be 0 or 1");
        if (!labels.emplace(user, label == "1" ? 1 : 0).second)
            throw ValidationError("label file line " + std::to_string(line_number) + ": duplicate user '" + user + "'");
    }
    return labels;
}

std::map<std::string, int> load_labels_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open label file '" + path + "'");
    return load_labels(in);
}

}  // namespace adp
