#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace adp {

using EpochSeconds = std::int64_t;

inline constexpr EpochSeconds kSecondsPerDay = 86400;
inline constexpr int kMaxUtcOffsetMinutes = 840;

struct Tweet {
    std::string tweet_id;
    std::string user_id;
    EpochSeconds created_at_utc = 0;
    std::optional<int> utc_offset_minutes;
    std::string text;
    std::int64_t retweet_count = 0;
    std::vector<std::string> hashtags;
    std::vector<std::string> mentions;

    bool operator==(const Tweet&) const = default;
};

/// Tweets of one user, sorted ascending by (created_at_utc, tweet_id).
struct UserTimeline {
    std::string user_id;
    std::vector<Tweet> tweets;

    bool operator==(const UserTimeline&) const = default;
};

struct ObservationWindow {
    EpochSeconds anchor_utc = 0;
    int span_days = 30;
};

struct LocalTime {
    int year = 1970;
    unsigned month = 1;
    unsigned day = 1;
    int hour = 0;
    int minute = 0;
    /// Days since 1970-01-01 of the local calendar date.
    std::int64_t day_number = 0;

    bool operator==(const LocalTime&) const = default;
};

struct SkippedRecord {
    std::size_t line_number = 0;
    std::string reason;
};

struct CorpusLoad {
    std::map<std::string, UserTimeline> timelines;
    std::size_t tweets_loaded = 0;
    std::size_t duplicates_dropped = 0;
    std::vector<SkippedRecord> skipped;
};

/// Parses an RFC 3339 timestamp ("2019-01-05T02:14:00+05:30", "...Z", or
/// without designator, taken as UTC). Fractional seconds are truncated.
/// Returns the UTC epoch and the offset when one was written.
std::pair<EpochSeconds, std::optional<int>> parse_rfc3339(std::string_view text);

/// Formats an epoch as RFC 3339 in the given offset. Without an offset the
/// designator is omitted, so parse_rfc3339 reads it back as "no offset".
std::string format_rfc3339(EpochSeconds utc, std::optional<int> offset_minutes);

/// Parses one JSON line of the ingest format. Throws ParseError for malformed
/// fields and ValidationError for missing or invalid required ones.
Tweet parse_tweet_record(std::string_view line);

/// Serializes a tweet back into the ingest format (one line, no newline).
std::string format_tweet_record(const Tweet& tweet);

/// Reads every record from the stream. Bad records are skipped and reported;
/// duplicate tweet ids keep the first occurrence in stream order.
CorpusLoad load_corpus(std::istream& in);
CorpusLoad load_corpus_file(const std::string& path);

/// Keeps tweets with anchor - span_days*86400 < created_at_utc <= anchor.
UserTimeline apply_window(const UserTimeline& timeline, const ObservationWindow& window);

/// Latest created_at_utc across all timelines (0 when there are no tweets).
EpochSeconds corpus_anchor(const std::map<std::string, UserTimeline>& timelines);

/// Civil time in the poster's offset, or UTC when the offset is unknown.
LocalTime local_civil_time(const Tweet& tweet);
LocalTime civil_time(EpochSeconds utc, std::optional<int> offset_minutes);

/// Label file: `user_id,label` lines with label in {0,1}. A leading
/// `user_id,label` header line is accepted.
std::map<std::string, int> load_labels(std::istream& in);
std::map<std::string, int> load_labels_file(const std::string& path);

}  // namespace adp
