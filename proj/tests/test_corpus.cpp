#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <ctime>
#include <random>
#include <sstream>

#include "adp/corpus.hpp"
#include "adp/error.hpp"

using namespace adp;

namespace {

// Calendar oracle: libc's timegm, independent of the chrono code under test.
EpochSeconds utc_epoch(int y, int mo, int d, int h, int mi, int s) {
    std::tm tm{};
    tm.tm_year = y - 1900;
    tm.tm_mon = mo - 1;
    tm.tm_mday = d;
    tm.tm_hour = h;
    tm.tm_min = mi;
    tm.tm_sec = s;
    return static_cast<EpochSeconds>(timegm(&tm));
}

std::tm gm(EpochSeconds t) {
    const std::time_t tt = static_cast<std::time_t>(t);
    std::tm out{};
    gmtime_r(&tt, &out);
    return out;
}

std::string record(const std::string& id, const std::string& user, const std::string& created,
                   const std::string& text = "hello there") {
    return R"({"tweet_id":")" + id + R"(","user_id":")" + user + R"(","created_at":")" + created +
           R"(","text":")" + text + R"("})";
}

}  // namespace

TEST_CASE("record with offset converts to the UTC epoch") {
    const Tweet t = parse_tweet_record(
        R"({"tweet_id":"1","user_id":"a","created_at":"2019-01-05T02:14:00+05:30","text":"can't sleep again"})");
    CHECK(t.created_at_utc == utc_epoch(2019, 1, 4, 20, 44, 0));
    REQUIRE(t.utc_offset_minutes.has_value());
    CHECK(*t.utc_offset_minutes == 330);
    CHECK(t.text == "can't sleep again");
    CHECK(t.retweet_count == 0);
    CHECK(t.hashtags.empty());
    CHECK(t.mentions.empty());
}

TEST_CASE("timestamps agree with timegm across dates and offsets") {
    std::mt19937 gen(11);
    std::uniform_int_distribution<int> year(1990, 2037), month(1, 12), day(1, 28), hour(0, 23), minute(0, 59),
        offset(-840, 840);
    for (int i = 0; i < 2000; ++i) {
        const int y = year(gen), mo = month(gen), d = day(gen), h = hour(gen), mi = minute(gen), s = minute(gen);
        const int off = offset(gen);
        char buf[64];
        std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d%c%02d:%02d", y, mo, d, h, mi, s,
                      off < 0 ? '-' : '+', std::abs(off) / 60, std::abs(off) % 60);
        const auto [utc, parsed_offset] = parse_rfc3339(buf);
        CHECK(utc == utc_epoch(y, mo, d, h, mi, s) - off * 60);
        CHECK(parsed_offset == off);
        CHECK(parse_rfc3339(format_rfc3339(utc, off)).first == utc);
    }
}

TEST_CASE("timestamp forms") {
    CHECK(parse_rfc3339("2019-01-05T02:14:00Z").second == 0);
    CHECK_FALSE(parse_rfc3339("2019-01-05T02:14:00").second.has_value());
    CHECK(parse_rfc3339("2019-01-05T02:14:00.987Z").first == utc_epoch(2019, 1, 5, 2, 14, 0));
    CHECK_THROWS_AS(parse_rfc3339("2019-02-30T00:00:00Z"), ParseError);
    CHECK_THROWS_AS(parse_rfc3339("2019-01-05 02:14"), ParseError);
    CHECK_THROWS_AS(parse_rfc3339("yesterday"), ParseError);
}

TEST_CASE("record validation") {
    SUBCASE("empty text is rejected") {
        CHECK_THROWS_AS(parse_tweet_record(record("1", "a", "2019-01-05T02:14:00Z", "")), ValidationError);
    }
    SUBCASE("missing required fields name the field") {
        const std::vector<std::pair<std::string, std::string>> fields{
            {"tweet_id", "\"1\""}, {"user_id", "\"a\""}, {"created_at", "\"2019-01-05T02:14:00Z\""}, {"text", "\"hi\""}};
        for (const auto& [field, _] : fields) {
            std::string line = "{";
            for (const auto& [key, value] : fields) {
                if (key == field) continue;
                if (line.size() > 1) line += ',';
                line += "\"" + key + "\":" + value;
            }
            line += "}";
            try {
                parse_tweet_record(line);
                FAIL("expected a validation error for " << field);
            } catch (const ValidationError& e) {
                CHECK(std::string(e.what()).find(field) != std::string::npos);
            }
        }
    }
    SUBCASE("malformed field reports its name") {
        try {
            parse_tweet_record(R"({"tweet_id":"1","user_id":"a","created_at":"2019-01-05T02:14:00Z","text":"hi","retweet_count":"many"})");
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.field() == "retweet_count");
        }
        try {
            parse_tweet_record(R"({"tweet_id":"1","user_id":"a","created_at":"soon","text":"hi"})");
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.field() == "created_at");
        }
        CHECK_THROWS_AS(parse_tweet_record("{not json"), ParseError);
    }
    SUBCASE("offset outside +-14h is rejected") {
        CHECK_THROWS_AS(parse_tweet_record(record("1", "a", "2019-01-05T02:14:00+14:01")), ValidationError);
        CHECK_NOTHROW(parse_tweet_record(record("1", "a", "2019-01-05T02:14:00+14:00")));
    }
    SUBCASE("negative retweets are rejected") {
        CHECK_THROWS_AS(
            parse_tweet_record(R"({"tweet_id":"1","user_id":"a","created_at":"2019-01-05T02:14:00Z","text":"x","retweet_count":-1})"),
            ValidationError);
    }
}

TEST_CASE("record format round trip") {
    Tweet t;
    t.tweet_id = "t9";
    t.user_id = "u\"q";
    t.created_at_utc = utc_epoch(2020, 2, 29, 23, 59, 59);
    t.utc_offset_minutes = -300;
    t.text = "so tired \xF0\x9F\x98\xA2 \"quoted\"";
    t.retweet_count = 3;
    t.hashtags = {"help"};
    t.mentions = {"doc"};
    CHECK(parse_tweet_record(format_tweet_record(t)) == t);
    t.utc_offset_minutes.reset();
    CHECK(parse_tweet_record(format_tweet_record(t)).utc_offset_minutes == std::nullopt);
}

TEST_CASE("load_corpus groups, dedups and skips") {
    std::ostringstream s;
    for (int i = 0; i < 5; ++i) s << record("a" + std::to_string(i), "A", "2019-01-0" + std::to_string(i + 1) + "T10:00:00Z") << '\n';
    for (int i = 0; i < 3; ++i) s << record("b" + std::to_string(i), "B", "2019-01-0" + std::to_string(i + 1) + "T10:00:00Z") << '\n';
    std::istringstream in(s.str());
    const CorpusLoad load = load_corpus(in);
    REQUIRE(load.timelines.size() == 2);
    CHECK(load.timelines.at("A").tweets.size() == 5);
    CHECK(load.timelines.at("B").tweets.size() == 3);

    std::istringstream dup(record("x", "A", "2019-01-01T10:00:00Z", "first") + "\n" +
                           record("x", "A", "2019-01-02T10:00:00Z", "second") + "\n");
    const CorpusLoad d = load_corpus(dup);
    REQUIRE(d.timelines.at("A").tweets.size() == 1);
    CHECK(d.timelines.at("A").tweets[0].text == "first");
    CHECK(d.duplicates_dropped == 1);

    std::ostringstream mixed;
    for (int i = 0; i < 10; ++i)
        mixed << (i == 4 ? std::string("{\"tweet_id\": broken") : record(std::to_string(i), "A", "2019-01-01T10:00:00Z"))
              << '\n';
    std::istringstream min(mixed.str());
    const CorpusLoad m = load_corpus(min);
    CHECK(m.tweets_loaded == 9);
    REQUIRE(m.skipped.size() == 1);
    CHECK(m.skipped[0].line_number == 5);
}

TEST_CASE("load_corpus is insensitive to record order") {
    std::vector<std::string> lines;
    std::mt19937 gen(3);
    for (int i = 0; i < 60; ++i) {
        const int hour = static_cast<int>(gen() % 24);
        char ts[32];
        std::snprintf(ts, sizeof ts, "2019-01-%02dT%02d:00:00Z", 1 + static_cast<int>(gen() % 3), hour);
        // a handful of duplicate ids with identical content and colliding timestamps
        lines.push_back(record("t" + std::to_string(i % 50), "u" + std::to_string(i % 4), ts, "msg " + std::to_string(i % 50)));
    }
    // make duplicates identical so "first occurrence" cannot depend on order
    for (std::size_t i = 50; i < lines.size(); ++i) lines[i] = lines[i - 50];
    auto load = [](const std::vector<std::string>& ls) {
        std::string joined;
        for (const auto& l : ls) joined += l + "\n";
        std::istringstream in(joined);
        return load_corpus(in).timelines;
    };
    const auto reference = load(lines);
    for (int round = 0; round < 20; ++round) {
        std::shuffle(lines.begin(), lines.end(), gen);
        CHECK(load(lines) == reference);
    }
    for (const auto& [user, tl] : reference)
        CHECK(std::is_sorted(tl.tweets.begin(), tl.tweets.end(), [](const Tweet& a, const Tweet& b) {
            return std::tie(a.created_at_utc, a.tweet_id) < std::tie(b.created_at_utc, b.tweet_id);
        }));
}

TEST_CASE("observation window boundaries") {
    const EpochSeconds T = utc_epoch(2019, 3, 31, 0, 0, 0);
    UserTimeline tl{"u", {}};
    auto add = [&](const std::string& id, EpochSeconds at) {
        Tweet t;
        t.tweet_id = id;
        t.user_id = "u";
        t.created_at_utc = at;
        t.text = "x";
        tl.tweets.push_back(t);
    };
    add("old", T - 31 * 86400);
    add("edge", T - 30 * 86400);
    add("inside", T - 29 * 86400);
    add("anchor", T);
    add("future", T + 1);
    const UserTimeline w = apply_window(tl, {T, 30});
    REQUIRE(w.tweets.size() == 2);
    CHECK(w.tweets[0].tweet_id == "inside");
    CHECK(w.tweets[1].tweet_id == "anchor");
    CHECK(apply_window(w, {T, 30}) == w);
    CHECK(apply_window(tl, {T - 40 * 86400, 1}).tweets.empty());
}

TEST_CASE("apply_window matches a naive filter") {
    std::mt19937_64 gen(5);
    for (int trial = 0; trial < 200; ++trial) {
        UserTimeline tl{"u", {}};
        const EpochSeconds base = 1'500'000'000;
        for (int i = 0; i < 40; ++i) {
            Tweet t;
            t.tweet_id = std::to_string(i);
            t.user_id = "u";
            t.created_at_utc = base + static_cast<EpochSeconds>(gen() % (60 * 86400));
            t.text = "x";
            tl.tweets.push_back(t);
        }
        std::sort(tl.tweets.begin(), tl.tweets.end(),
                  [](const Tweet& a, const Tweet& b) { return a.created_at_utc < b.created_at_utc; });
        const ObservationWindow win{base + static_cast<EpochSeconds>(gen() % (60 * 86400)), 1 + static_cast<int>(gen() % 40)};
        std::vector<Tweet> expected;
        for (const auto& t : tl.tweets)
            if (win.anchor_utc - static_cast<EpochSeconds>(win.span_days) * 86400 < t.created_at_utc &&
                t.created_at_utc <= win.anchor_utc)
                expected.push_back(t);
        CHECK(apply_window(tl, win).tweets == expected);
    }
}

TEST_CASE("local civil time") {
    const EpochSeconds midnight = utc_epoch(2019, 1, 5, 0, 0, 0);
    CHECK(civil_time(midnight, 330).hour == 5);
    CHECK(civil_time(midnight, 330).minute == 30);
    const EpochSeconds three = utc_epoch(2019, 1, 5, 3, 0, 0);
    CHECK(civil_time(three, std::nullopt).hour == 3);
    const LocalTime west = civil_time(three, -300);
    CHECK(west.hour == 22);
    CHECK(west.day == 4);
    CHECK(west.day_number == civil_time(three, std::nullopt).day_number - 1);

    std::mt19937_64 gen(9);
    for (int i = 0; i < 5000; ++i) {
        const EpochSeconds t = 1 + static_cast<EpochSeconds>(gen() % 2'000'000'000);
        const int off = static_cast<int>(gen() % 1681) - 840;
        const std::tm ref = gm(t + off * 60);
        const LocalTime lt = civil_time(t, off);
        CHECK(lt.year == ref.tm_year + 1900);
        CHECK(lt.month == static_cast<unsigned>(ref.tm_mon + 1));
        CHECK(lt.day == static_cast<unsigned>(ref.tm_mday));
        CHECK(lt.hour == ref.tm_hour);
        CHECK(lt.minute == ref.tm_min);
        CHECK(lt.day_number == (t + off * 60 - ((t + off * 60) % 86400 + 86400) % 86400) / 86400);
    }
}

TEST_CASE("label files") {
    std::istringstream good("user_id,label\nu1,1\nu2,0\n");
    const auto labels = load_labels(good);
    CHECK(labels.size() == 2);
    CHECK(labels.at("u1") == 1);
    std::istringstream bad("u1,2\n");
    CHECK_THROWS_AS(load_labels(bad), ValidationError);
    std::istringstream dup("u1,1\nu1,0\n");
    CHECK_THROWS_AS(load_labels(dup), ValidationError);
}
