#include "adp/synth.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "adp/error.hpp"
#include "adp/rng.hpp"

namespace adp {

struct PlantedRule::Node {
    enum class Kind { constant, variable, negation, conjunction, disjunction };
    Kind kind = Kind::constant;
    int value = 0;  // constant value or feature index
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;

    bool eval(const FeatureVector& fv) const {
        switch (kind) {
            case Kind::constant:
                return value != 0;
            case Kind::variable:
                return fv[static_cast<std::size_t>(value)] != 0;
            case Kind::negation:
                return !lhs->eval(fv);
            case Kind::conjunction:
                return lhs->eval(fv) && rhs->eval(fv);
            case Kind::disjunction:
                return lhs->eval(fv) || rhs->eval(fv);
        }
        return false;
    }
};

namespace {

using NodePtr = std::shared_ptr<const PlantedRule::Node>;
using Kind = PlantedRule::Node::Kind;

class RuleParser {
public:
    explicit RuleParser(std::string_view text) : text_(text) {}

    NodePtr parse() {
        NodePtr root = disjunction();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return root;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw ValidationError("rule '" + std::string(text_) + "': " + what + " at position " + std::to_string(pos_));
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char ch) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == ch) {
            ++pos_;
            return true;
        }
        return false;
    }

    static NodePtr binary(Kind kind, NodePtr lhs, NodePtr rhs) {
        auto node = std::make_shared<PlantedRule::Node>();
        node->kind = kind;
        node->lhs = std::move(lhs);
        node->rhs = std::move(rhs);
        return node;
    }

    NodePtr disjunction() {
        NodePtr lhs = conjunction();
        while (accept('|')) lhs = binary(Kind::disjunction, lhs, conjunction());
        return lhs;
    }

    NodePtr conjunction() {
        NodePtr lhs = factor();
        while (accept('&')) lhs = binary(Kind::conjunction, lhs, factor());
        return lhs;
    }

    NodePtr factor() {
        if (accept('!')) {
            auto node = std::make_shared<PlantedRule::Node>();
            node->kind = Kind::negation;
            node->lhs = factor();
            return node;
        }
        if (accept('(')) {
            NodePtr inner = disjunction();
            if (!accept(')')) fail("missing ')'");
            return inner;
        }
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        static constexpr std::string_view names = "wtfsc";
        const char ch = text_[pos_];
        auto node = std::make_shared<PlantedRule::Node>();
        if (ch == '0' || ch == '1') {
            node->kind = Kind::constant;
            node->value = ch - '0';
        } else if (const auto idx = names.find(ch); idx != std::string_view::npos) {
            node->kind = Kind::variable;
            node->value = static_cast<int>(idx);
        } else {
            fail("unknown symbol '" + std::string(1, ch) + "'");
        }
        ++pos_;
        return node;
    }
};

constexpr std::string_view kNeutralCandidates[] = {
    "coffee", "train",   "weather", "movie",   "lunch",  "project", "music",    "game",    "book",   "phone",
    "city",   "garden",  "dinner",  "office",  "bus",    "river",   "guitar",   "pizza",   "market", "library",
    "window", "camera",  "bicycle", "kitchen", "laptop", "meeting", "ticket",   "beach",   "tea",    "homework",
    "lecture", "station", "weekend", "bread",  "painting", "podcast", "notebook", "street", "museum", "recipe",
};

constexpr std::string_view kPositiveCandidates[] = {
    "happy",    "great",   "wonderful", "love",     "excellent", "joy",      "amazing",  "lovely",
    "good",     "beautiful", "delighted", "cheerful", "fantastic", "glad",  "grateful", "awesome",
};

constexpr std::string_view kNegativeCandidates[] = {
    "terrible", "horrible", "angry", "gloomy", "miserable", "annoyed", "nasty", "dreadful",
    "grim",     "bitter",   "cruel", "poor",   "wretched",  "furious", "mad",   "hostile",
};

// The single stem a word reduces to, or empty if it yields zero or several.
std::string single_stem(std::string_view word, const PrepResources& resources, const PrepOptions& options) {
    const auto stems = preprocess_text(word, resources, options);
    return stems.size() == 1 ? stems.front() : std::string{};
}

template <typename T>
const T& pick(const std::vector<T>& items, Rng& rng) {
    return items[static_cast<std::size_t>(rng.below(items.size()))];
}

std::int64_t between(Rng& rng, std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
}

// 2019-03-01T00:00:00 as days since the epoch.
constexpr EpochSeconds kBaseDay = 17956;
constexpr int kActiveDays = 25;
constexpr int kDayHourLo = 8;
constexpr int kDayHourHi = 21;  // inclusive

const std::optional<int> kOffsets[] = {std::nullopt, 0, 330, -300, 60, -480, 540, -180};

class UserScript {
public:
    UserScript(const std::string& user, const SynthVocabulary& vocab, Rng& rng)
        : user_(user), vocab_(vocab), rng_(rng) {
        offset_ = kOffsets[rng.below(std::size(kOffsets))];
    }

    void emit(EpochSeconds day, int hour, int minute, std::string text) {
        const EpochSeconds local =
            (kBaseDay + day) * kSecondsPerDay + hour * 3600 + minute * 60 + between(rng_, 0, 59);
        emit_at(local, std::move(text));
    }

    void emit_at(EpochSeconds local, std::string text) {
        Tweet t;
        t.tweet_id = user_ + "-" + std::to_string(tweets_.size() + 1);
        t.user_id = user_;
        t.utc_offset_minutes = offset_;
        t.created_at_utc = local - static_cast<EpochSeconds>(offset_.value_or(0)) * 60;
        t.text = std::move(text);
        t.retweet_count = between(rng_, 0, 5);
        tweets_.push_back(std::move(t));
    }

    std::string words(std::size_t count) {
        std::string out;
        for (std::size_t i = 0; i < count; ++i) {
            if (!out.empty()) out += ' ';
            out += pick(vocab_.neutral, rng_);
        }
        return out;
    }

    // Neutral text with the kinds of noise the cleaner removes.
    std::string neutral_text() {
        std::string text = words(static_cast<std::size_t>(between(rng_, 2, 5)));
        switch (rng_.below(7)) {
            case 0:
                text += " https://t.co/" + std::to_string(rng_.below(100000));
                break;
            case 1:
                text = "@friend" + std::to_string(rng_.below(100)) + " " + text;
                break;
            case 2:
                text += " #" + pick(vocab_.neutral, rng_);
                break;
            case 3:
                text += " " + std::to_string(rng_.below(1000));
                break;
            case 4:
                text += "!!!";
                break;
            case 5:
                text = "I\xE2\x80\x99m at the " + text;
                break;
            default:
                text[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
                break;
        }
        return text;
    }

    std::string with_word(const std::string& word) {
        std::string text = words(static_cast<std::size_t>(between(rng_, 1, 3)));
        return rng_.bernoulli(0.5) ? word + " " + text : text + " " + word + ".";
    }

    std::vector<Tweet> take() { return std::move(tweets_); }

private:
    std::string user_;
    const SynthVocabulary& vocab_;
    Rng& rng_;
    std::optional<int> offset_;
    std::vector<Tweet> tweets_;
};

}  // namespace

PlantedRule PlantedRule::parse(std::string_view expression) {
    PlantedRule rule;
    rule.expression_ = std::string(expression);
    rule.root_ = RuleParser(expression).parse();
    return rule;
}

bool PlantedRule::operator()(const FeatureVector& fv) const { return root_->eval(fv); }

Dataset synth_generate(const PlantedRule& rule, const SynthOptions& options, std::uint64_t seed) {
    if (!(options.noise_rate >= 0.0 && options.noise_rate < 0.5)) throw ValidationError("noise_rate must be in [0, 0.5)");
    for (double p : options.bit_probability)
        if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("bit probabilities must be in [0,1]");
    Rng rng(seed);
    Dataset data;
    data.rows.reserve(options.n_users);
    for (std::size_t i = 0; i < options.n_users; ++i) {
        LabeledRow row;
        char id[32];
        std::snprintf(id, sizeof id, "u%05zu", i + 1);
        row.user_id = id;
        for (std::size_t j = 0; j < kFeatureCount; ++j) row.features.bits[j] = rng.bernoulli(options.bit_probability[j]) ? 1 : 0;
        const bool flip = rng.bernoulli(options.noise_rate);
        row.label = (rule(row.features) != flip) ? 1 : 0;
        data.rows.push_back(std::move(row));
    }
    return data;
}

Dataset enumerate_feature_space(const PlantedRule& rule, std::size_t copies) {
    Dataset data;
    for (std::size_t copy = 0; copy < copies; ++copy) {
        for (const auto& fv : all_feature_vectors()) {
            char id[48];
            std::snprintf(id, sizeof id, "x%02u-%03zu", fv.index(), copy);
            data.rows.push_back({id, fv, rule(fv) ? 1 : 0});
        }
    }
    return data;
}

SynthVocabulary SynthVocabulary::build(const PrepResources& resources, const Lexicons& lexicons,
                                       const PrepOptions& options) {
    SynthVocabulary v;
    std::set<std::string> used_stems;
    auto admit = [&](std::string_view word, auto&& accept, std::vector<std::string>& into) {
        const std::string s = single_stem(word, resources, options);
        if (s.empty() || used_stems.count(s) || !accept(s)) return;
        used_stems.insert(s);
        into.emplace_back(word);
    };
    const auto& anxiety = lexicons.anxiety;
    const auto& polarity = lexicons.polarity;

    for (auto w : kNeutralCandidates)
        admit(w, [&](const std::string& s) { return !anxiety.contains(s) && polarity.find(s) == nullptr; }, v.neutral);
    for (auto w : kPositiveCandidates)
        admit(w, [&](const std::string& s) {
            return !anxiety.contains(s) && polarity.word_polarity(s) == WordPolarity::positive;
        }, v.positive);
    for (auto w : kNegativeCandidates)
        admit(w, [&](const std::string& s) {
            return !anxiety.contains(s) && polarity.word_polarity(s) == WordPolarity::negative;
        }, v.negative);
    for (const auto& [stem, surface] : anxiety.surface)
        admit(surface, [&](const std::string& s) { return anxiety.contains(s) && polarity.find(s) == nullptr; },
              v.anxiety);

    if (v.neutral.size() < 3 || v.positive.empty() || v.negative.empty() || v.anxiety.empty())
        throw ValidationError("resources leave too few usable words for synthesis (neutral " +
                              std::to_string(v.neutral.size()) + ", positive " + std::to_string(v.positive.size()) +
                              ", negative " + std::to_string(v.negative.size()) + ", anxiety " +
                              std::to_string(v.anxiety.size()) + ")");
    return v;
}

std::vector<Tweet> synth_corpus(const Dataset& planted, const SynthVocabulary& vocab, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Tweet> corpus;
    for (const auto& row : planted.rows) {
        const FeatureVector& fv = row.features;
        UserScript script(row.user_id, vocab, rng);

        const std::int64_t fixed = fv.c() + 2 * fv.t() + 3 * fv.f() + fv.w();
        std::int64_t pairs = 0;
        std::int64_t fillers = 0;
        if (fv.s()) {
            // share = pairs / total >= 1/4 needs total <= 4 * pairs
            pairs = between(rng, 4, 6);
            fillers = between(rng, 1, 2 * pairs - fixed);
        } else {
            pairs = between(rng, 0, 2);
            fillers = std::max<std::int64_t>(1, 2 * pairs - fixed + 1) + between(rng, 0, 6);
        }

        // daytime (day, hour) slots, each holding at most two tweets unless it is the burst
        std::vector<std::pair<int, int>> slots;
        for (int d = 0; d < kActiveDays; ++d)
            for (int h = kDayHourLo; h <= kDayHourHi; ++h)
                if (!(d == 0 && h == 9)) slots.emplace_back(d, h);
        rng.shuffle(slots);
        // polarity pairs go after day 1 so they never share a 24 h window with the lone positive post
        std::vector<std::pair<int, int>> late;
        std::vector<std::pair<int, int>> any;
        for (const auto& s : slots) (s.first >= 2 ? late : any).push_back(s);
        auto take_late = [&] {
            auto s = late.back();
            late.pop_back();
            return s;
        };
        auto take_any = [&] {
            if (any.empty()) return take_late();
            auto s = any.back();
            any.pop_back();
            return s;
        };

        if (fv.c()) script.emit(0, 9, static_cast<int>(between(rng, 0, 59)), script.with_word(pick(vocab.positive, rng)));

        for (std::int64_t p = 0; p < pairs; ++p) {
            const auto [d, h] = take_late();
            const EpochSeconds local = (kBaseDay + d) * kSecondsPerDay + h * 3600 + between(rng, 0, 3599);
            // identical timestamps: every contrast window sees both halves or neither
            script.emit_at(local, script.with_word(pick(vocab.positive, rng)));
            script.emit_at(local, script.with_word(pick(vocab.negative, rng)));
        }

        if (fv.w()) {
            const auto [d, h] = take_any();
            script.emit(d, h, static_cast<int>(between(rng, 0, 59)), script.with_word(pick(vocab.anxiety, rng)));
        }

        if (fv.f()) {
            const auto [d, h] = take_any();
            std::vector<int> minutes(60);
            for (int m = 0; m < 60; ++m) minutes[static_cast<std::size_t>(m)] = m;
            rng.shuffle(minutes);
            for (int i = 0; i < 3; ++i) script.emit(d, h, minutes[static_cast<std::size_t>(i)], script.neutral_text());
        }

        if (fv.t()) {
            const int d1 = static_cast<int>(between(rng, 0, kActiveDays - 1));
            const int d2 = static_cast<int>(between(rng, 0, kActiveDays - 1));
            script.emit(d1, static_cast<int>(between(rng, 0, 2)), static_cast<int>(between(rng, 0, 59)),
                        script.neutral_text());
            script.emit(d2, static_cast<int>(between(rng, 3, 5)), static_cast<int>(between(rng, 0, 59)),
                        script.neutral_text());
        }

        for (std::int64_t i = 0; i < fillers; ++i) {
            const auto [d, h] = take_any();
            script.emit(d, h, static_cast<int>(between(rng, 0, 59)), script.neutral_text());
        }

        // stale history outside the 30-day window, deliberately loud
        const auto stale = between(rng, 0, 2);
        for (std::int64_t i = 0; i < stale; ++i) {
            const int d = static_cast<int>(between(rng, -45, -40));
            script.emit(d, 2, static_cast<int>(between(rng, 0, 59)), script.with_word(pick(vocab.anxiety, rng)));
            script.emit(d, 2, static_cast<int>(between(rng, 0, 59)), script.with_word(pick(vocab.negative, rng)));
            script.emit(d, 2, static_cast<int>(between(rng, 0, 59)), script.with_word(pick(vocab.negative, rng)));
        }

        auto tweets = script.take();
        corpus.insert(corpus.end(), std::make_move_iterator(tweets.begin()), std::make_move_iterator(tweets.end()));
    }
    return corpus;
}

}  // namespace adp
