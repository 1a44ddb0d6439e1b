#include "adp/textprep.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>

#include "adp/error.hpp"
#include "adp/porter.hpp"

namespace adp {

namespace {

bool is_space(char ch) {
    return ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r' || ch == '\f' || ch == '\v';
}

bool is_ascii_alnum(char ch) {
    return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9');
}

bool is_ascii_punct(char ch) {
    const auto u = static_cast<unsigned char>(ch);
    return u >= 0x21 && u <= 0x7E && !is_ascii_alnum(ch);
}

bool is_ascii(char ch) { return static_cast<unsigned char>(ch) < 0x80; }

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

bool starts_with_ci(std::string_view s, std::string_view prefix) {
    if (s.size() < prefix.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        char c = s[i];
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        if (c != prefix[i]) return false;
    }
    return true;
}

std::vector<std::string_view> split_whitespace(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_space(text[i])) ++i;
        const std::size_t start = i;
        while (i < text.size() && !is_space(text[i])) ++i;
        if (i > start) out.push_back(text.substr(start, i - start));
    }
    return out;
}

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& p : parts) {
        if (p.empty()) continue;
        if (!out.empty()) out += ' ';
        out += p;
    }
    return out;
}

std::string trim_copy(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

struct Codepoint {
    char32_t value;
    std::size_t length;
};

// Malformed sequences decode as U+FFFD of length 1.
Codepoint decode_utf8(std::string_view s, std::size_t pos) {
    const auto b0 = static_cast<unsigned char>(s[pos]);
    if (b0 < 0x80) return {b0, 1};
    std::size_t len = 0;
    char32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        return {0xFFFD, 1};
    }
    if (pos + len > s.size()) return {0xFFFD, 1};
    for (std::size_t i = 1; i < len; ++i) {
        const auto b = static_cast<unsigned char>(s[pos + i]);
        if ((b & 0xC0) != 0x80) return {0xFFFD, 1};
        cp = (cp << 6) | (b & 0x3F);
    }
    return {cp, len};
}

bool is_typographic_apostrophe(char32_t cp) { return cp == 0x2019 || cp == 0x2018 || cp == 0x02BC; }

// Replaces punctuation with spaces, keeping apostrophes flanked by alphanumerics.
std::string strip_punctuation(std::string_view token) {
    std::string out(token);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const char ch = token[i];
        if (!is_ascii_punct(ch)) continue;
        const bool inner_apostrophe =
            ch == '\'' && i > 0 && i + 1 < token.size() && is_ascii_alnum(token[i - 1]) && is_ascii_alnum(token[i + 1]);
        if (!inner_apostrophe) out[i] = ' ';
    }
    return out;
}

std::string slang_or_self(std::string_view run, const PrepResources& resources) {
    if (const std::string* phrase = resources.slang(run)) return *phrase;
    return std::string(run);
}

struct Contraction {
    std::string_view suffix;
    std::string_view clitic;  // empty: clitic dropped
};

constexpr Contraction kContractions[] = {
    {"n't", "not"}, {"'m", "am"}, {"'re", "are"}, {"'ve", "have"}, {"'ll", "will"}, {"'d", "would"}, {"'s", ""},
};

void emit_word(std::string word, std::vector<std::string>& out) {
    word.erase(std::remove(word.begin(), word.end(), '\''), word.end());
    const bool has_content =
        std::any_of(word.begin(), word.end(), [](char c) { return is_ascii_alnum(c) || !is_ascii(c); });
    if (has_content) out.push_back(std::move(word));
}

void split_contraction(std::string token, std::vector<std::string>& out) {
    if (token == "can't" || token == "cannot") {
        out.emplace_back("can");
        out.emplace_back("not");
        return;
    }
    if (token == "won't") {
        out.emplace_back("will");
        out.emplace_back("not");
        return;
    }
    if (token == "shan't") {
        out.emplace_back("shall");
        out.emplace_back("not");
        return;
    }
    if (token == "ain't") {
        out.emplace_back("am");
        out.emplace_back("not");
        return;
    }
    for (const auto& c : kContractions) {
        if (token.size() > c.suffix.size() && token.ends_with(c.suffix)) {
            emit_word(token.substr(0, token.size() - c.suffix.size()), out);
            if (!c.clitic.empty()) out.emplace_back(c.clitic);
            return;
        }
    }
    emit_word(std::move(token), out);
}

}  // namespace

std::string to_lower_ascii(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

std::string encode_utf8(char32_t cp) {
    std::string out;
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
    return out;
}

void PrepResources::add_stopword(std::string_view word) {
    const std::string w = to_lower_ascii(trim_copy(word));
    if (!w.empty()) stopwords_.insert(w);
}

void PrepResources::add_slang(std::string_view key, std::string_view phrase) {
    const std::string k = to_lower_ascii(trim_copy(key));
    if (k.empty()) throw ValidationError("slang entry with empty key");
    slang_[k] = trim_copy(phrase);
}

void PrepResources::add_emoji(std::string_view utf8_sequence, std::string_view phrase) {
    if (utf8_sequence.empty()) throw ValidationError("emoji entry with empty codepoint sequence");
    std::size_t count = 0;
    for (std::size_t pos = 0; pos < utf8_sequence.size(); ++count) pos += decode_utf8(utf8_sequence, pos).length;
    max_emoji_codepoints_ = std::max(max_emoji_codepoints_, count);
    emoji_[std::string(utf8_sequence)] = trim_copy(phrase);
}

bool PrepResources::is_stopword(std::string_view token) const {
    return stopwords_.find(std::string(token)) != stopwords_.end();
}

const std::string* PrepResources::slang(std::string_view token) const {
    const auto it = slang_.find(to_lower_ascii(token));
    return it == slang_.end() ? nullptr : &it->second;
}

const std::string* PrepResources::emoji(std::string_view utf8_sequence) const {
    const auto it = emoji_.find(std::string(utf8_sequence));
    return it == emoji_.end() ? nullptr : &it->second;
}

void load_stopwords(std::istream& in, PrepResources& resources) {
    std::string line;
    while (std::getline(in, line)) {
        const std::string w = trim_copy(line);
        if (w.empty() || w.front() == '#') continue;
        resources.add_stopword(w);
    }
}

void load_slang(std::istream& in, PrepResources& resources) {
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (trim_copy(line).empty() || line.front() == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw ValidationError("slang map line " + std::to_string(n) + ": expected 'key<TAB>phrase'");
        resources.add_slang(line.substr(0, tab), line.substr(tab + 1));
    }
}

void load_emoji(std::istream& in, PrepResources& resources) {
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (trim_copy(line).empty() || line.front() == '#') continue;
        const auto tab = line.find('\t');
        const std::string where = "emoji map line " + std::to_string(n);
        if (tab == std::string::npos) throw ValidationError(where + ": expected 'codepoints<TAB>phrase'");
        std::string hex = line.substr(0, tab);
        std::replace_if(hex.begin(), hex.end(), [](char c) { return c == '-' || c == '_'; }, ' ');
        std::string sequence;
        for (auto part : split_whitespace(hex)) {
            if (starts_with_ci(part, "u+")) part.remove_prefix(2);
            std::uint32_t cp = 0;
            const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), cp, 16);
            if (ec != std::errc{} || ptr != part.data() + part.size() || cp == 0 || cp > 0x10FFFF)
                throw ValidationError(where + ": bad codepoint '" + std::string(part) + "'");
            sequence += encode_utf8(static_cast<char32_t>(cp));
        }
        resources.add_emoji(sequence, line.substr(tab + 1));
    }
}

PrepResources load_prep_resources(const std::string& stopwords_path, const std::string& slang_path,
                                  const std::string& emoji_path) {
    PrepResources resources;
    auto open = [](const std::string& path, const char* what) {
        std::ifstream in(path);
        if (!in) throw IoError(std::string("cannot open ") + what + " file '" + path + "'");
        return in;
    };
    if (!stopwords_path.empty()) {
        auto in = open(stopwords_path, "stopword");
        load_stopwords(in, resources);
    }
    if (!slang_path.empty()) {
        auto in = open(slang_path, "slang map");
        load_slang(in, resources);
    }
    if (!emoji_path.empty()) {
        auto in = open(emoji_path, "emoji map");
        load_emoji(in, resources);
    }
    return resources;
}

std::string clean(std::string_view text, const PrepOptions& options) {
    std::vector<std::string> kept;
    for (std::string_view token : split_whitespace(text)) {
        // look past opening brackets/quotes when classifying the token
        std::string_view core = token;
        while (!core.empty() && (core.front() == '(' || core.front() == '[' || core.front() == '{' ||
                                 core.front() == '"' || core.front() == '\'' || core.front() == '<'))
            core.remove_prefix(1);

        if (starts_with_ci(core, "http://") || starts_with_ci(core, "https://") || starts_with_ci(core, "www.") ||
            starts_with_ci(core, "t.co/") || core.find("://") != std::string_view::npos)
            continue;
        if (!core.empty() && core.front() == '@') continue;
        if (!core.empty() && core.front() == '#') {
            if (!options.keep_hashtag_words) continue;
            core.remove_prefix(1);
        }
        const std::string stripped = strip_punctuation(core);
        for (std::string_view part : split_whitespace(stripped)) {
            if (all_digits(part)) continue;
            kept.emplace_back(part);
        }
    }
    return join(kept);
}

std::string expand(std::string_view text, const PrepResources& resources) {
    std::vector<std::string> pieces;
    const std::size_t max_len = resources.max_emoji_codepoints();

    for (std::string_view token : split_whitespace(text)) {
        std::string run;
        auto flush = [&] {
            if (!run.empty()) pieces.push_back(slang_or_self(run, resources));
            run.clear();
        };
        std::size_t pos = 0;
        while (pos < token.size()) {
            const Codepoint cp = decode_utf8(token, pos);
            if (cp.value < 0x80) {
                run += token[pos];
                pos += 1;
                continue;
            }
            // longest emoji sequence starting here
            std::size_t matched_bytes = 0;
            const std::string* phrase = nullptr;
            std::size_t end = pos;
            std::vector<std::size_t> ends;
            for (std::size_t n = 0; n < max_len && end < token.size(); ++n) {
                end += decode_utf8(token, end).length;
                ends.push_back(end);
            }
            for (auto it = ends.rbegin(); it != ends.rend(); ++it) {
                if (const std::string* p = resources.emoji(token.substr(pos, *it - pos))) {
                    phrase = p;
                    matched_bytes = *it - pos;
                    break;
                }
            }
            if (phrase) {
                flush();
                pieces.push_back(*phrase);
                pos += matched_bytes;
            } else {
                if (is_typographic_apostrophe(cp.value)) run += '\'';
                pos += cp.length;
            }
        }
        flush();
    }
    return join(pieces);
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> out;
    for (std::string_view raw : split_whitespace(text)) {
        std::string_view core = raw;
        while (!core.empty() && is_ascii_punct(core.front())) core.remove_prefix(1);
        while (!core.empty() && is_ascii_punct(core.back())) core.remove_suffix(1);
        if (core.empty()) continue;
        split_contraction(to_lower_ascii(core), out);
    }
    return out;
}

std::vector<std::string> drop_stopwords(const std::vector<std::string>& tokens,
                                        const std::unordered_set<std::string>& stoplist) {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens)
        if (stoplist.find(t) == stoplist.end()) out.push_back(t);
    return out;
}

std::vector<std::string> drop_stopwords(const std::vector<std::string>& tokens, const PrepResources& resources) {
    return drop_stopwords(tokens, resources.stopwords());
}

std::string stem(std::string_view token) { return porter_stem(token); }

namespace {

std::vector<std::string> run_pipeline(std::string_view text, const PrepResources& resources,
                                      const PrepOptions& options, std::size_t& raw_tokens) {
    const auto tokens = tokenize(expand(clean(text, options), resources));
    raw_tokens = tokens.size();
    std::vector<std::string> stems;
    for (const auto& t : drop_stopwords(tokens, resources)) {
        std::string s = stem(t);
        if (!s.empty()) stems.push_back(std::move(s));
    }
    return stems;
}

}  // namespace

std::vector<std::string> preprocess_text(std::string_view text, const PrepResources& resources,
                                         const PrepOptions& options) {
    std::size_t ignored = 0;
    return run_pipeline(text, resources, options, ignored);
}

ProcessedTweet preprocess(const Tweet& tweet, const PrepResources& resources, const PrepOptions& options) {
    ProcessedTweet out;
    out.tweet_id = tweet.tweet_id;
    out.stems = run_pipeline(tweet.text, resources, options, out.raw_token_count);
    return out;
}

}  // namespace adp
