#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "adp/corpus.hpp"

namespace adp {

struct ProcessedTweet {
    std::string tweet_id;
    std::vector<std::string> stems;
    std::size_t raw_token_count = 0;

    bool operator==(const ProcessedTweet&) const = default;
};

/// Stopword list, slang dictionary and emoji names. Immutable once loaded.
class PrepResources {
public:
    PrepResources() = default;

    void add_stopword(std::string_view word);
    void add_slang(std::string_view key, std::string_view phrase);
    /// `utf8_sequence` is the emoji as raw UTF-8 bytes.
    void add_emoji(std::string_view utf8_sequence, std::string_view phrase);

    bool is_stopword(std::string_view token) const;
    /// Case-insensitive slang lookup; nullptr when absent.
    const std::string* slang(std::string_view token) const;
    const std::string* emoji(std::string_view utf8_sequence) const;

    const std::unordered_set<std::string>& stopwords() const noexcept { return stopwords_; }
    std::size_t max_emoji_codepoints() const noexcept { return max_emoji_codepoints_; }

private:
    std::unordered_set<std::string> stopwords_;
    std::unordered_map<std::string, std::string> slang_;
    std::unordered_map<std::string, std::string> emoji_;
    std::size_t max_emoji_codepoints_ = 0;
};

struct PrepOptions {
    /// When set, "#word" keeps "word" instead of dropping the whole token.
    bool keep_hashtag_words = false;
};

/// One lowercase word per line; blank lines and '#' comments ignored.
void load_stopwords(std::istream& in, PrepResources& resources);
/// `key<TAB>replacement phrase` per line.
void load_slang(std::istream& in, PrepResources& resources);
/// `hex codepoints<TAB>phrase` per line; codepoints separated by spaces,
/// '-' or '_' and optionally prefixed with "U+".
void load_emoji(std::istream& in, PrepResources& resources);

PrepResources load_prep_resources(const std::string& stopwords_path, const std::string& slang_path,
                                  const std::string& emoji_path);

/// Removes URLs, mentions, hashtags, standalone numbers and punctuation.
/// Non-ASCII codepoints are left for expand(). Apostrophes between letters
/// survive so contractions can be split later. Whitespace is collapsed.
std::string clean(std::string_view text, const PrepOptions& options = {});

/// Replaces known emoji and slang tokens by their phrases in a single pass and
/// drops every remaining non-ASCII codepoint.
std::string expand(std::string_view text, const PrepResources& resources);

/// Whitespace split, edge punctuation stripped, lowercased, contractions
/// split ("can't" -> "can" "not", "I'm" -> "i" "am"; possessive/"is" 's dropped).
std::vector<std::string> tokenize(std::string_view text);

std::vector<std::string> drop_stopwords(const std::vector<std::string>& tokens, const PrepResources& resources);
std::vector<std::string> drop_stopwords(const std::vector<std::string>& tokens,
                                        const std::unordered_set<std::string>& stoplist);

/// Porter stem of a lowercase token.
std::string stem(std::string_view token);

/// clean -> expand -> tokenize -> drop_stopwords -> stem.
ProcessedTweet preprocess(const Tweet& tweet, const PrepResources& resources, const PrepOptions& options = {});
std::vector<std::string> preprocess_text(std::string_view text, const PrepResources& resources,
                                         const PrepOptions& options = {});

/// Helpers shared with the lexicon loaders.
std::string to_lower_ascii(std::string_view s);
std::string encode_utf8(char32_t cp);

}  // namespace adp
