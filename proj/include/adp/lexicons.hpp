#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace adp {

enum class LexiconSource { seed, expanded };

/// Stemmed anxiety indicator words.
struct AnxietyLexicon {
    std::set<std::string> stems;
    std::map<std::string, LexiconSource> provenance;
    /// First surface word that produced each stem (for reporting and synthesis).
    std::map<std::string, std::string> surface;

    bool contains(std::string_view stem) const { return stems.find(std::string(stem)) != stems.end(); }
    std::size_t size() const noexcept { return stems.size(); }
};

using SynonymGraph = std::map<std::string, std::vector<std::string>>;

struct PolarityScore {
    double pos = 0.0;
    double neg = 0.0;

    bool operator==(const PolarityScore&) const = default;
};

enum class WordPolarity { none, positive, negative };
enum class Verdict { neutral, positive, negative };

const char* to_string(Verdict v) noexcept;

class PolarityLexicon {
public:
    /// Adds one source observation; observations of the same stem are averaged.
    void add(const std::string& stem, PolarityScore score);

    const PolarityScore* find(std::string_view stem) const;
    WordPolarity word_polarity(std::string_view stem) const;
    std::size_t size() const noexcept { return entries_.size(); }

private:
    struct Accumulator {
        double pos_total = 0.0;
        double neg_total = 0.0;
        int count = 0;
        PolarityScore mean;
    };
    std::map<std::string, Accumulator, std::less<>> entries_;
};

struct TweetPolarity {
    double pos_sum = 0.0;
    double neg_sum = 0.0;
    Verdict verdict = Verdict::neutral;
    /// Stems whose own score leans positive / negative, with multiplicity.
    int positive_words = 0;
    int negative_words = 0;
};

/// Seed words: one per line, lowercased and deduplicated. Throws on an empty file.
std::set<std::string> load_seed(std::istream& in);
std::set<std::string> load_seed_file(const std::string& path);

/// `word<TAB>syn1,syn2,...` per line.
SynonymGraph load_synonyms(std::istream& in);
SynonymGraph load_synonyms_file(const std::string& path);

/// One-hop expansion of the seed through the graph, then stemming. Seed stems
/// keep their seed provenance; multi-word synonyms are skipped.
AnxietyLexicon expand_lexicon(const std::set<std::string>& seed, const SynonymGraph& graph);

bool contains_anxiety_stem(const AnxietyLexicon& lexicon, std::string_view stem);

/// Expanded lexicon file: `stem<TAB>seed|expanded<TAB>surface` per line.
void save_anxiety_lexicon(std::ostream& out, const AnxietyLexicon& lexicon);
AnxietyLexicon load_anxiety_lexicon(std::istream& in);
AnxietyLexicon load_anxiety_lexicon_file(const std::string& path);

/// `word<TAB>pos<TAB>neg` per line; words are stemmed on load.
PolarityLexicon load_polarity(std::istream& in);
PolarityLexicon load_polarity_file(const std::string& path);

/// Sums word scores over `stems` (with multiplicity) and derives the verdict
/// from the sign of neg_sum - pos_sum.
TweetPolarity score_tweet(const std::vector<std::string>& stems, const PolarityLexicon& lexicon);

}  // namespace adp
