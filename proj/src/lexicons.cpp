#include "adp/lexicons.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>

#include "adp/error.hpp"
#include "adp/textprep.hpp"

namespace adp {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

bool single_word(std::string_view w) {
    return !w.empty() && w.find_first_of(" \t_") == std::string_view::npos;
}

std::ifstream open_or_throw(const std::string& path, const char* what) {
    std::ifstream in(path);
    if (!in) throw IoError(std::string("cannot open ") + what + " file '" + path + "'");
    return in;
}

double parse_score(std::string_view text, std::size_t line, const char* which) {
    const std::string t = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty())
        throw ValidationError("polarity lexicon line " + std::to_string(line) + ": " + which + " score '" + t +
                              "' is not a number");
    if (!(value >= 0.0 && value <= 1.0))
        throw ValidationError("polarity lexicon line " + std::to_string(line) + ": " + which + " score " + t +
                              " outside [0,1]");
    return value;
}

// Order-independent sum: values are added in ascending order.
double canonical_sum(std::vector<double>& values) {
    std::sort(values.begin(), values.end());
    return std::accumulate(values.begin(), values.end(), 0.0);
}

}  // namespace

const char* to_string(Verdict v) noexcept {
    switch (v) {
        case Verdict::positive:
            return "positive";
        case Verdict::negative:
            return "negative";
        case Verdict::neutral:
            break;
    }
    return "neutral";
}

void PolarityLexicon::add(const std::string& stem, PolarityScore score) {
    auto& acc = entries_[stem];
    acc.pos_total += score.pos;
    acc.neg_total += score.neg;
    ++acc.count;
    acc.mean = {acc.pos_total / acc.count, acc.neg_total / acc.count};
}

const PolarityScore* PolarityLexicon::find(std::string_view stem) const {
    const auto it = entries_.find(stem);
    return it == entries_.end() ? nullptr : &it->second.mean;
}

WordPolarity PolarityLexicon::word_polarity(std::string_view stem) const {
    const PolarityScore* s = find(stem);
    if (!s) return WordPolarity::none;
    if (s->pos > s->neg) return WordPolarity::positive;
    if (s->neg > s->pos) return WordPolarity::negative;
    return WordPolarity::none;
}

std::set<std::string> load_seed(std::istream& in) {
    std::set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        const std::string w = to_lower_ascii(trim(line));
        if (w.empty() || w.front() == '#') continue;
        words.insert(w);
    }
    if (words.empty()) throw ValidationError("seed lexicon is empty");
    return words;
}

std::set<std::string> load_seed_file(const std::string& path) {
    auto in = open_or_throw(path, "seed lexicon");
    return load_seed(in);
}

SynonymGraph load_synonyms(std::istream& in) {
    SynonymGraph graph;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (trim(line).empty() || line.front() == '#') continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw ValidationError("synonym graph line " + std::to_string(n) + ": expected 'word<TAB>syn1,syn2'");
        const std::string key = to_lower_ascii(trim(line.substr(0, tab)));
        if (key.empty()) throw ValidationError("synonym graph line " + std::to_string(n) + ": empty word");
        auto& syns = graph[key];
        std::string_view rest = std::string_view(line).substr(tab + 1);
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            const std::string syn = to_lower_ascii(trim(rest.substr(0, comma)));
            if (!syn.empty()) syns.push_back(syn);
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
    }
    return graph;
}

SynonymGraph load_synonyms_file(const std::string& path) {
    auto in = open_or_throw(path, "synonym graph");
    return load_synonyms(in);
}

AnxietyLexicon expand_lexicon(const std::set<std::string>& seed, const SynonymGraph& graph) {
    AnxietyLexicon lex;
    auto add = [&lex](const std::string& word, LexiconSource source) {
        const std::string lowered = to_lower_ascii(word);
        if (!single_word(lowered)) return;
        const std::string s = stem(lowered);
        if (lex.stems.insert(s).second) {
            lex.provenance[s] = source;
            lex.surface[s] = lowered;
        }
    };
    for (const auto& w : seed) add(w, LexiconSource::seed);
    for (const auto& w : seed) {
        const auto it = graph.find(to_lower_ascii(w));
        if (it == graph.end()) continue;
        for (const auto& syn : it->second) add(syn, LexiconSource::expanded);
    }
    return lex;
}

bool contains_anxiety_stem(const AnxietyLexicon& lexicon, std::string_view stem) {
    return !stem.empty() && lexicon.contains(stem);
}

void save_anxiety_lexicon(std::ostream& out, const AnxietyLexicon& lexicon) {
    for (const auto& s : lexicon.stems) {
        const auto src = lexicon.provenance.at(s);
        const auto surface = lexicon.surface.find(s);
        out << s << '\t' << (src == LexiconSource::seed ? "seed" : "expanded") << '\t'
            << (surface == lexicon.surface.end() ? s : surface->second) << '\n';
    }
}

AnxietyLexicon load_anxiety_lexicon(std::istream& in) {
    AnxietyLexicon lex;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (trim(line).empty() || line.front() == '#') continue;
        std::vector<std::string> cols;
        std::size_t start = 0;
        for (;;) {
            const auto tab = line.find('\t', start);
            cols.push_back(trim(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start)));
            if (tab == std::string::npos) break;
            start = tab + 1;
        }
        if (cols.size() < 2 || cols[0].empty() || (cols[1] != "seed" && cols[1] != "expanded"))
            throw ValidationError("anxiety lexicon line " + std::to_string(n) + ": expected 'stem<TAB>seed|expanded'");
        lex.stems.insert(cols[0]);
        lex.provenance[cols[0]] = cols[1] == "seed" ? LexiconSource::seed : LexiconSource::expanded;
        lex.surface[cols[0]] = cols.size() > 2 && !cols[2].empty() ? cols[2] : cols[0];
    }
    if (lex.stems.empty()) throw ValidationError("anxiety lexicon is empty");
    return lex;
}

AnxietyLexicon load_anxiety_lexicon_file(const std::string& path) {
    auto in = open_or_throw(path, "anxiety lexicon");
    return load_anxiety_lexicon(in);
}

PolarityLexicon load_polarity(std::istream& in) {
    PolarityLexicon lex;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (trim(line).empty() || line.front() == '#') continue;
        const auto t1 = line.find('\t');
        const auto t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
        if (t2 == std::string::npos)
            throw ValidationError("polarity lexicon line " + std::to_string(n) + ": expected 'word<TAB>pos<TAB>neg'");
        const std::string word = to_lower_ascii(trim(line.substr(0, t1)));
        if (word.empty()) throw ValidationError("polarity lexicon line " + std::to_string(n) + ": empty word");
        const double pos = parse_score(std::string_view(line).substr(t1 + 1, t2 - t1 - 1), n, "positive");
        const double neg = parse_score(std::string_view(line).substr(t2 + 1), n, "negative");
        lex.add(stem(word), {pos, neg});
    }
    return lex;
}

PolarityLexicon load_polarity_file(const std::string& path) {
    auto in = open_or_throw(path, "polarity lexicon");
    return load_polarity(in);
}

TweetPolarity score_tweet(const std::vector<std::string>& stems, const PolarityLexicon& lexicon) {
    std::vector<double> pos;
    std::vector<double> neg;
    TweetPolarity out;
    for (const auto& s : stems) {
        const PolarityScore* score = lexicon.find(s);
        if (!score) continue;
        pos.push_back(score->pos);
        neg.push_back(score->neg);
        if (score->pos > score->neg) ++out.positive_words;
        if (score->neg > score->pos) ++out.negative_words;
    }
    out.pos_sum = canonical_sum(pos);
    out.neg_sum = canonical_sum(neg);
    if (out.neg_sum - out.pos_sum > 0.0)
        out.verdict = Verdict::negative;
    else if (out.pos_sum - out.neg_sum > 0.0)
        out.verdict = Verdict::positive;
    return out;
}

}  // namespace adp
