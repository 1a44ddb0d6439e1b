#pragma once

#include <string>

#include "adp/features.hpp"
#include "adp/textprep.hpp"

namespace adp::test {

inline std::string data_path(const std::string& name) { return std::string(ADP_DATA_DIR) + "/" + name; }
inline std::string fixture_path(const std::string& name) { return std::string(ADP_FIXTURE_DIR) + "/" + name; }

inline const PrepResources& bundled_resources() {
    static const PrepResources r =
        load_prep_resources(data_path("stopwords.txt"), data_path("slang.tsv"), data_path("emoji.tsv"));
    return r;
}

inline const Lexicons& bundled_lexicons() {
    static const Lexicons lex = [] {
        Lexicons l;
        l.anxiety = expand_lexicon(load_seed_file(data_path("anxiety_seed.txt")),
                                   load_synonyms_file(data_path("synonyms.tsv")));
        l.polarity = load_polarity_file(data_path("polarity.tsv"));
        return l;
    }();
    return lex;
}

}  // namespace adp::test
