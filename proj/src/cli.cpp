#include "adp/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <utility>

#include "adp/config.hpp"
#include "adp/error.hpp"
#include "adp/synth.hpp"

namespace adp::cli {

namespace {

namespace fs = std::filesystem;

// Names the step that is running so failures can say where they happened.
struct Stage {
    std::string text = "startup";
    void operator()(std::string s) { text = std::move(s); }
};

std::string in_quotes(const std::string& path) { return "'" + path + "'"; }

const std::string& require_path(const std::string& path, std::string_view key) {
    if (path.empty()) throw ValidationError("no " + std::string(key) + " configured (use --config or the matching flag)");
    if (!fs::exists(path)) throw IoError("missing file " + in_quotes(path) + " for " + std::string(key));
    return path;
}

std::ofstream open_output(const std::string& path) {
    if (const auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + in_quotes(path));
    return out;
}

void finish_output(std::ofstream& out, const std::string& path) {
    out.close();
    if (!out) throw IoError("failed writing " + in_quotes(path));
}

std::string fixed6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

Lexicons load_lexicons(const RunConfig& config, Stage& stage) {
    Lexicons lex;
    if (!config.anxiety_lexicon.empty()) {
        stage("loading anxiety lexicon " + in_quotes(config.anxiety_lexicon));
        lex.anxiety = load_anxiety_lexicon_file(require_path(config.anxiety_lexicon, "anxiety_lexicon"));
    } else {
        stage("loading seed lexicon " + in_quotes(config.seed_lexicon));
        const auto seed = load_seed_file(require_path(config.seed_lexicon, "seed_lexicon"));
        SynonymGraph graph;
        if (!config.synonyms.empty()) {
            stage("loading synonym graph " + in_quotes(config.synonyms));
            graph = load_synonyms_file(require_path(config.synonyms, "synonyms"));
        }
        lex.anxiety = expand_lexicon(seed, graph);
    }
    stage("loading polarity lexicon " + in_quotes(config.polarity));
    lex.polarity = load_polarity_file(require_path(config.polarity, "polarity"));
    return lex;
}

PrepResources load_resources(const RunConfig& config, Stage& stage) {
    stage("loading text resources");
    return load_prep_resources(require_path(config.stopwords, "stopwords"), require_path(config.slang, "slang"),
                               require_path(config.emoji, "emoji"));
}

Dataset load_dataset(const RunConfig& config, Stage& stage, std::ostream& err) {
    stage("reading features " + in_quotes(config.features));
    const auto features = read_features_file(require_path(config.features, "features"));
    stage("reading labels " + in_quotes(config.labels));
    const auto labels = load_labels_file(require_path(config.labels, "labels"));
    stage("joining features with labels");
    Dataset data;
    for (const auto& [user, fv] : features) {
        const auto it = labels.find(user);
        if (it == labels.end()) throw ValidationError("no label for user '" + user + "' in " + in_quotes(config.labels));
        data.rows.push_back({user, fv, it->second});
    }
    if (labels.size() > features.size())
        err << "note: " << labels.size() - features.size() << " labelled users have no feature row and are ignored\n";
    return data;
}

int cmd_ingest(const RunConfig& config, Stage& stage, std::ostream& out, std::ostream& err) {
    stage("ingest: reading corpus " + in_quotes(config.corpus));
    const CorpusLoad load = load_corpus_file(require_path(config.corpus, "corpus"));
    for (const auto& s : load.skipped) err << "skipped line " << s.line_number << ": " << s.reason << '\n';
    out << "users " << load.timelines.size() << '\n';
    out << "tweets " << load.tweets_loaded << '\n';
    out << "duplicates " << load.duplicates_dropped << '\n';
    out << "skipped " << load.skipped.size() << '\n';
    if (!load.timelines.empty()) {
        EpochSeconds first = load.timelines.begin()->second.tweets.front().created_at_utc;
        for (const auto& [_, tl] : load.timelines) first = std::min(first, tl.tweets.front().created_at_utc);
        const EpochSeconds anchor = config.anchor_utc.value_or(corpus_anchor(load.timelines));
        out << "first " << format_rfc3339(first, 0) << '\n';
        out << "anchor " << format_rfc3339(anchor, 0) << '\n';
        const ObservationWindow window{anchor, config.window_days};
        out << "user_id,tweets,in_window\n";
        for (const auto& [user, tl] : load.timelines)
            out << user << ',' << tl.tweets.size() << ',' << apply_window(tl, window).tweets.size() << '\n';
    }
    return 0;
}

int cmd_lexicon_expand(const RunConfig& config, const std::string& out_path, Stage& stage, std::ostream& out) {
    stage("lexicon expand: loading seed " + in_quotes(config.seed_lexicon));
    const auto seed = load_seed_file(require_path(config.seed_lexicon, "seed_lexicon"));
    SynonymGraph graph;
    if (!config.synonyms.empty()) {
        stage("lexicon expand: loading synonyms " + in_quotes(config.synonyms));
        graph = load_synonyms_file(require_path(config.synonyms, "synonyms"));
    }
    const AnxietyLexicon lexicon = expand_lexicon(seed, graph);
    stage("lexicon expand: writing " + in_quotes(out_path));
    auto file = open_output(out_path);
    save_anxiety_lexicon(file, lexicon);
    finish_output(file, out_path);
    const auto seeded = static_cast<std::size_t>(std::count_if(
        lexicon.provenance.begin(), lexicon.provenance.end(), [](const auto& p) { return p.second == LexiconSource::seed; }));
    out << "seed words " << seed.size() << ", seed stems " << seeded << ", expanded stems "
        << lexicon.size() - seeded << ", total " << lexicon.size() << '\n';
    return 0;
}

int cmd_featurize(const RunConfig& config, const std::string& out_path, Stage& stage, std::ostream& out,
                  std::ostream& err) {
    const PrepResources resources = load_resources(config, stage);
    const Lexicons lexicons = load_lexicons(config, stage);
    stage("featurize: reading corpus " + in_quotes(config.corpus));
    const CorpusLoad load = load_corpus_file(require_path(config.corpus, "corpus"));
    if (!load.skipped.empty()) err << "note: skipped " << load.skipped.size() << " malformed records\n";
    stage("featurize: extracting features");
    FeaturizeOptions options;
    options.config = config.feature;
    options.prep = config.prep;
    options.window_days = config.window_days;
    options.anchor_utc = config.anchor_utc;
    const auto rows = featurize_timelines(load.timelines, resources, lexicons, options);
    stage("featurize: writing " + in_quotes(out_path));
    auto file = open_output(out_path);
    write_features(file, rows);
    finish_output(file, out_path);
    out << "featurized " << rows.size() << " users into " << out_path << '\n';
    return 0;
}

int cmd_train(const RunConfig& config, Stage& stage, std::ostream& out, std::ostream& err) {
    const Dataset data = load_dataset(config, stage, err);
    stage("train: fitting models on " + in_quotes(config.features));
    const EnsembleModel model = train_ensemble(data, config.learners, config.seed);
    const std::pair<const char*, Model> files[] = {
        {"mnb.model", model.mnb}, {"rf.model", model.rf}, {"gb.model", model.gb}, {"ensemble.model", model}};
    for (const auto& [name, m] : files) {
        const std::string path = (fs::path(config.model_dir) / name).string();
        stage("train: writing " + in_quotes(path));
        auto file = open_output(path);
        save_model(file, m);
        finish_output(file, path);
    }
    out << "trained on " << data.size() << " users (" << data.count(1) << " positive), models in " << config.model_dir
        << '\n';
    return 0;
}

int cmd_predict(const RunConfig& config, const std::string& model_path, const std::string& out_path, Stage& stage,
                std::ostream& out) {
    stage("predict: loading model " + in_quotes(model_path));
    const Model model = load_model_file(require_path(model_path, "model"));
    stage("predict: reading features " + in_quotes(config.features));
    const auto rows = read_features_file(require_path(config.features, "features"));
    stage("predict: writing " + in_quotes(out_path));
    auto file = open_output(out_path);
    file << "user_id,label,score\n";
    std::size_t positives = 0;
    for (const auto& [user, fv] : rows) {
        const Prediction p = predict(model, fv);
        positives += p.label == 1 ? 1 : 0;
        file << user << ',' << p.label << ',' << fixed6(p.score) << '\n';
    }
    finish_output(file, out_path);
    out << "predicted " << rows.size() << " users with " << model_kind(model) << " (" << positives << " positive)\n";
    return 0;
}

int cmd_evaluate(const RunConfig& config, Stage& stage, std::ostream& out, std::ostream& err) {
    const Dataset data = load_dataset(config, stage, err);
    stage("evaluate: running " + config.protocol.describe());
    const EvalReport report = evaluate(data, config.protocol, config.seed, config.learners);
    const std::pair<const char*, void (*)(std::ostream&, const EvalReport&)> outputs[] = {
        {"report.txt", write_report_table}, {"report.csv", write_report_csv}, {"plot.csv", write_plot_table}};
    for (const auto& [name, writer] : outputs) {
        const std::string path = (fs::path(config.report_dir) / name).string();
        stage("evaluate: writing " + in_quotes(path));
        auto file = open_output(path);
        writer(file, report);
        finish_output(file, path);
    }
    write_report_table(out, report);
    return 0;
}

struct SynthArgs {
    std::size_t users = 100;
    std::string rule = "w | (t & s)";
    double noise = 0.0;
    bool raw = false;
    std::string out_dir = "synth";
};

int cmd_synth(const RunConfig& config, const SynthArgs& args, Stage& stage, std::ostream& out) {
    stage("synth: parsing rule");
    const PlantedRule rule = PlantedRule::parse(args.rule);
    SynthOptions options;
    options.n_users = args.users;
    options.noise_rate = args.noise;
    stage("synth: generating dataset");
    const Dataset data = synth_generate(rule, options, config.seed);

    std::map<std::string, FeatureVector> features;
    for (const auto& row : data.rows) features.emplace(row.user_id, row.features);
    const std::string features_path = (fs::path(args.out_dir) / "features.csv").string();
    const std::string labels_path = (fs::path(args.out_dir) / "labels.csv").string();
    stage("synth: writing " + in_quotes(features_path));
    auto ffile = open_output(features_path);
    write_features(ffile, features);
    finish_output(ffile, features_path);
    stage("synth: writing " + in_quotes(labels_path));
    auto lfile = open_output(labels_path);
    lfile << "user_id,label\n";
    for (const auto& row : data.rows) lfile << row.user_id << ',' << row.label << '\n';
    finish_output(lfile, labels_path);

    if (args.raw) {
        const PrepResources resources = load_resources(config, stage);
        const Lexicons lexicons = load_lexicons(config, stage);
        stage("synth: choosing vocabulary");
        const SynthVocabulary vocabulary = SynthVocabulary::build(resources, lexicons, config.prep);
        const auto tweets = synth_corpus(data, vocabulary, config.seed + 1);
        const std::string corpus_path = (fs::path(args.out_dir) / "corpus.jsonl").string();
        stage("synth: writing " + in_quotes(corpus_path));
        auto cfile = open_output(corpus_path);
        for (const auto& t : tweets) cfile << format_tweet_record(t) << '\n';
        finish_output(cfile, corpus_path);
        out << "wrote " << tweets.size() << " tweets to " << corpus_path << '\n';
    }
    out << "synthesized " << data.size() << " users (" << data.count(1) << " positive) with rule '" << rule.expression()
        << "' into " << args.out_dir << '\n';
    return 0;
}

// Collects `--flag value` overrides in command-line order; they are applied
// on top of the config file once parsing is done.
class Overrides {
public:
    void add(CLI::App* app, const std::string& flag, std::string key, const std::string& help) {
        app->add_option_function<std::string>(
            flag, [this, key = std::move(key)](const std::string& v) { values_.emplace_back(key, v); }, help);
    }

    void add_common_paths(CLI::App* app) {
        add(app, "--stopwords", "stopwords", "stopword list");
        add(app, "--slang", "slang", "slang map");
        add(app, "--emoji", "emoji", "emoji map");
        add(app, "--polarity", "polarity", "polarity lexicon");
        add(app, "--seed-lexicon", "seed_lexicon", "anxiety seed word list");
        add(app, "--synonyms", "synonyms", "synonym graph");
        add(app, "--lexicon", "anxiety_lexicon", "expanded anxiety lexicon (skips expansion)");
    }

    void apply(RunConfig& config) const {
        for (const auto& [key, value] : values_) apply_config_setting(config, key, value);
        config.validate();
    }

private:
    std::vector<std::pair<std::string, std::string>> values_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Anxious depression screening pipeline over tweet timelines", "adpredict"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string config_path;
    app.add_option("--config", config_path, "key = value config file")->check(CLI::ExistingFile);

    Overrides overrides;
    std::function<int(const RunConfig&, Stage&)> action;

    auto* ingest = app.add_subcommand("ingest", "validate and summarize a corpus");
    overrides.add(ingest, "--corpus", "corpus", "line-delimited tweet records");
    overrides.add(ingest, "--window-days", "window_days", "observation window length");
    overrides.add(ingest, "--anchor", "anchor", "window anchor (RFC 3339); default latest tweet");
    ingest->callback([&] { action = [&](const RunConfig& c, Stage& s) { return cmd_ingest(c, s, out, err); }; });

    auto* lexicon = app.add_subcommand("lexicon", "anxiety lexicon tools");
    lexicon->require_subcommand(1);
    auto* expand_cmd = lexicon->add_subcommand("expand", "seed words + synonym graph -> expanded lexicon");
    std::string lexicon_out;
    overrides.add(expand_cmd, "--seed-lexicon", "seed_lexicon", "anxiety seed word list");
    overrides.add(expand_cmd, "--synonyms", "synonyms", "synonym graph");
    expand_cmd->add_option("--out", lexicon_out, "expanded lexicon file")->required();
    expand_cmd->callback([&] {
        action = [&](const RunConfig& c, Stage& s) { return cmd_lexicon_expand(c, lexicon_out, s, out); };
    });

    auto* featurize = app.add_subcommand("featurize", "corpus -> feature file");
    std::string features_out;
    overrides.add(featurize, "--corpus", "corpus", "line-delimited tweet records");
    overrides.add_common_paths(featurize);
    overrides.add(featurize, "--window-days", "window_days", "observation window length");
    overrides.add(featurize, "--anchor", "anchor", "window anchor (RFC 3339); default latest tweet");
    featurize->add_option("--out", features_out, "feature file (default: features key)");
    featurize->callback([&] {
        action = [&](const RunConfig& c, Stage& s) {
            const std::string path = features_out.empty() ? c.features : features_out;
            if (path.empty()) throw ValidationError("featurize needs --out or a features key");
            return cmd_featurize(c, path, s, out, err);
        };
    });

    auto* train = app.add_subcommand("train", "feature file + labels -> model files");
    overrides.add(train, "--features", "features", "feature file");
    overrides.add(train, "--labels", "labels", "label file");
    overrides.add(train, "--model-dir", "model_dir", "output directory for model files");
    overrides.add(train, "--seed", "seed", "training seed");
    train->callback([&] { action = [&](const RunConfig& c, Stage& s) { return cmd_train(c, s, out, err); }; });

    auto* predict_cmd = app.add_subcommand("predict", "model + feature file -> predictions");
    std::string model_path;
    std::string predictions_out;
    predict_cmd->add_option("--model", model_path, "model file")->required();
    overrides.add(predict_cmd, "--features", "features", "feature file");
    predict_cmd->add_option("--out", predictions_out, "predictions file")->required();
    predict_cmd->callback([&] {
        action = [&](const RunConfig& c, Stage& s) { return cmd_predict(c, model_path, predictions_out, s, out); };
    });

    auto* evaluate_cmd = app.add_subcommand("evaluate", "feature file + labels + protocol -> report");
    overrides.add(evaluate_cmd, "--features", "features", "feature file");
    overrides.add(evaluate_cmd, "--labels", "labels", "label file");
    overrides.add(evaluate_cmd, "--report-dir", "report_dir", "output directory for reports");
    overrides.add(evaluate_cmd, "--seed", "seed", "split and training seed");
    overrides.add(evaluate_cmd, "--protocol", "protocol", "holdout or kfold");
    overrides.add(evaluate_cmd, "--train-fraction", "train_fraction", "holdout training share");
    overrides.add(evaluate_cmd, "--k", "k", "number of folds");
    evaluate_cmd->callback([&] { action = [&](const RunConfig& c, Stage& s) { return cmd_evaluate(c, s, out, err); }; });

    auto* synth = app.add_subcommand("synth", "generate a planted-rule dataset and optional raw corpus");
    SynthArgs synth_args;
    synth->add_option("--users", synth_args.users, "number of users")->check(CLI::PositiveNumber);
    synth->add_option("--rule", synth_args.rule, "boolean rule over w,t,f,s,c using ! & | ( )");
    synth->add_option("--noise", synth_args.noise, "label flip probability in [0,0.5)");
    synth->add_flag("--raw", synth_args.raw, "also emit corpus.jsonl reproducing the planted vectors");
    synth->add_option("--out-dir", synth_args.out_dir, "output directory");
    overrides.add(synth, "--seed", "seed", "generator seed");
    overrides.add_common_paths(synth);
    synth->callback([&] { action = [&](const RunConfig& c, Stage& s) { return cmd_synth(c, synth_args, s, out); }; });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 2;
    }

    Stage stage;
    try {
        RunConfig config;
        if (!config_path.empty()) {
            stage("reading config " + in_quotes(config_path));
            config = load_config_file(config_path);
        }
        stage("applying command-line settings");
        overrides.apply(config);
        return action(config, stage);
    } catch (const Error& e) {
        err << "adpredict: " << stage.text << ": " << e.what() << '\n';
    } catch (const fs::filesystem_error& e) {
        err << "adpredict: " << stage.text << ": " << e.what() << '\n';
    }
    return 1;
}

}  // namespace adp::cli
