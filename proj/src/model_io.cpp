// Model file layout (text, one record per line, fields separated by spaces):
//
//   adpredict-model <version>
//   kind <mnb|rf|gb|ensemble>
//   <body>
//   end
//
// mnb body:      alpha <a>
//                log_prior <class0> <class1>
//                log_likelihood <class> <w> <t> <f> <s> <c>      (twice)
// rf body:       rng mt19937_64
//                seed <u64>
//                n_trees <n>  features_per_split <k>  bootstrap <0|1>   (one per line)
//                tree <node_count>   followed by node_count node lines
// gb body:       rng mt19937_64
//                seed <u64>
//                n_stages <n>  learning_rate <lr>  max_depth <d>        (one per line)
//                base_score <log-odds>
//                stage <node_count>  followed by node_count node lines
// ensemble body: member mnb <mnb body> member rf <rf body> member gb <gb body>
//
// node line:     node <feature|-1> <zero child> <one child> <value> <count0> <count1>
//
// Reals are written in shortest round-trip form (std::to_chars), so a
// reloaded model reproduces every prediction bit for bit.

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "adp/error.hpp"
#include "adp/learners.hpp"
#include "adp/rng.hpp"

namespace adp {

namespace {

constexpr const char* kMagic = "adpredict-model";

std::string real(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

void write_tree(std::ostream& out, const char* tag, const TreeModel& tree) {
    out << tag << ' ' << tree.nodes.size() << '\n';
    for (const auto& n : tree.nodes)
        out << "node " << n.feature << ' ' << n.zero << ' ' << n.one << ' ' << real(n.value) << ' ' << n.count0 << ' '
            << n.count1 << '\n';
}

void write_body(std::ostream& out, const MnbModel& m) {
    out << "alpha " << real(m.params.alpha) << '\n';
    out << "log_prior " << real(m.log_prior[0]) << ' ' << real(m.log_prior[1]) << '\n';
    for (std::size_t c = 0; c < 2; ++c) {
        out << "log_likelihood " << c;
        for (double v : m.log_likelihood[c]) out << ' ' << real(v);
        out << '\n';
    }
}

void write_body(std::ostream& out, const RfModel& m) {
    out << "rng " << Rng::kAlgorithm << '\n';
    out << "seed " << m.seed << '\n';
    out << "n_trees " << m.params.n_trees << '\n';
    out << "features_per_split " << m.params.features_per_split << '\n';
    out << "bootstrap " << (m.bootstrap ? 1 : 0) << '\n';
    for (const auto& t : m.trees) write_tree(out, "tree", t);
}

void write_body(std::ostream& out, const GbModel& m) {
    out << "rng " << Rng::kAlgorithm << '\n';
    out << "seed " << m.seed << '\n';
    out << "n_stages " << m.params.n_stages << '\n';
    out << "learning_rate " << real(m.params.learning_rate) << '\n';
    out << "max_depth " << m.params.max_depth << '\n';
    out << "base_score " << real(m.base_score) << '\n';
    for (const auto& t : m.stages) write_tree(out, "stage", t);
}

void write_body(std::ostream& out, const EnsembleModel& m) {
    out << "member mnb\n";
    write_body(out, m.mnb);
    out << "member rf\n";
    write_body(out, m.rf);
    out << "member gb\n";
    write_body(out, m.gb);
}

class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    // Splits the next line into fields; the first must equal `key`.
    std::vector<std::string> expect(const std::string& key, std::size_t values) {
        std::vector<std::string> fields = next_line();
        if (fields.empty() || fields[0] != key) fail("expected '" + key + "'");
        if (fields.size() != values + 1) fail("wrong number of values for '" + key + "'");
        fields.erase(fields.begin());
        return fields;
    }

    std::vector<std::string> next_line() {
        std::string line;
        if (!std::getline(in_, line)) fail("unexpected end of file (truncated model?)");
        ++line_;
        std::istringstream ss(line);
        std::vector<std::string> fields;
        for (std::string f; ss >> f;) fields.push_back(f);
        return fields;
    }

    template <typename T>
    T number(const std::string& text) {
        T v{};
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc{} || ptr != text.data() + text.size()) fail("bad number '" + text + "'");
        return v;
    }

    double real_value(const std::string& key) { return number<double>(expect(key, 1)[0]); }
    template <typename T>
    T int_value(const std::string& key) {
        return number<T>(expect(key, 1)[0]);
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw ModelFormatError("model file line " + std::to_string(line_ + 1) + ": " + what);
    }

    std::size_t line() const { return line_; }

private:
    std::istream& in_;
    std::size_t line_ = 0;
};

TreeModel read_tree(Reader& r, const char* tag) {
    const auto count = r.number<std::size_t>(r.expect(tag, 1)[0]);
    if (count == 0 || count > 1024) r.fail("implausible node count");
    TreeModel tree;
    tree.nodes.resize(count);
    for (auto& n : tree.nodes) {
        const auto f = r.expect("node", 6);
        n.feature = r.number<int>(f[0]);
        n.zero = r.number<int>(f[1]);
        n.one = r.number<int>(f[2]);
        n.value = r.number<double>(f[3]);
        n.count0 = r.number<std::uint32_t>(f[4]);
        n.count1 = r.number<std::uint32_t>(f[5]);
    }
    const int size = static_cast<int>(count);
    for (int i = 0; i < size; ++i) {
        const auto& n = tree.nodes[static_cast<std::size_t>(i)];
        if (n.is_leaf()) continue;
        // children always follow their parent, which rules out cycles
        if (n.feature >= static_cast<int>(kFeatureCount) || n.zero <= i || n.one <= i || n.zero >= size ||
            n.one >= size)
            r.fail("invalid tree node " + std::to_string(i));
    }
    return tree;
}

void read_rng(Reader& r) {
    if (r.expect("rng", 1)[0] != Rng::kAlgorithm) r.fail("unsupported random generator");
}

MnbModel read_mnb(Reader& r) {
    MnbModel m;
    m.params.alpha = r.real_value("alpha");
    const auto prior = r.expect("log_prior", 2);
    m.log_prior = {r.number<double>(prior[0]), r.number<double>(prior[1])};
    for (std::size_t c = 0; c < 2; ++c) {
        const auto f = r.expect("log_likelihood", kFeatureCount + 1);
        if (r.number<std::size_t>(f[0]) != c) r.fail("log_likelihood rows out of order");
        for (std::size_t j = 0; j < kFeatureCount; ++j) m.log_likelihood[c][j] = r.number<double>(f[j + 1]);
    }
    return m;
}

RfModel read_rf(Reader& r) {
    RfModel m;
    read_rng(r);
    m.seed = r.int_value<std::uint64_t>("seed");
    m.params.n_trees = r.int_value<int>("n_trees");
    m.params.features_per_split = r.int_value<int>("features_per_split");
    m.bootstrap = r.int_value<int>("bootstrap") != 0;
    if (m.params.n_trees < 1 || m.params.n_trees > 100000) r.fail("implausible n_trees");
    for (int t = 0; t < m.params.n_trees; ++t) m.trees.push_back(read_tree(r, "tree"));
    return m;
}

GbModel read_gb(Reader& r) {
    GbModel m;
    read_rng(r);
    m.seed = r.int_value<std::uint64_t>("seed");
    m.params.n_stages = r.int_value<int>("n_stages");
    m.params.learning_rate = r.real_value("learning_rate");
    m.params.max_depth = r.int_value<int>("max_depth");
    m.base_score = r.real_value("base_score");
    if (m.params.n_stages < 0 || m.params.n_stages > 100000) r.fail("implausible n_stages");
    for (int s = 0; s < m.params.n_stages; ++s) m.stages.push_back(read_tree(r, "stage"));
    return m;
}

void expect_member(Reader& r, const char* kind) {
    if (r.expect("member", 1)[0] != kind) r.fail(std::string("expected member ") + kind);
}

}  // namespace

void save_model(std::ostream& out, const Model& model) {
    out << kMagic << ' ' << kModelFormatVersion << '\n';
    out << "kind " << model_kind(model) << '\n';
    std::visit([&out](const auto& m) { write_body(out, m); }, model);
    out << "end\n";
}

void save_model_file(const std::string& path, const Model& model) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write model file '" + path + "'");
    save_model(out, model);
    if (!out) throw IoError("failed writing model file '" + path + "'");
}

Model load_model(std::istream& in) {
    Reader r(in);
    const auto header = r.next_line();
    if (header.size() != 2 || header[0] != kMagic) r.fail("not an adpredict model file");
    int version = 0;
    const auto [ptr, ec] = std::from_chars(header[1].data(), header[1].data() + header[1].size(), version);
    if (ec != std::errc{} || ptr != header[1].data() + header[1].size())
        throw ModelVersionError("model file has unreadable version '" + header[1] + "'");
    if (version != kModelFormatVersion)
        throw ModelVersionError("model file version " + header[1] + " is not supported (expected " +
                                std::to_string(kModelFormatVersion) + ")");

    const std::string kind = r.expect("kind", 1)[0];
    Model model;
    if (kind == "mnb") {
        model = read_mnb(r);
    } else if (kind == "rf") {
        model = read_rf(r);
    } else if (kind == "gb") {
        model = read_gb(r);
    } else if (kind == "ensemble") {
        EnsembleModel e;
        expect_member(r, "mnb");
        e.mnb = read_mnb(r);
        expect_member(r, "rf");
        e.rf = read_rf(r);
        expect_member(r, "gb");
        e.gb = read_gb(r);
        model = std::move(e);
    } else {
        r.fail("unknown model kind '" + kind + "'");
    }
    r.expect("end", 0);
    return model;
}

Model load_model_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open model file '" + path + "'");
    return load_model(in);
}

}  // namespace adp
