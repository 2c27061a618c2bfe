#include "lsikit/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <system_error>

#include "lsikit/cluster.hpp"
#include "lsikit/completion.hpp"
#include "lsikit/corpus.hpp"
#include "lsikit/error.hpp"
#include "lsikit/linalg.hpp"
#include "lsikit/mmio.hpp"
#include "lsikit/nmf.hpp"
#include "lsikit/retrieval.hpp"
#include "lsikit/synthetic.hpp"
#include "parallel.hpp"

namespace lsikit::cli {
namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// Collects every output of a command and publishes them only once all are staged.
class Outputs {
public:
    explicit Outputs(fs::path dir) : dir_(std::move(dir)) {}

    void add(std::string name, std::string content) { files_.emplace_back(std::move(name), std::move(content)); }

    void commit() const {
        fs::create_directories(dir_);
        std::vector<fs::path> temps;
        auto cleanup = [&] {
            std::error_code ec;
            for (const auto& t : temps) fs::remove(t, ec);
        };
        try {
            for (const auto& [name, content] : files_) {
                const fs::path tmp = dir_ / ("." + name + ".partial");
                temps.push_back(tmp);
                std::ofstream o(tmp, std::ios::binary | std::ios::trunc);
                o << content;
                o.close();
                if (!o) throw Error("cannot write " + tmp.string());
            }
            for (std::size_t i = 0; i < files_.size(); ++i) fs::rename(temps[i], dir_ / files_[i].first);
        } catch (...) {
            cleanup();
            throw;
        }
    }

    std::size_t size() const noexcept { return files_.size(); }
    const fs::path& dir() const noexcept { return dir_; }

private:
    fs::path dir_;
    std::vector<std::pair<std::string, std::string>> files_;
};

std::string sparse_text(const SparseMatrix& m) {
    std::ostringstream os;
    mm::write_sparse(os, m);
    return os.str();
}

std::string dense_text(const DenseMatrix& m) {
    std::ostringstream os;
    mm::write_dense(os, m);
    return os.str();
}

SparseMatrix sparse_from_text(const std::string& text, const std::string& what) {
    std::istringstream is(text);
    try {
        return mm::read_sparse(is);
    } catch (const ParseError& e) {
        throw Error(what + ": " + e.what());
    }
}

std::vector<int> read_ids(const fs::path& path) {
    std::vector<int> ids;
    std::istringstream is(read_text(path));
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto t = trim(line);
        if (t.empty()) continue;
        int v = 0;
        auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc() || p != t.data() + t.size()) {
            throw Error(path.string() + ": line " + std::to_string(lineno) + ": bad id");
        }
        ids.push_back(v);
    }
    return ids;
}

std::string ids_text(const std::vector<int>& ids) {
    std::string s;
    for (int id : ids) s += std::to_string(id) + '\n';
    return s;
}

// Accepts one label per line or "item,label" rows, with an optional header.
ClusterLabels read_labels(const fs::path& path) {
    std::vector<std::size_t> labels;
    std::istringstream is(read_text(path));
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto t = trim(line);
        if (t.empty()) continue;
        if (const auto comma = t.rfind(','); comma != std::string_view::npos) t = trim(t.substr(comma + 1));
        std::size_t v = 0;
        auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc() || p != t.data() + t.size()) {
            if (labels.empty() && lineno == 1) continue;
            throw Error(path.string() + ": line " + std::to_string(lineno) + ": bad label");
        }
        labels.push_back(v);
    }
    if (labels.empty()) throw Error(path.string() + ": no labels");
    const std::size_t k = *std::max_element(labels.begin(), labels.end()) + 1;
    return ClusterLabels(std::move(labels), k);
}

std::string labels_csv(const ClusterLabels& labels) {
    std::string s = "item,label\n";
    for (std::size_t i = 0; i < labels.size(); ++i) s += std::to_string(i) + ',' + std::to_string(labels[i]) + '\n';
    return s;
}

Json scores_json(const QualityScores& q) {
    return Json{{"mi", q.mutual_information}, {"entropy", q.entropy}, {"purity", q.purity}, {"fmeasure", q.fmeasure}};
}

std::string dump(const Json& j) { return j.dump(2) + '\n'; }

struct Common {
    std::uint64_t seed = 0;
    std::string config;
    std::string out = ".";
    bool quiet = false;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--seed", c.seed, "Random seed");
    sub->add_option("--config", c.config, "key = value file; flags override it");
    sub->add_option("--out", c.out, "Output directory");
    sub->add_flag("--quiet", c.quiet, "Suppress progress messages");
}

bool excluded_from_hash(const std::string& name) {
    return name == "--help" || name == "--config" || name == "--out" || name == "--quiet";
}

std::string option_value(const CLI::Option* o) {
    if (o->get_type_size() == 0) return o->as<bool>() ? "true" : "false";
    if (o->count() == 0) return o->get_default_str();
    std::string s;
    for (const auto& r : o->results()) s += (s.empty() ? "" : ",") + r;
    return s;
}

// Applies config-file values to options not given on the command line.
void apply_config(CLI::App* sub, const std::string& path) {
    if (path.empty()) return;
    const auto entries = parse_config(read_text(path));
    for (const auto& [key, value] : entries) {
        CLI::Option* opt = nullptr;
        for (CLI::Option* o : sub->get_options()) {
            for (const auto& l : o->get_lnames())
                if (l == key) opt = o;
        }
        if (!opt || excluded_from_hash("--" + key)) throw Error("config: unknown key '" + key + "'");
        if (opt->count() > 0) continue;
        opt->add_result(value);
        opt->run_callback();
    }
}

std::string config_hash(const CLI::App* sub) {
    std::vector<std::string> parts;
    for (const CLI::Option* o : sub->get_options()) {
        const auto& names = o->get_lnames();
        if (names.empty() || excluded_from_hash("--" + names.front())) continue;
        parts.push_back(names.front() + "=" + option_value(o));
    }
    std::sort(parts.begin(), parts.end());
    std::string joined = std::string(sub->get_name()) + '\n';
    for (const auto& p : parts) joined += p + '\n';
    return fnv1a_hex(joined);
}

class Log {
public:
    Log(std::ostream& err, bool quiet) : err_(err), quiet_(quiet) {}
    void operator()(const std::string& msg) const {
        if (!quiet_) err_ << msg << '\n';
    }

private:
    std::ostream& err_;
    bool quiet_;
};

// ---------------------------------------------------------------- corpus build

struct CorpusOptions {
    std::string docs, queries, stoplist, fields = "W", query_ids = "file";
    std::size_t min_length = 2;
    bool log_scale = true;
    bool normalize_columns = false;
};

void cmd_corpus_build(const CorpusOptions& o, const Common& c, const std::string& hash, const Log& log) {
    std::set<char> fields;
    for (char f : o.fields) fields.insert(static_cast<char>(std::toupper(static_cast<unsigned char>(f))));
    if (fields.empty()) throw InvalidArgument("--fields must name at least one field");
    if (o.query_ids != "file" && o.query_ids != "sequential") {
        throw InvalidArgument("--query-ids must be 'file' or 'sequential'");
    }
    TokenizerConfig tok;
    if (!o.stoplist.empty()) tok.stoplist = load_stoplist(o.stoplist);
    tok.min_length = o.min_length;

    std::vector<std::string> warnings;
    auto docs = parse_smart(read_text(o.docs), fields, &warnings);
    if (docs.empty()) throw Error(o.docs + ": no documents");
    TermDocMatrix tdm = build_matrix(std::move(docs), tok);
    if (o.log_scale) tdm = log_scale(std::move(tdm));
    if (o.normalize_columns) tdm = column_normalize(std::move(tdm));

    Outputs out(c.out);
    out.add("matrix.mtx", sparse_text(tdm.matrix));
    std::string vocab;
    for (const auto& t : tdm.vocabulary.terms()) vocab += t + '\n';
    out.add("vocabulary.txt", vocab);
    out.add("doc_ids.txt", ids_text(tdm.doc_ids));

    Json stats{{"M", tdm.matrix.rows()},
               {"N", tdm.matrix.cols()},
               {"nnz", tdm.matrix.nnz()},
               {"nnz_percent", tdm.nnz_percent()},
               {"log_scaled", o.log_scale},
               {"column_normalized", o.normalize_columns}};
    if (!o.queries.empty()) {
        auto queries = parse_smart(read_text(o.queries), fields, &warnings);
        if (o.query_ids == "sequential") renumber_sequential(queries);
        QueryMatrix q = build_query_matrix(queries, tdm.vocabulary, tok, o.log_scale, &warnings);
        out.add("queries.mtx", sparse_text(SparseMatrix::from_dense(q.weights)));
        out.add("query_ids.txt", ids_text(q.ids));
        stats["Q"] = q.ids.size();
    }
    stats["config_hash"] = hash;
    stats["warnings"] = warnings;
    out.add("stats.json", dump(stats));
    out.commit();
    log("corpus: M=" + std::to_string(tdm.matrix.rows()) + " N=" + std::to_string(tdm.matrix.cols()) + " -> " +
        out.dir().string());
}

// ---------------------------------------------------------------- index

struct IndexOptions {
    std::string matrix, method = "raw", svd_cache;
    std::size_t rank = 0, maxiter = 100, stable_window = 3;
};

SvdFactors cached_full_svd(const SparseMatrix& a, const std::string& key, const std::string& cache_dir,
                           const Log& log) {
    if (cache_dir.empty()) return full_svd(a);
    const fs::path base = fs::path(cache_dir) / ("svd-" + key);
    const fs::path u = base.string() + ".u.mtx", s = base.string() + ".s.mtx", v = base.string() + ".v.mtx";
    if (fs::exists(u) && fs::exists(s) && fs::exists(v)) {
        log("svd: reusing cached factorization " + base.string());
        SvdFactors f;
        f.left = mm::read_dense_file(u);
        f.right = mm::read_dense_file(v);
        const DenseMatrix sv = mm::read_dense_file(s);
        f.values.assign(sv.values().begin(), sv.values().end());
        return f;
    }
    SvdFactors f = full_svd(a);
    Outputs cache(cache_dir);
    cache.add(u.filename().string(), dense_text(f.left));
    cache.add(s.filename().string(), dense_text(DenseMatrix(f.values.size(), 1, f.values)));
    cache.add(v.filename().string(), dense_text(f.right));
    cache.commit();
    return f;
}

void check_rank(std::size_t rank, const SparseMatrix& a, const SvdFactors* f) {
    const std::size_t limit = std::min(a.rows(), a.cols());
    if (rank < 1 || rank > limit) {
        throw InvalidArgument("invalid rank " + std::to_string(rank) + ": must be in [1, " + std::to_string(limit) +
                              "]");
    }
    if (f && rank > f->rank()) {
        throw InvalidArgument("invalid rank " + std::to_string(rank) + ": matrix has numerical rank " +
                              std::to_string(f->rank()));
    }
}

Json trace_json(const CompletionTrace& t) {
    return Json{{"norms", t.norms}, {"conviter", t.conviter}, {"converged", t.converged}, {"ps_percent", t.ps_percent}};
}

void cmd_index(const IndexOptions& o, const Common& c, const std::string& hash, const Log& log) {
    const std::string bytes = read_text(o.matrix);
    const SparseMatrix a = sparse_from_text(bytes, o.matrix);
    Outputs out(c.out);
    Json meta{{"method", o.method}, {"source", o.matrix}, {"M", a.rows()}, {"N", a.cols()}};
    if (o.method == "raw") {
        out.add("index.mtx", bytes);
    } else if (o.method == "svd") {
        check_rank(o.rank, a, nullptr);
        const SvdFactors full = cached_full_svd(a, fnv1a_hex(bytes), o.svd_cache, log);
        check_rank(o.rank, a, &full);
        const SvdFactors f = truncate(full, o.rank);
        out.add("index.mtx", dense_text(rank_k_reconstruct(f)));
        meta["rank"] = o.rank;
        meta["singular_values"] = f.values;
    } else if (o.method == "complete") {
        CompletionOptions opts;
        opts.maxiter = o.maxiter;
        opts.stable_window = o.stable_window;
        const CompletionResult r = complete(a, opts);
        if (!r.trace.converged) log("complete: no stable fixpoint within " + std::to_string(o.maxiter) + " iterations");
        out.add("index.mtx", dense_text(r.matrix));
        meta["maxiter"] = o.maxiter;
        meta["stable_window"] = o.stable_window;
        meta["trace"] = trace_json(r.trace);
        meta["zero_rows"] = r.similarity.zero_rows().size();
    } else {
        throw InvalidArgument("unknown index method '" + o.method + "' (raw, svd, complete)");
    }
    meta["config_hash"] = hash;
    out.add("index.json", dump(meta));
    out.commit();
    log("index: " + o.method + " -> " + out.dir().string());
}

// ---------------------------------------------------------------- eval / sweep

struct EvalInputs {
    std::string corpus, queries, query_ids, doc_ids, qrels;
    std::size_t points = 11;
};

struct LoadedQueries {
    QueryMatrix queries;
    std::vector<int> doc_ids;
    RelevanceJudgments judgments;
};

LoadedQueries load_queries(EvalInputs in, std::size_t terms, std::size_t documents) {
    if (!in.corpus.empty()) {
        const fs::path dir(in.corpus);
        if (in.queries.empty()) in.queries = (dir / "queries.mtx").string();
        if (in.query_ids.empty()) in.query_ids = (dir / "query_ids.txt").string();
        if (in.doc_ids.empty() && fs::exists(dir / "doc_ids.txt")) in.doc_ids = (dir / "doc_ids.txt").string();
    }
    if (in.queries.empty() || in.query_ids.empty()) throw InvalidArgument("need --queries and --query-ids, or --corpus");
    if (in.qrels.empty()) throw InvalidArgument("need --qrels");
    LoadedQueries l;
    l.queries.weights = mm::read_sparse_file(in.queries).to_dense();
    l.queries.ids = read_ids(in.query_ids);
    if (l.queries.ids.size() != l.queries.weights.rows()) {
        throw ShapeError("queries axis: " + std::to_string(l.queries.ids.size()) + " query ids for " +
                         std::to_string(l.queries.weights.rows()) + " query rows");
    }
    if (l.queries.weights.cols() != terms) {
        throw ShapeError("terms axis: queries have " + std::to_string(l.queries.weights.cols()) +
                         " term columns, index has " + std::to_string(terms) + " term rows");
    }
    if (!in.doc_ids.empty()) {
        l.doc_ids = read_ids(in.doc_ids);
        if (l.doc_ids.size() != documents) {
            throw ShapeError("documents axis: " + std::to_string(l.doc_ids.size()) + " document ids for " +
                             std::to_string(documents) + " index columns");
        }
    }
    l.judgments = parse_qrels(read_text(in.qrels));
    return l;
}

Json report_json(const EvalReport& r) {
    Json per = Json::array();
    for (const auto& q : r.per_query) per.push_back(Json{{"qid", q.qid}, {"avgp", q.avgp}});
    return Json{{"points", r.points}, {"per_query", per}, {"mean_avgp", r.mean_avgp}, {"warnings", r.warnings}};
}

std::string report_csv(const EvalReport& r) {
    std::string s = "qid,avgp\n";
    for (const auto& q : r.per_query) s += std::to_string(q.qid) + ',' + mm::format_real(q.avgp) + '\n';
    return s;
}

void cmd_eval(const std::string& index_path, const EvalInputs& in, const Common& c, const std::string& hash,
              const Log& log) {
    const SparseMatrix a = mm::read_sparse_file(index_path);
    const LoadedQueries l = load_queries(in, a.rows(), a.cols());
    const DocumentIndex index(a, l.doc_ids);
    const EvalReport r = evaluate(l.queries, index, l.judgments, in.points);

    Json j;
    const fs::path meta = fs::path(index_path).parent_path() / "index.json";
    j["index"] = fs::exists(meta) ? Json::parse(read_text(meta)) : Json{{"source", index_path}};
    const Json body = report_json(r);
    for (const auto& [k, v] : body.items()) j[k] = v;
    j["config_hash"] = hash;
    Outputs out(c.out);
    out.add("report.json", dump(j));
    out.add("report.csv", report_csv(r));
    out.commit();
    log("eval: mean 11-point avg precision " + mm::format_real(r.mean_avgp) + " over " +
        std::to_string(r.per_query.size()) + " queries");
}

struct SweepOptions {
    std::string matrix, ranks = "1-40";
    std::size_t maxiter = 100, stable_window = 3, nmf_rank = 0, nmf_iterations = 500;
    bool no_baselines = false;
};

void cmd_sweep(const SweepOptions& o, EvalInputs in, const Common& c, const std::string& hash, const Log& log) {
    std::string matrix = o.matrix;
    if (matrix.empty() && !in.corpus.empty()) matrix = (fs::path(in.corpus) / "matrix.mtx").string();
    if (matrix.empty()) throw InvalidArgument("need --matrix or --corpus");
    const SparseMatrix a = mm::read_sparse_file(matrix);
    const std::vector<std::size_t> ranks = parse_rank_list(o.ranks);
    for (std::size_t k : ranks) check_rank(k, a, nullptr);
    const LoadedQueries l = load_queries(in, a.rows(), a.cols());

    const SvdFactors full = full_svd(a);
    for (std::size_t k : ranks) check_rank(k, a, &full);
    std::vector<double> means(ranks.size());
    detail::parallel_for(ranks.size(), 0, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const DocumentIndex index(rank_k_reconstruct(truncate(full, ranks[i])), l.doc_ids);
            means[i] = evaluate(l.queries, index, l.judgments, in.points, 1).mean_avgp;
        }
    });
    std::size_t best = 0;
    for (std::size_t i = 1; i < ranks.size(); ++i)
        if (means[i] > means[best]) best = i;

    std::string csv = "method,rank,mean_avgp\n";
    for (std::size_t i = 0; i < ranks.size(); ++i)
        csv += "svd," + std::to_string(ranks[i]) + ',' + mm::format_real(means[i]) + '\n';
    Json j{{"matrix", matrix},
           {"points", in.points},
           {"svd", Json{{"ranks", ranks}, {"mean_avgp", means}}},
           {"best", Json{{"rank", ranks[best]}, {"mean_avgp", means[best]}}}};

    if (!o.no_baselines) {
        CompletionOptions copts;
        copts.maxiter = o.maxiter;
        copts.stable_window = o.stable_window;
        const CompletionResult r = complete(a, copts);
        const double cm = evaluate(l.queries, DocumentIndex(r.matrix, l.doc_ids), l.judgments, in.points).mean_avgp;
        csv += "complete,," + mm::format_real(cm) + '\n';
        Json cj = trace_json(r.trace);
        cj["mean_avgp"] = cm;
        j["completion"] = cj;

        const std::size_t nk = o.nmf_rank ? o.nmf_rank : ranks[best];
        check_rank(nk, a, nullptr);
        const NmfResult f = nmf_factorize(a, nk, o.nmf_iterations, c.seed);
        const double nm =
            evaluate(l.queries, DocumentIndex(multiply(f.basis, f.coefficients), l.doc_ids), l.judgments, in.points)
                .mean_avgp;
        csv += "nmf," + std::to_string(nk) + ',' + mm::format_real(nm) + '\n';
        j["nmf"] = Json{{"rank", nk}, {"iterations", o.nmf_iterations}, {"seed", c.seed}, {"mean_avgp", nm}};
    }
    j["config_hash"] = hash;
    Outputs out(c.out);
    out.add("sweep.csv", csv);
    out.add("sweep.json", dump(j));
    out.commit();
    log("sweep: best svd rank " + std::to_string(ranks[best]) + " mean " + mm::format_real(means[best]));
}

// ---------------------------------------------------------------- cluster / synth

struct ClusterOptions {
    std::string matrix, method = "spectral", reference, kernel = "gaussian";
    std::size_t k = 2, trials = 1, iterations = 500;
    double alpha = 1.0, c = 0.0, theta = 0.0;
    int degree = 1;
};

KernelSpec kernel_from(const ClusterOptions& o) {
    if (o.kernel == "gaussian") return KernelSpec::gaussian(o.alpha);
    if (o.kernel == "polynomial") return KernelSpec::polynomial(o.c, o.degree);
    if (o.kernel == "sigmoid") return KernelSpec::sigmoid(o.c, o.theta);
    throw InvalidArgument("unknown kernel '" + o.kernel + "' (gaussian, polynomial, sigmoid)");
}

// Kernel parameters have no defaults: the one the chosen kernel reads must be set.
void require_kernel_parameters(const CLI::App* sub, const ClusterOptions& o) {
    if (o.method != "spectral") return;
    std::vector<std::string> needed;
    if (o.kernel == "gaussian") needed = {"--alpha"};
    else if (o.kernel == "polynomial") needed = {"--c", "--degree"};
    else if (o.kernel == "sigmoid") needed = {"--c", "--theta"};
    for (const auto& name : needed)
        if (sub->get_option(name)->count() == 0) throw InvalidArgument(o.kernel + " kernel needs " + name);
}

void cmd_cluster(const ClusterOptions& o, const Common& c, const std::string& hash, const Log& log) {
    const ClusterMethod method = parse_cluster_method(o.method);
    if (o.trials < 1) throw InvalidArgument("--trials must be at least 1");
    std::optional<ClusterLabels> reference;
    if (!o.reference.empty()) reference = read_labels(o.reference);

    ClusteringRun run;
    std::optional<QualityScores> scores;
    if (method == ClusterMethod::Spectral) {
        run = spectral_cluster(mm::read_dense_file(o.matrix), o.k, kernel_from(o), c.seed);
    } else {
        const SparseMatrix a = mm::read_sparse_file(o.matrix);
        if (method == ClusterMethod::BipartiteSvd) {
            run = bipartite_svd_cluster(a, o.k, c.seed);
        } else if (reference) {
            if (reference->size() != a.cols()) throw ShapeError("reference labels do not match the document count");
            NmfTrials t = nmf_cluster_trials(a, o.k, c.seed, o.trials, *reference, o.iterations);
            run = std::move(t.runs.front());
            scores = t.mean;
        } else {
            run = nmf_cluster(a, o.k, c.seed, o.trials, o.iterations);
        }
    }
    Outputs out(c.out);
    out.add("labels.csv", labels_csv(run.labels));
    if (reference) {
        if (!scores) scores = eval_clustering(run.labels, *reference);
        Json j{{"method", std::string(to_string(run.method))},
               {"k", run.k},
               {"seed", run.seed},
               {"trials", run.trials},
               {"scores", scores_json(*scores)}};
        if (std::max(run.labels.k(), reference->k()) <= 8) j["matched_accuracy"] = matched_accuracy(run.labels, *reference);
        j["config_hash"] = hash;
        out.add("scores.json", dump(j));
    }
    out.commit();
    log("cluster: " + std::string(to_string(method)) + " k=" + std::to_string(o.k) + " -> " + out.dir().string());
}

struct SynthOptions {
    std::string kind = "rings";
    std::size_t n = 100, k = 3;
    double noise = 0.05, spacing = 6.0, sigma = 0.5;
};

void cmd_synth(const SynthOptions& o, const Common& c, const Log& log) {
    LabeledPoints p;
    if (o.kind == "rings") p = two_rings(o.n, o.noise, c.seed);
    else if (o.kind == "moons") p = half_moons(o.n, o.noise, c.seed);
    else if (o.kind == "blobs") p = gaussian_blobs(o.k, o.n, o.spacing, o.sigma, c.seed);
    else throw InvalidArgument("unknown dataset '" + o.kind + "' (rings, moons, blobs)");
    Outputs out(c.out);
    out.add("points.mtx", dense_text(p.points));
    out.add("labels.csv", labels_csv(p.labels));
    out.commit();
    log("synth: " + std::to_string(p.points.cols()) + " points -> " + out.dir().string());
}

}  // namespace

std::map<std::string, std::string> parse_config(std::string_view content) {
    std::map<std::string, std::string> out;
    std::istringstream is{std::string(content)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::string_view t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[' && t.back() == ']') continue;  // section headers are cosmetic
        const auto eq = t.find('=');
        if (eq == std::string_view::npos) throw ParseError("expected key = value", lineno);
        std::string key(trim(t.substr(0, eq)));
        std::replace(key.begin(), key.end(), '_', '-');
        std::string value(trim(t.substr(eq + 1)));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        if (key.empty()) throw ParseError("empty key", lineno);
        out[key] = value;
    }
    return out;
}

std::string fnv1a_hex(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : data) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::vector<std::size_t> parse_rank_list(std::string_view spec) {
    std::vector<std::size_t> out;
    auto num = [&](std::string_view s) {
        s = trim(s);
        std::size_t v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc() || p != s.data() + s.size()) {
            throw InvalidArgument("bad rank list '" + std::string(spec) + "'");
        }
        return v;
    };
    std::size_t start = 0;
    while (start <= spec.size()) {
        std::size_t end = spec.find(',', start);
        if (end == std::string_view::npos) end = spec.size();
        const std::string_view item = spec.substr(start, end - start);
        if (const auto dash = item.find('-'); dash != std::string_view::npos) {
            const std::size_t lo = num(item.substr(0, dash)), hi = num(item.substr(dash + 1));
            if (lo > hi) throw InvalidArgument("bad rank range '" + std::string(item) + "'");
            for (std::size_t k = lo; k <= hi; ++k) out.push_back(k);
        } else {
            out.push_back(num(item));
        }
        start = end + 1;
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spectral clustering, LSI and similarity-based matrix completion", "lsikit"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();

    Common common;
    CorpusOptions corpus;
    IndexOptions index;
    EvalInputs inputs;
    std::string eval_index;
    SweepOptions sweep;
    ClusterOptions cluster;
    SynthOptions synth;

    auto* corpus_cmd = app.add_subcommand("corpus", "Corpus tools")->require_subcommand(1);
    auto* build = corpus_cmd->add_subcommand("build", "Build a term-by-document matrix from SMART files");
    build->add_option("--docs", corpus.docs, "SMART document file")->required();
    build->add_option("--queries", corpus.queries, "SMART query file");
    build->add_option("--stoplist", corpus.stoplist, "Stop list file (default: Snowball English)");
    build->add_option("--fields", corpus.fields, "Field tags to index, e.g. W or TW");
    build->add_option("--min-length", corpus.min_length, "Shortest kept token");
    build->add_option("--log-scale", corpus.log_scale, "Apply ln(x + 1)");
    build->add_flag("--normalize-columns", corpus.normalize_columns, "Scale columns by diag(AᵀAe)^-1/2");
    build->add_option("--query-ids", corpus.query_ids, "file: ids from .I; sequential: 1, 2, ...");
    add_common(build, common);

    auto* index_cmd = app.add_subcommand("index", "Build a retrieval index");
    index_cmd->add_option("--matrix", index.matrix, "Term-by-document Matrix Market file")->required();
    index_cmd->add_option("--method", index.method, "raw, svd or complete");
    index_cmd->add_option("--rank", index.rank, "Truncation rank for svd");
    index_cmd->add_option("--maxiter", index.maxiter, "Completion iteration cap");
    index_cmd->add_option("--stable-window", index.stable_window, "Unchanged iterations required to stop");
    index_cmd->add_option("--svd-cache", index.svd_cache, "Directory caching the full factorization");
    add_common(index_cmd, common);

    auto add_inputs = [&](CLI::App* sub) {
        sub->add_option("--corpus", inputs.corpus, "Directory written by corpus build");
        sub->add_option("--queries", inputs.queries, "Query Matrix Market file (Q × M)");
        sub->add_option("--query-ids", inputs.query_ids, "Query id list");
        sub->add_option("--doc-ids", inputs.doc_ids, "Document id list");
        sub->add_option("--qrels", inputs.qrels, "Relevance judgments");
        sub->add_option("--points", inputs.points, "Interpolation points");
    };
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate queries against an index");
    eval_cmd->add_option("--index", eval_index, "Index Matrix Market file")->required();
    add_inputs(eval_cmd);
    add_common(eval_cmd, common);

    auto* sweep_cmd = app.add_subcommand("sweep", "Mean precision over SVD ranks plus baselines");
    sweep_cmd->add_option("--matrix", sweep.matrix, "Term-by-document matrix (default: <corpus>/matrix.mtx)");
    sweep_cmd->add_option("--ranks", sweep.ranks, "Rank list, e.g. 1-40 or 2,5,10");
    sweep_cmd->add_option("--maxiter", sweep.maxiter, "Completion iteration cap");
    sweep_cmd->add_option("--stable-window", sweep.stable_window, "Unchanged iterations required to stop");
    sweep_cmd->add_option("--nmf-rank", sweep.nmf_rank, "NMF rank (0: best SVD rank)");
    sweep_cmd->add_option("--nmf-iterations", sweep.nmf_iterations, "NMF update count");
    sweep_cmd->add_flag("--no-baselines", sweep.no_baselines, "Skip completion and NMF rows");
    add_inputs(sweep_cmd);
    add_common(sweep_cmd, common);

    auto* cluster_cmd = app.add_subcommand("cluster", "Cluster points or documents");
    cluster_cmd->add_option("--matrix", cluster.matrix, "Points (dim × n) or term-by-document matrix")->required();
    cluster_cmd->add_option("--method", cluster.method, "spectral, bipartite-svd or nmf");
    cluster_cmd->add_option("--k", cluster.k, "Number of clusters");
    cluster_cmd->add_option("--reference", cluster.reference, "Reference labels for scoring");
    cluster_cmd->add_option("--kernel", cluster.kernel, "gaussian, polynomial or sigmoid");
    cluster_cmd->add_option("--alpha", cluster.alpha, "Gaussian width");
    cluster_cmd->add_option("--c", cluster.c, "Polynomial offset / sigmoid slope");
    cluster_cmd->add_option("--degree", cluster.degree, "Polynomial degree");
    cluster_cmd->add_option("--theta", cluster.theta, "Sigmoid offset");
    cluster_cmd->add_option("--trials", cluster.trials, "NMF trials to average");
    cluster_cmd->add_option("--iterations", cluster.iterations, "NMF update count");
    add_common(cluster_cmd, common);

    auto* synth_cmd = app.add_subcommand("synth", "Generate a labeled 2-D point set");
    synth_cmd->add_option("--kind", synth.kind, "rings, moons or blobs");
    synth_cmd->add_option("--n", synth.n, "Points per class");
    synth_cmd->add_option("--k", synth.k, "Blob count");
    synth_cmd->add_option("--noise", synth.noise, "Jitter for rings and moons");
    synth_cmd->add_option("--spacing", synth.spacing, "Blob center spacing");
    synth_cmd->add_option("--sigma", synth.sigma, "Blob standard deviation");
    add_common(synth_cmd, common);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    CLI::App* active = nullptr;
    for (CLI::App* sub : {build, index_cmd, eval_cmd, sweep_cmd, cluster_cmd, synth_cmd})
        if (sub->parsed()) active = sub;

    try {
        apply_config(active, common.config);
        const std::string hash = config_hash(active);
        const Log log(err, common.quiet);
        if (active == build) cmd_corpus_build(corpus, common, hash, log);
        else if (active == index_cmd) cmd_index(index, common, hash, log);
        else if (active == eval_cmd) cmd_eval(eval_index, inputs, common, hash, log);
        else if (active == sweep_cmd) cmd_sweep(sweep, inputs, common, hash, log);
        else if (active == cluster_cmd) {
            require_kernel_parameters(cluster_cmd, cluster);
            cmd_cluster(cluster, common, hash, log);
        }
        else cmd_synth(synth, common, log);
    } catch (const CLI::Error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace lsikit::cli
