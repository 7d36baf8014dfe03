// Command-line front end: dataset splitting, heuristic scoring, training,
// evaluation, incompleteness analysis, and degree-scaling benchmarks.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <thread>

#include "linkpred/analysis.hpp"
#include "linkpred/config.hpp"
#include "linkpred/dataio.hpp"
#include "linkpred/metrics.hpp"
#include "linkpred/pairwise.hpp"
#include "linkpred/pipeline.hpp"
#include "linkpred/predictors.hpp"
#include "linkpred/synth.hpp"

namespace fs = std::filesystem;
using namespace linkpred;

namespace {

// ---------------------------------------------------------------- logging

int log_level() {  // 0 quiet, 1 info, 2 debug
  static int level = [] {
    const char* env = std::getenv("LINKPRED_LOG");
    if (!env) return 1;
    std::string v(env);
    if (v == "quiet") return 0;
    if (v == "debug") return 2;
    return 1;
  }();
  return level;
}

void info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "[linkpred] " << msg << "\n";
}

// ---------------------------------------------------------- split dir IO

struct SplitData {
  EvalSplit split;
  std::vector<std::string> ids;
  std::string source;  // original edges path, for reporting
  // populated only for weighted graphs, aligned with the split lists
  std::vector<double> train_weights, valid_weights;
};

void save_split_dir(const fs::path& dir, const SplitData& data,
                    std::uint64_t seed, const std::string& ratios) {
  fs::create_directories(dir);
  {
    std::ofstream nodes(dir / "nodes.txt");
    for (const auto& id : data.ids) nodes << id << '\n';
    if (!nodes) throw std::runtime_error("cannot write nodes.txt");
  }
  write_edge_list((dir / "train.txt").string(), data.split.train, data.ids,
                  data.train_weights);
  write_edge_list((dir / "valid.txt").string(), data.split.valid, data.ids,
                  data.valid_weights);
  write_edge_list((dir / "test.txt").string(), data.split.test, data.ids);
  write_edge_list((dir / "negatives.txt").string(),
                  data.split.shared_negatives, data.ids);
  std::ofstream meta(dir / "split.meta");
  meta << "n=" << data.split.n << '\n'
       << "seed=" << seed << '\n'
       << "ratios=" << ratios << '\n'
       << "edges=" << data.source << '\n';
  if (!meta) throw std::runtime_error("cannot write split.meta");
}

std::vector<Edge> load_pairs(const fs::path& path,
                             const std::unordered_map<std::string, NodeId>& index,
                             std::vector<double>* weights = nullptr) {
  EdgeListData raw = load_edge_list(path.string());
  std::vector<Edge> out;
  out.reserve(raw.pairs.size());
  for (auto [u, v] : raw.pairs) {
    auto a = index.find(raw.ids[u]);
    auto b = index.find(raw.ids[v]);
    if (a == index.end() || b == index.end())
      throw std::runtime_error(path.string() + ": node '" +
                               raw.ids[a == index.end() ? u : v] +
                               "' is not a node of the graph");
    out.push_back({a->second, b->second});
  }
  if (weights && raw.weighted) *weights = std::move(raw.weights);
  return out;
}

SplitData load_split_dir(const fs::path& dir) {
  SplitData data;
  std::ifstream nodes(dir / "nodes.txt");
  if (!nodes)
    throw std::runtime_error("not a split directory (missing nodes.txt): " +
                             dir.string());
  std::string line;
  std::unordered_map<std::string, NodeId> index;
  while (std::getline(nodes, line)) {
    if (line.empty()) continue;
    index.emplace(line, static_cast<NodeId>(data.ids.size()));
    data.ids.push_back(line);
  }
  data.split.n = data.ids.size();
  data.split.train = load_pairs(dir / "train.txt", index, &data.train_weights);
  data.split.valid = load_pairs(dir / "valid.txt", index, &data.valid_weights);
  data.split.test = load_pairs(dir / "test.txt", index);
  data.split.shared_negatives = load_pairs(dir / "negatives.txt", index);
  std::ifstream meta(dir / "split.meta");
  while (std::getline(meta, line)) {
    if (line.starts_with("edges=")) data.source = line.substr(6);
  }
  if (data.source.empty()) data.source = dir.filename().string();
  return data;
}

// ------------------------------------------------------------ eval utils

std::vector<double> score_parallel(const Graph& g, const DenseMatrix& h,
                                   std::span<const Edge> links,
                                   ModelParams& params, int threads) {
  if (threads <= 1 || links.size() < 64)
    return score_links(g, h, links, params);
  std::vector<std::vector<double>> chunks(threads);
  std::vector<std::thread> pool;
  std::size_t per = (links.size() + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    std::size_t lo = std::min(links.size(), t * per);
    std::size_t hi = std::min(links.size(), lo + per);
    pool.emplace_back([&, t, lo, hi]() {
      chunks[t] = score_links(g, h, links.subspan(lo, hi - lo), params);
    });
  }
  for (auto& th : pool) th.join();
  std::vector<double> out;
  out.reserve(links.size());
  for (auto& c : chunks) out.insert(out.end(), c.begin(), c.end());
  return out;
}

Graph inference_graph(const SplitData& data, bool use_valid_edges) {
  std::vector<Edge> edges = data.split.train;
  std::vector<double> weights = data.train_weights;
  if (use_valid_edges) {
    edges.insert(edges.end(), data.split.valid.begin(), data.split.valid.end());
    if (!weights.empty())
      weights.insert(weights.end(), data.valid_weights.begin(),
                     data.valid_weights.end());
  }
  return Graph::from_edge_list(edges, data.split.n,
                               weights.empty() ? nullptr : &weights);
}

std::string metric_name(const MetricSpec& spec) {
  if (spec.kind == MetricKind::Mrr) return "mrr";
  return "hits@" + std::to_string(spec.k);
}

// ------------------------------------------------------------ subcommands

struct SplitArgs {
  std::string edges, out, ratios = "0.7,0.1,0.2";
  std::uint64_t seed = 1;
  std::size_t negatives = 10000;
};

int run_split(const SplitArgs& args) {
  EdgeListData raw = load_edge_list(args.edges);
  std::stringstream rs(args.ratios);
  std::string tok;
  std::vector<double> r;
  while (std::getline(rs, tok, ',')) r.push_back(std::stod(tok));
  if (r.size() != 3) throw std::runtime_error("--ratios expects three values");
  Graph full = Graph::from_edge_list(raw.pairs, raw.n(),
                                     raw.weighted ? &raw.weights : nullptr);
  auto listed = full.edge_list();  // sorted (u,v) pairs with weights
  std::vector<Edge> undirected;
  for (auto& [e, w] : listed) undirected.push_back(e);
  SplitData data;
  data.split = random_split(undirected, r[0], r[1], r[2], args.seed, raw.n());
  if (raw.weighted) {
    auto weight_of = [&](Edge e) {
      auto it = std::lower_bound(
          listed.begin(), listed.end(), e,
          [](const auto& entry, Edge key) { return entry.first < key; });
      return it->second;
    };
    for (Edge e : data.split.train) data.train_weights.push_back(weight_of(e));
    for (Edge e : data.split.valid) data.valid_weights.push_back(weight_of(e));
  }
  std::size_t available = raw.n() * (raw.n() - 1) / 2 - full.edge_count();
  std::size_t count = std::min(args.negatives, available);
  data.split.shared_negatives = sample_negatives(full, count, args.seed + 1);
  data.ids = raw.ids;
  data.source = args.edges;
  save_split_dir(args.out, data, args.seed, args.ratios);
  info("split " + std::to_string(undirected.size()) + " edges into " +
       std::to_string(data.split.train.size()) + "/" +
       std::to_string(data.split.valid.size()) + "/" +
       std::to_string(data.split.test.size()) + " with " +
       std::to_string(count) + " negatives -> " + args.out);
  return 0;
}

struct HeuristicArgs {
  std::string graph, links, method = "cn", out;
  int l = 2;
  double beta = 0.5;
  int k = 1;
};

int run_heuristic(const HeuristicArgs& args) {
  EdgeListData raw = load_edge_list(args.graph);
  Graph g = Graph::from_edge_list(raw.pairs, raw.n(),
                                  raw.weighted ? &raw.weights : nullptr);
  std::unordered_map<std::string, NodeId> index;
  for (NodeId i = 0; i < raw.ids.size(); ++i) index.emplace(raw.ids[i], i);
  std::vector<Edge> links = load_pairs(args.links, index);

  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!args.out.empty()) {
    file.open(args.out);
    if (!file) throw std::runtime_error("cannot write " + args.out);
    os = &file;
  }
  if (args.method == "cn" || args.method == "ra" || args.method == "aa") {
    Heuristic kind = args.method == "cn"   ? Heuristic::CN
                     : args.method == "ra" ? Heuristic::RA
                                           : Heuristic::AA;
    *os << "u,v,score\n";
    for (auto [u, v] : links)
      *os << raw.ids[u] << ',' << raw.ids[v] << ','
          << heuristic_score(g, u, v, kind) << '\n';
  } else if (args.method == "neo") {
    NeoGnnConfig cfg;
    cfg.max_hop = args.l;
    cfg.beta = args.beta;
    NeoGnnScorer scorer(g, cfg);
    *os << "u,v,score\n";
    for (auto [u, v] : links)
      *os << raw.ids[u] << ',' << raw.ids[v] << ',' << scorer(u, v) << '\n';
  } else if (args.method == "buddy") {
    BuddyConfig cfg;
    cfg.max_hop = args.k;
    *os << "u,v";
    for (int a = 1; a <= args.k; ++a)
      for (int b = 1; b <= args.k; ++b) *os << ",a_" << a << '_' << b;
    for (int a = 1; a <= args.k; ++a) *os << ",b_" << a << "_ij";
    for (int a = 1; a <= args.k; ++a) *os << ",b_" << a << "_ji";
    *os << '\n';
    for (auto [u, v] : links) {
      *os << raw.ids[u] << ',' << raw.ids[v];
      for (double x : buddy_features(g, u, v, cfg)) *os << ',' << x;
      *os << '\n';
    }
  } else {
    throw std::runtime_error("unknown method '" + args.method + "'");
  }
  return 0;
}

int run_train(const std::string& config_path) {
  TrainJob job = TrainJob::from_file(config_path);
  SplitData data;
  if (!job.split_dir.empty()) {
    data = load_split_dir(job.split_dir);
  } else {
    EdgeListData raw = load_edge_list(job.edges_path);
    Graph full = Graph::from_edge_list(raw.pairs, raw.n(),
                                       raw.weighted ? &raw.weights : nullptr);
    auto listed = full.edge_list();
    std::vector<Edge> undirected;
    for (auto& [e, w] : listed) undirected.push_back(e);
    data.split = random_split(undirected, job.r_train, job.r_valid, job.r_test,
                              job.split_seed, raw.n());
    if (raw.weighted) {
      auto weight_of = [&](Edge e) {
        auto it = std::lower_bound(
            listed.begin(), listed.end(), e,
            [](const auto& entry, Edge key) { return entry.first < key; });
        return it->second;
      };
      for (Edge e : data.split.train) data.train_weights.push_back(weight_of(e));
      for (Edge e : data.split.valid) data.valid_weights.push_back(weight_of(e));
    }
    std::size_t available =
        raw.n() * (raw.n() - 1) / 2 - full.edge_count();
    data.split.shared_negatives =
        sample_negatives(full, std::min(job.negatives, available),
                         job.split_seed + 1);
    data.ids = raw.ids;
    data.source = job.edges_path;
  }
  data.split.metric = job.metric;
  DenseMatrix x =
      load_features(job.features_path, data.split.n, job.fallback);
  std::mt19937_64 rng(job.train.seed);
  ModelParams params = job.train.init_model(x.cols, rng);

  std::ofstream log;
  std::ostream* log_os = nullptr;
  if (!job.log_path.empty()) {
    if (auto parent = fs::path(job.log_path).parent_path(); !parent.empty())
      fs::create_directories(parent);
    log.open(job.log_path);
    if (!log) throw std::runtime_error("cannot write log: " + job.log_path);
    log_os = &log;
  }
  info("training " + std::string(variant_name(job.train.variant)) + " on " +
       data.source + " (" + std::to_string(data.split.train.size()) +
       " train edges, " + std::to_string(x.cols) + " features)");
  TrainResult result = train_model(
      data.split, x, params, job.train, log_os,
      data.train_weights.empty() ? nullptr : &data.train_weights);

  Graph g_test = inference_graph(data, job.use_valid_edges);
  double test_metric =
      eval_metric(g_test, x, params, data.split.test,
                  data.split.shared_negatives, job.metric);
  if (auto parent = fs::path(job.checkpoint_path).parent_path();
      !parent.empty())
    fs::create_directories(parent);
  save_checkpoint(params, job.checkpoint_path,
                  {{"features", job.features_path},
                   {"dataset", data.source},
                   {"metric", metric_name(job.metric)},
                   {"seed", std::to_string(job.train.seed)}});
  std::cout << "best_valid_" << metric_name(job.metric) << ','
            << result.best_valid << ",epoch," << result.best_epoch << '\n';
  std::cout << "test_" << metric_name(job.metric) << ',' << test_metric
            << '\n';
  info("checkpoint -> " + job.checkpoint_path);
  return 0;
}

struct EvalArgs {
  std::string checkpoint, split, metric = "hits@100", features, out;
  bool use_valid_edges = false;
  int neg_per_pos = 100;
  std::uint64_t seed = 1;
  int threads = 1;
};

int run_eval(const EvalArgs& args) {
  std::map<std::string, std::string> echo;
  ModelParams params = load_checkpoint(args.checkpoint, &echo);
  SplitData data = load_split_dir(args.split);
  MetricSpec spec = parse_metric(args.metric);
  std::string features_path =
      !args.features.empty() ? args.features
                             : (echo.count("features") ? echo["features"] : "");
  DenseMatrix x = load_features(features_path, data.split.n,
                                FeatureFallback::Ones);
  if (x.cols != params.mpnn.config.in_dim)
    throw std::runtime_error("feature width " + std::to_string(x.cols) +
                             " does not match checkpoint in_dim " +
                             std::to_string(params.mpnn.config.in_dim));
  Graph g = inference_graph(data, args.use_valid_edges);
  DenseMatrix h = mpnn_embed(g, x, params.mpnn);

  double value = 0.0;
  if (spec.kind == MetricKind::HitsAtK) {
    auto pos = score_parallel(g, h, data.split.test, params, args.threads);
    auto neg = score_parallel(g, h, data.split.shared_negatives, params,
                              args.threads);
    value = hits_at_k(pos, neg, spec.k);
  } else {
    // per-positive negatives, resampled deterministically from the full graph
    std::vector<Edge> all = data.split.train;
    all.insert(all.end(), data.split.valid.begin(), data.split.valid.end());
    all.insert(all.end(), data.split.test.begin(), data.split.test.end());
    Graph full = Graph::from_edge_list(all, data.split.n);
    data.split.per_positive_negatives.clear();
    for (std::size_t i = 0; i < data.split.test.size(); ++i)
      data.split.per_positive_negatives.push_back(
          sample_negatives(full, args.neg_per_pos, args.seed + i));
    auto pos = score_parallel(g, h, data.split.test, params, args.threads);
    std::vector<std::vector<double>> negs;
    for (const auto& list : data.split.per_positive_negatives)
      negs.push_back(score_parallel(g, h, list, params, args.threads));
    value = mrr(pos, negs);
  }
  std::string dataset = fs::path(data.source).filename().string();
  std::string row = dataset + ',' +
                    variant_name(params.predictor.variant) + ',' +
                    metric_name(spec) + ',' + std::to_string(value) + ',' +
                    (echo.count("seed") ? echo["seed"] : "0");
  std::cout << "dataset,variant,metric,value,seed\n" << row << '\n';
  if (!args.out.empty()) {
    bool fresh = !fs::exists(args.out);
    std::ofstream out(args.out, std::ios::app);
    if (!out) throw std::runtime_error("cannot write " + args.out);
    if (fresh) out << "dataset,variant,metric,value,seed\n";
    out << row << '\n';
  }
  return 0;
}

struct AnalyzeArgs {
  std::string split, out, metric = "hits@100";
};

int run_analyze(const AnalyzeArgs& args) {
  SplitData data = load_split_dir(args.split);
  MetricSpec spec = parse_metric(args.metric);
  if (spec.kind != MetricKind::HitsAtK)
    throw std::runtime_error("analyze supports hits@K only");
  data.split.metric = spec;
  fs::create_directories(args.out);

  Graph incomplete = Graph::from_edge_list(data.split.train, data.split.n);
  std::vector<Edge> all = data.split.train;
  all.insert(all.end(), data.split.valid.begin(), data.split.valid.end());
  all.insert(all.end(), data.split.test.begin(), data.split.test.end());
  Graph complete = Graph::from_edge_list(all, data.split.n);

  struct Pop {
    const char* name;
    const Graph* graph;
    const std::vector<Edge>* links;
  };
  Pop pops[] = {
      {"train_incomplete", &incomplete, &data.split.train},
      {"test_incomplete", &incomplete, &data.split.test},
      {"train_complete", &complete, &data.split.train},
      {"test_complete", &complete, &data.split.test},
  };
  for (const auto& pop : pops) {
    CnHistogram h = cn_distribution(*pop.graph, *pop.links, pop.name);
    std::ofstream os(fs::path(args.out) / ("hist_" + std::string(pop.name) +
                                           ".csv"));
    h.write_csv(os);
  }
  DegradationReport report = degradation_report(data.split);
  {
    std::ofstream os(fs::path(args.out) / "degradation.csv");
    report.write_csv(os);
  }
  std::cout << "population,graph,hits_at_" << spec.k << '\n'
            << "train,incomplete," << report.train_incomplete << '\n'
            << "train,complete," << report.train_complete << '\n'
            << "test,incomplete," << report.test_incomplete << '\n'
            << "test,complete," << report.test_complete << '\n';
  info("histograms and degradation table -> " + args.out);
  return 0;
}

struct BenchArgs {
  std::string degrees = "4,8,16,32,64";
  int repeats = 7;
  std::size_t feature_dim = 32;
  std::uint64_t seed = 1;
  std::string out;
};


int run_bench(const BenchArgs& args) {
  std::vector<int> degrees;
  {
    std::stringstream ds(args.degrees);
    std::string tok;
    while (std::getline(ds, tok, ',')) degrees.push_back(std::stoi(tok));
  }
  const std::size_t f = args.feature_dim;
  std::ostringstream table;
  table << "degree,ncn_feature_us_per_link,ncn_us_per_link,mlp_baseline_us,"
           "ncnc1_us_per_link,ncnc_over_ncn\n";
  std::vector<double> log_d, log_t;
  std::vector<double> ratios;
  for (int d : degrees) {
    std::size_t blocks = std::max<std::size_t>(2, 512 / (2 * d));
    Graph g = bipartite_blocks(blocks, d);
    // a three-node path on the side: its end pair has exactly one common
    // neighbor, giving a baseline link whose cost carries the full MLP head
    // but a degree-independent pool
    std::vector<Edge> edges;
    for (auto& [e, w] : g.edge_list()) edges.push_back(e);
    std::size_t n = g.node_count() + 3;
    NodeId pa = static_cast<NodeId>(n - 3), pc = static_cast<NodeId>(n - 2),
           pb = static_cast<NodeId>(n - 1);
    edges.push_back({pa, pc});
    edges.push_back({pc, pb});
    g = Graph::from_edge_list(edges, n);
    std::mt19937_64 rng(args.seed + static_cast<std::uint64_t>(d));
    DenseMatrix h(n, f);
    std::uniform_real_distribution<double> u(-1, 1);
    for (auto& v : h.data) v = u(rng);

    MpnnConfig mcfg;
    mcfg.layers = 1;
    mcfg.in_dim = f;
    mcfg.hidden_dim = f;
    PredictorConfig pcfg;
    pcfg.variant = Variant::NCN;
    pcfg.mlp_hidden = f;
    ModelParams params = ModelParams::init(mcfg, pcfg, rng);

    // same-side pairs have d common neighbors; block edges have none but
    // 2(d-1) one-sided completion candidates
    std::vector<Edge> pool_seed, cross_seed;
    for (std::size_t b = 0; b < blocks; ++b) {
      NodeId base = static_cast<NodeId>(b * 2 * d);
      for (int q = 0; q + 1 < d; q += 2)
        pool_seed.push_back({static_cast<NodeId>(base + q),
                             static_cast<NodeId>(base + q + 1)});
      for (int q = 0; q < d; ++q)
        cross_seed.push_back({static_cast<NodeId>(base + q),
                              static_cast<NodeId>(base + d + q)});
    }
    // every timed call scores the same link count, so fixed per-call costs
    // (tape setup, copying H) cancel against the baseline
    auto tile = [](const std::vector<Edge>& seed_links, std::size_t count) {
      std::vector<Edge> out;
      out.reserve(count);
      for (std::size_t k = 0; k < count; ++k)
        out.push_back(seed_links[k % seed_links.size()]);
      return out;
    };
    const std::size_t pool_count = 8192, cross_count = 512;
    std::vector<Edge> pool_links = tile(pool_seed, pool_count);
    std::vector<Edge> baseline_links = tile({Edge{pa, pb}}, pool_count);
    std::vector<Edge> cross_links = tile(cross_seed, cross_count);

    auto time_per_link = [&](std::span<const Edge> links, Variant v,
                             int iters) {
      params.predictor.variant = v;
      params.predictor.completion_iters = iters;
      double best = std::numeric_limits<double>::infinity();
      for (int r = 0; r < args.repeats + 1; ++r) {
        auto t0 = std::chrono::steady_clock::now();
        volatile double sink = score_links(g, h, links, params)[0];
        (void)sink;
        auto t1 = std::chrono::steady_clock::now();
        double per =
            std::chrono::duration<double, std::micro>(t1 - t0).count() /
            static_cast<double>(links.size());
        if (r > 0) best = std::min(best, per);  // first pass is warmup
      }
      return best;
    };
    // the degree-dependent stage of a score: neighbor-list merge plus the
    // d*F pooled sum; the MLP head is degree-independent (its cost appears
    // in the baseline column)
    auto time_feature = [&](std::span<const Edge> links) {
      double best = std::numeric_limits<double>::infinity();
      for (int r = 0; r < args.repeats + 1; ++r) {
        double sink = 0.0;
        auto t0 = std::chrono::steady_clock::now();
        for (auto [a, b] : links) sink += ncn_feature(g, h, a, b)[0];
        auto t1 = std::chrono::steady_clock::now();
        volatile double keep = sink;
        (void)keep;
        double per =
            std::chrono::duration<double, std::micro>(t1 - t0).count() /
            static_cast<double>(links.size());
        if (r > 0) best = std::min(best, per);
      }
      return best;
    };
    double t_feature = time_feature(pool_links);
    double t_feature_base = time_feature(baseline_links);
    double t_ncn = time_per_link(pool_links, Variant::NCN, 0);
    double t_base = time_per_link(baseline_links, Variant::NCN, 0);
    double t_ncn_cross = time_per_link(cross_links, Variant::NCN, 0);
    double t_ncnc = time_per_link(cross_links, Variant::NCNC, 1);
    double ratio = t_ncnc / t_ncn_cross;
    ratios.push_back(ratio);
    table << d << ',' << t_feature << ',' << t_ncn << ',' << t_base << ','
          << t_ncnc << ',' << ratio << '\n';
    if (t_feature > t_feature_base) {
      log_d.push_back(std::log(static_cast<double>(d)));
      log_t.push_back(std::log(t_feature - t_feature_base));
    }
  }
  // least-squares slope of log(feature-stage time) vs log degree
  double slope = 0.0, r2 = 0.0;
  if (log_d.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    double m = static_cast<double>(log_d.size());
    for (std::size_t k = 0; k < log_d.size(); ++k) {
      sx += log_d[k];
      sy += log_t[k];
      sxx += log_d[k] * log_d[k];
      sxy += log_d[k] * log_t[k];
      syy += log_t[k] * log_t[k];
    }
    slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    double denom = (m * sxx - sx * sx) * (m * syy - sy * sy);
    r2 = denom > 0 ? (m * sxy - sx * sy) * (m * sxy - sx * sy) / denom : 0.0;
  }
  table << "slope," << slope << ",r2," << r2 << ",\n";
  std::cout << table.str();
  if (!args.out.empty()) {
    std::ofstream os(args.out);
    if (!os) throw std::runtime_error("cannot write " + args.out);
    os << table.str();
  }
  return 0;
}

struct SynthArgs {
  std::string kind = "clustered", out_edges, out_features;
  std::size_t nodes = 2708;
  std::size_t community_size = 10;
  double within_degree = 3.0;
  double cross_degree = 0.9;
  std::size_t topics = 8;
  std::size_t feature_dim = 16;
  double feature_noise = 0.4;
  double community_signal = 0.0;
  std::size_t edges_per_node = 2;  // preferential attachment
  std::uint64_t seed = 1;
};

int run_synth(const SynthArgs& args) {
  if (args.out_edges.empty())
    throw std::runtime_error("--out-edges is required");
  if (args.kind == "clustered") {
    ClusteredGraphSpec spec;
    spec.nodes = args.nodes;
    spec.community_size = args.community_size;
    spec.within_degree = args.within_degree;
    spec.cross_degree = args.cross_degree;
    spec.topics = args.topics;
    spec.feature_dim = args.feature_dim;
    spec.feature_noise = args.feature_noise;
    spec.community_signal = args.community_signal;
    spec.seed = args.seed;
    SyntheticDataset data = make_clustered_graph(spec);
    std::vector<std::string> ids;
    for (std::size_t v = 0; v < data.nodes; ++v) ids.push_back(std::to_string(v));
    write_edge_list(args.out_edges, data.edges, ids);
    if (!args.out_features.empty()) {
      std::ofstream os(args.out_features);
      for (std::size_t i = 0; i < data.features.rows; ++i) {
        for (std::size_t j = 0; j < data.features.cols; ++j)
          os << (j ? "," : "") << data.features.at(i, j);
        os << '\n';
      }
      if (!os) throw std::runtime_error("cannot write " + args.out_features);
    }
    info("clustered graph: " + std::to_string(data.nodes) + " nodes, " +
         std::to_string(data.edges.size()) + " edges");
  } else if (args.kind == "pa") {
    auto edges = preferential_attachment(args.nodes, args.edges_per_node,
                                         args.seed);
    std::vector<std::string> ids;
    for (std::size_t v = 0; v < args.nodes; ++v) ids.push_back(std::to_string(v));
    write_edge_list(args.out_edges, edges, ids);
    info("preferential-attachment graph: " + std::to_string(args.nodes) +
         " nodes, " + std::to_string(edges.size()) + " edges in time order");
  } else {
    throw std::runtime_error("unknown synth kind '" + args.kind + "'");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Neural-common-neighbor link prediction toolkit"};
  app.require_subcommand(1);

  SplitArgs split_args;
  auto* split = app.add_subcommand("split", "split an edge list 70/10/20");
  split->add_option("--edges", split_args.edges, "edge list file")->required();
  split->add_option("--ratios", split_args.ratios, "train,valid,test");
  split->add_option("--seed", split_args.seed, "shuffle seed");
  split->add_option("--negatives", split_args.negatives,
                    "shared negative sample count");
  split->add_option("--out", split_args.out, "output directory")->required();

  HeuristicArgs h_args;
  auto* heur = app.add_subcommand("heuristic", "score links with a heuristic");
  heur->add_option("--graph", h_args.graph, "edge list file")->required();
  heur->add_option("--links", h_args.links, "target links file")->required();
  heur->add_option("--method", h_args.method, "cn|ra|aa|neo|buddy");
  heur->add_option("--l", h_args.l, "max hop (neo)");
  heur->add_option("--beta", h_args.beta, "decay (neo)");
  heur->add_option("--k", h_args.k, "max hop (buddy)");
  heur->add_option("--out", h_args.out, "CSV output (default stdout)");

  std::string train_config;
  auto* train = app.add_subcommand("train", "train a model from a config");
  train->add_option("--config", train_config, "config file")->required();

  EvalArgs e_args;
  auto* eval = app.add_subcommand("eval", "evaluate a checkpoint on a split");
  eval->add_option("--checkpoint", e_args.checkpoint, "model file")->required();
  eval->add_option("--split", e_args.split, "split directory")->required();
  eval->add_option("--metric", e_args.metric, "hits@K or mrr");
  eval->add_option("--features", e_args.features, "feature CSV override");
  eval->add_flag("--use-valid-edges", e_args.use_valid_edges,
                 "merge valid edges into the inference graph");
  eval->add_option("--neg-per-pos", e_args.neg_per_pos,
                   "negatives per positive (mrr)");
  eval->add_option("--seed", e_args.seed, "negative sampling seed (mrr)");
  eval->add_option("--threads", e_args.threads, "scoring threads");
  eval->add_option("--out", e_args.out, "append the CSV row to this file");

  AnalyzeArgs a_args;
  auto* analyze =
      app.add_subcommand("analyze", "incompleteness histograms and table");
  analyze->add_option("--split", a_args.split, "split directory")->required();
  analyze->add_option("--metric", a_args.metric, "hits@K");
  analyze->add_option("--out", a_args.out, "output directory")->required();

  BenchArgs b_args;
  auto* bench =
      app.add_subcommand("bench", "degree-scaling timings for NCN and NCNC");
  bench->add_option("--degrees", b_args.degrees, "comma-separated degrees");
  bench->add_option("--repeats", b_args.repeats, "timing repeats");
  bench->add_option("--feature-dim", b_args.feature_dim, "representation width");
  bench->add_option("--seed", b_args.seed, "rng seed");
  bench->add_option("--out", b_args.out, "CSV output file");

  SynthArgs s_args;
  auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  synth->add_option("--kind", s_args.kind, "clustered|pa");
  synth->add_option("--nodes", s_args.nodes, "node count");
  synth->add_option("--community-size", s_args.community_size, "community size");
  synth->add_option("--within-degree", s_args.within_degree,
                    "expected within-community degree");
  synth->add_option("--cross-degree", s_args.cross_degree,
                    "expected same-topic cross degree");
  synth->add_option("--topics", s_args.topics, "topic count");
  synth->add_option("--feature-dim", s_args.feature_dim, "feature width");
  synth->add_option("--feature-noise", s_args.feature_noise, "noise sigma");
  synth->add_option("--community-signal", s_args.community_signal,
                    "community prototype strength in the features");
  synth->add_option("--edges-per-node", s_args.edges_per_node,
                    "attachment edges (pa)");
  synth->add_option("--seed", s_args.seed, "rng seed");
  synth->add_option("--out-edges", s_args.out_edges, "edge list output")
      ->required();
  synth->add_option("--out-features", s_args.out_features,
                    "feature CSV output");

  CLI11_PARSE(app, argc, argv);
  try {
    if (split->parsed()) return run_split(split_args);
    if (heur->parsed()) return run_heuristic(h_args);
    if (train->parsed()) return run_train(train_config);
    if (eval->parsed()) return run_eval(e_args);
    if (analyze->parsed()) return run_analyze(a_args);
    if (bench->parsed()) return run_bench(b_args);
    if (synth->parsed()) return run_synth(s_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
