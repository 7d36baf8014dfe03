#pragma once

// Flat "key = value" config files with [section] headers, '#' or ';'
// comments. Unknown keys are rejected so typos fail loudly.

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include "linkpred/dataio.hpp"
#include "linkpred/metrics.hpp"
#include "linkpred/pipeline.hpp"

namespace linkpred {

struct IniFile {
  std::map<std::string, std::map<std::string, std::string>> sections;

  static IniFile parse(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    IniFile ini;
    std::string line, section;
    std::size_t lineno = 0;
    auto trim = [](std::string s) {
      auto issp = [](unsigned char c) { return std::isspace(c) != 0; };
      while (!s.empty() && issp(s.front())) s.erase(s.begin());
      while (!s.empty() && issp(s.back())) s.pop_back();
      return s;
    };
    while (std::getline(in, line)) {
      ++lineno;
      auto cut = line.find_first_of("#;");
      if (cut != std::string::npos) line.resize(cut);
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']')
          throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                   ": unterminated section header");
        section = trim(line.substr(1, line.size() - 2));
        ini.sections[section];
        continue;
      }
      auto eq = line.find('=');
      if (eq == std::string::npos)
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": expected 'key = value'");
      std::string key = trim(line.substr(0, eq));
      std::string value = trim(line.substr(eq + 1));
      if (key.empty())
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": empty key");
      ini.sections[section][key] = value;
    }
    return ini;
  }

  std::string get(const std::string& section, const std::string& key,
                  const std::string& fallback) const {
    auto s = sections.find(section);
    if (s == sections.end()) return fallback;
    auto k = s->second.find(key);
    return k == s->second.end() ? fallback : k->second;
  }

  bool has(const std::string& section, const std::string& key) const {
    auto s = sections.find(section);
    return s != sections.end() && s->second.count(key) > 0;
  }
};

inline MetricSpec parse_metric(const std::string& text) {
  if (text == "mrr") return {MetricKind::Mrr, 0};
  if (text.starts_with("hits@")) {
    int k = std::stoi(text.substr(5));
    if (k < 1) throw std::invalid_argument("metric: K >= 1");
    return {MetricKind::HitsAtK, k};
  }
  throw std::invalid_argument("unknown metric '" + text +
                              "' (expected hits@K or mrr)");
}

inline bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw std::invalid_argument("expected a boolean, got '" + s + "'");
}

/// A full training job parsed from a config file.
struct TrainJob {
  std::string edges_path;     // start from a raw edge list...
  std::string split_dir;      // ...or a prepared split directory
  std::string features_path;
  FeatureFallback fallback = FeatureFallback::Ones;
  double r_train = 0.7, r_valid = 0.1, r_test = 0.2;
  std::uint64_t split_seed = 1;
  TrainConfig train;
  MetricSpec metric{MetricKind::HitsAtK, 100};
  std::size_t negatives = 10000;
  bool use_valid_edges = false;  // merge valid edges into the test-time graph
  std::string checkpoint_path;
  std::string log_path;

  static TrainJob from_file(const std::string& path) {
    IniFile ini = IniFile::parse(path);
    static const std::map<std::string, std::set<std::string>> known = {
        {"data",
         {"edges", "split_dir", "features", "feature_fallback", "ratios",
          "split_seed"}},
        {"model",
         {"variant", "completion_iters", "detach_completion", "mpnn_layers",
          "hidden_dim", "mlp_hidden", "propagation"}},
        {"train",
         {"epochs", "batch_size", "lr", "beta1", "beta2", "eps", "neg_ratio",
          "seed", "tlr", "completion_warmup"}},
        {"eval", {"metric", "negatives", "use_valid_edges"}},
        {"output", {"checkpoint", "log"}}};
    for (const auto& [section, keys] : ini.sections) {
      auto it = known.find(section);
      if (it == known.end())
        throw std::runtime_error(path + ": unknown section [" + section + "]");
      for (const auto& [key, value] : keys)
        if (!it->second.count(key))
          throw std::runtime_error(path + ": unknown key '" + key +
                                   "' in [" + section + "]");
    }
    TrainJob job;
    job.edges_path = ini.get("data", "edges", "");
    job.split_dir = ini.get("data", "split_dir", "");
    job.features_path = ini.get("data", "features", "");
    if (job.edges_path.empty() == job.split_dir.empty())
      throw std::runtime_error(
          path + ": [data] needs exactly one of 'edges' or 'split_dir'");
    std::string fb = ini.get("data", "feature_fallback", "ones");
    if (fb == "ones") job.fallback = FeatureFallback::Ones;
    else if (fb == "one_hot") job.fallback = FeatureFallback::OneHot;
    else if (fb == "error") job.fallback = FeatureFallback::Error;
    else throw std::runtime_error(path + ": bad feature_fallback '" + fb + "'");
    std::string ratios = ini.get("data", "ratios", "0.7,0.1,0.2");
    {
      std::stringstream rs(ratios);
      std::string tok;
      std::vector<double> r;
      while (std::getline(rs, tok, ',')) r.push_back(std::stod(tok));
      if (r.size() != 3)
        throw std::runtime_error(path + ": ratios must have three entries");
      job.r_train = r[0];
      job.r_valid = r[1];
      job.r_test = r[2];
    }
    job.split_seed = std::stoull(ini.get("data", "split_seed", "1"));

    TrainConfig& t = job.train;
    t.variant = variant_from_name(ini.get("model", "variant", "ncn"));
    t.completion_iters = std::stoi(ini.get("model", "completion_iters", "1"));
    t.detach_completion =
        parse_bool(ini.get("model", "detach_completion", "false"));
    t.mpnn_layers = std::stoi(ini.get("model", "mpnn_layers", "2"));
    t.hidden_dim = std::stoul(ini.get("model", "hidden_dim", "64"));
    t.mlp_hidden = std::stoul(ini.get("model", "mlp_hidden", "64"));
    t.propagation =
        detail::propagation_from_name(ini.get("model", "propagation", "sym_norm"));
    t.epochs = std::stoi(ini.get("train", "epochs", "100"));
    t.batch_size = std::stoul(ini.get("train", "batch_size", "512"));
    t.adam.lr = std::stod(ini.get("train", "lr", "0.001"));
    t.adam.beta1 = std::stod(ini.get("train", "beta1", "0.9"));
    t.adam.beta2 = std::stod(ini.get("train", "beta2", "0.999"));
    t.adam.eps = std::stod(ini.get("train", "eps", "1e-8"));
    t.neg_ratio = std::stoi(ini.get("train", "neg_ratio", "1"));
    t.seed = std::stoull(ini.get("train", "seed", "1"));
    t.tlr_enabled = parse_bool(ini.get("train", "tlr", "true"));
    t.completion_warmup = std::stoi(ini.get("train", "completion_warmup", "-1"));
    t.validate();

    job.metric = parse_metric(ini.get("eval", "metric", "hits@100"));
    job.negatives = std::stoul(ini.get("eval", "negatives", "10000"));
    job.use_valid_edges =
        parse_bool(ini.get("eval", "use_valid_edges", "false"));
    job.checkpoint_path = ini.get("output", "checkpoint", "model.ckpt");
    job.log_path = ini.get("output", "log", "");
    return job;
  }
};

}  // namespace linkpred
