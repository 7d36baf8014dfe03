#pragma once

#include <bit>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "linkpred/graph.hpp"
#include "linkpred/linalg.hpp"
#include "linkpred/predictors.hpp"

namespace linkpred {

struct EdgeListData {
  std::vector<Edge> pairs;
  std::vector<double> weights;   // aligned with pairs
  bool weighted = false;
  std::vector<std::string> ids;  // dense id -> original token

  std::size_t n() const { return ids.size(); }
};

namespace detail {

// canonical base-10 integer: digits only, no leading zero except "0"
inline bool canonical_int(const std::string& s) {
  if (s.empty() || (s.size() > 1 && s[0] == '0')) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return s.size() <= 9;  // stays well inside NodeId range
}

}  // namespace detail

/// Whitespace-separated "u v [w]" lines; '#' starts a comment. Files whose
/// ids are all canonical integers keep them verbatim (n = max id + 1, so
/// isolated nodes survive); any other ids are mapped to dense integers in
/// first-appearance order. The id table round-trips either way.
inline EdgeListData load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open edge list: " + path);
  std::vector<std::pair<std::string, std::string>> token_pairs;
  EdgeListData data;
  std::string line;
  std::size_t lineno = 0;
  bool all_numeric = true;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string u, v, w;
    if (!(ls >> u)) continue;  // blank or comment-only line
    if (!(ls >> v))
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected 'u v [w]'");
    double weight = 1.0;
    if (ls >> w) {
      try {
        std::size_t used = 0;
        weight = std::stod(w, &used);
        if (used != w.size()) throw std::invalid_argument(w);
      } catch (const std::exception&) {
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": bad weight '" + w + "'");
      }
      data.weighted = true;
    }
    std::string extra;
    if (ls >> extra)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": trailing token '" + extra + "'");
    all_numeric = all_numeric && detail::canonical_int(u) &&
                  detail::canonical_int(v);
    token_pairs.push_back({std::move(u), std::move(v)});
    data.weights.push_back(weight);
  }
  if (all_numeric) {
    NodeId max_id = 0;
    for (auto& [u, v] : token_pairs) {
      NodeId a = static_cast<NodeId>(std::stoul(u));
      NodeId b = static_cast<NodeId>(std::stoul(v));
      max_id = std::max({max_id, a, b});
      data.pairs.push_back({a, b});
    }
    std::size_t n = token_pairs.empty() ? 0 : static_cast<std::size_t>(max_id) + 1;
    data.ids.reserve(n);
    for (std::size_t v = 0; v < n; ++v) data.ids.push_back(std::to_string(v));
    return data;
  }
  std::unordered_map<std::string, NodeId> index;
  auto intern = [&](const std::string& token) {
    auto it = index.find(token);
    if (it != index.end()) return it->second;
    NodeId id = static_cast<NodeId>(data.ids.size());
    index.emplace(token, id);
    data.ids.push_back(token);
    return id;
  };
  for (auto& [u, v] : token_pairs) data.pairs.push_back({intern(u), intern(v)});
  return data;
}

inline void write_edge_list(const std::string& path,
                            std::span<const Edge> pairs,
                            std::span<const std::string> ids,
                            std::span<const double> weights = {}) {
  if (!weights.empty() && weights.size() != pairs.size())
    throw std::invalid_argument("write_edge_list: weights size mismatch");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write edge list: " + path);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    out << ids[pairs[k].first] << ' ' << ids[pairs[k].second];
    if (!weights.empty()) out << ' ' << weights[k];
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

enum class FeatureFallback { Error, Ones, OneHot };

/// Comma-separated float rows, one per node in id order. A missing file is
/// an error unless a fallback is selected.
inline DenseMatrix load_features(const std::string& path, std::size_t n,
                                 FeatureFallback fallback = FeatureFallback::Error) {
  std::ifstream in(path);
  if (!in) {
    switch (fallback) {
      case FeatureFallback::Ones: {
        DenseMatrix x(n, 1);
        for (auto& v : x.data) v = 1.0;
        return x;
      }
      case FeatureFallback::OneHot: {
        DenseMatrix x(n, n);
        for (std::size_t i = 0; i < n; ++i) x.at(i, i) = 1.0;
        return x;
      }
      case FeatureFallback::Error:
        throw std::runtime_error("cannot open features: " + path);
    }
  }
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": bad value '" + cell + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": ragged row (" + std::to_string(row.size()) +
                               " vs " + std::to_string(rows.front().size()) +
                               " columns)");
    rows.push_back(std::move(row));
  }
  if (rows.size() != n)
    throw std::runtime_error(path + ": expected " + std::to_string(n) +
                             " rows, found " + std::to_string(rows.size()));
  DenseMatrix x(n, rows.front().size());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < x.cols; ++j) x.at(i, j) = rows[i][j];
  return x;
}

namespace detail {

inline constexpr char kCheckpointMagic[4] = {'N', 'C', 'N', 'C'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

inline void put_u32(std::ostream& os, std::uint32_t v) {
  char buf[4];
  std::memcpy(buf, &v, 4);
  os.write(buf, 4);
}

inline std::uint32_t get_u32(std::istream& is) {
  char buf[4];
  if (!is.read(buf, 4)) throw std::runtime_error("checkpoint: truncated");
  std::uint32_t v;
  std::memcpy(&v, buf, 4);
  return v;
}

inline const char* propagation_name(Propagation p) {
  switch (p) {
    case Propagation::SymNorm: return "sym_norm";
    case Propagation::RowNorm: return "row_norm";
    case Propagation::RawSum: return "raw_sum";
  }
  return "?";
}

inline Propagation propagation_from_name(const std::string& s) {
  if (s == "sym_norm") return Propagation::SymNorm;
  if (s == "row_norm") return Propagation::RowNorm;
  if (s == "raw_sum") return Propagation::RawSum;
  throw std::invalid_argument("unknown propagation: " + s);
}

}  // namespace detail

/// Binary model container: magic "NCNC", little-endian u32 version, a
/// key=value text header with the architecture, tensor shapes and any echo
/// entries, then raw little-endian float64 weights in declared order.
inline void save_checkpoint(ModelParams& params, const std::string& path,
                            const std::map<std::string, std::string>& echo = {}) {
  static_assert(std::endian::native == std::endian::little,
                "checkpoint codec assumes a little-endian host");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
  std::ostringstream header;
  const MpnnConfig& m = params.mpnn.config;
  header << "variant=" << variant_name(params.predictor.variant) << '\n'
         << "completion_iters=" << params.predictor.completion_iters << '\n'
         << "detach_completion=" << (params.predictor.detach_completion ? 1 : 0)
         << '\n'
         << "mlp_hidden=" << params.predictor.mlp_hidden << '\n'
         << "mpnn_layers=" << m.layers << '\n'
         << "in_dim=" << m.in_dim << '\n'
         << "hidden_dim=" << m.hidden_dim << '\n'
         << "activation=" << (m.activation == Activation::ReLU ? "relu" : "identity")
         << '\n'
         << "propagation=" << detail::propagation_name(m.propagation) << '\n';
  for (const auto& [k, v] : echo) header << "echo." << k << '=' << v << '\n';
  for (ad::Param* p : params.all_params())
    header << "tensor=" << p->rows << 'x' << p->cols << '\n';
  std::string head = header.str();

  out.write(detail::kCheckpointMagic, 4);
  detail::put_u32(out, detail::kCheckpointVersion);
  detail::put_u32(out, static_cast<std::uint32_t>(head.size()));
  out.write(head.data(), static_cast<std::streamsize>(head.size()));
  for (ad::Param* p : params.all_params())
    out.write(reinterpret_cast<const char*>(p->value.data()),
              static_cast<std::streamsize>(p->value.size() * sizeof(double)));
  if (!out) throw std::runtime_error("checkpoint write failed: " + path);
}

inline ModelParams load_checkpoint(
    const std::string& path,
    std::map<std::string, std::string>* echo = nullptr) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, detail::kCheckpointMagic, 4) != 0)
    throw std::runtime_error("checkpoint: bad magic (not a model file)");
  std::uint32_t version = detail::get_u32(in);
  if (version != detail::kCheckpointVersion)
    throw std::runtime_error("checkpoint: unsupported version " +
                             std::to_string(version));
  std::uint32_t head_len = detail::get_u32(in);
  std::string head(head_len, '\0');
  if (!in.read(head.data(), head_len))
    throw std::runtime_error("checkpoint: truncated header");

  std::map<std::string, std::string> kv;
  std::vector<std::pair<std::size_t, std::size_t>> shapes;
  std::istringstream hs(head);
  std::string line;
  while (std::getline(hs, line)) {
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = line.substr(0, eq), value = line.substr(eq + 1);
    if (key == "tensor") {
      auto x = value.find('x');
      shapes.push_back({std::stoul(value.substr(0, x)),
                        std::stoul(value.substr(x + 1))});
    } else if (key.starts_with("echo.")) {
      if (echo) (*echo)[key.substr(5)] = value;
    } else {
      kv[key] = value;
    }
  }
  MpnnConfig mcfg;
  mcfg.layers = std::stoi(kv.at("mpnn_layers"));
  mcfg.in_dim = std::stoul(kv.at("in_dim"));
  mcfg.hidden_dim = std::stoul(kv.at("hidden_dim"));
  mcfg.activation =
      kv.at("activation") == "relu" ? Activation::ReLU : Activation::Identity;
  mcfg.propagation = detail::propagation_from_name(kv.at("propagation"));
  PredictorConfig pcfg;
  pcfg.variant = variant_from_name(kv.at("variant"));
  pcfg.completion_iters = std::stoi(kv.at("completion_iters"));
  pcfg.detach_completion = kv.at("detach_completion") == "1";
  pcfg.mlp_hidden = std::stoul(kv.at("mlp_hidden"));

  std::mt19937_64 rng(0);  // values are overwritten below
  ModelParams params = ModelParams::init(mcfg, pcfg, rng);
  auto ptrs = params.all_params();
  if (ptrs.size() != shapes.size())
    throw std::runtime_error("checkpoint: tensor count mismatch");
  for (std::size_t k = 0; k < ptrs.size(); ++k) {
    if (ptrs[k]->rows != shapes[k].first || ptrs[k]->cols != shapes[k].second)
      throw std::runtime_error("checkpoint: tensor shape mismatch at index " +
                               std::to_string(k));
    if (!in.read(reinterpret_cast<char*>(ptrs[k]->value.data()),
                 static_cast<std::streamsize>(ptrs[k]->value.size() *
                                              sizeof(double))))
      throw std::runtime_error("checkpoint: truncated payload");
  }
  return params;
}

}  // namespace linkpred
