#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "linkpred/config.hpp"

using namespace linkpred;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("linkpred_cfg_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string write(const std::string& name, const std::string& content) const {
    std::ofstream out(path / name);
    out << content;
    return (path / name).string();
  }
};

}  // namespace

TEST_CASE("IniFile: sections, comments, whitespace") {
  TempDir tmp;
  auto p = tmp.write("a.ini",
                     "# top comment\n"
                     "[data]\n"
                     "edges = e.txt   ; trailing comment\n"
                     "\n"
                     "[train]\n"
                     "  lr =   0.01  \n");
  IniFile ini = IniFile::parse(p);
  CHECK(ini.get("data", "edges", "") == "e.txt");
  CHECK(ini.get("train", "lr", "") == "0.01");
  CHECK(ini.get("train", "missing", "fallback") == "fallback");
  CHECK(ini.has("data", "edges"));
  CHECK(!ini.has("data", "lr"));
}

TEST_CASE("IniFile: malformed lines carry line numbers") {
  TempDir tmp;
  auto p = tmp.write("bad.ini", "[data]\nnot_a_pair\n");
  try {
    IniFile::parse(p);
    FAIL("expected a parse error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find(":2") != std::string::npos);
  }
  auto q = tmp.write("bad2.ini", "[data\n");
  CHECK_THROWS_AS(IniFile::parse(q), std::runtime_error);
}

TEST_CASE("parse_metric") {
  MetricSpec h = parse_metric("hits@50");
  CHECK(h.kind == MetricKind::HitsAtK);
  CHECK(h.k == 50);
  CHECK(parse_metric("mrr").kind == MetricKind::Mrr);
  CHECK_THROWS_AS(parse_metric("auc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_metric("hits@0"), std::invalid_argument);
}

TEST_CASE("TrainJob: defaults and overrides") {
  TempDir tmp;
  auto p = tmp.write("job.ini",
                     "[data]\nedges = e.txt\n"
                     "[model]\nvariant = ncnc\ncompletion_iters = 2\n"
                     "[train]\nepochs = 12\ntlr = false\ncompletion_warmup = 4\n"
                     "[eval]\nmetric = mrr\n"
                     "[output]\ncheckpoint = m.ckpt\n");
  TrainJob job = TrainJob::from_file(p);
  CHECK(job.edges_path == "e.txt");
  CHECK(job.train.variant == Variant::NCNC);
  CHECK(job.train.completion_iters == 2);
  CHECK(job.train.epochs == 12);
  CHECK(job.train.tlr_enabled == false);
  CHECK(job.train.completion_warmup == 4);
  CHECK(job.train.warmup_epochs() == 4);
  CHECK(job.metric.kind == MetricKind::Mrr);
  // untouched defaults
  CHECK(job.train.batch_size == 512);
  CHECK(job.train.adam.lr == 0.001);
  CHECK(job.r_train == 0.7);
}

TEST_CASE("TrainJob: unknown keys and sections are rejected") {
  TempDir tmp;
  auto p = tmp.write("typo.ini", "[data]\nedges = e.txt\n[train]\nlerning_rate = 1\n");
  CHECK_THROWS_AS(TrainJob::from_file(p), std::runtime_error);
  auto q = tmp.write("sec.ini", "[data]\nedges = e.txt\n[extras]\nx = 1\n");
  CHECK_THROWS_AS(TrainJob::from_file(q), std::runtime_error);
}

TEST_CASE("TrainJob: exactly one data source") {
  TempDir tmp;
  auto none = tmp.write("none.ini", "[train]\nepochs = 3\n");
  CHECK_THROWS_AS(TrainJob::from_file(none), std::runtime_error);
  auto both = tmp.write("both.ini", "[data]\nedges = e.txt\nsplit_dir = d\n");
  CHECK_THROWS_AS(TrainJob::from_file(both), std::runtime_error);
}

TEST_CASE("TrainJob: bad values are rejected") {
  TempDir tmp;
  auto p = tmp.write("bool.ini", "[data]\nedges = e.txt\n[train]\ntlr = maybe\n");
  CHECK_THROWS_AS(TrainJob::from_file(p), std::invalid_argument);
  auto q = tmp.write("epochs.ini", "[data]\nedges = e.txt\n[train]\nepochs = 200\n");
  CHECK_THROWS_AS(TrainJob::from_file(q), std::invalid_argument);
  auto r = tmp.write("ratios.ini", "[data]\nedges = e.txt\nratios = 0.5,0.5\n");
  CHECK_THROWS_AS(TrainJob::from_file(r), std::runtime_error);
}
