// tests/test_corpus.cc

// Copyright 2026  SAS toolkit authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "sas/batch.h"
#include "sas/generator.h"
#include "sas/manifest.h"
#include "sas/mel_io.h"
#include "sas/region_features.h"
#include "sas/rng.h"
#include "sas/signature_bank.h"

using namespace sas;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("sas_corpus_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

RegionFeatureSet make_rfs(int l, int d, std::uint64_t seed) {
  Rng rng(seed);
  RegionFeatureSet rfs;
  rfs.image_id = "synthetic";
  rfs.f = rng.normal_matrix(l, d);
  rfs.p = Mat::Zero(l, 5);
  rfs.c.resize(l);
  rfs.s = Vec::Zero(l);
  for (int i = 0; i < l; ++i) {
    const double x1 = rng.uniform(0.0, 0.5), y1 = rng.uniform(0.0, 0.5);
    const double w = rng.uniform(0.1, 0.5), h = rng.uniform(0.1, 0.5);
    rfs.p(i, 0) = x1;
    rfs.p(i, 1) = y1;
    rfs.p(i, 2) = x1 + w;
    rfs.p(i, 3) = y1 + h;
    rfs.p(i, 4) = w * h;
    rfs.c[i] = static_cast<int>(rng.uniform_int(kNumClasses));
    rfs.s(i) = rng.uniform();
  }
  return rfs;
}

int object_token_number(const std::string& token) {
  REQUIRE(token.rfind("obj", 0) == 0);
  return std::stoi(token.substr(3));
}

}  // namespace

TEST_CASE("region features round trip at float precision") {
  const fs::path dir = temp_dir("rf_roundtrip");
  RegionFeatureSet rfs = make_rfs(kNumRegions, 64, 7);
  const std::string path = (dir / "img00042.rf").string();
  write_region_features(path, rfs);
  RegionFeatureSet back = load_region_features(path);
  CHECK(back.image_id == "img00042");
  REQUIRE(back.f.rows() == kNumRegions);
  REQUIRE(back.f.cols() == 64);
  CHECK((back.f - rfs.f).cwiseAbs().maxCoeff() < 1e-6);
  CHECK((back.p - rfs.p).cwiseAbs().maxCoeff() < 1e-7);
  CHECK(back.c == rfs.c);
  CHECK((back.s - rfs.s).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("region feature file with wrong region count is rejected") {
  const fs::path dir = temp_dir("rf_count");
  RegionFeatureSet rfs = make_rfs(35, 16, 3);
  const std::string path = (dir / "short.rf").string();
  write_region_features(path, rfs);
  CHECK_THROWS_WITH_AS(load_region_features(path),
                       doctest::Contains("expected 36 regions"), FormatError);
}

TEST_CASE("region feature validation names the offending field") {
  const fs::path dir = temp_dir("rf_fields");

  RegionFeatureSet bad_class = make_rfs(kNumRegions, 8, 11);
  bad_class.c[5] = kNumClasses + 10;
  const std::string p1 = (dir / "class.rf").string();
  write_region_features(p1, bad_class);
  CHECK_THROWS_WITH_AS(load_region_features(p1), doctest::Contains("field c"),
                       FormatError);

  RegionFeatureSet bad_conf = make_rfs(kNumRegions, 8, 12);
  bad_conf.s(3) = 1.5;
  const std::string p2 = (dir / "conf.rf").string();
  write_region_features(p2, bad_conf);
  CHECK_THROWS_WITH_AS(load_region_features(p2), doctest::Contains("field s"),
                       FormatError);

  RegionFeatureSet bad_box = make_rfs(kNumRegions, 8, 13);
  bad_box.p(0, 2) = bad_box.p(0, 0) - 0.05;  // x2 < x1
  const std::string p3 = (dir / "box.rf").string();
  write_region_features(p3, bad_box);
  CHECK_THROWS_WITH_AS(load_region_features(p3), doctest::Contains("field p"),
                       FormatError);
}

TEST_CASE("truncated region feature file is a format error") {
  const fs::path dir = temp_dir("rf_trunc");
  RegionFeatureSet rfs = make_rfs(kNumRegions, 32, 4);
  const std::string path = (dir / "full.rf").string();
  write_region_features(path, rfs);
  std::string bytes;
  {
    std::ifstream in(path, std::ios::binary);
    bytes.assign(std::istreambuf_iterator<char>(in), {});
  }
  const std::string cut = (dir / "cut.rf").string();
  std::ofstream(cut, std::ios::binary) << bytes.substr(0, bytes.size() / 2);
  CHECK_THROWS_AS(load_region_features(cut), FormatError);
  const std::string extra = (dir / "extra.rf").string();
  std::ofstream(extra, std::ios::binary) << bytes << "tail";
  CHECK_THROWS_AS(load_region_features(extra), FormatError);
  CHECK_THROWS_AS(load_region_features((dir / "missing.rf").string()),
                  IoError);
}

TEST_CASE("token signatures live on the floor lattice and stay separated") {
  const double floor_value = std::log(1e-5);
  const std::vector<std::string> vocab = {"a",    "and",  "obj0", "obj1",
                                          "obj2", "obj3", "obj4", "obj5"};
  TokenSignatureBank bank =
      build_token_signature_bank(123, vocab, 8, 80, 1e-5);
  REQUIRE(bank.vocab_size() == 8);
  REQUIRE(bank.signatures.size() == 8);
  for (const Mat& sig : bank.signatures) {
    REQUIRE(sig.rows() == 8);
    REQUIRE(sig.cols() == 80);
    for (int t = 0; t < sig.rows(); ++t)
      for (int m = 0; m < sig.cols(); ++m) {
        const double delta = sig(t, m) - floor_value;
        CHECK((std::abs(delta) < 1e-12 || std::abs(delta - 1.0) < 1e-12));
      }
  }
  CHECK(bank.silence.minCoeff() == doctest::Approx(floor_value));
  CHECK(bank.silence.maxCoeff() == doctest::Approx(floor_value));
  for (std::size_t i = 0; i < bank.signatures.size(); ++i) {
    CHECK((bank.signatures[i] - bank.silence).norm() >= 4.0);
    for (std::size_t j = i + 1; j < bank.signatures.size(); ++j)
      CHECK((bank.signatures[i] - bank.signatures[j]).norm() >= 4.0);
  }

  TokenSignatureBank again =
      build_token_signature_bank(123, vocab, 8, 80, 1e-5);
  for (std::size_t i = 0; i < bank.signatures.size(); ++i)
    CHECK((bank.signatures[i] - again.signatures[i]).norm() == 0.0);
  TokenSignatureBank other =
      build_token_signature_bank(124, vocab, 8, 80, 1e-5);
  CHECK((bank.signatures[0] - other.signatures[0]).norm() > 0.0);
}

TEST_CASE("render concatenates signatures and respects the floor") {
  const std::vector<std::string> vocab = {"a", "obj0", "obj1"};
  TokenSignatureBank bank = build_token_signature_bank(9, vocab, 4, 20, 1e-5);
  Rng rng(55);
  Mat clean = render_caption_speech({"a", "obj1", "obj0"}, bank, 0.0, rng);
  REQUIRE(clean.rows() == 12);
  REQUIRE(clean.cols() == 20);
  CHECK((clean.middleRows(0, 4) - bank.signatures[0]).norm() == 0.0);
  CHECK((clean.middleRows(4, 4) - bank.signatures[2]).norm() == 0.0);
  CHECK((clean.middleRows(8, 4) - bank.signatures[1]).norm() == 0.0);

  Mat noisy = render_caption_speech({"a", "obj1", "obj0"}, bank, 0.5, rng);
  CHECK(noisy.minCoeff() >= bank.log_floor_value);
  CHECK((noisy - clean).cwiseAbs().maxCoeff() > 0.0);

  CHECK_THROWS_AS(render_caption_speech({}, bank, 0.0, rng), InputError);
  CHECK_THROWS_AS(render_caption_speech({"zebra"}, bank, 0.0, rng),
                  InputError);
}

TEST_CASE("caption template rotates objects but keeps the object set") {
  const std::vector<std::string> vocab = build_vocab(8);
  REQUIRE(vocab.size() == 8);
  CHECK(vocab[0] == "a");
  CHECK(vocab[3] == "with");
  CHECK(vocab[4] == "obj0");
  const std::vector<int> objects = {0, 2, 3};
  std::set<std::string> base_set;
  std::vector<std::vector<std::string>> caps;
  for (int k = 0; k < 3; ++k) {
    auto cap = caption_template(vocab, 4, objects, k);
    CHECK(cap.front() == "a");
    std::set<std::string> objs;
    for (const auto& tok : cap)
      if (tok.rfind("obj", 0) == 0) objs.insert(tok);
    if (k == 0) base_set = objs;
    CHECK(objs == base_set);
    caps.push_back(cap);
  }
  CHECK(caps[0] != caps[1]);
  CHECK(caps[1] != caps[2]);
}

TEST_CASE("generator produces a coherent deterministic corpus") {
  GeneratorConfig cfg;
  cfg.seed = 77;
  cfg.vocab_size = 8;
  cfg.n_images = 12;
  cfg.captions_per_image = 2;
  cfg.frames_per_token = 4;
  cfg.n_mels = 16;
  const fs::path dir_a = temp_dir("gen_a");
  cfg.out_dir = dir_a.string();
  CorpusManifest manifest = generate_synthetic_corpus(cfg);

  REQUIRE(manifest.splits.size() == 3);
  CHECK(manifest.split("train").entries.size() == 10);
  CHECK(manifest.split("dev").entries.size() == 1);
  CHECK(manifest.split("test").entries.size() == 1);
  CHECK(manifest.total_images() == 12);
  CHECK(manifest.vocab.size() == 8);

  CorpusManifest loaded = load_manifest((dir_a / "manifest.json").string());
  CHECK(loaded.total_images() == 12);
  CHECK(loaded.vocab == manifest.vocab);
  CHECK(loaded.root_dir == dir_a.string());

  const double floor_value = std::log(cfg.log_floor);
  AudioConfig audio;
  audio.n_mels = cfg.n_mels;
  for (const auto& split : loaded.splits) {
    for (const auto& entry : split.entries) {
      RegionFeatureSet rfs = load_region_features(
          join_path(loaded.root_dir, entry.feature_path));
      // High-confidence detector classes must match the caption's objects.
      std::set<int> high_conf;
      for (int r = 0; r < kNumRegions; ++r) {
        if (rfs.s(r) >= 0.9) high_conf.insert(rfs.c[r]);
        CHECK((rfs.s(r) >= 0.9 || rfs.s(r) <= 0.45));
      }
      std::set<int> caption_objects_first;
      for (const auto& cap : entry.captions) {
        std::set<int> caption_classes;
        for (const auto& tok : cap.tokens)
          if (tok.rfind("obj", 0) == 0)
            caption_classes.insert(object_class_id(object_token_number(tok)));
        CHECK(caption_classes == high_conf);
        if (caption_objects_first.empty())
          caption_objects_first = caption_classes;
        MelSpectrogram mel =
            read_mel(join_path(loaded.root_dir, cap.mel_path), audio);
        CHECK(mel.frames.rows() ==
              cfg.frames_per_token * static_cast<int>(cap.tokens.size()));
        CHECK(mel.frames.minCoeff() >= floor_value - 1e-12);
      }

      RegionFeatureSet grid = load_region_features(
          join_path(loaded.root_dir, entry.grid_feature_path));
      CHECK(grid.p(0, 0) == doctest::Approx(0.0));
      CHECK(grid.p(0, 2) == doctest::Approx(1.0 / 6.0));
      CHECK(grid.p(35, 3) == doctest::Approx(1.0));
      CHECK(grid.p(0, 4) == doctest::Approx(1.0 / 36.0));
      CHECK((grid.f - rfs.f).cwiseAbs().maxCoeff() > 0.0);
    }
  }

  // Same config into another directory: byte-identical artifacts.
  GeneratorConfig cfg_b = cfg;
  const fs::path dir_b = temp_dir("gen_b");
  cfg_b.out_dir = dir_b.string();
  generate_synthetic_corpus(cfg_b);
  CHECK(fnv1a_file((dir_a / "manifest.json").string()) ==
        fnv1a_file((dir_b / "manifest.json").string()));
  for (const char* rel :
       {"features/img00000.rf", "features_grid/img00007.rf",
        "mels/img00003_cap1.mel"})
    CHECK(fnv1a_file((dir_a / rel).string()) ==
          fnv1a_file((dir_b / rel).string()));

  GeneratorConfig bad = cfg;
  bad.n_images = 5;
  bad.out_dir = (dir_a / "bad").string();
  CHECK_THROWS_AS(generate_synthetic_corpus(bad), ConfigError);
  bad = cfg;
  bad.vocab_size = 1;
  bad.out_dir = (dir_a / "bad").string();
  CHECK_THROWS_AS(generate_synthetic_corpus(bad), ConfigError);
}

TEST_CASE("batch iterator pads, masks, and covers every caption once") {
  GeneratorConfig cfg;
  cfg.seed = 21;
  cfg.vocab_size = 6;  // 4 structural + 2 object tokens
  cfg.n_images = 12;
  cfg.captions_per_image = 2;
  cfg.frames_per_token = 4;
  cfg.n_mels = 16;
  const fs::path dir = temp_dir("batch");
  cfg.out_dir = dir.string();
  CorpusManifest manifest = generate_synthetic_corpus(cfg);
  AudioConfig audio;
  audio.n_mels = cfg.n_mels;

  BatchIterator it(manifest, "train", 3, 99, audio);
  CHECK(it.n_items() == 20);
  CHECK(it.n_batches() == 7);
  std::multiset<std::string> seen;
  std::vector<std::string> first_order;
  int n_batches = 0;
  const double floor_value = std::log(cfg.log_floor);
  while (auto batch = it.next()) {
    ++n_batches;
    REQUIRE(batch->size() >= 1);
    REQUIRE(batch->size() <= 3);
    REQUIRE(batch->frame_mask.rows() == batch->size());
    REQUIRE(batch->frame_mask.cols() == batch->t_max);
    for (int i = 0; i < batch->size(); ++i) {
      seen.insert(batch->image_ids[i] + "/" +
                  std::to_string(batch->caption_tokens[i].size()));
      first_order.push_back(batch->image_ids[i]);
      const int len = batch->lengths[i];
      REQUIRE(len >= 1);
      REQUIRE(len <= batch->t_max);
      CHECK(batch->frame_mask.row(i).sum() == doctest::Approx(len));
      for (int t = 0; t < batch->t_max; ++t) {
        const double expect_mask = t < len ? 1.0 : 0.0;
        CHECK(batch->frame_mask(i, t) == expect_mask);
        const double expect_stop = t >= len - 1 ? 1.0 : 0.0;
        CHECK(batch->stop_targets(i, t) == expect_stop);
      }
      // Padding rows sit at the floor.
      if (len < batch->t_max)
        CHECK(batch->target_mel[i]
                  .bottomRows(batch->t_max - len)
                  .cwiseEqual(floor_value)
                  .all());
      CHECK(batch->features[i].n_regions() == kNumRegions);
    }
  }
  CHECK(n_batches == 7);
  CHECK(seen.size() == 20);
  std::set<std::string> unique_images(first_order.begin(), first_order.end());
  CHECK(unique_images.size() == 10);

  // Same seed reproduces the order; a different seed changes it.
  BatchIterator it2(manifest, "train", 3, 99, audio);
  std::vector<std::string> second_order;
  while (auto batch = it2.next())
    for (const auto& id : batch->image_ids) second_order.push_back(id);
  CHECK(first_order == second_order);
  BatchIterator it3(manifest, "train", 3, 100, audio);
  std::vector<std::string> third_order;
  while (auto batch = it3.next())
    for (const auto& id : batch->image_ids) third_order.push_back(id);
  CHECK(first_order != third_order);

  // Grid mode loads the grid files.
  BatchIterator grid_it(manifest, "train", 2, 5, audio,
                        FeatureMode::kBaselineGrid);
  auto gb = grid_it.next();
  REQUIRE(gb.has_value());
  CHECK(gb->features[0].p(0, 4) == doctest::Approx(1.0 / 36.0));

  CHECK_THROWS_AS(BatchIterator(manifest, "nope", 2, 5, audio), InputError);
}

TEST_CASE("match mask marks same-image pairs") {
  TrainingBatch batch;
  batch.image_ids = {"img00001", "img00002", "img00001"};
  Mat m = batch.match_mask();
  REQUIRE(m.rows() == 3);
  CHECK(m(0, 0) == 1.0);
  CHECK(m(1, 1) == 1.0);
  CHECK(m(0, 2) == 1.0);
  CHECK(m(2, 0) == 1.0);
  CHECK(m(0, 1) == 0.0);
  CHECK(m(1, 2) == 0.0);
}

TEST_CASE("manifest rejects duplicate image ids across splits") {
  const fs::path dir = temp_dir("manifest_dup");
  CorpusManifest m;
  m.seed = 1;
  m.vocab = {"a", "obj0"};
  ManifestEntry e;
  e.image_id = "img00000";
  e.feature_path = "features/img00000.rf";
  e.grid_feature_path = "features_grid/img00000.rf";
  CaptionRecord c;
  c.tokens = {"a", "obj0"};
  c.mel_path = "mels/img00000_cap0.mel";
  e.captions.push_back(c);
  m.splits = {{"train", {e}}, {"dev", {e}}};
  const std::string path = (dir / "manifest.json").string();
  save_manifest(path, m);
  CHECK_THROWS_WITH_AS(load_manifest(path),
                       doctest::Contains("more than one split"), FormatError);
}
