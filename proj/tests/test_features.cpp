#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "intentnet/errors.hpp"
#include "intentnet/features.hpp"
#include "intentnet/rng.hpp"

using namespace intentnet;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  static int counter = 0;
  return fs::temp_directory_path() /
         ("intentnet_features_" + std::to_string(++counter) + "_" + name);
}

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return Errc::IoFailure;
}

AppSample make_sample(
    std::string id, Label label,
    std::initializer_list<std::tuple<IntentKind, const char*, std::uint64_t>>
        keys) {
  AppSample sample;
  sample.app_id = std::move(id);
  sample.label = label;
  for (const auto& [kind, name, count] : keys) {
    sample.intents[IntentKey{kind, name, std::string("raw.") + name}] = count;
  }
  return sample;
}

Corpus make_corpus() {
  Corpus corpus;
  corpus.samples = {
      make_sample("m0", Label::Malicious,
                  {{IntentKind::Action, "BOOT", 2},
                   {IntentKind::Extra, "TEXT", 1}}),
      make_sample("b0", Label::Benign,
                  {{IntentKind::Action, "MAIN", 1},
                   {IntentKind::Category, "LAUNCHER", 1}}),
      make_sample("m1", Label::Malicious,
                  {{IntentKind::Action, "BOOT", 1},
                   {IntentKind::Action, "MAIN", 3}}),
      make_sample("b1", Label::Benign, {{IntentKind::Category, "HOME", 1}}),
  };
  corpus.malicious_count = 2;
  corpus.benign_count = 2;
  return corpus;
}

}  // namespace

TEST_CASE("vocabulary is the sorted union of corpus keys") {
  Corpus corpus = make_corpus();
  Vocabulary vocab = build_vocabulary(corpus);
  REQUIRE(vocab.size() == 5);
  CHECK(vocab.keys[0].kind == IntentKind::Action);
  CHECK(vocab.keys[0].name == "BOOT");
  CHECK(vocab.keys[1].name == "MAIN");
  CHECK(vocab.keys[2].kind == IntentKind::Category);
  CHECK(vocab.keys[2].name == "HOME");
  CHECK(vocab.keys[3].name == "LAUNCHER");
  CHECK(vocab.keys[4].kind == IntentKind::Extra);
  CHECK(vocab.keys[4].name == "TEXT");
  CHECK(std::is_sorted(vocab.keys.begin(), vocab.keys.end()));
  CHECK(vocab.frozen_from == corpus_fingerprint(corpus));

  CHECK(code_of([] { build_vocabulary(Corpus{}); }) == Errc::EmptyCorpus);
}

TEST_CASE("index_of finds every key and only those") {
  Vocabulary vocab = build_vocabulary(make_corpus());
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    CHECK(vocab.index_of(vocab.keys[i].kind, vocab.keys[i].name) == i);
  }
  CHECK(vocab.index_of(IntentKind::Action, "NOPE") == Vocabulary::npos);
  CHECK(vocab.index_of(IntentKind::Extra, "BOOT") == Vocabulary::npos);
}

TEST_CASE("vectorize fills counts or presence against the frozen columns") {
  Corpus corpus = make_corpus();
  Vocabulary vocab = build_vocabulary(corpus);

  FeatureMatrix counts = vectorize(corpus, vocab, /*binarize=*/false);
  REQUIRE(counts.rows() == 4);
  REQUIRE(counts.values.cols == vocab.size());
  CHECK_FALSE(counts.binarized);
  CHECK(counts.app_ids ==
        std::vector<std::string>{"m0", "b0", "m1", "b1"});
  CHECK(std::all_of(counts.split.begin(), counts.split.end(),
                    [](Split s) { return s == Split::Train; }));
  // Brute-force oracle: cell = sample's multiset count for that column key.
  for (std::size_t r = 0; r < corpus.samples.size(); ++r) {
    for (std::size_t c = 0; c < vocab.size(); ++c) {
      const IntentKey& key = vocab.keys[c];
      auto it = corpus.samples[r].intents.find(key);
      double expected =
          it == corpus.samples[r].intents.end() ? 0.0 : double(it->second);
      CHECK(counts.values.at(r, c) == expected);
    }
  }

  FeatureMatrix presence = vectorize(corpus, vocab, /*binarize=*/true);
  CHECK(presence.binarized);
  for (std::size_t r = 0; r < presence.rows(); ++r) {
    for (std::size_t c = 0; c < vocab.size(); ++c) {
      CHECK(presence.values.at(r, c) ==
            (counts.values.at(r, c) > 0.0 ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("keys outside the vocabulary are dropped") {
  Corpus corpus = make_corpus();
  Vocabulary vocab = build_vocabulary(corpus);
  Corpus wider = corpus;
  wider.samples.push_back(make_sample(
      "new", Label::Unlabeled, {{IntentKind::Action, "BOOT", 1},
                                {IntentKind::Action, "UNSEEN", 5}}));
  FeatureMatrix features = vectorize(wider, vocab, false);
  REQUIRE(features.rows() == 5);
  REQUIRE(features.values.cols == vocab.size());  // UNSEEN got no column
  CHECK(features.values.at(4, vocab.index_of(IntentKind::Action, "BOOT")) ==
        1.0);
  double row_sum = 0.0;
  for (std::size_t c = 0; c < vocab.size(); ++c) {
    row_sum += features.values.at(4, c);
  }
  CHECK(row_sum == 1.0);
}

TEST_CASE("stratified split matches the documented algorithm exactly") {
  // Independent replica of the contract: one Rng(seed) shuffles the
  // malicious row indices then the benign ones; the first
  // llround(n * fraction) of each class (clamped to [1, n-1]) train.
  Corpus corpus;
  for (int i = 0; i < 6; ++i) {
    corpus.samples.push_back(make_sample("m" + std::to_string(i),
                                         Label::Malicious,
                                         {{IntentKind::Action, "A", 1}}));
  }
  for (int i = 0; i < 4; ++i) {
    corpus.samples.push_back(make_sample("b" + std::to_string(i),
                                         Label::Benign,
                                         {{IntentKind::Action, "A", 1}}));
  }
  corpus.malicious_count = 6;
  corpus.benign_count = 4;
  Vocabulary vocab = build_vocabulary(corpus);
  FeatureMatrix features = vectorize(corpus, vocab, true);

  const double fraction = 0.7;
  const std::uint64_t seed = 42;
  split_train_validation(features, fraction, seed);

  std::vector<Split> expected(features.rows(), Split::Train);
  {
    std::vector<std::size_t> mal{0, 1, 2, 3, 4, 5};
    std::vector<std::size_t> ben{6, 7, 8, 9};
    Rng rng(seed);
    for (auto* rows : {&mal, &ben}) {
      rng.shuffle(*rows);
      auto n_train = static_cast<std::size_t>(
          std::llround(double(rows->size()) * fraction));
      n_train = std::clamp<std::size_t>(n_train, 1, rows->size() - 1);
      for (std::size_t i = n_train; i < rows->size(); ++i) {
        expected[(*rows)[i]] = Split::Validation;
      }
    }
  }
  CHECK(features.split == expected);

  // llround counts: 6*0.7 -> 4 train / 2 val, 4*0.7 -> 3 train / 1 val.
  auto count_val = [&](Label label) {
    std::size_t n = 0;
    for (std::size_t r = 0; r < features.rows(); ++r) {
      if (features.labels[r] == label &&
          features.split[r] == Split::Validation) {
        ++n;
      }
    }
    return n;
  };
  CHECK(count_val(Label::Malicious) == 2);
  CHECK(count_val(Label::Benign) == 1);

  // Same seed reproduces, a different seed (eventually) differs.
  FeatureMatrix again = vectorize(corpus, vocab, true);
  split_train_validation(again, fraction, seed);
  CHECK(again.split == features.split);

  bool any_difference = false;
  for (std::uint64_t other = 43; other < 48 && !any_difference; ++other) {
    FeatureMatrix probe = vectorize(corpus, vocab, true);
    split_train_validation(probe, fraction, other);
    any_difference = probe.split != features.split;
  }
  CHECK(any_difference);
}

TEST_CASE("split clamps so both sides of each class stay non-empty") {
  Corpus corpus;
  for (int i = 0; i < 5; ++i) {
    corpus.samples.push_back(make_sample("m" + std::to_string(i),
                                         Label::Malicious,
                                         {{IntentKind::Action, "A", 1}}));
    corpus.samples.push_back(make_sample("b" + std::to_string(i),
                                         Label::Benign,
                                         {{IntentKind::Action, "A", 1}}));
  }
  corpus.malicious_count = corpus.benign_count = 5;
  Vocabulary vocab = build_vocabulary(corpus);

  for (double fraction : {0.01, 0.99}) {
    FeatureMatrix features = vectorize(corpus, vocab, true);
    split_train_validation(features, fraction, 1);
    for (Label label : {Label::Malicious, Label::Benign}) {
      std::size_t train = 0, val = 0;
      for (std::size_t r = 0; r < features.rows(); ++r) {
        if (features.labels[r] != label) continue;
        (features.split[r] == Split::Train ? train : val) += 1;
      }
      CHECK(train >= 1);
      CHECK(val >= 1);
    }
  }
}

TEST_CASE("split rejects bad inputs and leaves unlabeled rows alone") {
  Corpus corpus = make_corpus();
  Vocabulary vocab = build_vocabulary(corpus);
  FeatureMatrix features = vectorize(corpus, vocab, true);

  CHECK(code_of([&] { split_train_validation(features, 0.0, 1); }) ==
        Errc::InvalidConfig);
  CHECK(code_of([&] { split_train_validation(features, 1.0, 1); }) ==
        Errc::InvalidConfig);
  CHECK(code_of([&] { split_train_validation(features, -0.2, 1); }) ==
        Errc::InvalidConfig);

  // A present but tiny class is rejected.
  Corpus tiny = corpus;
  tiny.samples.erase(tiny.samples.begin() + 2);  // one malicious row left
  FeatureMatrix tiny_features =
      vectorize(tiny, build_vocabulary(tiny), true);
  CHECK(code_of([&] { split_train_validation(tiny_features, 0.7, 1); }) ==
        Errc::ClassTooSmall);

  // A missing class is rejected.
  Corpus benign_only;
  benign_only.samples = {corpus.samples[1], corpus.samples[3]};
  FeatureMatrix benign_features =
      vectorize(benign_only, build_vocabulary(benign_only), true);
  CHECK(code_of([&] { split_train_validation(benign_features, 0.7, 1); }) ==
        Errc::MissingClass);

  // Unlabeled rows are not reassigned.
  Corpus with_unknown = corpus;
  with_unknown.samples.push_back(
      make_sample("u", Label::Unlabeled, {{IntentKind::Action, "BOOT", 1}}));
  FeatureMatrix mixed = vectorize(with_unknown, vocab, true);
  mixed.split[4] = Split::Validation;
  split_train_validation(mixed, 0.7, 9);
  CHECK(mixed.split[4] == Split::Validation);
}

TEST_CASE("feature CSV round-trips every field") {
  Corpus corpus = make_corpus();
  corpus.samples.push_back(
      make_sample("u0", Label::Unlabeled, {{IntentKind::Action, "MAIN", 2}}));
  Vocabulary vocab = build_vocabulary(corpus);
  FeatureMatrix features = vectorize(corpus, vocab, false);
  features.split[1] = Split::Validation;

  fs::path path = temp_file("roundtrip.csv");
  write_features_csv(features, vocab, path);
  LoadedFeatures loaded = read_features_csv(path);

  CHECK(loaded.features.app_ids == features.app_ids);
  CHECK(loaded.features.labels == features.labels);
  CHECK(loaded.features.split == features.split);
  CHECK(loaded.features.values.rows == features.values.rows);
  CHECK(loaded.features.values.cols == features.values.cols);
  CHECK(loaded.features.values.data == features.values.data);
  CHECK_FALSE(loaded.features.binarized);  // a count cell >1 exists
  REQUIRE(loaded.vocab.size() == vocab.size());
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    CHECK(loaded.vocab.keys[i].kind == vocab.keys[i].kind);
    CHECK(loaded.vocab.keys[i].name == vocab.keys[i].name);
  }

  // All-presence matrices read back as binarized.
  FeatureMatrix presence = vectorize(corpus, vocab, true);
  write_features_csv(presence, vocab, path);
  CHECK(read_features_csv(path).features.binarized);
}

TEST_CASE("feature CSV rejects malformed files") {
  auto write_and_read = [](const std::string& text) {
    fs::path path = temp_file("bad.csv");
    std::ofstream out(path);
    out << text;
    out.close();
    read_features_csv(path);
  };
  auto code = [&](const std::string& text) {
    try {
      write_and_read(text);
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::EmptyName;  // sentinel: no throw
  };

  CHECK(code("") == Errc::IoFailure);
  CHECK(code("who,what\n") == Errc::IoFailure);
  CHECK(code("app_id,label,split,nocolon\n") == Errc::IoFailure);
  // Unsorted vocabulary columns are refused.
  CHECK(code("app_id,label,split,action:Z,action:A\na,benign,train,1,0\n") ==
        Errc::IoFailure);
  // Row width mismatch.
  CHECK(code("app_id,label,split,action:A\na,benign,train,1,7\n") ==
        Errc::IoFailure);
  // Non-integer cell.
  CHECK(code("app_id,label,split,action:A\na,benign,train,x\n") ==
        Errc::IoFailure);
  // Unknown label / split values.
  CHECK(code("app_id,label,split,action:A\na,spooky,train,1\n") ==
        Errc::UnknownLabelValue);
  CHECK(code("app_id,label,split,action:A\na,benign,half,1\n") ==
        Errc::IoFailure);
}

TEST_CASE("vocabulary JSON round-trips keys, raws and provenance") {
  Corpus corpus = make_corpus();
  Vocabulary vocab = build_vocabulary(corpus);
  fs::path path = temp_file("vocab.json");
  write_vocabulary_json(vocab, /*binarized=*/true, path);
  LoadedVocabulary loaded = read_vocabulary_json(path);

  CHECK(loaded.binarized);
  CHECK(loaded.vocab.frozen_from == vocab.frozen_from);
  REQUIRE(loaded.vocab.size() == vocab.size());
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    CHECK(loaded.vocab.keys[i].kind == vocab.keys[i].kind);
    CHECK(loaded.vocab.keys[i].name == vocab.keys[i].name);
    CHECK(loaded.vocab.keys[i].raw == vocab.keys[i].raw);
  }

  write_vocabulary_json(vocab, /*binarized=*/false, path);
  CHECK_FALSE(read_vocabulary_json(path).binarized);
}
