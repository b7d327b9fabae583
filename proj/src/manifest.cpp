#include "intentnet/manifest.hpp"

#include <atomic>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "intentnet/errors.hpp"

namespace intentnet {
namespace {

constexpr std::string_view kKindTokens[] = {"action", "category", "extra"};
constexpr std::string_view kExtraMarker = ".intent.extra.";

std::string read_file(const std::filesystem::path& path, Errc missing_code) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(missing_code, path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) {
    throw Error(Errc::IoFailure, "read failed: " + path.string());
  }
  return std::move(buf).str();
}

bool is_kind_token(std::string_view token) {
  for (const auto t : kKindTokens) {
    if (token == t) {
      return true;
    }
  }
  return false;
}

void bump(IntentCounts& counts, IntentKind kind, std::string_view raw) {
  IntentKey key{kind, normalize_intent_name(raw), std::string(raw)};
  auto [it, inserted] = counts.try_emplace(std::move(key), 0);
  ++it->second;
}

// Walks the element tree. `inside_filter` tracks whether an <intent-filter>
// ancestor exists; action/category names only count there. Extra-pattern
// attribute values count wherever they appear.
void walk(const XmlElement& elem, bool inside_filter, IntentCounts& counts) {
  const std::string_view local = elem.local_name();
  const bool is_filter = local == "intent-filter";

  if (inside_filter && (local == "action" || local == "category")) {
    if (const std::string* name = elem.attr_local("name")) {
      if (!name->empty()) {
        bump(counts,
             local == "action" ? IntentKind::Action : IntentKind::Category,
             *name);
      }
    }
  }

  for (const auto& attr : elem.attrs) {
    const auto at = attr.value.find(kExtraMarker);
    if (at != std::string::npos &&
        at + kExtraMarker.size() < attr.value.size()) {
      bump(counts, IntentKind::Extra, attr.value);
    }
  }

  for (const auto& child : elem.children) {
    walk(child, inside_filter || is_filter, counts);
  }
}

}  // namespace

const char* intent_kind_name(IntentKind k) {
  switch (k) {
    case IntentKind::Action:
      return "action";
    case IntentKind::Category:
      return "category";
    case IntentKind::Extra:
      return "extra";
  }
  return "?";
}

IntentKind intent_kind_from(std::string_view s) {
  if (s == "action") {
    return IntentKind::Action;
  }
  if (s == "category") {
    return IntentKind::Category;
  }
  if (s == "extra") {
    return IntentKind::Extra;
  }
  throw Error(Errc::InvalidConfig, "unknown intent kind: " + std::string(s));
}

const char* label_name(Label l) {
  switch (l) {
    case Label::Malicious:
      return "malicious";
    case Label::Benign:
      return "benign";
    case Label::Unlabeled:
      return "unlabeled";
  }
  return "?";
}

Label label_from(std::string_view s) {
  if (s == "malicious") {
    return Label::Malicious;
  }
  if (s == "benign") {
    return Label::Benign;
  }
  if (s == "unlabeled") {
    return Label::Unlabeled;
  }
  throw Error(Errc::UnknownLabelValue, std::string(s));
}

std::string normalize_intent_name(std::string_view raw) {
  if (raw.empty()) {
    throw Error(Errc::EmptyName, "empty intent string");
  }

  // Find the end of the last dot-separated token equal to a kind word.
  std::size_t name_start = 0;
  std::size_t token_start = 0;
  for (std::size_t i = 0; i <= raw.size(); ++i) {
    if (i == raw.size() || raw[i] == '.') {
      if (is_kind_token(raw.substr(token_start, i - token_start)) &&
          i < raw.size()) {
        name_start = i + 1;  // skip the dot after the kind token
      }
      token_start = i + 1;
    }
  }

  std::string name;
  name.reserve(raw.size() - name_start);
  for (std::size_t i = name_start; i < raw.size(); ++i) {
    const unsigned char c = static_cast<unsigned char>(raw[i]);
    if (std::isalnum(c)) {
      name.push_back(static_cast<char>(std::toupper(c)));
    } else {
      name.push_back('_');
    }
  }
  if (name.empty()) {
    throw Error(Errc::EmptyName,
                "nothing left after the kind token in '" + std::string(raw) +
                    "'");
  }
  return name;
}

IntentCounts extract_intents(const XmlElement& root) {
  if (root.local_name() != "manifest") {
    throw Error(Errc::MissingManifestRoot,
                "root element is '" + root.name + "'");
  }
  IntentCounts counts;
  walk(root, false, counts);
  return counts;
}

IntentCounts parse_manifest(std::string_view xml_text) {
  return extract_intents(parse_xml(xml_text));
}

namespace {

struct LabelRow {
  std::string app_id;
  Label label;
};

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  return line;
}

std::vector<LabelRow> read_labels(const std::filesystem::path& labels_file) {
  std::ifstream in(labels_file);
  if (!in) {
    throw Error(Errc::LabelFileMissing, labels_file.string());
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(Errc::EmptyCorpus, "empty labels file: " + labels_file.string());
  }
  if (strip_cr(line) != "app_id,label") {
    throw Error(Errc::IoFailure,
                "labels file must start with 'app_id,label': " +
                    labels_file.string());
  }

  std::vector<LabelRow> rows;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (line.empty()) {
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw Error(Errc::IoFailure, "bad labels row: " + line);
    }
    LabelRow row{line.substr(0, comma), Label::Unlabeled};
    const std::string value = line.substr(comma + 1);
    if (value != "malicious" && value != "benign") {
      throw Error(Errc::UnknownLabelValue,
                  "'" + value + "' for app " + row.app_id);
    }
    row.label = value == "malicious" ? Label::Malicious : Label::Benign;
    if (!seen.insert(row.app_id).second) {
      throw Error(Errc::DuplicateAppId, row.app_id);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw Error(Errc::EmptyCorpus,
                "no rows in labels file: " + labels_file.string());
  }
  return rows;
}

}  // namespace

Corpus load_corpus(const std::filesystem::path& manifest_dir,
                   const std::filesystem::path& labels_file,
                   unsigned workers) {
  const std::vector<LabelRow> rows = read_labels(labels_file);

  Corpus corpus;
  corpus.samples.resize(rows.size());

  // Per-file parsing is stateless, so rows can be processed in any order;
  // results land in the labels-file slot, which keeps the merge
  // deterministic no matter how many workers run.
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto run = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= rows.size()) {
        return;
      }
      try {
        const auto path = manifest_dir / (rows[i].app_id + ".xml");
        const std::string text = read_file(path, Errc::ManifestFileMissing);
        AppSample sample;
        sample.app_id = rows[i].app_id;
        sample.label = rows[i].label;
        try {
          sample.intents = parse_manifest(text);
        } catch (const Error& e) {
          throw Error(e.code(), path.string() + ": " + e.what());
        }
        corpus.samples[i] = std::move(sample);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) {
          first_error = std::current_exception();
        }
        next.store(rows.size());
        return;
      }
    }
  };

  if (workers <= 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back(run);
    }
    for (auto& t : pool) {
      t.join();
    }
  }
  if (first_error) {
    std::rethrow_exception(first_error);
  }

  std::set<std::string> labelled;
  for (const auto& s : corpus.samples) {
    labelled.insert(s.app_id + ".xml");
    if (s.label == Label::Malicious) {
      ++corpus.malicious_count;
    } else {
      ++corpus.benign_count;
    }
  }
  if (std::filesystem::is_directory(manifest_dir)) {
    for (const auto& entry : std::filesystem::directory_iterator(manifest_dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".xml" &&
          !labelled.count(entry.path().filename().string())) {
        ++corpus.ignored_files;
      }
    }
  }
  return corpus;
}

std::string corpus_fingerprint(const Corpus& corpus) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  auto mix = [&h](std::string_view s) {
    for (const char c : s) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001B3ULL;
    }
    h ^= 0xFF;
    h *= 0x100000001B3ULL;
  };
  for (const auto& s : corpus.samples) {
    mix(s.app_id);
    mix(label_name(s.label));
    for (const auto& [key, count] : s.intents) {
      mix(intent_kind_name(key.kind));
      mix(key.name);
      mix(std::to_string(count));
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace intentnet
